//! Dense matrices over GF(p).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{self, check_modulus};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p). Entries are always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FieldMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// A particular solution of `a·x = b` together with a basis of `ker a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: FieldMatrix,
    /// Column vectors spanning the nullspace of the coefficient matrix.
    pub nullspace: Vec<FieldMatrix>,
}

impl FieldMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod p.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let p = check_modulus(p)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension { op: "from_rows", detail: "ragged rows".into() });
        }
        let data = rows.iter().flatten().map(|&x| field::reduce(x, p)).collect();
        Ok(Self { p, rows: r, cols: c, data })
    }

    /// Builds a matrix from row-major residues; rejects unreduced entries.
    pub fn from_entries(p: u64, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        let p = check_modulus(p)?;
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                op: "from_entries",
                detail: format!("{} entries for {}x{}", entries.len(), rows, cols),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= p) {
            return Err(Error::Validation {
                path: "entries".into(),
                message: format!("entry {bad} is not reduced mod {p}"),
            });
        }
        Ok(Self { p, rows, cols, data: entries })
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { p, rows, cols, data }
    }

    /// Column vector.
    pub fn column(p: u32, entries: Vec<u32>) -> Self {
        let n = entries.len();
        Self { p, rows: n, cols: 1, data: entries }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Modulus(self.p, other.p));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                op,
                detail: format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| field::add(a, b, p)).collect();
        Ok(Self { data, ..*self.shape() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| field::sub(a, b, p)).collect();
        Ok(Self { data, ..*self.shape() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Modulus(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension {
                op: "mul",
                detail: format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn shape(&self) -> &Self {
        self
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let p = self.p as u64;
        let mut acc = vec![0u64; n * m];
        // Accumulate in u64 and reduce lazily; each term is < 2^62.
        let flush = (u64::MAX / ((p - 1).max(1) * (p - 1).max(1))).max(1) as usize;
        for i in 0..n {
            let out = &mut acc[i * m..(i + 1) * m];
            let mut pending = 0usize;
            for t in 0..k {
                let a = self.data[i * k + t] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for (o, &b) in out.iter_mut().zip(brow) {
                    *o += a * b as u64;
                }
                pending += 1;
                if pending + 1 >= flush {
                    out.iter_mut().for_each(|o| *o %= p);
                    pending = 0;
                }
            }
        }
        let data = acc.into_iter().map(|x| (x % p) as u32).collect();
        Self { p: self.p, rows: n, cols: m, data }
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        let c = c % p;
        let data = self.data.iter().map(|&a| field::mul(a, c, p)).collect();
        Self { data, ..*self.shape() }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn trace(&self) -> u32 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| field::add(acc, self.get(i, i), self.p))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Kronecker product `self ⊗ other`; index of (i, j) is `i * other.dim + j`.
    pub fn kronecker(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(self.p, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = field::mul(a, other.get(k, l), self.p);
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = v;
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(p: u32, blocks: &[FieldMatrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(p, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FieldMatrix) {
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.p, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn hstack(parts: &[FieldMatrix]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Dimension { op: "hstack", detail: "empty".into() })?;
        let rows = first.rows;
        if parts.iter().any(|m| m.rows != rows || m.p != first.p) {
            return Err(Error::Dimension { op: "hstack", detail: "row counts differ".into() });
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(first.p, rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[FieldMatrix]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Dimension { op: "vstack", detail: "empty".into() })?;
        let cols = first.cols;
        if parts.iter().any(|m| m.cols != cols || m.p != first.p) {
            return Err(Error::Dimension { op: "vstack", detail: "column counts differ".into() });
        }
        let mut data = Vec::new();
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        Ok(Self { p: first.p, rows, cols, data })
    }

    /// Matrix-vector product `self·v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let acc = self.row(i).iter().zip(v).fold(0u64, |acc, (&a, &b)| {
                    (acc + a as u64 * b as u64) % p
                });
                acc as u32
            })
            .collect()
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, n: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    /// Builds the matrix whose rows are the given vectors.
    pub fn from_row_vecs(p: u32, n: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        Self { p, rows: rows.len(), cols: n, data }
    }

    /// Row-major flattening into a single row vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    /// Reduced row echelon form with the first nonzero entry in each column as pivot.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    /// Row-reduces in place, choosing pivots only among the first `limit` columns.
    pub(crate) fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let iv = field::inv(self.data[r * cols + c], p);
            if iv != 1 {
                for j in c..cols {
                    let x = &mut self.data[r * cols + j];
                    *x = field::mul(*x, iv, p);
                }
            }
            let pivot_row: Vec<u32> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = (p - f) as u64;
                let row = &mut self.data[i * cols + c..(i + 1) * cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = ((*x as u64 + nf * y as u64) % p as u64) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : self·v = 0}` as column vectors.
    pub fn kernel(&self) -> Vec<FieldMatrix> {
        let rr = self.rref();
        kernel_from_rref(&rr.matrix, &rr.pivots, self.cols)
    }

    /// Solves `a·x = b`; `Ok(None)` when the system is inconsistent.
    pub fn solve(a: &FieldMatrix, b: &FieldMatrix) -> Result<Option<LinearSolution>> {
        if a.p != b.p {
            return Err(Error::Modulus(a.p, b.p));
        }
        if a.rows != b.rows {
            return Err(Error::Dimension {
                op: "solve",
                detail: format!("a has {} rows, b has {}", a.rows, b.rows),
            });
        }
        let n = a.cols;
        let mut aug = FieldMatrix::hstack(&[a.clone(), b.clone()])?;
        let pivots = aug.rref_in_place(aug.cols);
        if pivots.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = FieldMatrix::zeros(a.p, n, b.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[c * b.cols + j] = aug.get(r, n + j);
            }
        }
        let nullspace = kernel_from_rref(&aug, &pivots, n);
        Ok(Some(LinearSolution { particular: x, nullspace }))
    }

    /// Inverse if the matrix has full rank.
    pub fn invert(&self) -> Result<Option<FieldMatrix>> {
        if !self.is_square() {
            return Err(Error::Dimension {
                op: "invert",
                detail: format!("{}x{} is not square", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut aug = FieldMatrix::hstack(&[self.clone(), FieldMatrix::identity(self.p, n)])?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Ok(None);
        }
        Ok(Some(aug.block(0, n, n, n)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Nullspace basis read off a row-reduced matrix whose first `n` columns are the coefficients.
fn kernel_from_rref(m: &FieldMatrix, pivots: &[usize], n: usize) -> Vec<FieldMatrix> {
    let p = m.p;
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        pivots.iter().filter(|&&c| c < n).for_each(|&c| v[c] = true);
        v
    };
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1 % p;
        for (r, &c) in pivots.iter().enumerate() {
            if c < n {
                v[c] = field::neg(m.get(r, free), p);
            }
        }
        basis.push(FieldMatrix::column(p, v));
    }
    basis
}

impl std::ops::Mul for &FieldMatrix {
    type Output = FieldMatrix;
    fn mul(self, rhs: &FieldMatrix) -> FieldMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl std::ops::Add for &FieldMatrix {
    type Output = FieldMatrix;
    fn add(self, rhs: &FieldMatrix) -> FieldMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl std::ops::Sub for &FieldMatrix {
    type Output = FieldMatrix;
    fn sub(self, rhs: &FieldMatrix) -> FieldMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[", self.p)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Serialize for FieldMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { p: self.p as u64, rows: self.rows, cols: self.cols, entries: self.data.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        FieldMatrix::from_entries(j.p, j.rows, j.cols, j.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, rows: &[&[i64]]) -> FieldMatrix {
        FieldMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = FieldMatrix::identity(5, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);

        let z = FieldMatrix::zeros(5, 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());

        let a = m(3, &[&[1, 2], &[2, 1]]);
        let r = a.rref();
        assert_eq!(r.matrix, m(3, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let b = m(7, &[&[3, 1], &[4, 0], &[6, 2]]);
        let s = FieldMatrix::solve(&FieldMatrix::identity(7, 3), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.nullspace.is_empty());

        let s = FieldMatrix::solve(&FieldMatrix::zeros(5, 2, 3), &FieldMatrix::zeros(5, 2, 1))
            .unwrap()
            .unwrap();
        assert!(s.particular.is_zero());
        assert_eq!(s.nullspace.len(), 3);
        for (i, v) in s.nullspace.iter().enumerate() {
            assert_eq!(v.col_vec(0), (0..3).map(|j| u32::from(i == j)).collect::<Vec<_>>());
        }

        let s = FieldMatrix::solve(&m(5, &[&[2]]), &m(5, &[&[1]])).unwrap().unwrap();
        assert_eq!(s.particular, m(5, &[&[3]]));

        let inconsistent = FieldMatrix::solve(&m(5, &[&[1, 1], &[1, 1]]), &m(5, &[&[1], &[2]]));
        assert_eq!(inconsistent.unwrap(), None);

        let err = FieldMatrix::solve(&FieldMatrix::identity(5, 2), &FieldMatrix::zeros(5, 3, 1));
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn invert_examples() {
        let id = FieldMatrix::identity(5, 4);
        assert_eq!(id.invert().unwrap().unwrap(), id);
        let d = m(5, &[&[2, 0], &[0, 3]]);
        assert_eq!(d.invert().unwrap().unwrap(), m(5, &[&[3, 0], &[0, 2]]));
        assert_eq!(m(2, &[&[1, 1], &[1, 1]]).invert().unwrap(), None);
        assert!(FieldMatrix::zeros(5, 2, 3).invert().is_err());
    }

    #[test]
    fn kronecker_and_blocks() {
        let a = m(5, &[&[1, 2], &[3, 4]]);
        let i2 = FieldMatrix::identity(5, 2);
        let k = a.kronecker(&i2);
        assert_eq!(k.get(0, 2), 2);
        assert_eq!(k.get(1, 3), 2);
        assert_eq!(k.get(2, 0), 3);
        let bd = FieldMatrix::block_diag(5, &[a.clone(), i2.clone()]);
        assert_eq!(bd.block(0, 0, 2, 2), a);
        assert_eq!(bd.block(2, 2, 2, 2), i2);
        assert!(bd.block(0, 2, 2, 2).is_zero());
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let a = m(7, &[&[1, 6], &[0, 3]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"p":7,"rows":2,"cols":2,"entries":[1,6,0,3]}"#);
        let back: FieldMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<FieldMatrix>(r#"{"p":7,"rows":1,"cols":1,"entries":[9]}"#).is_err());
        assert!(serde_json::from_str::<FieldMatrix>(r#"{"p":8,"rows":1,"cols":1,"entries":[1]}"#).is_err());
    }
}
