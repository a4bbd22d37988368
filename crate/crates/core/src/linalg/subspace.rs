//! Subspaces of GF(p)^n kept in canonical reduced echelon form.

use serde::{Deserialize, Serialize};

use super::field;
use super::matrix::FieldMatrix;

/// `a += c·b` in place.
pub fn axpy(a: &mut [u32], c: u32, b: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    let (c, pp) = (c as u64, p as u64);
    for (x, &y) in a.iter_mut().zip(b) {
        if y != 0 {
            *x = ((*x as u64 + c * y as u64) % pp) as u32;
        }
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Unit vector of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A subspace of GF(p)^n. Two equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    /// Reduced echelon basis, one vector per row.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Self { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Self::span(p, ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    pub fn span<I, V>(p: u32, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut s = Self::zero(p, ambient);
        for v in vectors {
            s.insert(v.as_ref());
        }
        s
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &FieldMatrix) -> Self {
        let t = m.transpose();
        Self::span(m.modulus(), m.rows(), (0..t.rows()).map(|i| t.row(i).to_vec()))
    }

    /// Adds `v` to the span; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let r = self.reduce(v);
        let Some(c) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p;
        let iv = field::inv(r[c], p);
        let r: Vec<u32> = r.iter().map(|&x| field::mul(x, iv, p)).collect();
        for row in self.rows.iter_mut() {
            let f = row[c];
            if f != 0 {
                axpy(row, p - f, &r, p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.rows.insert(at, r);
        self.pivots.insert(at, c);
        true
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn basis_columns(&self) -> FieldMatrix {
        FieldMatrix::from_columns(self.p, self.ambient, &self.rows)
    }

    /// Remainder of `v` after clearing pivot positions.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut r = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = r[c];
            if f != 0 {
                axpy(&mut r, self.p - f, row, self.p);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v).then(|| self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Inverse of [`Subspace::coords`].
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![0; self.ambient];
        for (row, &c) in self.rows.iter().zip(coords) {
            axpy(&mut v, c, row, self.p);
        }
        v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Vectors of the form x·A with x·A = y·B, read off the left kernel of [A; B].
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.p, self.ambient);
        }
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        let m = FieldMatrix::from_row_vecs(self.p, self.ambient, &stacked).transpose();
        let vecs = m.kernel().into_iter().map(|k| {
            let x = k.col_vec(0);
            let mut v = vec![0; self.ambient];
            for (row, &c) in self.rows.iter().zip(&x[..a]) {
                axpy(&mut v, c, row, self.p);
            }
            v
        });
        Subspace::span(self.p, self.ambient, vecs.collect::<Vec<_>>())
    }

    /// `{ m·v : v in self }`.
    pub fn image(&self, m: &FieldMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::span(self.p, m.rows(), self.rows.iter().map(|v| m.apply(v)).collect::<Vec<_>>())
    }

    /// Linear functionals vanishing on the subspace, as row vectors.
    pub fn annihilator(&self) -> Vec<Vec<u32>> {
        if self.rows.is_empty() {
            return (0..self.ambient).map(|i| unit(self.ambient, i)).collect();
        }
        FieldMatrix::from_row_vecs(self.p, self.ambient, &self.rows)
            .kernel()
            .into_iter()
            .map(|k| k.col_vec(0))
            .collect()
    }

    /// `{ v : m·v in self }` for `m` mapping into the ambient space.
    pub fn preimage(&self, m: &FieldMatrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient);
        let ann = self.annihilator();
        if ann.is_empty() {
            return Subspace::full(self.p, m.cols());
        }
        let f = FieldMatrix::from_row_vecs(self.p, self.ambient, &ann);
        let k = (&f * m).kernel();
        Subspace::span(self.p, m.cols(), k.iter().map(|c| c.col_vec(0)).collect::<Vec<_>>())
    }

    /// Positions not used as pivots; the matching unit vectors span a complement.
    pub fn free_positions(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        self.pivots.iter().for_each(|&c| is_pivot[c] = true);
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Coordinates of the image of `v` in `ambient / self`, w.r.t. the unit-vector complement.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.reduce(v);
        self.free_positions().into_iter().map(|c| r[c]).collect()
    }

    /// Vectors of `larger` that extend a basis of `self` to one of `self + larger`.
    pub fn extend_within(&self, larger: &Subspace) -> Vec<Vec<u32>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in larger.basis() {
            if acc.insert(v) {
                out.push(v.clone());
            }
        }
        out
    }
}
