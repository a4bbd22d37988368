use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{FieldMatrix, MatrixSpace};
use crate::rep::combine;

/// Default bound on the order of a materialized coefficient group.
pub const COEFF_CAP: usize = 1024;

/// How a coefficient group was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    /// An abstract enumerated group.
    Enumerated,
    /// A finite matrix group given by generators.
    Matrices,
    /// The units of `1 + J` for an ideal `J` with the given basis. Elements are
    /// ordered by the coordinate index `Σ c_i p^i` of `u - 1`.
    OnePlusJ { basis: Vec<FieldMatrix> },
}

/// A finite group `U` of coefficients, optionally realized by matrices.
#[derive(Clone, Debug)]
pub struct CoefficientGroup {
    kind: CoeffKind,
    group: Arc<FiniteGroup>,
    matrices: Option<Vec<FieldMatrix>>,
    lookup: HashMap<FieldMatrix, usize>,
}

/// Generators picked greedily in index order until they generate.
fn greedy_generators(n: usize, mult: &[u32]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut seen = vec![false; n];
    seen[0] = true;
    for x in 1..n {
        if seen[x] {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| seen[i]).collect();
        while let Some(e) = queue.pop_front() {
            for &s in &gens {
                let y = mult[s * n + e] as usize;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

impl CoefficientGroup {
    pub fn enumerated(group: Arc<FiniteGroup>) -> Self {
        Self { kind: CoeffKind::Enumerated, group, matrices: None, lookup: HashMap::new() }
    }

    /// The trivial group `{I}` of `d × d` matrices.
    pub fn trivial(p: u32, d: usize) -> Self {
        Self::from_elements(CoeffKind::Matrices, vec![FieldMatrix::identity(p, d)]).expect("trivial group")
    }

    /// Closure of invertible matrices under multiplication, identity first.
    pub fn from_generators(p: u32, d: usize, gens: &[FieldMatrix], cap: usize) -> Result<Self> {
        for g in gens {
            if g.rows() != d || g.cols() != d || g.modulus() != p || !g.is_invertible() {
                return Err(Error::Precondition("coefficient generators must be invertible d×d matrices".into()));
            }
        }
        let id = FieldMatrix::identity(p, d);
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<FieldMatrix, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let x = g * &elements[e];
                if !seen.contains_key(&x) {
                    if elements.len() >= cap {
                        return Err(Error::SizeLimit { what: "coefficient group", needed: elements.len() + 1, cap });
                    }
                    seen.insert(x.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(x);
                }
            }
        }
        Self::from_elements(CoeffKind::Matrices, elements)
    }

    /// Units of `1 + span(basis)`, for `span(basis)` a two-sided ideal of some matrix algebra.
    pub fn one_plus_j(p: u32, d: usize, basis: &[FieldMatrix], cap: usize) -> Result<Self> {
        let k = basis.len() as u32;
        let total = (p as usize)
            .checked_pow(k)
            .filter(|&t| t <= cap)
            .ok_or(Error::SizeLimit { what: "1 + J", needed: (p as usize).saturating_pow(k), cap })?;
        let id = FieldMatrix::identity(p, d);
        let mut elements = Vec::with_capacity(total);
        for idx in 0..total {
            let mut c = idx;
            let coeffs: Vec<u32> = (0..k)
                .map(|_| {
                    let r = (c % p as usize) as u32;
                    c /= p as usize;
                    r
                })
                .collect();
            let u = &id + &combine(basis, &coeffs, p, d, d);
            if u.is_invertible() {
                elements.push(u);
            }
        }
        Self::from_elements(CoeffKind::OnePlusJ { basis: basis.to_vec() }, elements)
    }

    /// Builds the table from a list closed under products, identity first.
    fn from_elements(kind: CoeffKind, elements: Vec<FieldMatrix>) -> Result<Self> {
        let n = elements.len();
        if n == 0 || !elements[0].is_identity() {
            return Err(Error::Precondition("coefficient elements must start with the identity".into()));
        }
        let lookup: HashMap<FieldMatrix, usize> = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        if lookup.len() != n {
            return Err(Error::Precondition("coefficient elements repeat".into()));
        }
        let mut mult = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let ab = a * b;
                let &x = lookup
                    .get(&ab)
                    .ok_or_else(|| Error::Certification(format!("coefficient set not closed at ({i}, {j})")))?;
                mult[i * n + j] = x as u32;
            }
        }
        let gens = greedy_generators(n, &mult);
        let group = Arc::new(FiniteGroup::from_table(n, mult, gens)?);
        Ok(Self { kind, group, matrices: Some(elements), lookup })
    }

    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.group.inv(a)
    }

    pub fn matrices(&self) -> Option<&[FieldMatrix]> {
        self.matrices.as_deref()
    }

    pub fn matrix(&self, u: usize) -> Option<&FieldMatrix> {
        self.matrices.as_ref().map(|m| &m[u])
    }

    /// Index of a matrix in a matrix-realized group.
    pub fn index_of(&self, m: &FieldMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn contains(&self, m: &FieldMatrix) -> bool {
        self.lookup.contains_key(m)
    }

    pub fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    /// For `1 + J`: the ideal as a matrix space.
    pub fn ideal(&self) -> Option<MatrixSpace> {
        match (&self.kind, &self.matrices) {
            (CoeffKind::OnePlusJ { basis }, Some(m)) => {
                let (r, c) = (m[0].rows(), m[0].cols());
                Some(MatrixSpace::span(m[0].modulus(), r, c, basis))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_square_zero_is_elementary_abelian() {
        let n = FieldMatrix::from_rows(3, &[vec![0, 1], vec![0, 0]]).unwrap();
        let u = CoefficientGroup::one_plus_j(3, 2, &[n], COEFF_CAP).unwrap();
        assert_eq!(u.order(), 3);
        assert!(u.is_abelian());
        assert_eq!(u.group().element_order(1), 3);
    }

    #[test]
    fn gl2_f3() {
        let a = FieldMatrix::from_rows(3, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = FieldMatrix::from_rows(3, &[vec![0, 1], vec![2, 0]]).unwrap();
        let c = FieldMatrix::from_rows(3, &[vec![2, 0], vec![0, 1]]).unwrap();
        let u = CoefficientGroup::from_generators(3, 2, &[a, b, c], COEFF_CAP).unwrap();
        assert_eq!(u.order(), 48);
        assert!(!u.is_abelian());
    }

    #[test]
    fn non_nilpotent_ideal_keeps_units_only() {
        // J = all of k (scalars) over GF(5): units of 1 + J are the nonzero scalars.
        let u = CoefficientGroup::one_plus_j(5, 1, &[FieldMatrix::identity(5, 1)], COEFF_CAP).unwrap();
        assert_eq!(u.order(), 4);
    }
}
