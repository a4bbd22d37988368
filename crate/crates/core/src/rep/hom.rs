use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::representation::Representation;
use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;

/// Exhaustive isomorphism search is attempted when `p^(hom dim)` is at most this.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
/// Minimum number of random combinations tried before exhaustive search.
pub const RANDOM_TRIALS: usize = 64;

/// Parameters of the isomorphism search ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoSearch {
    pub seed: u64,
    /// Try the hom-space basis elements themselves before random combinations.
    pub scan_basis: bool,
    pub trials: usize,
}

impl Default for IsoSearch {
    fn default() -> Self {
        Self { seed: 0, scan_basis: true, trials: RANDOM_TRIALS }
    }
}

impl IsoSearch {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Outcome of a search that can be inconclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Absent,
    Unresolved(String),
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Absent => Search::Absent,
            Search::Unresolved(r) => Search::Unresolved(r),
        }
    }
}

/// Basis of `{X : X a_k = b_k X for all k}` for paired matrix lists.
///
/// The `X` are `b.rows × a.rows`. Constraints are imposed one pair at a time,
/// shrinking the solution space as it goes.
pub fn intertwiners(a: &[FieldMatrix], b: &[FieldMatrix], p: u32, da: usize, db: usize) -> Vec<FieldMatrix> {
    assert_eq!(a.len(), b.len());
    let mut basis: Option<Vec<FieldMatrix>> = None;
    for (ak, bk) in a.iter().zip(b) {
        let current: Vec<FieldMatrix> = match &basis {
            Some(bs) => bs.clone(),
            None => {
                let mut sys = FieldMatrix::zeros(p, db * da, db * da);
                // Column (r, c) of the system: image of the unit matrix E_rc.
                for r in 0..db {
                    for c in 0..da {
                        let col = r * da + c;
                        // (E_rc a)_(r, j) = a_(c, j); (b E_rc)_(i, c) = b_(i, r)
                        for j in 0..da {
                            let v = ak.get(c, j);
                            if v != 0 {
                                let row = r * da + j;
                                let cur = sys.get(row, col);
                                sys.set(row, col, (cur + v) % p);
                            }
                        }
                        for i in 0..db {
                            let v = bk.get(i, r);
                            if v != 0 {
                                let row = i * da + c;
                                let cur = sys.get(row, col);
                                sys.set(row, col, (cur + p - v) % p);
                            }
                        }
                    }
                }
                let kern = sys.kernel();
                basis = Some(
                    kern.iter()
                        .map(|k| FieldMatrix::from_entries(p as u64, db, da, k.col_vec(0)).expect("reduced"))
                        .collect(),
                );
                continue;
            }
        };
        if current.is_empty() {
            return current;
        }
        let cols: Vec<Vec<u32>> = current.iter().map(|x| (&(x * ak) - &(bk * x)).flatten()).collect();
        let sys = FieldMatrix::from_columns(p, db * da, &cols);
        let next = sys
            .kernel()
            .iter()
            .map(|k| combine(&current, &k.col_vec(0), p, db, da))
            .collect();
        basis = Some(next);
    }
    basis.unwrap_or_else(|| {
        (0..db * da)
            .map(|i| {
                let mut m = FieldMatrix::zeros(p, db, da);
                m.set(i / da, i % da, 1);
                m
            })
            .collect()
    })
}

/// `Σ c_i m_i`.
pub fn combine(mats: &[FieldMatrix], coeffs: &[u32], p: u32, rows: usize, cols: usize) -> FieldMatrix {
    let mut acc = FieldMatrix::zeros(p, rows, cols);
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != 0 {
            acc = &acc + &m.scale(c);
        }
    }
    acc
}

/// Basis of `Hom_G(m1, m2)`, solving only over the generators.
pub fn hom_space(m1: &Representation, m2: &Representation) -> Result<Vec<FieldMatrix>> {
    if m1.modulus() != m2.modulus() {
        return Err(Error::Modulus(m1.modulus(), m2.modulus()));
    }
    if m1.group().order() != m2.group().order() {
        return Err(Error::Dimension { op: "hom_space", detail: "different groups".into() });
    }
    Ok(intertwiners(&m1.generator_matrices(), &m2.generator_matrices(), m1.modulus(), m1.dim(), m2.dim()))
}

/// `X m1(g) = m2(g) X` for all generators.
pub fn is_intertwiner(m1: &Representation, m2: &Representation, x: &FieldMatrix) -> bool {
    x.rows() == m2.dim()
        && x.cols() == m1.dim()
        && m1.group().generators().iter().all(|&s| x * m1.matrix(s) == m2.matrix(s) * x)
}

/// Finds an invertible element in the span of `basis`, following the search ladder.
pub fn find_invertible(basis: &[FieldMatrix], p: u32, search: IsoSearch) -> Search<FieldMatrix> {
    let Some(first) = basis.first() else {
        return Search::Absent;
    };
    let zero = FieldMatrix::zeros(p, first.rows(), first.cols());
    find_invertible_affine(&zero, basis, search)
}

/// Finds an invertible element of `base + span(dirs)`.
///
/// Ladder: `base` and then each `base + dir` (if `scan_basis`), seeded random
/// combinations, exhaustive enumeration when `p^|dirs| <= 4096`, else unresolved.
pub fn find_invertible_affine(base: &FieldMatrix, dirs: &[FieldMatrix], search: IsoSearch) -> Search<FieldMatrix> {
    let p = base.modulus();
    let (r, c) = (base.rows(), base.cols());
    if r != c {
        return Search::Absent;
    }
    let point = |coeffs: &[u32]| &combine(dirs, coeffs, p, r, c) + base;
    if search.scan_basis {
        if base.is_invertible() {
            return Search::Found(base.clone());
        }
        if let Some(x) = dirs.iter().map(|d| d + base).find(|x| x.is_invertible()) {
            return Search::Found(x);
        }
    }
    if dirs.is_empty() {
        return if base.is_invertible() { Search::Found(base.clone()) } else { Search::Absent };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for _ in 0..search.trials.max(RANDOM_TRIALS) {
        let coeffs: Vec<u32> = (0..dirs.len()).map(|_| rng.gen_range(0..p)).collect();
        let x = point(&coeffs);
        if x.is_invertible() {
            return Search::Found(x);
        }
    }
    let k = dirs.len() as u32;
    match (p as u64).checked_pow(k) {
        Some(total) if total <= EXHAUSTIVE_LIMIT => {
            let mut coeffs = vec![0u32; dirs.len()];
            for _ in 0..total {
                let x = point(&coeffs);
                if x.is_invertible() {
                    return Search::Found(x);
                }
                for d in coeffs.iter_mut() {
                    *d += 1;
                    if *d < p {
                        break;
                    }
                    *d = 0;
                }
            }
            Search::Absent
        }
        _ => Search::Unresolved(format!("no invertible element found in a {k}-dimensional family over GF({p})")),
    }
}

/// An invertible intertwiner `X` with `X m1(g) = m2(g) X`, if one exists.
pub fn module_isomorphism(m1: &Representation, m2: &Representation, search: IsoSearch) -> Result<Search<FieldMatrix>> {
    if m1.dim() != m2.dim() {
        return Ok(Search::Absent);
    }
    let hom = hom_space(m1, m2)?;
    if hom.is_empty() {
        return Ok(Search::Absent);
    }
    // Isomorphic modules have Hom(m1, m2) ≅ End(m1) as vector spaces.
    let end = hom_space(m1, m1)?;
    if end.len() != hom.len() {
        return Ok(Search::Absent);
    }
    Ok(find_invertible(&hom, m1.modulus(), search))
}

/// Decides `m ≅ q^{⊕n}`; the witness `X` satisfies `X m(g) = q^{⊕n}(g) X`.
pub fn is_iso_to_power(m: &Representation, q: &Representation, n: usize, search: IsoSearch) -> Result<Search<FieldMatrix>> {
    if n == 0 || m.dim() != n * q.dim() {
        return Ok(Search::Absent);
    }
    module_isomorphism(m, &q.power(n)?, search)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::families;

    #[test]
    fn hom_space_examples() {
        let z2 = Arc::new(families::cyclic(2));
        let reg = Representation::regular(&z2, 2);
        assert_eq!(hom_space(&reg, &reg).unwrap().len(), 2);

        let z3 = Arc::new(families::cyclic(3));
        let chi = |c: i64| {
            Representation::from_generators(&z3, 7, 1, &[FieldMatrix::from_rows(7, &[vec![c]]).unwrap()]).unwrap()
        };
        assert_eq!(hom_space(&chi(2), &chi(2)).unwrap().len(), 1);
        assert!(hom_space(&chi(2), &chi(4)).unwrap().is_empty());
        assert_eq!(module_isomorphism(&chi(2), &chi(4), IsoSearch::default()).unwrap(), Search::Absent);
        let x = module_isomorphism(&chi(2), &chi(2), IsoSearch::default()).unwrap().found().unwrap();
        assert!(is_intertwiner(&chi(2), &chi(2), &x));
    }

    #[test]
    fn power_detection() {
        let s3 = Arc::new(families::symmetric(3));
        let perm = Representation::permutation(&s3, 5);
        let triv = Representation::trivial(&s3, 5, 1);
        assert!(is_iso_to_power(&perm, &perm, 1, IsoSearch::default()).unwrap().is_found());
        assert!(!is_iso_to_power(&perm, &triv, 3, IsoSearch::default()).unwrap().is_found());
        let t3 = triv.power(3).unwrap();
        assert!(is_iso_to_power(&t3, &triv, 3, IsoSearch::default()).unwrap().is_found());
    }
}
