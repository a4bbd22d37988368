use crate::error::{certify, Result};
use crate::group::FiniteGroup;
use crate::linalg::{field, FieldMatrix};

/// A `G/N`-module in coordinates; `action[a]` is the matrix of quotient element `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientModule {
    pub dim: usize,
    pub action: Vec<FieldMatrix>,
}

impl CoefficientModule {
    pub fn act(&self, a: usize, v: &[u32]) -> Vec<u32> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.action[a].apply(v)
    }

    pub fn certify(&self, quotient: &FiniteGroup) -> Result<()> {
        certify(self.action.len() == quotient.order(), || "coefficient action has the wrong length".into())?;
        if self.dim == 0 {
            return Ok(());
        }
        certify(self.action[0].is_identity(), || "identity does not act trivially on coefficients".into())?;
        for &s in quotient.generators() {
            for b in 0..quotient.order() {
                certify(self.action[quotient.mul(s, b)] == &self.action[s] * &self.action[b], || {
                    format!("coefficient action is not a homomorphism at ({s}, {b})")
                })?;
            }
        }
        Ok(())
    }

    /// `M ⊗ Y'` for a permutation or linear action `y_action` on a second factor,
    /// coordinates `(i, f)` at `i * y_dim + f`.
    pub fn tensor(&self, y_action: &[FieldMatrix]) -> Self {
        let action = self.action.iter().zip(y_action).map(|(a, y)| a.kronecker(y)).collect();
        Self { dim: self.dim * y_action.first().map_or(1, |y| y.rows()), action }
    }
}

/// A normalized 2-cocycle of `G/N` with values in a coefficient module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCocycle {
    pub coeff: CoefficientModule,
    /// `values[a * m + b] = j(a, b)`.
    pub values: Vec<Vec<u32>>,
}

fn add(a: &mut [u32], b: &[u32], p: u32) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = field::add(*x, y, p);
    }
}

fn sub(a: &mut [u32], b: &[u32], p: u32) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = field::sub(*x, y, p);
    }
}

impl AdditiveCocycle {
    pub fn value(&self, a: usize, b: usize) -> &[u32] {
        let m = (self.values.len() as f64).sqrt() as usize;
        &self.values[a * m + b]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Normalization and `f·j(g,h) - j(fg,h) + j(f,gh) - j(f,g) = 0` on all triples.
    pub fn certify(&self, quotient: &FiniteGroup, p: u32) -> Result<()> {
        let m = quotient.order();
        certify(self.values.len() == m * m, || "cocycle table has the wrong size".into())?;
        self.coeff.certify(quotient)?;
        let j = |a: usize, b: usize| &self.values[a * m + b];
        for a in 0..m {
            certify(j(0, a).iter().chain(j(a, 0)).all(|&x| x == 0), || format!("cocycle is not normalized at {a}"))?;
        }
        for f in 0..m {
            for g in 0..m {
                for h in 0..m {
                    let mut acc = self.coeff.act(f, j(g, h));
                    sub(&mut acc, j(quotient.mul(f, g), h), p);
                    add(&mut acc, j(f, quotient.mul(g, h)), p);
                    sub(&mut acc, j(f, g), p);
                    certify(acc.iter().all(|&x| x == 0), || format!("cocycle identity fails at ({f}, {g}, {h})"))?;
                }
            }
        }
        Ok(())
    }
}

/// `(δb)(g,h) = g·b(h) - b(gh) + b(g)`.
pub fn coboundary(coeff: &CoefficientModule, b: &[Vec<u32>], quotient: &FiniteGroup, p: u32) -> Vec<Vec<u32>> {
    let m = quotient.order();
    let mut out = Vec::with_capacity(m * m);
    for g in 0..m {
        for h in 0..m {
            let mut acc = coeff.act(g, &b[h]);
            sub(&mut acc, &b[quotient.mul(g, h)], p);
            add(&mut acc, &b[g], p);
            out.push(acc);
        }
    }
    out
}

/// A normalized cochain `b` with `δb = j`, or `None`.
///
/// Only the rows `(s, h)` with `s` a generator enter the system: if `δb` agrees
/// with `j` there, then `g -> (1 + b(g))α(g)` is multiplicative on generators
/// times elements, hence everywhere, and so `δb = j` on all pairs. The result is
/// re-checked on all pairs before it is returned.
pub fn solve_coboundary(j: &AdditiveCocycle, quotient: &FiniteGroup, p: u32) -> Result<Option<Vec<Vec<u32>>>> {
    let m = quotient.order();
    let k = j.coeff.dim;
    if k == 0 || m == 1 {
        let zero = vec![vec![0u32; k]; m];
        return Ok(j.is_zero().then_some(zero));
    }
    let gens = quotient.generators();
    let unknowns = (m - 1) * k;
    let rows = gens.len() * m * k;
    let mut a = FieldMatrix::zeros(p, rows, unknowns);
    let mut rhs = FieldMatrix::zeros(p, rows, 1);
    // Column of b(x)_c, for x != identity.
    let col = |x: usize, c: usize| (x - 1) * k + c;
    for (si, &s) in gens.iter().enumerate() {
        for h in 0..m {
            let r0 = (si * m + h) * k;
            let jv = &j.values[s * m + h];
            for r in 0..k {
                rhs.set(r0 + r, 0, jv[r]);
            }
            if h != 0 {
                let act = &j.coeff.action[s];
                for r in 0..k {
                    for c in 0..k {
                        let v = act.get(r, c);
                        if v != 0 {
                            let cur = a.get(r0 + r, col(h, c));
                            a.set(r0 + r, col(h, c), field::add(cur, v, p));
                        }
                    }
                }
            }
            let sh = quotient.mul(s, h);
            if sh != 0 {
                for r in 0..k {
                    let cur = a.get(r0 + r, col(sh, r));
                    a.set(r0 + r, col(sh, r), field::sub(cur, 1, p));
                }
            }
            if s != 0 {
                for r in 0..k {
                    let cur = a.get(r0 + r, col(s, r));
                    a.set(r0 + r, col(s, r), field::add(cur, 1, p));
                }
            }
        }
    }
    let Some(sol) = FieldMatrix::solve(&a, &rhs)? else {
        return Ok(None);
    };
    let x = sol.particular.col_vec(0);
    let mut b = vec![vec![0u32; k]];
    for g in 1..m {
        b.push(x[(g - 1) * k..g * k].to_vec());
    }
    let db = coboundary(&j.coeff, &b, quotient, p);
    certify(db == j.values, || "coboundary solution does not reproduce the cocycle".into())?;
    Ok(Some(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families;

    #[test]
    fn zero_cocycle_has_zero_solution() {
        let q = families::cyclic(3);
        let coeff = CoefficientModule { dim: 2, action: vec![FieldMatrix::identity(3, 2); 3] };
        let j = AdditiveCocycle { coeff, values: vec![vec![0, 0]; 9] };
        j.certify(&q, 3).unwrap();
        assert_eq!(solve_coboundary(&j, &q, 3).unwrap().unwrap(), vec![vec![0, 0]; 3]);
    }

    #[test]
    fn coboundaries_are_recovered() {
        let q = families::cyclic(4);
        let coeff = CoefficientModule { dim: 1, action: vec![FieldMatrix::identity(5, 1); 4] };
        let b = vec![vec![0], vec![3], vec![1], vec![4]];
        let values = coboundary(&coeff, &b, &q, 5);
        let j = AdditiveCocycle { coeff, values };
        j.certify(&q, 5).unwrap();
        let found = solve_coboundary(&j, &q, 5).unwrap().unwrap();
        assert_eq!(coboundary(&j.coeff, &found, &q, 5), j.values);
    }

    #[test]
    fn nontrivial_class_of_z2_in_char_2() {
        // j(s, s) = 1 with trivial action: the extension Z/4 of Z/2 by Z/2.
        let q = families::cyclic(2);
        let coeff = CoefficientModule { dim: 1, action: vec![FieldMatrix::identity(2, 1); 2] };
        let j = AdditiveCocycle { coeff, values: vec![vec![0], vec![0], vec![0], vec![1]] };
        j.certify(&q, 2).unwrap();
        assert!(solve_coboundary(&j, &q, 2).unwrap().is_none());
    }
}
