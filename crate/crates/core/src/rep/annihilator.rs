use serde::{Deserialize, Serialize};

use super::hom::combine;
use crate::error::{certify, Error, Result};
use crate::linalg::{FieldMatrix, MatrixSpace, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnihilatorMode {
    /// Endomorphisms killing a target subspace.
    Socle,
    /// Endomorphisms mapping `Q` into a target subspace (the radical, for the head).
    Head,
}

/// An ideal of `End_N(Q)` cut out by an annihilation condition.
#[derive(Clone, Debug)]
pub struct AnnihilatorIdeal {
    pub mode: AnnihilatorMode,
    pub target: Subspace,
    pub ideal: MatrixSpace,
    /// Smallest `k` with `J^k = 0`, if `J` is nilpotent.
    pub nilpotency_index: Option<usize>,
}

/// `J = {b : b·target = 0}` (socle mode) or `J' = {b : b·Q ⊆ target}` (head mode),
/// inside the span of `end_basis`.
pub fn annihilator_ideal(end_basis: &[FieldMatrix], target: &Subspace, mode: AnnihilatorMode) -> Result<AnnihilatorIdeal> {
    let first = end_basis
        .first()
        .ok_or_else(|| Error::Precondition("endomorphism basis is empty".into()))?;
    let (p, d) = (first.modulus(), first.rows());
    if target.ambient() != d {
        return Err(Error::Dimension { op: "annihilator_ideal", detail: "target lives in another space".into() });
    }
    // Each basis element contributes one column of linear conditions.
    let cols: Vec<Vec<u32>> = match mode {
        AnnihilatorMode::Socle => end_basis
            .iter()
            .map(|b| target.basis().iter().flat_map(|t| b.apply(t)).collect())
            .collect(),
        AnnihilatorMode::Head => {
            let ann = target.annihilator();
            end_basis
                .iter()
                .map(|b| ann.iter().flat_map(|f| (0..d).map(|j| dot(f, &b.col_vec(j), p)).collect::<Vec<_>>()).collect())
                .collect()
        }
    };
    let rows = cols.first().map_or(0, |c| c.len());
    let ideal_basis: Vec<FieldMatrix> = if rows == 0 {
        end_basis.to_vec()
    } else {
        FieldMatrix::from_columns(p, rows, &cols)
            .kernel()
            .iter()
            .map(|k| combine(end_basis, &k.col_vec(0), p, d, d))
            .collect()
    };
    let ideal = MatrixSpace::span(p, d, d, &ideal_basis);
    let nilpotency_index = ideal.nilpotency_index(d);
    let out = AnnihilatorIdeal { mode, target: target.clone(), ideal, nilpotency_index };
    out.certify(end_basis)?;
    Ok(out)
}

fn dot(a: &[u32], b: &[u32], p: u32) -> u32 {
    let pp = p as u64;
    a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64) % pp) as u32
}

impl AnnihilatorIdeal {
    /// Kills (or maps into) the target and is a two-sided ideal of the ambient algebra.
    pub fn certify(&self, end_basis: &[FieldMatrix]) -> Result<()> {
        let basis = self.ideal.basis();
        for b in &basis {
            match self.mode {
                AnnihilatorMode::Socle => {
                    certify(self.target.basis().iter().all(|t| b.apply(t).iter().all(|&x| x == 0)), || {
                        "ideal element does not kill the target".into()
                    })?;
                }
                AnnihilatorMode::Head => {
                    certify(
                        (0..b.cols()).all(|j| self.target.contains(&b.col_vec(j))),
                        || "ideal element does not map into the target".into(),
                    )?;
                }
            }
            for e in end_basis {
                certify(self.ideal.contains(&(b * e)) && self.ideal.contains(&(e * b)), || {
                    "annihilator is not a two-sided ideal".into()
                })?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn basis(&self) -> Vec<FieldMatrix> {
        self.ideal.basis()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.ideal.product(&self.ideal).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::families;
    use crate::rep::{hom_space, socle_series, Representation};

    #[test]
    fn regular_z2_socle_annihilator() {
        let z2 = Arc::new(families::cyclic(2));
        let reg = Representation::regular(&z2, 2);
        let end = hom_space(&reg, &reg).unwrap();
        let soc = socle_series(&reg).unwrap().layers[1].clone();
        let j = annihilator_ideal(&end, &soc, AnnihilatorMode::Socle).unwrap();
        assert_eq!(j.dim(), 1);
        let expected = &FieldMatrix::identity(2, 2) + reg.matrix(1);
        assert!(j.ideal.contains(&expected));
        assert!(j.squares_to_zero());
        assert_eq!(j.nilpotency_index, Some(2));
    }

    #[test]
    fn semisimple_target_whole() {
        let s3 = Arc::new(families::symmetric(3));
        let perm = Representation::permutation(&s3, 5);
        let end = hom_space(&perm, &perm).unwrap();
        let j = annihilator_ideal(&end, &Subspace::full(5, 3), AnnihilatorMode::Socle).unwrap();
        assert_eq!(j.dim(), 0);
        assert_eq!(j.nilpotency_index, Some(1));
    }
}
