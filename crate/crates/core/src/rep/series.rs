use serde::{Deserialize, Serialize};

use super::algebra::{algebra_radical, EnvelopingAlgebra};
use super::representation::Representation;
use crate::error::Result;
use crate::linalg::{FieldMatrix, MatrixSpace, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Socle,
    Radical,
}

/// A chain of submodules.
///
/// Socle kind: `layers[k]` is the `k`-th socle, ascending from `0` to `Q`.
/// Radical kind: `layers[k]` is `rad^k Q`, descending from `Q` to `0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filtration {
    pub kind: FiltrationKind,
    pub layers: Vec<Subspace>,
}

impl Filtration {
    /// Number of proper steps in the chain.
    pub fn length(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    /// Dimensions of the successive quotients in chain order: the socle first for the
    /// socle kind, the head first for the radical kind.
    pub fn layer_dims(&self) -> Vec<usize> {
        match self.kind {
            FiltrationKind::Socle => self.layers.windows(2).map(|w| w[1].dim() - w[0].dim()).collect(),
            FiltrationKind::Radical => self.layers.windows(2).map(|w| w[0].dim() - w[1].dim()).collect(),
        }
    }
}

/// Radical of the enveloping algebra of `rho`, as matrices acting on `Q`.
pub fn module_radical_ideal(rho: &Representation) -> Result<MatrixSpace> {
    algebra_radical(&EnvelopingAlgebra::of(rho)?)
}

/// `soc_{k+1} = { q : rad(A) q ⊆ soc_k }`, starting from `soc_0 = 0`.
pub fn socle_series_with(rad: &[FieldMatrix], p: u32, dim: usize) -> Filtration {
    let mut layers = vec![Subspace::zero(p, dim)];
    loop {
        let last = layers.last().expect("nonempty");
        if last.is_full() {
            break;
        }
        let mut next = Subspace::full(p, dim);
        for r in rad {
            next = next.intersection(&last.preimage(r));
        }
        assert!(next.dim() > last.dim(), "socle series must grow");
        layers.push(next);
    }
    Filtration { kind: FiltrationKind::Socle, layers }
}

/// `rad^{k+1} = rad(A) · rad^k`, starting from `rad^0 = Q`.
pub fn radical_series_with(rad: &[FieldMatrix], p: u32, dim: usize) -> Filtration {
    let mut layers = vec![Subspace::full(p, dim)];
    loop {
        let last = layers.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let mut next = Subspace::zero(p, dim);
        for r in rad {
            next = next.sum(&last.image(r));
        }
        assert!(next.dim() < last.dim(), "radical series must shrink");
        layers.push(next);
    }
    Filtration { kind: FiltrationKind::Radical, layers }
}

pub fn socle_series(rho: &Representation) -> Result<Filtration> {
    let rad = module_radical_ideal(rho)?.basis();
    Ok(socle_series_with(&rad, rho.modulus(), rho.dim()))
}

pub fn radical_series(rho: &Representation) -> Result<Filtration> {
    let rad = module_radical_ideal(rho)?.basis();
    Ok(radical_series_with(&rad, rho.modulus(), rho.dim()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::families;

    #[test]
    fn regular_z2() {
        let z2 = Arc::new(families::cyclic(2));
        let reg = Representation::regular(&z2, 2);
        let soc = socle_series(&reg).unwrap();
        assert_eq!(soc.length(), 2);
        assert_eq!(soc.layers[1], Subspace::span(2, 2, [vec![1, 1]]));
        let rad = radical_series(&reg).unwrap();
        assert_eq!(rad.length(), 2);
        assert_eq!(rad.layers[1], Subspace::span(2, 2, [vec![1, 1]]));
    }

    #[test]
    fn semisimple_has_one_layer() {
        let s3 = Arc::new(families::symmetric(3));
        let perm = Representation::permutation(&s3, 5);
        assert_eq!(socle_series(&perm).unwrap().length(), 1);
        assert_eq!(radical_series(&perm).unwrap().length(), 1);
    }
}
