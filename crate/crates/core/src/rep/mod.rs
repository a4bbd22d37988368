//! Representations of enumerated groups and their module theory.

mod algebra;
mod annihilator;
mod hom;
mod representation;
mod series;

pub use algebra::{algebra_radical, frobenius_fixed_dim, is_irreducible, EnvelopingAlgebra};
pub use annihilator::{annihilator_ideal, AnnihilatorIdeal, AnnihilatorMode};
pub use hom::{
    combine, find_invertible, find_invertible_affine, hom_space, intertwiners, is_intertwiner, is_iso_to_power, module_isomorphism,
    IsoSearch, Search, EXHAUSTIVE_LIMIT, RANDOM_TRIALS,
};
pub use representation::{Induced, RepDescriptor, Representation, DIM_CAP};
pub use series::{
    module_radical_ideal, radical_series, radical_series_with, socle_series, socle_series_with, Filtration,
    FiltrationKind,
};
