//! Stability of an `N`-module under the ambient group: twists, structure maps,
//! factor sets, numerical and tensor witnesses, and split observability.

mod module;
mod numerical;
mod observability;
mod structure;

pub use module::{NormalModule, SubmoduleAction};
pub use numerical::{
    converse_embedding, numerical_by_search, numerical_from_structure, numerical_to_tensor, tensor_roundtrip,
    tensor_to_numerical, NumericalWitness, SummandWitness, TensorRoundtrip, TensorWitness,
};
pub use observability::{test_split_observability, ObservabilityWitness};
pub use structure::{test_g_stability, CosetSearch, FactorSet, StructureMap};
