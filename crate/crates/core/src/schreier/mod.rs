//! Schreier systems, the extension groups they define, splitting and equivalence,
//! and the extension built from a structure map.

mod coeff;
mod from_rep;
mod split;
mod system;

pub use coeff::{CoeffKind, CoefficientGroup, COEFF_CAP};
pub use from_rep::{certify_independence, extension_from_rep, structure_map_from_extension, RepExtension};
pub use split::{certify_equivalence, certify_splitting, is_split, systems_equivalent, SEARCH_BOUND};
pub use system::{ExtensionGroup, SchreierSystem, Violation, EXHAUSTIVE_TUPLES, SAMPLED_TUPLES};
