//! Fully enumerated finite groups.

pub mod families;
mod finite;
mod perm;
mod subgroup;

pub use finite::{FiniteGroup, GroupDescriptor, DEFAULT_CAP};
pub use perm::Perm;
pub use subgroup::{QuotientMap, Subgroup};
