//! Stability of modules under normal subgroups of finite groups over GF(p).

pub mod corpus;
pub mod error;
pub mod group;
pub mod linalg;
pub mod obstruction;
pub mod report;
pub mod rep;
pub mod schreier;
pub mod spec;
pub mod stability;

pub use error::{Error, Result};
