//! Obstructions to extending an `N`-module structure to `G`: additive cocycles in
//! `J_V`, the multiplicative splitting route, tensor killing layer by layer,
//! associated graded actions, and comparison of two extensions.

mod cocycle;
mod extend;
mod graded;
mod layers;
mod twist;

pub use cocycle::{coboundary, solve_coboundary, AdditiveCocycle, CoefficientModule};
pub use extend::{
    additive_cocycle, analyze_obstruction, certify_extension, conjugation_action, extend_module_structure, ideal_of,
    quotient_system, ObstructionReport, ObstructionRoute, Triviality,
};
pub use graded::{gr_module, gr_radical_module, GradedModule, GradedRoute};
pub use layers::{layered_tensor_structure, tensor_kill, LayerReport, LayeredTensor, COEFF_DIM_CAP};
pub use twist::{h1_twist_class, TwistVerdict};
