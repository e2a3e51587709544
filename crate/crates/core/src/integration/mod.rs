//! Integration of Hölder-class functions on `[0,1]^d`.

pub mod functions;
pub mod hoelder;
pub mod interpolant;
pub mod task;

pub use functions::{lipschitz_tent, lookup, Family, TestFunction, MANIFEST, TENT_FAMILY};
pub use hoelder::HoelderSpec;
pub use interpolant::{build_interpolant, quadrature_main, Interpolant};
pub use task::{
    choose_fine_grid, integrate_quantum, integrate_quantum_detailed, residual_bound, residual_mean_target, residual_range,
    residual_sequence, Integrand, IntegrationTask, QuantumIntegration,
};
