//! Grover search, amplitude estimation and quantum mean estimation.

pub mod amplitude;
pub mod grover;
pub mod mean;
pub mod qft;

pub use amplitude::{amplitude_estimate, AmplitudeEstimator, AmplitudeProblem, Marking};
pub use grover::{grover_iterations, grover_search};
pub use mean::{mean_boolean, mean_real, median_boost, EstimateConfig, EstimateResult, LoadingPath};
