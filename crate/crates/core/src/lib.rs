//! State-vector simulation of small quantum circuits over the gate set
//! {W, P_θ, CNOT}, with oracle construction, amplitude estimation, and a
//! quantum Monte Carlo integration pipeline compared against classical
//! baselines.

pub mod adder;
pub mod circuit;
pub mod classical;
pub mod compiler;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod gate;
pub mod integration;
pub mod oracle;
pub mod state;

pub use circuit::{apply_circuit, tally_cost, Circuit, CostReport};
pub use error::{Error, Result};
pub use gate::{apply_gate, Compound, GateOp, UnitaryAction};
pub use state::{init_classical, SimRng, StateVector};
