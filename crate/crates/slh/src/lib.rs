//! SLH (scattering, coupling, Hamiltonian) algebra for small open quantum
//! systems: series, concatenation and feedback products, the Lindblad
//! generator, quantum-jump rates, and the optical-latch fragments of the
//! photonic decoder circuit.
//!
//! Everything is dense and exact; fragments stay below a handful of qubits.

use thiserror::Error;

pub mod components;
pub mod dynamics;
pub mod fragments;
pub mod operator;
pub mod triple;

pub use components::{make_beamsplitter, make_latch, make_weyl};
pub use dynamics::{jump_rates, landing_rate, lindblad_rhs, transition_rates};
pub use fragments::{build_feedback_fragment, build_parity_fragment, FragmentBudget};
pub use operator::{Operator, Subsystem};
pub use triple::{concat, embed, feedback, series, SlhTriple};

pub type C64 = nalgebra::Complex<f64>;

pub type Result<T, E = SlhError> = std::result::Result<T, E>;

#[derive(Debug, Error, PartialEq)]
pub enum SlhError {
    #[error("port mismatch: {0}")]
    PortMismatch(String),

    #[error("ill-posed feedback loop {out_k} -> {in_l}: 1 - S_kl is singular")]
    SingularFeedback { out_k: usize, in_l: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("fragment needs {subsystems} subsystems, budget is {max}")]
    Budget { subsystems: usize, max: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),
}
