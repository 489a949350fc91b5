//! Ensembles, parameter sweeps, and oracle checks around the photonic
//! decoder simulator.

pub mod bound;
pub mod config;
pub mod ensemble;
mod error;
pub mod oracle;
pub mod sweep;

pub use bound::gamma_bound;
pub use config::{CodeSpec, EnsembleConfig, ErrorSpec, OutputSpec, TimeGrid};
pub use ensemble::{quantile, resample_timeline, run_ensemble, run_trajectories, summarize, EnsembleStats};
pub use error::{HarnessError, Result};
