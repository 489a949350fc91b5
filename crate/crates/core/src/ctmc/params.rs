use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// How the check latches are set at `t = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckInit {
    /// Latches start equal to the true syndrome of the initial word.
    #[default]
    Syndrome,
    /// Latches start in the satisfied state and must be driven by the probe.
    AllSatisfied,
}

/// Circuit and stopping parameters for one trajectory.
///
/// Powers are photon fluxes and double as rates: a latch driven by power `P`
/// switches at rate `P`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// `|alpha_pr|^2`, the parity-probe flux driving each check latch.
    pub probe_power: f64,
    /// `|alpha_fb|^2`, the unattenuated feedback flux driving each variable latch.
    pub feedback_power: f64,
    /// Feedback attenuation per satisfied check, in `(0, 1)`.
    pub gamma: f64,
    /// Spontaneous flip rate applied to every latch.
    #[serde(default)]
    pub eta: f64,
    /// Unbounded when absent from a config file.
    #[serde(default = "unbounded", skip_serializing_if = "is_unbounded")]
    pub t_max: f64,
    #[serde(default = "default_event_cap")]
    pub event_cap: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub check_init: CheckInit,
}

fn unbounded() -> f64 {
    f64::INFINITY
}

fn is_unbounded(t: &f64) -> bool {
    t.is_infinite()
}

fn default_event_cap() -> u64 {
    10_000_000
}

impl SimParams {
    pub fn new(probe_power: f64, feedback_power: f64, gamma: f64, eta: f64) -> Self {
        Self {
            probe_power,
            feedback_power,
            gamma,
            eta,
            t_max: f64::INFINITY,
            event_cap: default_event_cap(),
            seed: 0,
            check_init: CheckInit::Syndrome,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_event_cap(mut self, cap: u64) -> Self {
        self.event_cap = cap;
        self
    }

    pub fn with_check_init(mut self, init: CheckInit) -> Self {
        self.check_init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if !finite_nonneg(self.probe_power) || !finite_nonneg(self.feedback_power) {
            return param("probe and feedback power must be finite and non-negative");
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return param(format!("gamma = {} must lie strictly between 0 and 1", self.gamma));
        }
        if !finite_nonneg(self.eta) {
            return param("eta must be finite and non-negative");
        }
        if !(self.t_max > 0.0) {
            return param("t_max must be positive");
        }
        Ok(())
    }

    /// Time unit of the simulation clock: the first non-zero rate among
    /// feedback power, probe power, and `eta`.
    ///
    /// The engine integrates in units of `1 / rate_unit`. When every rate is
    /// multiplied by the same exact factor, the dimensionless rates are
    /// bit-for-bit unchanged and only the conversion back to physical time
    /// differs.
    pub fn rate_unit(&self) -> f64 {
        [self.feedback_power, self.probe_power, self.eta]
            .into_iter()
            .find(|&r| r > 0.0)
            .unwrap_or(1.0)
    }

    /// The same circuit with every rate divided by [`rate_unit`](Self::rate_unit).
    pub fn in_rate_units(&self) -> SimParams {
        let unit = self.rate_unit();
        SimParams {
            probe_power: self.probe_power / unit,
            feedback_power: self.feedback_power / unit,
            eta: self.eta / unit,
            t_max: self.t_max * unit,
            ..self.clone()
        }
    }

    /// All rates multiplied by `factor`; times divide accordingly.
    pub fn scaled(&self, factor: f64) -> SimParams {
        SimParams {
            probe_power: self.probe_power * factor,
            feedback_power: self.feedback_power * factor,
            eta: self.eta * factor,
            ..self.clone()
        }
    }
}
