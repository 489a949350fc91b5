use crate::code::{Assignment, TannerGraph};
use crate::error::{param, Result};

use super::params::SimParams;

/// Latch contents of the whole circuit at simulation time `t`.
///
/// A check latch holding 1 records its check as unsatisfied.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitState {
    pub var_latch: Assignment,
    pub check_latch: Vec<u8>,
    pub t: f64,
}

impl CircuitState {
    pub fn new(var_latch: Assignment, check_latch: Vec<u8>) -> Self {
        Self { var_latch, check_latch, t: 0.0 }
    }

    pub fn check_consistent(&self, graph: &TannerGraph) -> Result<()> {
        if self.var_latch.len() != graph.n() || self.check_latch.len() != graph.m() {
            return param(format!(
                "state has {} variable / {} check latches, graph has n = {}, m = {}",
                self.var_latch.len(),
                self.check_latch.len(),
                graph.n(),
                graph.m()
            ));
        }
        if self.check_latch.iter().any(|&b| b > 1) {
            return param("check latch value outside {0, 1}");
        }
        Ok(())
    }

    /// Number of checks of `v` whose latch reads satisfied.
    pub fn latched_satisfied(&self, graph: &TannerGraph, v: usize) -> usize {
        graph.checks_of(v).iter().filter(|&&c| self.check_latch[c] == 0).count()
    }
}

/// Per-latch jump rates of a [`CircuitState`].
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    pub check_rate: Vec<f64>,
    /// Bit the check latch holds after its next jump.
    pub check_target: Vec<u8>,
    pub var_rate: Vec<f64>,
    pub total: f64,
}

/// `feedback_power * gamma^s` for `s = 0..=l`, evaluated with `powi`.
pub(crate) fn attenuated_feedback(params: &SimParams, l: usize) -> Vec<f64> {
    (0..=l).map(|s| params.feedback_power * params.gamma.powi(s as i32)).collect()
}

/// Jump rate of a check latch. A latch that disagrees with the parity of its
/// variables is driven toward it by the probe; spontaneous flips act on every
/// latch. Both move the latch to the other value, so the channels merge.
#[inline]
pub(crate) fn check_rate(mismatched: bool, params: &SimParams) -> f64 {
    if mismatched {
        params.probe_power + params.eta
    } else {
        params.eta
    }
}

#[inline]
pub(crate) fn var_rate(feedback: &[f64], satisfied: usize, eta: f64) -> f64 {
    feedback[satisfied] + eta
}

/// Full evaluation of every latch rate.
///
/// Variables count satisfied checks from the check latches, not from the
/// true parities, which is what gives the circuit its measurement lag.
pub fn compute_rates(graph: &TannerGraph, state: &CircuitState, params: &SimParams) -> Result<RateTable> {
    state.check_consistent(graph)?;
    let feedback = attenuated_feedback(params, graph.l());

    let mut check_rate_v = Vec::with_capacity(graph.m());
    let mut check_target = Vec::with_capacity(graph.m());
    for c in 0..graph.m() {
        let parity = graph.vars_of(c).iter().fold(0u8, |acc, &v| acc ^ state.var_latch.get(v));
        let latch = state.check_latch[c];
        check_rate_v.push(check_rate(latch != parity, params));
        check_target.push(latch ^ 1);
    }
    let var_rate_v: Vec<f64> = (0..graph.n())
        .map(|v| var_rate(&feedback, state.latched_satisfied(graph, v), params.eta))
        .collect();
    let total = check_rate_v.iter().sum::<f64>() + var_rate_v.iter().sum::<f64>();
    Ok(RateTable { check_rate: check_rate_v, check_target, var_rate: var_rate_v, total })
}
