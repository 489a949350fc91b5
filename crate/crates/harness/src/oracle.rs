//! Cross-check of the jump-process rates against SLH models of the same
//! circuit pieces.
//!
//! A check latch with `k` variables is the graph with one check over `k`
//! degree-one variables; a variable with `l` checks is one variable sitting
//! in `l` single-variable checks. Every latch configuration of each is
//! compared with zero spontaneous noise.

use photonic_decoder::ctmc::{compute_rates, CircuitState, SimParams};
use photonic_decoder::{Assignment, TannerGraph};
use serde::Serialize;
use slh_circuit::fragments::{feedback_rates, parity_rates};
use slh_circuit::{build_feedback_fragment, build_parity_fragment, FragmentBudget, C64};

use crate::error::Result;

pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCase {
    pub fragment: &'static str,
    pub size: usize,
    pub configurations: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.cases.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn configurations(&self) -> usize {
        self.cases.iter().map(|c| c.configurations).sum()
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= ORACLE_TOL
    }
}

fn bits(x: usize, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((x >> i) & 1) as u8).collect()
}

/// Probe amplitude `alpha`; every (variables, check) configuration.
pub fn check_parity_fragment(k: usize, alpha: C64) -> Result<OracleCase> {
    let frag = build_parity_fragment(k, alpha, FragmentBudget::default())?;
    let graph = TannerGraph::from_checks(k, 1, k, vec![(0..k).collect()])?;
    let params = SimParams::new(alpha.norm_sqr(), 0.0, 0.5, 0.0);
    let mut worst: f64 = 0.0;
    let mut configurations = 0;
    for x in 0..1usize << k {
        let vars = bits(x, k);
        for check in 0..2u8 {
            let slh = parity_rates(&frag, &vars, check)?;
            let state = CircuitState::new(Assignment::from_bits(vars.clone())?, vec![check]);
            let ctmc = compute_rates(&graph, &state, &params)?;
            // The jump process fires the check toward its target; the SLH
            // model's flip rate must match it, and nothing else may move.
            let ctmc_flip = if ctmc.check_target[0] != check { ctmc.check_rate[0] } else { 0.0 };
            let ctmc_other: f64 = ctmc.var_rate.iter().sum();
            worst = worst.max((slh.flip - ctmc_flip).abs()).max((slh.stray - ctmc_other).abs());
            configurations += 1;
        }
    }
    Ok(OracleCase { fragment: "parity", size: k, configurations, max_deviation: worst })
}

/// Feedback amplitude `beta`; every (checks, variable) configuration.
pub fn check_feedback_fragment(l: usize, beta: C64, gamma: f64) -> Result<OracleCase> {
    let frag = build_feedback_fragment(l, beta, gamma, FragmentBudget::default())?;
    let graph = TannerGraph::from_checks(1, l, 1, vec![vec![0]; l])?;
    let params = SimParams::new(0.0, beta.norm_sqr(), gamma, 0.0);
    let mut worst: f64 = 0.0;
    let mut configurations = 0;
    for x in 0..1usize << l {
        let checks = bits(x, l);
        for var in 0..2u8 {
            let slh = feedback_rates(&frag, &checks, var)?;
            let state = CircuitState::new(Assignment::from_bits(vec![var])?, checks.clone());
            let ctmc = compute_rates(&graph, &state, &params)?;
            let ctmc_other: f64 = ctmc.check_rate.iter().sum();
            worst = worst.max((slh.toggle - ctmc.var_rate[0]).abs()).max((slh.stray - ctmc_other).abs());
            configurations += 1;
        }
    }
    Ok(OracleCase { fragment: "feedback", size: l, configurations, max_deviation: worst })
}

/// Parity fragments with `1..=max_k` variables and feedback fragments with
/// `1..=max_l` checks.
pub fn verify(max_k: usize, max_l: usize, gamma: f64, alpha: C64, beta: C64) -> Result<OracleReport> {
    let mut cases = Vec::new();
    for k in 1..=max_k {
        cases.push(check_parity_fragment(k, alpha)?);
    }
    for l in 1..=max_l {
        cases.push(check_feedback_fragment(l, beta, gamma)?);
    }
    Ok(OracleReport { cases })
}
