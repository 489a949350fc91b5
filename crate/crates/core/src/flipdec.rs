//! Reference bit-flip decoders.
//!
//! [`decode_sequential`] is the classical expander-code decoder: flip any
//! variable that sits in more unsatisfied than satisfied checks, until none
//! is left. [`decode_ctmc_ideal`] runs the same rule as a jump process where
//! every eligible variable flips at one fixed rate.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::code::{Assignment, TannerGraph};
use crate::ctmc::{trajectory_rng, Event, LatchKind, Outcome, TrajectoryRecord};
use crate::error::{param, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Reached a codeword.
    Success,
    /// No variable has a strict majority of unsatisfied checks.
    Stuck,
    /// `max_flips` reached first.
    Budget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub output: Assignment,
    pub status: DecodeStatus,
    pub flip_log: Vec<usize>,
    /// Unsatisfied-check count before the first flip and after each flip.
    pub unsatisfied_trace: Vec<usize>,
}

impl DecodeResult {
    pub fn success(&self) -> bool {
        self.status == DecodeStatus::Success
    }

    pub fn flips(&self) -> usize {
        self.flip_log.len()
    }
}

/// Strict majority: more unsatisfied than satisfied among `l` checks.
#[inline]
fn majority_unsatisfied(unsat: usize, l: usize) -> bool {
    2 * unsat > l
}

/// Sequential decoder. Scans variables in index order, flips the first
/// eligible one, and restarts the scan.
///
/// Panics if a flip ever fails to lower the number of unsatisfied checks;
/// with a strict-majority rule that cannot happen.
pub fn decode_sequential(graph: &TannerGraph, input: &Assignment, max_flips: usize) -> Result<DecodeResult> {
    let mut word = input.clone();
    let mut syndrome = graph.syndrome(&word)?;
    let l = graph.l();
    let mut unsat_per_var: Vec<usize> = (0..graph.n())
        .map(|v| graph.checks_of(v).iter().filter(|&&c| syndrome[c] == 1).count())
        .collect();
    let mut unsatisfied = syndrome.iter().filter(|&&s| s == 1).count();
    let mut flip_log = Vec::new();
    let mut trace = vec![unsatisfied];

    let status = loop {
        if unsatisfied == 0 {
            break DecodeStatus::Success;
        }
        let Some(v) = (0..graph.n()).find(|&v| majority_unsatisfied(unsat_per_var[v], l)) else {
            break DecodeStatus::Stuck;
        };
        if flip_log.len() >= max_flips {
            break DecodeStatus::Budget;
        }
        word.flip(v);
        for &c in graph.checks_of(v) {
            syndrome[c] ^= 1;
            let now_unsat = syndrome[c] == 1;
            for &u in graph.vars_of(c) {
                if now_unsat {
                    unsat_per_var[u] += 1;
                } else {
                    unsat_per_var[u] -= 1;
                }
            }
            if now_unsat {
                unsatisfied += 1;
            } else {
                unsatisfied -= 1;
            }
        }
        assert!(
            unsatisfied < *trace.last().expect("trace is never empty"),
            "flip of variable {v} did not reduce the unsatisfied-check count"
        );
        flip_log.push(v);
        trace.push(unsatisfied);
    };

    Ok(DecodeResult { output: word, status, flip_log, unsatisfied_trace: trace })
}

/// Continuous-time version of the sequential decoder: every variable with a
/// strict majority of unsatisfied checks flips at rate `r_flip`.
///
/// The record's timeline counts unsatisfied checks (there is no reference
/// word here). Success means the count reached zero; a configuration with
/// no eligible variable never moves again and ends as a timeout.
pub fn decode_ctmc_ideal(
    graph: &TannerGraph,
    input: &Assignment,
    r_flip: f64,
    seed: u64,
    t_max: f64,
) -> Result<TrajectoryRecord> {
    if !(r_flip > 0.0 && r_flip.is_finite()) {
        return param("r_flip must be positive and finite");
    }
    if !(t_max > 0.0) {
        return param("t_max must be positive");
    }
    let mut rng = trajectory_rng(seed, 0);
    let mut word = input.clone();
    let mut syndrome = graph.syndrome(&word)?;
    let l = graph.l();
    let mut unsat_per_var: Vec<usize> = (0..graph.n())
        .map(|v| graph.checks_of(v).iter().filter(|&&c| syndrome[c] == 1).count())
        .collect();
    let mut unsatisfied = syndrome.iter().filter(|&&s| s == 1).count();

    // Eligible variables as a dense list with back-pointers.
    let mut eligible: Vec<usize> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; graph.n()];
    let update = |v: usize, unsat: usize, eligible: &mut Vec<usize>, slot: &mut Vec<Option<usize>>| {
        match (majority_unsatisfied(unsat, l), slot[v]) {
            (true, None) => {
                slot[v] = Some(eligible.len());
                eligible.push(v);
            }
            (false, Some(i)) => {
                eligible.swap_remove(i);
                if let Some(&moved) = eligible.get(i) {
                    slot[moved] = Some(i);
                }
                slot[v] = None;
            }
            _ => {}
        }
    };
    for v in 0..graph.n() {
        update(v, unsat_per_var[v], &mut eligible, &mut slot);
    }

    let mut t = 0.0;
    let mut events = Vec::new();
    let mut timeline = vec![(0.0, unsatisfied)];
    let outcome = loop {
        if unsatisfied == 0 {
            break Outcome::Success;
        }
        if eligible.is_empty() {
            break Outcome::Timeout;
        }
        let total = r_flip * eligible.len() as f64;
        let wait: f64 = Exp1.sample(&mut rng);
        let next = t + wait / total;
        if next > t_max {
            break Outcome::Timeout;
        }
        t = next;
        let v = eligible[rng.random_range(0..eligible.len())];
        word.flip(v);
        for &c in graph.checks_of(v) {
            syndrome[c] ^= 1;
            let now_unsat = syndrome[c] == 1;
            if now_unsat {
                unsatisfied += 1;
            } else {
                unsatisfied -= 1;
            }
            for &u in graph.vars_of(c) {
                if now_unsat {
                    unsat_per_var[u] += 1;
                } else {
                    unsat_per_var[u] -= 1;
                }
                update(u, unsat_per_var[u], &mut eligible, &mut slot);
            }
        }
        events.push(Event { time: t, kind: LatchKind::Variable, index: v, new_bit: word.get(v) });
        timeline.push((t, unsatisfied));
    };

    let t_end = if outcome == Outcome::Timeout { t_max } else { t };
    Ok(TrajectoryRecord {
        n_events: events.len() as u64,
        events,
        errors_timeline: timeline,
        outcome,
        t_decode: (outcome == Outcome::Success).then_some(t),
        t_end,
    })
}
