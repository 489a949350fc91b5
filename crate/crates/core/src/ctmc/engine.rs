use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::code::{Assignment, TannerGraph};
use crate::error::{param, Result};
use crate::sumtree::SumTree;

use super::params::{CheckInit, SimParams};
use super::rates::{attenuated_feedback, check_rate, var_rate, CircuitState, RateTable};
use super::record::{Event, LatchKind, Outcome, TrajectoryRecord};

/// Result of asking the engine for its next jump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Fired(Event),
    /// The sampled jump time lies beyond the horizon; nothing was applied.
    Horizon,
    /// Every rate is zero: no jump will ever happen.
    Absorbing,
}

/// Event-driven simulator of one circuit trajectory.
///
/// Rates live in a sum tree with check latches at leaves `0..m` and variable
/// latches at leaves `m..m+n`. A variable toggle only changes the true parity
/// of its `l` checks, so only those check rates are touched; a check toggle
/// changes its own rate and the satisfied counts of its `k` variables.
pub struct Simulator<'g> {
    graph: &'g TannerGraph,
    params: SimParams,
    scaled: SimParams,
    unit: f64,
    feedback: Vec<f64>,
    state: CircuitState,
    parity: Vec<u8>,
    satisfied: Vec<usize>,
    tree: SumTree,
    /// Simulation clock in units of `1 / unit`.
    clock: f64,
    reference: Assignment,
    errors: usize,
}

impl<'g> Simulator<'g> {
    pub fn new(
        graph: &'g TannerGraph,
        initial: &Assignment,
        reference: &Assignment,
        params: &SimParams,
    ) -> Result<Self> {
        params.validate()?;
        graph.expect_len(initial)?;
        graph.expect_len(reference)?;
        let parity = graph.syndrome(initial)?;
        let check_latch = match params.check_init {
            CheckInit::Syndrome => parity.clone(),
            CheckInit::AllSatisfied => vec![0; graph.m()],
        };
        let state = CircuitState::new(initial.clone(), check_latch);
        Self::from_state(graph, state, reference, params)
    }

    /// Starts from an arbitrary latch configuration.
    pub fn from_state(
        graph: &'g TannerGraph,
        state: CircuitState,
        reference: &Assignment,
        params: &SimParams,
    ) -> Result<Self> {
        params.validate()?;
        state.check_consistent(graph)?;
        graph.expect_len(reference)?;
        let unit = params.rate_unit();
        let scaled = params.in_rate_units();
        let feedback = attenuated_feedback(&scaled, graph.l());
        let parity = graph.syndrome(&state.var_latch)?;
        let satisfied: Vec<usize> = (0..graph.n()).map(|v| state.latched_satisfied(graph, v)).collect();

        let mut leaves = Vec::with_capacity(graph.m() + graph.n());
        leaves.extend((0..graph.m()).map(|c| check_rate(state.check_latch[c] != parity[c], &scaled)));
        leaves.extend(satisfied.iter().map(|&s| var_rate(&feedback, s, scaled.eta)));

        let errors = state.var_latch.hamming_distance(reference)?;
        let clock = state.t * unit;
        Ok(Self {
            graph,
            params: params.clone(),
            scaled,
            unit,
            feedback,
            state,
            parity,
            satisfied,
            tree: SumTree::new(&leaves),
            clock,
            reference: reference.clone(),
            errors,
        })
    }

    pub fn state(&self) -> &CircuitState {
        &self.state
    }

    pub fn errors(&self) -> usize {
        self.errors
    }

    /// Current rates in the engine's internal units (`params.in_rate_units()`).
    pub fn rate_table(&self) -> RateTable {
        let m = self.graph.m();
        let check_rate = (0..m).map(|c| self.tree.get(c)).collect();
        let check_target = self.state.check_latch.iter().map(|b| b ^ 1).collect();
        let var_rate = (0..self.graph.n()).map(|v| self.tree.get(m + v)).collect();
        RateTable { check_rate, check_target, var_rate, total: self.tree.total() }
    }

    /// Advances by one jump unless it would land after physical time `horizon`.
    pub fn step(&mut self, rng: &mut ChaCha8Rng, horizon: f64) -> Step {
        let total = self.tree.total();
        if !(total > 0.0) {
            return Step::Absorbing;
        }
        let wait: f64 = Exp1.sample(rng);
        let clock = self.clock + wait / total;
        let time = clock / self.unit;
        if time > horizon {
            return Step::Horizon;
        }
        let target = rng.random::<f64>() * total;
        let leaf = self.tree.find(target);
        self.clock = clock;
        self.state.t = time;
        let m = self.graph.m();
        let event = if leaf < m {
            self.toggle_check(leaf);
            Event { time, kind: LatchKind::Check, index: leaf, new_bit: self.state.check_latch[leaf] }
        } else {
            let v = leaf - m;
            self.toggle_var(v);
            Event { time, kind: LatchKind::Variable, index: v, new_bit: self.state.var_latch.get(v) }
        };
        Step::Fired(event)
    }

    fn toggle_check(&mut self, c: usize) {
        let m = self.graph.m();
        self.state.check_latch[c] ^= 1;
        let now_satisfied = self.state.check_latch[c] == 0;
        self.tree.set(c, check_rate(self.state.check_latch[c] != self.parity[c], &self.scaled));
        for &v in self.graph.vars_of(c) {
            if now_satisfied {
                self.satisfied[v] += 1;
            } else {
                self.satisfied[v] -= 1;
            }
            self.tree.set(m + v, var_rate(&self.feedback, self.satisfied[v], self.scaled.eta));
        }
    }

    fn toggle_var(&mut self, v: usize) {
        self.state.var_latch.flip(v);
        if self.state.var_latch.get(v) == self.reference.get(v) {
            self.errors -= 1;
        } else {
            self.errors += 1;
        }
        for &c in self.graph.checks_of(v) {
            self.parity[c] ^= 1;
            self.tree.set(c, check_rate(self.state.check_latch[c] != self.parity[c], &self.scaled));
        }
    }

    /// Runs until zero errors, `t_max`, or `event_cap`.
    pub fn run(mut self, rng: &mut ChaCha8Rng, keep_events: bool) -> TrajectoryRecord {
        let mut events = Vec::new();
        let mut timeline = vec![(self.state.t, self.errors)];
        let mut n_events = 0u64;
        let t_max = self.params.t_max;

        let outcome = loop {
            if self.errors == 0 {
                break Outcome::Success;
            }
            if n_events >= self.params.event_cap {
                break Outcome::EventCap;
            }
            match self.step(rng, t_max) {
                Step::Fired(event) => {
                    n_events += 1;
                    if event.kind == LatchKind::Variable {
                        timeline.push((event.time, self.errors));
                    }
                    if keep_events {
                        events.push(event);
                    }
                }
                Step::Horizon | Step::Absorbing => break Outcome::Timeout,
            }
        };
        let t_end = match outcome {
            Outcome::Timeout => t_max,
            _ => self.state.t,
        };
        TrajectoryRecord {
            events,
            n_events,
            errors_timeline: timeline,
            outcome,
            t_decode: (outcome == Outcome::Success).then_some(self.state.t),
            t_end,
        }
    }
}

/// Simulates the circuit from `initial` until it first reaches `reference`
/// (success), passes `t_max`, or fires `event_cap` events.
///
/// Deterministic for a given `params.seed`.
pub fn run_trajectory(
    graph: &TannerGraph,
    initial: &Assignment,
    reference: &Assignment,
    params: &SimParams,
) -> Result<TrajectoryRecord> {
    let mut rng = super::trajectory_rng(params.seed, 0);
    run_trajectory_with(graph, initial, reference, params, &mut rng, true)
}

/// Like [`run_trajectory`], with a caller-owned random stream and optional
/// event log.
pub fn run_trajectory_with(
    graph: &TannerGraph,
    initial: &Assignment,
    reference: &Assignment,
    params: &SimParams,
    rng: &mut ChaCha8Rng,
    keep_events: bool,
) -> Result<TrajectoryRecord> {
    if initial.len() != reference.len() {
        return param("initial and reference words differ in length");
    }
    Ok(Simulator::new(graph, initial, reference, params)?.run(rng, keep_events))
}
