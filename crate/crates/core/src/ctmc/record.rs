use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{Assignment, TannerGraph};
use crate::error::{param, Error, Result};

use super::rates::CircuitState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatchKind {
    Check,
    Variable,
}

impl fmt::Display for LatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatchKind::Check => "check",
            LatchKind::Variable => "var",
        })
    }
}

impl FromStr for LatchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "check" => Ok(LatchKind::Check),
            "var" => Ok(LatchKind::Variable),
            other => param(format!("unknown latch kind {other:?}")),
        }
    }
}

/// One latch toggle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: LatchKind,
    pub index: usize,
    pub new_bit: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Reached zero residual errors.
    Success,
    /// The next event would have happened after `t_max` (or never).
    Timeout,
    /// Stopped after `event_cap` events.
    EventCap,
}

/// Output of one simulated trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    /// Full event log; empty when the run was asked not to keep it.
    pub events: Vec<Event>,
    pub n_events: u64,
    /// `(time, errors)` at `t = 0` and after every change of the count.
    pub errors_timeline: Vec<(f64, usize)>,
    pub outcome: Outcome,
    /// First-passage time to zero errors.
    pub t_decode: Option<f64>,
    /// Time at which the run stopped.
    pub t_end: f64,
}

impl TrajectoryRecord {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success
    }

    pub fn initial_errors(&self) -> usize {
        self.errors_timeline.first().map_or(0, |&(_, e)| e)
    }

    /// Error count in force at time `t` (last change at or before `t`).
    pub fn errors_at(&self, t: f64) -> usize {
        let idx = self.errors_timeline.partition_point(|&(time, _)| time <= t);
        self.errors_timeline[idx.saturating_sub(1)].1
    }

    /// Writes the event log, one `t kind index new_bit` line per event.
    pub fn write_event_log<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.events {
            writeln!(out, "{} {} {} {}", e.time, e.kind, e.index, e.new_bit)?;
        }
        Ok(())
    }

    /// Writes the errors timeline as CSV with header `t,errors`.
    pub fn write_timeline_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,errors")?;
        for (t, e) in &self.errors_timeline {
            writeln!(out, "{t},{e}")?;
        }
        Ok(())
    }
}

/// Parses an event log written by [`TrajectoryRecord::write_event_log`].
pub fn parse_event_log(text: &str) -> Result<Vec<Event>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bad = |msg: &str| Error::Format { line: i + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [t, kind, index, bit] = toks[..] else {
                return Err(bad("expected `t kind index new_bit`"));
            };
            Ok(Event {
                time: t.parse().map_err(|_| bad("bad time"))?,
                kind: kind.parse()?,
                index: index.parse().map_err(|_| bad("bad index"))?,
                new_bit: bit.parse().map_err(|_| bad("bad bit"))?,
            })
        })
        .collect()
}

/// Re-applies an event log to a starting state.
pub fn replay(graph: &TannerGraph, start: &CircuitState, events: &[Event]) -> Result<CircuitState> {
    start.check_consistent(graph)?;
    let mut state = start.clone();
    for e in events {
        match e.kind {
            LatchKind::Variable => {
                if e.index >= graph.n() {
                    return param(format!("variable index {} out of range", e.index));
                }
                state.var_latch.flip(e.index);
                debug_assert_eq!(state.var_latch.get(e.index), e.new_bit);
            }
            LatchKind::Check => {
                if e.index >= graph.m() {
                    return param(format!("check index {} out of range", e.index));
                }
                state.check_latch[e.index] = e.new_bit;
            }
        }
        state.t = e.time;
    }
    Ok(state)
}

/// Hamming distance between the variable latches and the transmitted word.
pub fn errors_remaining(state: &CircuitState, reference: &Assignment) -> Result<usize> {
    state.var_latch.hamming_distance(reference)
}
