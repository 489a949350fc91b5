use std::path::{Path, PathBuf};

use photonic_decoder::ctmc::SimParams;
use photonic_decoder::TannerGraph;
use serde::{Deserialize, Serialize};

use crate::error::{config, io_at, Result};

/// Which code an ensemble runs on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub l: usize,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    /// Load the graph from this file instead of sampling it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<PathBuf>,
    /// Draw a fresh graph for every trajectory (seed `seed + index`).
    #[serde(default)]
    pub resample_per_trajectory: bool,
}

impl CodeSpec {
    pub fn regular(n: usize, l: usize, k: usize, seed: u64) -> Self {
        Self { n, l, k, seed, graph_file: None, resample_per_trajectory: false }
    }

    pub fn build(&self, trajectory: u64) -> Result<TannerGraph> {
        if let Some(path) = &self.graph_file {
            let g = TannerGraph::read_from(path)?;
            if (g.n(), g.l(), g.k()) != (self.n, self.l, self.k) {
                return config(format!(
                    "{} holds an ({}, {}, {}) code, config says ({}, {}, {})",
                    path.display(),
                    g.n(),
                    g.l(),
                    g.k(),
                    self.n,
                    self.l,
                    self.k
                ));
            }
            return Ok(g);
        }
        let seed = if self.resample_per_trajectory { self.seed.wrapping_add(trajectory) } else { self.seed };
        Ok(TannerGraph::sample_regular(self.n, self.l, self.k, seed)?)
    }
}

/// Channel applied to the all-zero codeword.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorSpec {
    /// Exactly this many flipped bits, positions uniform.
    Count(usize),
    /// Each bit flipped independently with this probability.
    Prob(f64),
}

/// Log-spaced sampling times for the mean-errors curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_min: 1e-3, t_max: 1e7, points: 101 }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return config(format!("time grid needs 0 < t_min < t_max, got {} .. {}", self.t_min, self.t_max));
        }
        if self.points < 2 {
            return config("time grid needs at least two points");
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    /// Summary statistics as JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats_json: Option<PathBuf>,
    /// Mean-errors curve as CSV (`t,mean_errors`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub code: CodeSpec,
    pub errors: ErrorSpec,
    pub params: SimParams,
    pub trajectories: usize,
    #[serde(default)]
    pub grid: TimeGrid,
    #[serde(default)]
    pub output: OutputSpec,
}

impl EnsembleConfig {
    pub fn new(code: CodeSpec, errors: ErrorSpec, params: SimParams, trajectories: usize) -> Self {
        Self { code, errors, params, trajectories, grid: TimeGrid::default(), output: OutputSpec::default() }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_at(path))?;
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trajectories == 0 {
            return config("trajectories must be at least 1");
        }
        match self.errors {
            ErrorSpec::Count(t) if t > self.code.n => {
                return config(format!("{t} errors requested on {} bits", self.code.n));
            }
            ErrorSpec::Prob(p) if !(0.0..=1.0).contains(&p) => {
                return config(format!("error probability {p} outside [0, 1]"));
            }
            _ => {}
        }
        self.params.validate()?;
        self.grid.validate()
    }

    /// Total injected flux: one probe drive per check-variable edge plus one
    /// feedback drive per variable.
    pub fn total_input_power(&self) -> f64 {
        let n = self.code.n as f64;
        n * self.code.l as f64 * self.params.probe_power + n * self.params.feedback_power
    }
}
