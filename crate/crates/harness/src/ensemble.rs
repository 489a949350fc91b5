use photonic_decoder::channel::{corrupt_fixed_count_with, corrupt_iid_with};
use photonic_decoder::ctmc::{run_trajectory_with, trajectory_rng, Outcome, TrajectoryRecord};
use photonic_decoder::{Assignment, TannerGraph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{EnsembleConfig, ErrorSpec};
use crate::error::Result;

/// What an ensemble keeps from one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySummary {
    pub index: u64,
    pub outcome: Outcome,
    pub t_decode: Option<f64>,
    pub initial_errors: usize,
    pub n_events: u64,
    /// Errors remaining at each point of the config's time grid.
    pub curve: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub n_total: usize,
    pub n_success: usize,
    pub n_timeout: usize,
    pub n_event_cap: usize,
    pub p_decode: f64,
    /// Decode-time statistics over successful trajectories only.
    pub t_decode_median: Option<f64>,
    pub t_decode_p05: Option<f64>,
    pub t_decode_p95: Option<f64>,
    pub t_decode_mean: Option<f64>,
    /// Decodes per unit time, `1 / t_decode_mean`.
    pub decode_rate: Option<f64>,
    /// `decode_rate / total_input_power`.
    pub decode_energy_rate: Option<f64>,
    pub total_input_power: f64,
    /// `(t, mean errors)` over successful trajectories.
    pub mean_errors_curve: Vec<(f64, f64)>,
}

/// Errors remaining at each grid time, read off the record's step function.
pub fn resample_timeline(record: &TrajectoryRecord, grid: &[f64]) -> Vec<usize> {
    grid.iter().map(|&t| record.errors_at(t)).collect()
}

/// Quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn run_one(cfg: &EnsembleConfig, shared: Option<&TannerGraph>, grid: &[f64], index: u64) -> Result<TrajectorySummary> {
    let owned;
    let graph = match shared {
        Some(g) => g,
        None => {
            owned = cfg.code.build(index)?;
            &owned
        }
    };
    let zero = Assignment::zeros(graph.n());
    let mut rng = trajectory_rng(cfg.params.seed, index);
    let (initial, _) = match cfg.errors {
        ErrorSpec::Count(t) => corrupt_fixed_count_with(&zero, t, &mut rng)?,
        ErrorSpec::Prob(p) => corrupt_iid_with(&zero, p, &mut rng)?,
    };
    let record = run_trajectory_with(graph, &initial, &zero, &cfg.params, &mut rng, false)?;
    Ok(TrajectorySummary {
        index,
        outcome: record.outcome,
        t_decode: record.t_decode,
        initial_errors: record.initial_errors(),
        n_events: record.n_events,
        curve: resample_timeline(&record, grid),
    })
}

/// Runs every trajectory of `cfg` in parallel. The result is ordered by
/// trajectory index and does not depend on the number of worker threads.
pub fn run_trajectories(cfg: &EnsembleConfig) -> Result<Vec<TrajectorySummary>> {
    cfg.validate()?;
    let shared = if cfg.code.resample_per_trajectory { None } else { Some(cfg.code.build(0)?) };
    let grid = cfg.grid.times();
    (0..cfg.trajectories as u64)
        .into_par_iter()
        .map(|i| run_one(cfg, shared.as_ref(), &grid, i))
        .collect()
}

pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleStats> {
    let runs = run_trajectories(cfg)?;
    Ok(summarize(cfg, &runs))
}

/// Aggregates trajectory summaries. Failed trajectories count against
/// `p_decode` and are left out of every time statistic and of the curve.
pub fn summarize(cfg: &EnsembleConfig, runs: &[TrajectorySummary]) -> EnsembleStats {
    let count = |o: Outcome| runs.iter().filter(|r| r.outcome == o).count();
    let successes: Vec<&TrajectorySummary> = runs.iter().filter(|r| r.outcome == Outcome::Success).collect();
    let mut times: Vec<f64> = successes.iter().filter_map(|r| r.t_decode).collect();
    times.sort_by(f64::total_cmp);

    let total_input_power = cfg.total_input_power();
    let (median, p05, p95, mean) = if times.is_empty() {
        (None, None, None, None)
    } else {
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        (Some(quantile(&times, 0.5)), Some(quantile(&times, 0.05)), Some(quantile(&times, 0.95)), Some(mean))
    };
    let decode_rate = mean.map(|m| 1.0 / m);
    let decode_energy_rate = decode_rate.map(|r| r / total_input_power);

    let grid = cfg.grid.times();
    let mean_errors_curve = if successes.is_empty() {
        Vec::new()
    } else {
        grid.iter()
            .enumerate()
            .map(|(j, &t)| {
                let sum: usize = successes.iter().map(|r| r.curve[j]).sum();
                (t, sum as f64 / successes.len() as f64)
            })
            .collect()
    };

    EnsembleStats {
        n_total: runs.len(),
        n_success: successes.len(),
        n_timeout: count(Outcome::Timeout),
        n_event_cap: count(Outcome::EventCap),
        p_decode: if runs.is_empty() { 0.0 } else { successes.len() as f64 / runs.len() as f64 },
        t_decode_median: median,
        t_decode_p05: p05,
        t_decode_p95: p95,
        t_decode_mean: mean,
        decode_rate,
        decode_energy_rate,
        total_input_power,
        mean_errors_curve,
    }
}

impl EnsembleStats {
    pub fn write_curve_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,mean_errors")?;
        for (t, e) in &self.mean_errors_curve {
            writeln!(out, "{t},{e}")?;
        }
        Ok(())
    }
}
