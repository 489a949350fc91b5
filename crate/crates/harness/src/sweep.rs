//! Cartesian parameter sweeps written row by row to CSV.
//!
//! Re-running a sweep against an existing file skips every grid point whose
//! configuration columns already appear in it, so an interrupted sweep picks
//! up where it stopped.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{EnsembleConfig, ErrorSpec};
use crate::ensemble::{run_ensemble, EnsembleStats};
use crate::error::{config, io_at, HarnessError, Result};

/// Values to sweep; an empty list keeps the base config's value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepGrid {
    pub error_count: Vec<usize>,
    pub error_prob: Vec<f64>,
    pub gamma: Vec<f64>,
    pub probe_power: Vec<f64>,
    pub feedback_power: Vec<f64>,
    /// Sets probe and feedback power to the same value.
    pub power: Vec<f64>,
    pub eta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: EnsembleConfig,
    pub grid: SweepGrid,
    pub csv: PathBuf,
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_at(path))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub const CONFIG_COLUMNS: [&str; 13] = [
    "n",
    "l",
    "k",
    "code_seed",
    "error_count",
    "error_prob",
    "probe_power",
    "feedback_power",
    "gamma",
    "eta",
    "t_max",
    "seed",
    "trajectories",
];

pub const STAT_COLUMNS: [&str; 9] = [
    "p_decode",
    "t_decode_median",
    "t_decode_p05",
    "t_decode_p95",
    "decode_rate",
    "decode_energy_rate",
    "total_input_power",
    "n_success",
    "n_total",
];

fn header() -> Vec<&'static str> {
    CONFIG_COLUMNS.iter().chain(&STAT_COLUMNS).copied().collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Configuration cells of a row, in [`CONFIG_COLUMNS`] order.
pub fn config_cells(cfg: &EnsembleConfig) -> Vec<String> {
    let (count, prob) = match cfg.errors {
        ErrorSpec::Count(t) => (t.to_string(), String::new()),
        ErrorSpec::Prob(p) => (String::new(), p.to_string()),
    };
    let p = &cfg.params;
    vec![
        cfg.code.n.to_string(),
        cfg.code.l.to_string(),
        cfg.code.k.to_string(),
        cfg.code.seed.to_string(),
        count,
        prob,
        p.probe_power.to_string(),
        p.feedback_power.to_string(),
        p.gamma.to_string(),
        p.eta.to_string(),
        p.t_max.to_string(),
        p.seed.to_string(),
        cfg.trajectories.to_string(),
    ]
}

fn stat_cells(s: &EnsembleStats) -> Vec<String> {
    vec![
        s.p_decode.to_string(),
        opt(s.t_decode_median),
        opt(s.t_decode_p05),
        opt(s.t_decode_p95),
        opt(s.decode_rate),
        opt(s.decode_energy_rate),
        s.total_input_power.to_string(),
        s.n_success.to_string(),
        s.n_total.to_string(),
    ]
}

/// Every grid point as a full config, in a fixed nesting order: errors
/// outermost, then gamma, probe, feedback, joint power, eta.
pub fn expand(base: &EnsembleConfig, grid: &SweepGrid) -> Result<Vec<EnsembleConfig>> {
    if grid == &SweepGrid::default() {
        return config("sweep grid has no values");
    }
    let errors: Vec<ErrorSpec> = grid
        .error_count
        .iter()
        .map(|&t| ErrorSpec::Count(t))
        .chain(grid.error_prob.iter().map(|&p| ErrorSpec::Prob(p)))
        .collect();
    let or_base = |v: &[f64], b: f64| if v.is_empty() { vec![b] } else { v.to_vec() };
    let errors = if errors.is_empty() { vec![base.errors] } else { errors };
    let power: Vec<Option<f64>> =
        if grid.power.is_empty() { vec![None] } else { grid.power.iter().map(|&p| Some(p)).collect() };

    let mut out = Vec::new();
    for &e in &errors {
        for gamma in or_base(&grid.gamma, base.params.gamma) {
            for probe in or_base(&grid.probe_power, base.params.probe_power) {
                for fb in or_base(&grid.feedback_power, base.params.feedback_power) {
                    for &joint in &power {
                        for eta in or_base(&grid.eta, base.params.eta) {
                            let mut cfg = base.clone();
                            cfg.errors = e;
                            cfg.params.gamma = gamma;
                            cfg.params.probe_power = joint.unwrap_or(probe);
                            cfg.params.feedback_power = joint.unwrap_or(fb);
                            cfg.params.eta = eta;
                            cfg.output = Default::default();
                            cfg.validate()?;
                            out.push(cfg);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn completed_rows(path: &Path) -> Result<HashSet<Vec<String>>> {
    let mut done = HashSet::new();
    if !path.exists() || std::fs::metadata(path).map_err(io_at(path))?.len() == 0 {
        return Ok(done);
    }
    let mut reader = csv::Reader::from_path(path)?;
    let found: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if found != header() {
        return config(format!("{} has a different header; refusing to append", path.display()));
    }
    for row in reader.records() {
        let row = row?;
        done.insert(row.iter().take(CONFIG_COLUMNS.len()).map(String::from).collect());
    }
    Ok(done)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub computed: usize,
    pub skipped: usize,
}

/// Runs every grid point not yet in `csv`, appending one row per point and
/// flushing after each. `progress` sees each finished row.
pub fn run_sweep(
    base: &EnsembleConfig,
    grid: &SweepGrid,
    csv_path: &Path,
    mut progress: impl FnMut(&EnsembleConfig, &EnsembleStats),
) -> Result<SweepOutcome> {
    let points = expand(base, grid)?;
    let done = completed_rows(csv_path)?;
    let fresh = done.is_empty() && std::fs::metadata(csv_path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(csv_path).map_err(io_at(csv_path))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        writer.write_record(header())?;
        writer.flush().map_err(io_at(csv_path))?;
    }
    write_metadata(csv_path)?;

    let mut outcome = SweepOutcome { computed: 0, skipped: 0 };
    for cfg in &points {
        let key = config_cells(cfg);
        if done.contains(&key) {
            outcome.skipped += 1;
            continue;
        }
        let stats = run_ensemble(cfg)?;
        writer.write_record(key.iter().cloned().chain(stat_cells(&stats)))?;
        writer.flush().map_err(io_at(csv_path))?;
        progress(cfg, &stats);
        outcome.computed += 1;
    }
    Ok(outcome)
}

/// Column notes written next to the CSV as `<csv>.meta.json`.
fn write_metadata(csv_path: &Path) -> Result<()> {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta.json");
    let path = PathBuf::from(name);
    let meta = serde_json::json!({
        "columns": header(),
        "time_statistics": "over successful trajectories only; empty when none succeeded",
        "decode_rate": "1 / mean decode time of successful trajectories",
        "total_input_power": "n * l * probe_power + n * feedback_power (one probe drive per check-variable edge, one feedback drive per variable)",
        "decode_energy_rate": "decode_rate / total_input_power",
    });
    let text = serde_json::to_string_pretty(&meta)?;
    std::fs::write(&path, text + "\n").map_err(|source| HarnessError::Io { path: path.display().to_string(), source })
}
