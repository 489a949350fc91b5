use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use decoder_harness::oracle::{self, ORACLE_TOL};
use decoder_harness::sweep::{run_sweep, SweepConfig};
use decoder_harness::{gamma_bound, run_ensemble, EnsembleConfig};
use photonic_decoder::channel::{corrupt_fixed_count, corrupt_iid};
use photonic_decoder::flipdec::decode_sequential;
use photonic_decoder::{Assignment, TannerGraph};
use slh_circuit::C64;

#[derive(Parser)]
#[command(name = "photodec", version, about = "Photonic expander-code decoder simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random (n, l, k)-regular code and write its graph file.
    GenCode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Corrupt a codeword (all zeros unless --codeword is given) and print it.
    Corrupt(CorruptArgs),
    /// Run the sequential bit-flip decoder on a word file.
    DecodeFlip {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_flips: usize,
    },
    /// Run one ensemble from a JSON config and print its statistics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a parameter sweep from a JSON config, appending rows to its CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Attenuation bound for an (l, k)-regular code.
    Bound {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
    },
    /// Compare jump-process rates against SLH circuit fragments.
    SlhVerify {
        #[arg(long, default_value_t = 4)]
        kvars: usize,
        #[arg(long, default_value_t = 3)]
        lchecks: usize,
        #[arg(long, default_value_t = 0.01)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        probe_power: f64,
        #[arg(long, default_value_t = 1.0)]
        feedback_power: f64,
    },
}

#[derive(Args)]
struct CorruptArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, conflicts_with = "prob", required_unless_present = "prob")]
    count: Option<usize>,
    #[arg(long)]
    prob: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    codeword: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_word(path: &PathBuf) -> anyhow::Result<Assignment> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn corrupt(args: CorruptArgs) -> anyhow::Result<()> {
    let graph = TannerGraph::read_from(&args.graph)?;
    let codeword = match &args.codeword {
        Some(p) => read_word(p)?,
        None => Assignment::zeros(graph.n()),
    };
    if !graph.is_codeword(&codeword)? {
        bail!("the given word is not a codeword of {}", args.graph.display());
    }
    let (word, pattern) = match (args.count, args.prob) {
        (Some(t), _) => corrupt_fixed_count(&codeword, t, args.seed)?,
        (None, Some(p)) => corrupt_iid(&codeword, p, args.seed)?,
        (None, None) => unreachable!("clap requires one of --count, --prob"),
    };
    match &args.out {
        Some(p) => std::fs::write(p, format!("{word}\n"))?,
        None => println!("{word}"),
    }
    eprintln!("flipped {} bits", pattern.weight());
    Ok(())
}

fn simulate(path: &PathBuf) -> anyhow::Result<()> {
    let cfg = EnsembleConfig::from_json_file(path)?;
    let stats = run_ensemble(&cfg)?;
    if let Some(p) = &cfg.output.stats_json {
        std::fs::write(p, serde_json::to_string_pretty(&stats)? + "\n")?;
    }
    if let Some(p) = &cfg.output.curve_csv {
        let mut out = BufWriter::new(File::create(p)?);
        stats.write_curve_csv(&mut out)?;
        out.flush()?;
    }
    let mut summary = serde_json::to_value(&stats)?;
    summary.as_object_mut().expect("struct serializes to an object").remove("mean_errors_curve");
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::GenCode { n, l, k, seed, out } => {
            let g = TannerGraph::sample_regular(n, l, k, seed)?;
            g.write_to(&out)?;
            println!("wrote ({n}, {l}, {k}) code with {} checks to {}", g.m(), out.display());
        }
        Command::Corrupt(args) => corrupt(args)?,
        Command::DecodeFlip { graph, input, max_flips } => {
            let g = TannerGraph::read_from(&graph)?;
            let word = read_word(&input)?;
            let r = decode_sequential(&g, &word, max_flips)?;
            println!("status {:?}", r.status);
            println!("flips {}", r.flips());
            println!("unsatisfied {} -> {}", r.unsatisfied_trace[0], r.unsatisfied_trace.last().unwrap());
            println!("{}", r.output);
            if !r.success() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Simulate { config } => simulate(&config)?,
        Command::Sweep { config } => {
            let cfg = SweepConfig::from_json_file(&config)?;
            let done = run_sweep(&cfg.base, &cfg.grid, &cfg.csv, |c, s| {
                eprintln!(
                    "gamma {} probe {} feedback {} eta {}: p_decode {}",
                    c.params.gamma, c.params.probe_power, c.params.feedback_power, c.params.eta, s.p_decode
                );
            })?;
            println!("{} rows computed, {} already present in {}", done.computed, done.skipped, cfg.csv.display());
        }
        Command::Bound { l, k } => println!("{:.6}", gamma_bound(l, k)?),
        Command::SlhVerify { kvars, lchecks, gamma, probe_power, feedback_power } => {
            // Complex phases make sure nothing depends on real amplitudes.
            let alpha = C64::from_polar(probe_power.sqrt(), 0.7);
            let beta = C64::from_polar(feedback_power.sqrt(), -1.9);
            let report = oracle::verify(kvars, lchecks, gamma, alpha, beta)?;
            for case in &report.cases {
                println!(
                    "{:<8} size {}  {:>3} configurations  max deviation {:.3e}",
                    case.fragment, case.size, case.configurations, case.max_deviation
                );
            }
            println!("max deviation {:.3e} (tolerance {ORACLE_TOL:e})", report.max_deviation());
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
