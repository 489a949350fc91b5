use decoder_harness::sweep::{run_sweep, SweepGrid};
use decoder_harness::{quantile, resample_timeline, run_ensemble, run_trajectories, CodeSpec, EnsembleConfig, ErrorSpec, TimeGrid};
use photonic_decoder::channel::corrupt_fixed_count;
use photonic_decoder::ctmc::{errors_remaining, replay, run_trajectory, SimParams, Simulator};
use photonic_decoder::{Assignment, TannerGraph};

fn small(errors: usize, gamma: f64, trajectories: usize) -> EnsembleConfig {
    let params = SimParams::new(1e3, 1.0, gamma, 0.0).with_seed(3).with_t_max(1e7).with_event_cap(200_000);
    EnsembleConfig::new(CodeSpec::regular(200, 5, 10, 2), ErrorSpec::Count(errors), params, trajectories)
}

#[test]
fn quantile_interpolates() {
    let xs = [1.0, 2.0, 4.0, 8.0];
    assert_eq!(quantile(&xs, 0.0), 1.0);
    assert_eq!(quantile(&xs, 1.0), 8.0);
    assert_eq!(quantile(&xs, 0.5), 3.0);
    assert_eq!(quantile(&[5.0], 0.95), 5.0);
}

#[test]
fn clean_codeword_decodes_at_time_zero() {
    let s = run_ensemble(&small(0, 0.1, 20)).unwrap();
    assert_eq!(s.p_decode, 1.0);
    assert_eq!(s.t_decode_median, Some(0.0));
    assert!(s.mean_errors_curve.iter().all(|&(_, e)| e == 0.0));
}

#[test]
fn doubling_power_halves_time_statistics() {
    let a = small(8, 0.1, 40);
    let mut b = a.clone();
    b.params = a.params.scaled(2.0);
    let (x, y) = (run_ensemble(&a).unwrap(), run_ensemble(&b).unwrap());
    assert_eq!(x.n_success, y.n_success);
    for (p, q) in [
        (x.t_decode_median, y.t_decode_median),
        (x.t_decode_p05, y.t_decode_p05),
        (x.t_decode_p95, y.t_decode_p95),
    ] {
        assert_eq!(q.unwrap(), p.unwrap() / 2.0);
    }
}

#[test]
fn resampled_curve_matches_replay() {
    let graph = TannerGraph::sample_regular(200, 5, 10, 2).unwrap();
    let zero = Assignment::zeros(200);
    let (bad, _) = corrupt_fixed_count(&zero, 12, 5).unwrap();
    let params = SimParams::new(50.0, 1.0, 0.2, 0.01).with_seed(9).with_event_cap(3000);
    let rec = run_trajectory(&graph, &bad, &zero, &params).unwrap();
    let start = Simulator::new(&graph, &bad, &zero, &params).unwrap().state().clone();
    let grid = TimeGrid { t_min: 1e-3, t_max: rec.t_end, points: 40 }.times();
    let curve = resample_timeline(&rec, &grid);
    for (&t, &e) in grid.iter().zip(&curve) {
        let upto: Vec<_> = rec.events.iter().filter(|ev| ev.time <= t).cloned().collect();
        let state = replay(&graph, &start, &upto).unwrap();
        assert_eq!(errors_remaining(&state, &zero).unwrap(), e, "t = {t}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = small(10, 0.1, 24);
    let many = run_trajectories(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| run_trajectories(&cfg)).unwrap();
    assert_eq!(many, one);
    assert!(many.iter().enumerate().all(|(i, r)| r.index == i as u64));
}

#[test]
fn stronger_attenuation_decodes_slower() {
    let fast = run_ensemble(&small(10, 0.1, 200)).unwrap();
    let slow = run_ensemble(&small(10, 0.01, 200)).unwrap();
    assert!(slow.t_decode_median.unwrap() > fast.t_decode_median.unwrap());
    assert!(slow.p_decode >= fast.p_decode - 0.05, "{} vs {}", slow.p_decode, fast.p_decode);
}

#[test]
fn decode_probability_falls_with_error_count() {
    let mut last = f64::INFINITY;
    let mut seen = Vec::new();
    for t in [10, 30, 60, 90] {
        let params =
            SimParams::new(1e5, 1.0, 0.01, 0.0).with_seed(7).with_t_max(1e6).with_event_cap(200_000);
        let cfg = EnsembleConfig::new(CodeSpec::regular(1000, 5, 10, 1), ErrorSpec::Count(t), params, 500);
        let p = run_ensemble(&cfg).unwrap().p_decode;
        seen.push(p);
        assert!(p <= last, "p_decode not monotone: {seen:?}");
        last = p;
    }
    assert!(seen[0] > 0.95 && seen[3] < 0.05, "{seen:?}");
}

#[test]
fn mean_error_curve_has_slow_final_stage() {
    // First correction happens on the feedback time scale; the last error
    // sits next to satisfied checks and waits out the attenuation.
    let gamma = 0.01;
    let params = SimParams::new(1e5, 1.0, gamma, 0.0).with_seed(7).with_t_max(1e9).with_event_cap(2_000_000);
    let mut cfg = EnsembleConfig::new(CodeSpec::regular(1000, 5, 10, 1), ErrorSpec::Count(30), params, 200);
    cfg.grid = TimeGrid { t_min: 1e-3, t_max: 1e8, points: 221 };
    let s = run_ensemble(&cfg).unwrap();
    let crossing = |level: f64| s.mean_errors_curve.iter().find(|&&(_, e)| e <= level).unwrap().0;
    let ratio = crossing(1.0) / crossing(29.0);
    assert!((1.0 / gamma..=1.0 / gamma.powi(3)).contains(&ratio), "ratio {ratio}");
}

#[test]
fn decode_rate_tracks_power_when_noise_is_small() {
    let base = small(6, 0.1, 100);
    let mut rates = Vec::new();
    for p in [10.0, 100.0] {
        let mut cfg = base.clone();
        cfg.params = SimParams::new(p, p, 0.1, 1e-3).with_seed(3).with_t_max(1e7 / p).with_event_cap(200_000);
        rates.push(run_ensemble(&cfg).unwrap().decode_rate.unwrap());
    }
    let gain = rates[1] / rates[0];
    assert!((gain / 10.0 - 1.0).abs() < 0.1, "rate gain {gain}");
}

#[test]
fn single_point_sweep_matches_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let cfg = small(8, 0.1, 30);
    let done = run_sweep(&cfg, &SweepGrid { gamma: vec![0.1], ..Default::default() }, &csv, |_, _| {}).unwrap();
    assert_eq!(done.computed, 1);
    let stats = run_ensemble(&cfg).unwrap();
    let mut rd = csv::Reader::from_path(&csv).unwrap();
    let head = rd.headers().unwrap().clone();
    let row = rd.records().next().unwrap().unwrap();
    let col = |name: &str| row[head.iter().position(|h| h == name).unwrap()].parse::<f64>().unwrap();
    assert_eq!(col("p_decode"), stats.p_decode);
    assert_eq!(col("t_decode_median"), stats.t_decode_median.unwrap());
    assert_eq!(col("decode_rate"), stats.decode_rate.unwrap());
    assert_eq!(col("total_input_power"), 200.0 * 5.0 * 1e3 + 200.0);
    assert!(dir.path().join("one.csv.meta.json").exists());
}

#[test]
fn sweep_is_deterministic_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let grid = SweepGrid { gamma: vec![0.1, 0.2], error_count: vec![4, 8], ..Default::default() };
    let cfg = small(8, 0.1, 10);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    run_sweep(&cfg, &grid, &a, |_, _| {}).unwrap();
    run_sweep(&cfg, &grid, &b, |_, _| {}).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // Drop the last row, as if the run had been interrupted.
    let text = std::fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    std::fs::write(&a, lines[..4].join("\n") + "\n").unwrap();
    let again = run_sweep(&cfg, &grid, &a, |_, _| {}).unwrap();
    assert_eq!((again.computed, again.skipped), (1, 3));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn empty_sweep_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_sweep(&small(1, 0.1, 1), &SweepGrid::default(), &dir.path().join("x.csv"), |_, _| {});
    assert!(r.is_err());
}
