//! The photonic decoder circuit as a continuous-time Markov jump process.
//!
//! Every variable and every check is a two-state latch. Check latches are
//! driven toward the parity of their variables at the probe power, and each
//! variable toggles at `feedback_power * gamma^s`, where `s` counts its checks
//! whose latches read satisfied. On top of that, every latch flips
//! spontaneously at rate `eta`.

mod engine;
mod params;
mod rates;
mod record;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use engine::{run_trajectory, run_trajectory_with, Simulator, Step};
pub use params::{CheckInit, SimParams};
pub use rates::{compute_rates, CircuitState, RateTable};
pub use record::{errors_remaining, parse_event_log, replay, Event, LatchKind, Outcome, TrajectoryRecord};

/// Independent random stream for trajectory `index` of a run seeded with
/// `master_seed`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{Assignment, TannerGraph};

    fn one_var_one_check() -> TannerGraph {
        TannerGraph::from_checks(1, 1, 1, vec![vec![0]]).unwrap()
    }

    #[test]
    fn single_transition_waiting_time_is_exponential() {
        // Variable at 0 with its check latched satisfied and eta = 0: the only
        // enabled jump is the variable toggle at rate feedback * gamma.
        let g = one_var_one_check();
        let params = SimParams::new(1.0, 4.0, 0.5, 0.0);
        let rate = 4.0 * 0.5;
        let trials = 20_000;
        let mut total = 0.0;
        for i in 0..trials {
            let mut rng = trajectory_rng(17, i);
            let state = CircuitState::new(Assignment::zeros(1), vec![0]);
            let mut sim = Simulator::from_state(&g, state, &Assignment::zeros(1), &params).unwrap();
            match sim.step(&mut rng, f64::INFINITY) {
                Step::Fired(e) => {
                    assert_eq!(e.kind, LatchKind::Variable);
                    total += e.time;
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        let mean = total / trials as f64;
        assert!((mean * rate - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn selection_frequency_follows_rates() {
        // Variable at 1, check latch still 0: the check fires at the probe
        // power r1 = 3, the variable at feedback * gamma = r2 = 1.
        let g = one_var_one_check();
        let params = SimParams::new(3.0, 2.0, 0.5, 0.0);
        let trials = 20_000u64;
        let mut checks = 0;
        for i in 0..trials {
            let mut rng = trajectory_rng(5, i);
            let state = CircuitState::new("1".parse().unwrap(), vec![0]);
            let mut sim = Simulator::from_state(&g, state, &Assignment::zeros(1), &params).unwrap();
            if let Step::Fired(e) = sim.step(&mut rng, f64::INFINITY) {
                if e.kind == LatchKind::Check {
                    checks += 1;
                }
            }
        }
        let p = 0.75;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let freq = checks as f64 / trials as f64;
        assert!((freq - p).abs() < 3.0 * sigma, "freq {freq}");
    }

    #[test]
    fn absorbing_when_all_rates_vanish() {
        let g = one_var_one_check();
        let params = SimParams::new(0.0, 0.0, 0.5, 0.0);
        let mut sim = Simulator::new(&g, &"1".parse().unwrap(), &Assignment::zeros(1), &params).unwrap();
        let mut rng = trajectory_rng(0, 0);
        assert_eq!(sim.step(&mut rng, f64::INFINITY), Step::Absorbing);
    }

    #[test]
    fn zero_initial_errors_succeed_immediately() {
        let g = TannerGraph::sample_regular(100, 5, 10, 2).unwrap();
        let zero = Assignment::zeros(100);
        let rec = run_trajectory(&g, &zero, &zero, &SimParams::new(1e5, 1.0, 0.01, 0.0)).unwrap();
        assert_eq!(rec.outcome, Outcome::Success);
        assert_eq!(rec.t_decode, Some(0.0));
        assert!(rec.events.is_empty());
    }

    #[test]
    fn timeout_and_event_cap() {
        let g = TannerGraph::sample_regular(100, 5, 10, 2).unwrap();
        let zero = Assignment::zeros(100);
        let mut bad = zero.clone();
        bad.flip(3);
        let params = SimParams::new(1e5, 1.0, 0.01, 0.0).with_t_max(1e-9);
        assert_eq!(run_trajectory(&g, &bad, &zero, &params).unwrap().outcome, Outcome::Timeout);
        let params = SimParams::new(1e5, 1.0, 0.01, 1.0).with_event_cap(3);
        let rec = run_trajectory(&g, &bad, &zero, &params).unwrap();
        assert!(rec.outcome == Outcome::EventCap || rec.outcome == Outcome::Success);
        assert!(rec.n_events <= 3);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let g = one_var_one_check();
        let z = Assignment::zeros(1);
        for p in [
            SimParams::new(-1.0, 1.0, 0.5, 0.0),
            SimParams::new(1.0, 1.0, 1.0, 0.0),
            SimParams::new(1.0, 1.0, 0.0, 0.0),
            SimParams::new(1.0, 1.0, 0.5, -1.0),
            SimParams::new(1.0, 1.0, 0.5, 0.0).with_t_max(0.0),
        ] {
            assert!(run_trajectory(&g, &z, &z, &p).is_err());
        }
        assert!(run_trajectory(&g, &Assignment::zeros(2), &z, &SimParams::new(1.0, 1.0, 0.5, 0.0)).is_err());
    }
}
