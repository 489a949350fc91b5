use slh_circuit::fragments::{attenuation_stage, feedback_rates, parity_rates};
use slh_circuit::{build_feedback_fragment, build_parity_fragment, FragmentBudget, SlhError, C64};

const TOL: f64 = 1e-10;

fn bits(x: usize, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((x >> i) & 1) as u8).collect()
}

#[test]
fn single_variable_parity() {
    let alpha = C64::new(1.3, 0.0);
    let frag = build_parity_fragment(1, alpha, FragmentBudget::default()).unwrap();
    let r = parity_rates(&frag, &[0], 0).unwrap();
    assert!((r.reset - alpha.norm_sqr()).abs() < TOL);
    assert!(r.set.abs() < TOL);
}

#[test]
fn odd_pair_sets_the_check() {
    let alpha = C64::new(0.6, 0.8);
    let frag = build_parity_fragment(2, alpha, FragmentBudget::default()).unwrap();
    let r = parity_rates(&frag, &[0, 1], 0).unwrap();
    assert!((r.set - 1.0).abs() < TOL);
    assert!(r.reset.abs() < TOL);
    assert!((r.flip - 1.0).abs() < TOL);
}

#[test]
fn parity_selects_exactly_one_drive() {
    let alpha = C64::new(0.9, -0.4);
    let power = alpha.norm_sqr();
    for k in 1..=4 {
        let frag = build_parity_fragment(k, alpha, FragmentBudget::default()).unwrap();
        assert!(frag.unitarity_defect() < TOL);
        for x in 0..1usize << k {
            let vars = bits(x, k);
            let parity = vars.iter().fold(0, |a, b| a ^ b);
            for check in 0..2u8 {
                let r = parity_rates(&frag, &vars, check).unwrap();
                let (on, off) = if parity == 1 { (r.set, r.reset) } else { (r.reset, r.set) };
                assert!((on - power).abs() < TOL && off.abs() < TOL, "k={k} vars={vars:?}");
                let expect_flip = if check != parity { power } else { 0.0 };
                assert!((r.flip - expect_flip).abs() < TOL);
                assert!(r.stray < TOL);
            }
        }
    }
}

#[test]
fn stage_attenuates_only_when_satisfied() {
    let gamma: f64 = 0.2;
    let stage = attenuation_stage(0, gamma).unwrap();
    assert_eq!(stage.n_ports(), 2);
    assert!(stage.unitarity_defect() < TOL);
    let main = stage.s(0, 0).matrix();
    assert!((main[(0, 0)].re - gamma.sqrt()).abs() < TOL);
    assert!((main[(1, 1)].re + 1.0).abs() < TOL);
}

#[test]
fn one_check_feedback() {
    let beta = C64::new(1.5, 0.0);
    let gamma = 0.05;
    let frag = build_feedback_fragment(1, beta, gamma, FragmentBudget::default()).unwrap();
    for var in 0..2u8 {
        let sat = feedback_rates(&frag, &[0], var).unwrap();
        let unsat = feedback_rates(&frag, &[1], var).unwrap();
        assert!((sat.toggle - gamma * 2.25).abs() < TOL);
        assert!((unsat.toggle - 2.25).abs() < TOL);
    }
}

#[test]
fn three_satisfied_checks_attenuate_cubically() {
    let gamma: f64 = 0.3;
    let frag = build_feedback_fragment(3, C64::new(1.0, 0.0), gamma, FragmentBudget::default()).unwrap();
    let r = feedback_rates(&frag, &[0, 0, 0], 0).unwrap();
    assert!((r.toggle - gamma.powi(3)).abs() < TOL);
}

#[test]
fn feedback_rate_counts_satisfied_checks() {
    let beta = C64::new(0.5, 1.2);
    for gamma in [0.01, 0.3861, 0.5, 1.0] {
        for l in 1..=3 {
            let frag = build_feedback_fragment(l, beta, gamma, FragmentBudget::default()).unwrap();
            assert!(frag.unitarity_defect() < TOL);
            for x in 0..1usize << l {
                let checks = bits(x, l);
                let satisfied = checks.iter().filter(|&&b| b == 0).count() as i32;
                for var in 0..2u8 {
                    let r = feedback_rates(&frag, &checks, var).unwrap();
                    let expected = beta.norm_sqr() * gamma.powi(satisfied);
                    assert!((r.toggle - expected).abs() < TOL, "l={l} checks={checks:?}");
                    assert!(r.stray < TOL);
                }
            }
        }
    }
}

#[test]
fn dark_feedback_does_nothing() {
    let frag = build_feedback_fragment(2, C64::new(0.0, 0.0), 0.1, FragmentBudget::default()).unwrap();
    for x in 0..4 {
        let r = feedback_rates(&frag, &bits(x, 2), 1).unwrap();
        assert_eq!((r.toggle, r.stray), (0.0, 0.0));
    }
}

#[test]
fn fragments_respect_budget() {
    let small = FragmentBudget { max_subsystems: 3 };
    let alpha = C64::new(1.0, 0.0);
    assert_eq!(
        build_parity_fragment(3, alpha, small).unwrap_err(),
        SlhError::Budget { subsystems: 4, max: 3 }
    );
    assert!(build_parity_fragment(2, alpha, small).is_ok());
    assert!(matches!(build_feedback_fragment(3, alpha, 0.5, small), Err(SlhError::Budget { .. })));
    assert!(matches!(build_feedback_fragment(1, alpha, 0.0, small), Err(SlhError::Parameter(_))));
}
