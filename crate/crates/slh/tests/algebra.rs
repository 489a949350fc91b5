use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slh_circuit::components::{latch_in_out, latch_set_reset, weyl_real};
use slh_circuit::operator::{basis_index, Operator, Subsystem};
use slh_circuit::{
    concat, embed, feedback, jump_rates, lindblad_rhs, make_beamsplitter, make_latch, make_weyl, series,
    transition_rates, SlhError, SlhTriple, C64,
};

const UNITARY_TOL: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_matrix(rng: &mut impl Rng, d: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut impl Rng, space: &[Subsystem]) -> Operator {
    let d = space.iter().map(|s| s.dim).product();
    let a = random_matrix(rng, d);
    Operator::from_matrix(space.to_vec(), (&a + a.adjoint()) * c(0.5)).unwrap()
}

/// Random triple with unitary S: the Q factor of a random complex matrix on
/// ports x system, cut into operator blocks.
fn random_triple(rng: &mut impl Rng, ports: usize, space: &[Subsystem]) -> SlhTriple {
    let d: usize = space.iter().map(|s| s.dim).product();
    let u = random_matrix(rng, ports * d).qr().q();
    let s = (0..ports)
        .map(|i| {
            (0..ports)
                .map(|j| Operator::from_matrix(space.to_vec(), u.view((i * d, j * d), (d, d)).into_owned()).unwrap())
                .collect()
        })
        .collect();
    let l = (0..ports).map(|_| Operator::from_matrix(space.to_vec(), random_matrix(rng, d)).unwrap()).collect();
    SlhTriple::new(s, l, random_hermitian(rng, space)).unwrap()
}

fn random_density(rng: &mut impl Rng, space: &[Subsystem]) -> Operator {
    let d = space.iter().map(|s| s.dim).product();
    let a = random_matrix(rng, d);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    Operator::from_matrix(space.to_vec(), rho / tr).unwrap()
}

fn assert_triples_close(a: &SlhTriple, b: &SlhTriple, tol: f64) {
    assert_eq!(a.n_ports(), b.n_ports());
    for i in 0..a.n_ports() {
        for j in 0..a.n_ports() {
            assert!(a.s(i, j).max_abs_diff(b.s(i, j)) < tol, "S[{i}][{j}]");
        }
        assert!(a.l(i).max_abs_diff(b.l(i)) < tol, "L[{i}]");
    }
    assert!(a.h().max_abs_diff(b.h()) < tol, "H");
}

#[test]
fn weyl_drives_add() {
    let g = series(&weyl_real(&[1.5]), &weyl_real(&[0.5])).unwrap();
    assert_triples_close(&g, &weyl_real(&[2.0]), 1e-15);
}

#[test]
fn balanced_beamsplitter_mixes_drives() {
    let (a, b) = (C64::new(0.3, 1.0), C64::new(-2.0, 0.5));
    let g = series(&make_beamsplitter(0.5).unwrap(), &make_weyl(&[a, b])).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((g.l(0).matrix()[(0, 0)] - (a + b) * r).norm() < 1e-15);
    assert!((g.l(1).matrix()[(0, 0)] - (-a + b) * r).norm() < 1e-15);
    assert!(g.h().max_abs_diff(&Operator::zero()) < 1e-15);
}

#[test]
fn identity_is_neutral_in_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_triple(&mut rng, 2, &[Subsystem::qubit(0)]);
    assert_triples_close(&series(&SlhTriple::identity(2), &g).unwrap(), &g, 1e-14);
    assert_triples_close(&series(&g, &SlhTriple::identity(2)).unwrap(), &g, 1e-14);
}

#[test]
fn series_needs_equal_ports() {
    let err = series(&SlhTriple::identity(2), &SlhTriple::identity(3)).unwrap_err();
    assert!(matches!(err, SlhError::PortMismatch(_)));
}

#[test]
fn concat_stacks_ports() {
    assert_eq!(concat(&SlhTriple::identity(1), &SlhTriple::identity(1)), SlhTriple::identity(2));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (p, q) in [(1, 2), (3, 1), (2, 2)] {
        let a = random_triple(&mut rng, p, &[Subsystem::qubit(0)]);
        let b = random_triple(&mut rng, q, &[Subsystem::qubit(1)]);
        assert_eq!(concat(&a, &b).n_ports(), p + q);
    }
}

#[test]
fn latch_blocks_as_printed() {
    let q = make_latch(0);
    let p0 = Operator::projector(0, 0);
    let p1 = Operator::projector(0, 1);
    let s10 = Operator::transition(0, 0, 1);
    let s01 = Operator::transition(0, 1, 0);
    let zero = Operator::zero();
    let expected = [
        [p0.clone(), -&s10, zero.clone(), zero.clone()],
        [-&s01, p1.clone(), zero.clone(), zero.clone()],
        [zero.clone(), zero.clone(), p0.clone(), -&p1],
        [zero.clone(), zero.clone(), -&p1, p0.clone()],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(q.s(i, j).max_abs_diff(&expected[i][j]), 0.0, "S[{i}][{j}]");
        }
    }
    assert!(q.unitarity_defect() < 1e-12);
}

#[test]
fn latch_routes_by_state() {
    // Power in on signal port 0: stays on port 0 in |0>, crosses in |1>.
    let g = series(&latch_in_out(0), &weyl_real(&[1.0, 0.0])).unwrap();
    let zero_state = DVector::from_vec(vec![c(1.0), c(0.0)]);
    let one_state = DVector::from_vec(vec![c(0.0), c(1.0)]);
    assert_eq!(jump_rates(&g, &zero_state).unwrap(), vec![1.0, 0.0]);
    assert_eq!(jump_rates(&g, &one_state).unwrap(), vec![0.0, 1.0]);
}

#[test]
fn set_port_drive_only_raises_the_latch() {
    let alpha = 0.7;
    let g = series(&latch_set_reset(0), &weyl_real(&[0.0, alpha])).unwrap();
    let q = [Subsystem::qubit(0)];
    let from0 = transition_rates(&g, &[0]).unwrap();
    let from1 = transition_rates(&g, &[1]).unwrap();
    assert!((from0[basis_index(&q, &[1])] - alpha * alpha).abs() < 1e-15);
    assert_eq!(from0[basis_index(&q, &[0])], 0.0);
    assert_eq!(from1[basis_index(&q, &[0])], 0.0);
}

#[test]
fn zero_channel_has_zero_rate() {
    let g = weyl_real(&[0.0]);
    assert_eq!(jump_rates(&g, &DVector::from_element(1, c(1.0))).unwrap(), vec![0.0]);
}

#[test]
fn beamsplitter_entries() {
    let half = make_beamsplitter(0.5).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [[r, r], [-r, r]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((half.s(i, j).matrix()[(0, 0)] - c(expected[i][j])).norm() < 1e-15);
        }
    }
    let thin = make_beamsplitter(0.01).unwrap();
    assert!((thin.s(0, 0).matrix()[(0, 0)].norm_sqr() - 0.01).abs() < 1e-15);
    assert!((thin.s(1, 0).matrix()[(0, 0)].norm_sqr() - 0.99).abs() < 1e-15);
}

#[test]
fn weyl_definition() {
    assert_eq!(make_weyl(&[]).n_ports(), 0);
    let w = weyl_real(&[2.0, 0.0]);
    assert_eq!(w.l(0).matrix()[(0, 0)], c(2.0));
    assert_eq!(w.l(1).matrix()[(0, 0)], c(0.0));
}

#[test]
fn balanced_beamsplitter_self_loop_is_a_sign() {
    let g = feedback(&make_beamsplitter(0.5).unwrap(), 1, 1).unwrap();
    assert_eq!(g.n_ports(), 1);
    assert!((g.s(0, 0).matrix()[(0, 0)] - c(-1.0)).norm() < 1e-12);
}

#[test]
fn straight_loop_is_ill_posed() {
    let err = feedback(&SlhTriple::identity(2), 0, 0).unwrap_err();
    assert_eq!(err, SlhError::SingularFeedback { out_k: 0, in_l: 0 });
}

#[test]
fn embed_rejects_bad_ports() {
    let bs = make_beamsplitter(0.3).unwrap();
    assert!(embed(&bs, &[0], 3).is_err());
    assert!(embed(&bs, &[0, 0], 3).is_err());
    assert!(embed(&bs, &[0, 3], 3).is_err());
    let g = embed(&bs, &[2, 0], 3).unwrap();
    assert!(g.is_unitary(1e-15));
    assert_eq!(g.s(1, 1).matrix()[(0, 0)], c(1.0));
}

#[test]
fn lindblad_on_latch_fragment() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = series(&make_latch(0), &weyl_real(&[0.4, 1.1, 0.0, 2.0])).unwrap();
    let rho = random_density(&mut rng, g.space());
    let d = lindblad_rhs(&g, &rho).unwrap();
    assert!(d.trace().norm() < 1e-12);
    assert!(d.is_hermitian(1e-12));
    let wrong = random_density(&mut rng, &[Subsystem::qubit(5)]);
    assert!(matches!(lindblad_rhs(&g, &wrong), Err(SlhError::Dimension(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_preserve_unitarity(seed in any::<u64>(), ports in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_triple(&mut rng, ports, &[Subsystem::qubit(0)]);
        let b = random_triple(&mut rng, ports, &[Subsystem::qubit(1)]);
        prop_assert!(a.unitarity_defect() < UNITARY_TOL);
        let s = series(&b, &a).unwrap();
        prop_assert!(s.unitarity_defect() < UNITARY_TOL);
        prop_assert!(s.h().is_hermitian(1e-12));
        let c = concat(&a, &b);
        prop_assert!(c.unitarity_defect() < UNITARY_TOL);
        let k = rng.random_range(0..ports);
        let l = rng.random_range(0..ports);
        let f = feedback(&s, k, l).unwrap();
        prop_assert_eq!(f.n_ports(), ports - 1);
        prop_assert!(f.unitarity_defect() < UNITARY_TOL, "defect {}", f.unitarity_defect());
        prop_assert!(f.h().is_hermitian(1e-10));
    }

    #[test]
    fn series_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_triple(&mut rng, 2, &[Subsystem::qubit(0)]);
        let b = random_triple(&mut rng, 2, &[Subsystem::qubit(1)]);
        let c = random_triple(&mut rng, 2, &[Subsystem::qubit(0)]);
        let left = series(&series(&c, &b).unwrap(), &a).unwrap();
        let right = series(&c, &series(&b, &a).unwrap()).unwrap();
        assert_triples_close(&left, &right, 1e-10);
    }

    #[test]
    fn lindblad_is_trace_free_and_hermitian(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = [Subsystem::qubit(0), Subsystem::qubit(1)];
        let g = random_triple(&mut rng, 2, &space);
        let rho = random_density(&mut rng, &space);
        let d = lindblad_rhs(&g, &rho).unwrap();
        prop_assert!(d.trace().norm() < 1e-12, "trace {}", d.trace());
        prop_assert!(d.is_hermitian(1e-12));
    }
}
