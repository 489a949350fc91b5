//! Master equation and quantum-jump rates of an SLH triple.

use nalgebra::DVector;

use crate::operator::{basis_state, space_dim, Operator, Subsystem};
use crate::triple::SlhTriple;
use crate::{Result, SlhError, C64};

/// Lindblad generator `-i[H, rho] + sum_i (L_i rho L_i^dag - {L_i^dag L_i, rho} / 2)`.
///
/// `rho` must live on exactly the triple's space (scalar triples accept any).
pub fn lindblad_rhs(g: &SlhTriple, rho: &Operator) -> Result<Operator> {
    let space = rho.subsystems();
    if !g.space().iter().all(|s| space.contains(s)) {
        return Err(SlhError::Dimension("rho does not cover the system space".into()));
    }
    let minus_i = C64::new(0.0, -1.0);
    let mut out = g.h().commutator(rho).scale(minus_i);
    for l in g.couplings() {
        let ld = l.adjoint();
        out = out + l * rho * &ld - (&ld * l).anticommutator(rho).scale(C64::new(0.5, 0.0));
    }
    Ok(out.extend_to(space))
}

fn check_state(g: &SlhTriple, psi: &DVector<C64>) -> Result<()> {
    let d = space_dim(g.space());
    if psi.len() != d {
        return Err(SlhError::Dimension(format!("state has {} amplitudes, system dimension is {d}", psi.len())));
    }
    Ok(())
}

/// Jump rate `<psi| L_i^dag L_i |psi>` of every output channel.
pub fn jump_rates(g: &SlhTriple, psi: &DVector<C64>) -> Result<Vec<f64>> {
    check_state(g, psi)?;
    Ok(g.couplings().iter().map(|l| l.extend_to(g.space()).apply(psi).norm_squared()).collect())
}

/// Rate into each computational basis state, starting from basis state
/// `levels`: `sum_i |<b'| L_i |b>|^2`. Entries are indexed like the basis.
pub fn transition_rates(g: &SlhTriple, levels: &[usize]) -> Result<Vec<f64>> {
    if levels.len() != g.space().len() {
        return Err(SlhError::Dimension(format!(
            "{} levels given for {} subsystems",
            levels.len(),
            g.space().len()
        )));
    }
    let psi = basis_state(g.space(), levels);
    let mut rates = vec![0.0; psi.len()];
    for l in g.couplings() {
        let out = l.extend_to(g.space()).apply(&psi);
        for (r, z) in rates.iter_mut().zip(out.iter()) {
            *r += z.norm_sqr();
        }
    }
    Ok(rates)
}

/// Total jump rate that leaves qubit `id` in level `b`: `sum_i |P_b L_i psi|^2`.
pub fn landing_rate(g: &SlhTriple, psi: &DVector<C64>, id: usize, b: usize) -> Result<f64> {
    check_state(g, psi)?;
    let q = Subsystem::qubit(id);
    if !g.space().contains(&q) {
        return Err(SlhError::Dimension(format!("qubit {id} is not part of the system")));
    }
    let p = Operator::projector(id, b).extend_to(g.space());
    Ok(g.couplings().iter().map(|l| p.apply(&l.extend_to(g.space()).apply(psi)).norm_squared()).sum())
}
