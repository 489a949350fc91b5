//! Few-latch pieces of the decoder circuit and the rates they imply.
//!
//! Parity fragment: variables are qubits `0..k`, the check is qubit `k`.
//! Feedback fragment: checks are qubits `0..l`, the variable is qubit `l`.

use crate::components::{latch_in_out, latch_set_reset, make_beamsplitter, make_weyl, toggle_drive};
use crate::dynamics::{landing_rate, transition_rates};
use crate::operator::{basis_index, basis_state};
use crate::triple::{concat, embed, feedback, series, SlhTriple};
use crate::{Result, SlhError, C64};

/// Cap on the number of qubits a fragment may span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentBudget {
    pub max_subsystems: usize,
}

impl Default for FragmentBudget {
    fn default() -> Self {
        Self { max_subsystems: 8 }
    }
}

impl FragmentBudget {
    fn admit(&self, subsystems: usize) -> Result<()> {
        if subsystems > self.max_subsystems {
            return Err(SlhError::Budget { subsystems, max: self.max_subsystems });
        }
        Ok(())
    }
}

/// Probe light `alpha` threads the in-out blocks of `k_vars` variable
/// latches and lands on the set/reset ports of one check latch. It reaches
/// the set port exactly when an odd number of variables hold `|1>`.
pub fn build_parity_fragment(k_vars: usize, alpha: C64, budget: FragmentBudget) -> Result<SlhTriple> {
    if k_vars == 0 {
        return Err(SlhError::Parameter("parity fragment needs at least one variable".into()));
    }
    budget.admit(k_vars + 1)?;
    let mut chain = make_weyl(&[alpha, C64::new(0.0, 0.0)]);
    for v in 0..k_vars {
        chain = series(&latch_in_out(v), &chain)?;
    }
    series(&latch_set_reset(k_vars), &chain)
}

/// One check latch with a transmission-`gamma` beamsplitter closed into a
/// loop between its signal ports.
///
/// Port 0 carries the feedback light: it passes once through the
/// beamsplitter when the check holds `|0>` (satisfied) and bypasses it when
/// the check holds `|1>`. Port 1 collects what the beamsplitter rejects.
pub fn attenuation_stage(check: usize, gamma: f64) -> Result<SlhTriple> {
    // Ports before reduction: latch in/out 0-1, beamsplitter 2-3.
    let open = concat(&latch_in_out(check), &make_beamsplitter(gamma)?);
    let once = feedback(&open, 0, 2)?;
    // Remaining outputs (latch 1, bs 2, bs 3), inputs (latch 0, latch 1, bs 3).
    feedback(&once, 1, 1)
}

/// Feedback light `beta` passes `l_checks` attenuation stages and then
/// toggles one variable latch. Channel 0 carries the light, channel 1 is the
/// idle second input of the toggle, channels `2 + i` dump stage `i`.
pub fn build_feedback_fragment(
    l_checks: usize,
    beta: C64,
    gamma: f64,
    budget: FragmentBudget,
) -> Result<SlhTriple> {
    if l_checks == 0 {
        return Err(SlhError::Parameter("feedback fragment needs at least one check".into()));
    }
    budget.admit(l_checks + 1)?;
    let n = l_checks + 2;
    let mut drive = vec![C64::new(0.0, 0.0); n];
    drive[0] = beta;
    let mut chain = make_weyl(&drive);
    for c in 0..l_checks {
        chain = series(&embed(&attenuation_stage(c, gamma)?, &[0, 2 + c], n)?, &chain)?;
    }
    series(&embed(&toggle_drive(l_checks), &[0, 1], n)?, &chain)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityRates {
    /// Jump rate leaving the check in `|1>`.
    pub set: f64,
    /// Jump rate leaving the check in `|0>`.
    pub reset: f64,
    /// Rate of jumps that flip the check and nothing else.
    pub flip: f64,
    /// Rate of jumps into any other configuration; zero for a sound circuit.
    pub stray: f64,
}

fn levels_of(bits: &[u8]) -> Vec<usize> {
    bits.iter().map(|&b| usize::from(b)).collect()
}

/// Rates out of the basis state with the given variable and check bits.
pub fn parity_rates(frag: &SlhTriple, var_bits: &[u8], check_bit: u8) -> Result<ParityRates> {
    let k = var_bits.len();
    let mut levels = levels_of(var_bits);
    levels.push(usize::from(check_bit));
    let space = frag.space();
    let rates = transition_rates(frag, &levels)?;
    let psi = basis_state(space, &levels);

    let here = basis_index(space, &levels);
    levels[k] ^= 1;
    let flipped = basis_index(space, &levels);
    let stray = rates.iter().enumerate().filter(|&(i, _)| i != here && i != flipped).map(|(_, r)| r).sum();
    Ok(ParityRates {
        set: landing_rate(frag, &psi, k, 1)?,
        reset: landing_rate(frag, &psi, k, 0)?,
        flip: rates[flipped],
        stray,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackRates {
    /// Rate of jumps that toggle the variable and nothing else.
    pub toggle: f64,
    /// Rate of jumps into any other configuration; zero for a sound circuit.
    pub stray: f64,
}

/// Rates out of the basis state with the given check and variable bits.
pub fn feedback_rates(frag: &SlhTriple, check_bits: &[u8], var_bit: u8) -> Result<FeedbackRates> {
    let l = check_bits.len();
    let mut levels = levels_of(check_bits);
    levels.push(usize::from(var_bit));
    let space = frag.space();
    let rates = transition_rates(frag, &levels)?;
    let here = basis_index(space, &levels);
    levels[l] ^= 1;
    let toggled = basis_index(space, &levels);
    let stray = rates.iter().enumerate().filter(|&(i, _)| i != here && i != toggled).map(|(_, r)| r).sum();
    Ok(FeedbackRates { toggle: rates[toggled], stray })
}
