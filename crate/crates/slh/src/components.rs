//! Primitive components: beamsplitter, coherent drive, optical latch.

use crate::operator::Operator;
use crate::triple::{concat, scalars, series, SlhTriple};
use crate::{Result, SlhError, C64};

/// Two-port beamsplitter with power transmission `gamma`:
/// `S = [[sqrt(g), sqrt(1-g)], [-sqrt(1-g), sqrt(g)]]`.
pub fn make_beamsplitter(gamma: f64) -> Result<SlhTriple> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(SlhError::Parameter(format!("transmission {gamma} outside (0, 1]")));
    }
    let (t, r) = (gamma.sqrt(), (1.0 - gamma).sqrt());
    let s = vec![vec![Operator::real(t), Operator::real(r)], vec![Operator::real(-r), Operator::real(t)]];
    SlhTriple::new(s, vec![Operator::zero(), Operator::zero()], Operator::zero())
}

/// Displaces vacuum inputs into coherent states of the given amplitudes.
pub fn make_weyl(amplitudes: &[C64]) -> SlhTriple {
    let n = amplitudes.len();
    let s = (0..n).map(|i| (0..n).map(|j| Operator::real(if i == j { 1.0 } else { 0.0 })).collect()).collect();
    SlhTriple::new(s, scalars(amplitudes), Operator::zero()).expect("square by construction")
}

/// Real-amplitude shorthand for [`make_weyl`].
pub fn weyl_real(amplitudes: &[f64]) -> SlhTriple {
    make_weyl(&amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect::<Vec<_>>())
}

/// `sigma_ij = |i><j|` on qubit `id`.
fn sigma(id: usize, i: usize, j: usize) -> Operator {
    Operator::transition(id, j, i)
}

/// Set/reset half of a latch. Light on port 0 resets the latch to `|0>`,
/// light on port 1 sets it to `|1>`.
pub fn latch_set_reset(id: usize) -> SlhTriple {
    let s = vec![
        vec![Operator::projector(id, 0), -sigma(id, 1, 0)],
        vec![-sigma(id, 0, 1), Operator::projector(id, 1)],
    ];
    SlhTriple::new(s, vec![Operator::zero(), Operator::zero()], Operator::zero()).expect("2x2")
}

/// Signal-routing half of a latch: straight through in `|0>`, crossed (with
/// a sign) in `|1>`.
pub fn latch_in_out(id: usize) -> SlhTriple {
    let p0 = Operator::projector(id, 0);
    let p1 = Operator::projector(id, 1);
    let s = vec![vec![p0.clone(), -&p1], vec![-&p1, p0]];
    SlhTriple::new(s, vec![Operator::zero(), Operator::zero()], Operator::zero()).expect("2x2")
}

/// Full four-port latch: set/reset ports 0-1, signal ports 2-3.
pub fn make_latch(id: usize) -> SlhTriple {
    concat(&latch_set_reset(id), &latch_in_out(id))
}

/// Two-port block that toggles latch `id` with whatever light enters port 0.
///
/// The latch's own in-out block routes the drive to the set port when the
/// latch holds `|0>` and to the reset port when it holds `|1>`.
pub fn toggle_drive(id: usize) -> SlhTriple {
    let swap = SlhTriple::permutation(&[1, 0]).expect("valid permutation");
    let routed = series(&swap, &latch_in_out(id)).expect("2 ports");
    series(&latch_set_reset(id), &routed).expect("2 ports")
}
