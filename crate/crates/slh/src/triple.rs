use std::fmt;

use crate::operator::{union, Operator, Subsystem};
use crate::{Result, SlhError, C64};

/// Singular values of `1 - S_kl` below this make a feedback loop ill-posed.
pub const FEEDBACK_SINGULAR_TOL: f64 = 1e-12;

/// Open quantum system with `n` field channels: scattering matrix `S`
/// (`n x n`, operator entries), coupling vector `L`, and Hamiltonian `H`.
///
/// All operators are stored on one common space, the union of the
/// subsystems any of them touches.
#[derive(Clone, Debug, PartialEq)]
pub struct SlhTriple {
    space: Vec<Subsystem>,
    s: Vec<Vec<Operator>>,
    l: Vec<Operator>,
    h: Operator,
}

impl SlhTriple {
    pub fn new(s: Vec<Vec<Operator>>, l: Vec<Operator>, h: Operator) -> Result<Self> {
        let n = l.len();
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(SlhError::PortMismatch(format!("S must be {n}x{n} to match L")));
        }
        let mut space = h.subsystems().to_vec();
        for op in s.iter().flatten().chain(&l) {
            space = union(&space, op.subsystems());
        }
        Ok(Self::on_space(space, s, l, h))
    }

    fn on_space(space: Vec<Subsystem>, s: Vec<Vec<Operator>>, l: Vec<Operator>, h: Operator) -> Self {
        let ext = |op: &Operator| op.extend_to(&space);
        let s = s.iter().map(|row| row.iter().map(ext).collect()).collect();
        let l = l.iter().map(ext).collect();
        let h = ext(&h);
        Self { space, s, l, h }
    }

    /// `n` channels passing straight through: `S = 1`, `L = 0`, `H = 0`.
    pub fn identity(n: usize) -> Self {
        let s = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Operator::one() } else { Operator::zero() }).collect())
            .collect();
        Self { space: Vec::new(), s, l: vec![Operator::zero(); n], h: Operator::zero() }
    }

    /// Routes input `j` to output `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(SlhError::PortMismatch(format!("{perm:?} is not a permutation")));
            }
        }
        let mut s = vec![vec![Operator::zero(); n]; n];
        for (j, &p) in perm.iter().enumerate() {
            s[p][j] = Operator::one();
        }
        Ok(Self { space: Vec::new(), s, l: vec![Operator::zero(); n], h: Operator::zero() })
    }

    pub fn n_ports(&self) -> usize {
        self.l.len()
    }

    pub fn space(&self) -> &[Subsystem] {
        &self.space
    }

    pub fn s(&self, i: usize, j: usize) -> &Operator {
        &self.s[i][j]
    }

    pub fn l(&self, i: usize) -> &Operator {
        &self.l[i]
    }

    pub fn couplings(&self) -> &[Operator] {
        &self.l
    }

    pub fn h(&self) -> &Operator {
        &self.h
    }

    /// The same triple with every operator embedded in `space`.
    pub fn extend_to(&self, space: &[Subsystem]) -> SlhTriple {
        let space = union(&self.space, space);
        Self::on_space(space, self.s.clone(), self.l.clone(), self.h.clone())
    }

    /// Largest entry of `S S^dag - 1`, taken over the operator matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n_ports();
        let id = Operator::identity_on(&self.space);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let mut acc = Operator::zero().extend_to(&self.space);
                for j in 0..n {
                    acc = acc + &self.s[i][j] * self.s[k][j].adjoint();
                }
                let target = if i == k { id.clone() } else { Operator::zero() };
                worst = worst.max(acc.max_abs_diff(&target));
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Plain-text listing of `S`, `L`, and `H`.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SlhTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SLH triple, {} ports", self.n_ports())?;
        for (i, row) in self.s.iter().enumerate() {
            for (j, op) in row.iter().enumerate() {
                write!(f, "S[{i}][{j}] {op}")?;
            }
        }
        for (i, op) in self.l.iter().enumerate() {
            write!(f, "L[{i}] {op}")?;
        }
        write!(f, "H {}", self.h)
    }
}

fn zero_on(space: &[Subsystem]) -> Operator {
    Operator::zero().extend_to(space)
}

/// Series product `G2 <| G1`: the outputs of `g1` feed the inputs of `g2`.
///
/// `S = S2 S1`, `L = S2 L1 + L2`, `H = H1 + H2 + Im(L2^dag S2 L1)`.
pub fn series(g2: &SlhTriple, g1: &SlhTriple) -> Result<SlhTriple> {
    let n = g1.n_ports();
    if g2.n_ports() != n {
        return Err(SlhError::PortMismatch(format!(
            "series of a {}-port system after a {n}-port system",
            g2.n_ports()
        )));
    }
    let space = union(&g1.space, &g2.space);
    let a = g1.extend_to(&space);
    let b = g2.extend_to(&space);

    let mut s = vec![vec![zero_on(&space); n]; n];
    let mut l = Vec::with_capacity(n);
    let mut cross = zero_on(&space);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                s[i][j] = &s[i][j] + &b.s[i][k] * &a.s[k][j];
            }
        }
        let mut li = b.l[i].clone();
        for k in 0..n {
            li = li + &b.s[i][k] * &a.l[k];
            cross = cross + b.l[i].adjoint() * &b.s[i][k] * &a.l[k];
        }
        l.push(li);
    }
    let h = &a.h + &b.h + cross.im();
    Ok(SlhTriple::on_space(space, s, l, h))
}

/// Concatenation `G1 [+] G2`: side-by-side systems with `g1`'s channels first.
pub fn concat(g1: &SlhTriple, g2: &SlhTriple) -> SlhTriple {
    let (n1, n2) = (g1.n_ports(), g2.n_ports());
    let space = union(&g1.space, &g2.space);
    let mut s = vec![vec![Operator::zero(); n1 + n2]; n1 + n2];
    for i in 0..n1 {
        for j in 0..n1 {
            s[i][j] = g1.s[i][j].clone();
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            s[n1 + i][n1 + j] = g2.s[i][j].clone();
        }
    }
    let l = g1.l.iter().chain(&g2.l).cloned().collect();
    let h = &g1.h + &g2.h;
    SlhTriple::on_space(space, s, l, h)
}

/// Feedback `[G]_{k -> l}`: output channel `out_k` is routed back into input
/// channel `in_l`, leaving `n - 1` channels. The remaining outputs keep
/// their relative order, as do the remaining inputs.
pub fn feedback(g: &SlhTriple, out_k: usize, in_l: usize) -> Result<SlhTriple> {
    let n = g.n_ports();
    if out_k >= n || in_l >= n {
        return Err(SlhError::PortMismatch(format!("feedback {out_k} -> {in_l} on a {n}-port system")));
    }
    let space = g.space.clone();
    let loop_gain = Operator::identity_on(&space) - &g.s[out_k][in_l];
    let inv = loop_gain.inverse(FEEDBACK_SINGULAR_TOL).ok_or(SlhError::SingularFeedback { out_k, in_l })?;

    let outs: Vec<usize> = (0..n).filter(|&i| i != out_k).collect();
    let ins: Vec<usize> = (0..n).filter(|&j| j != in_l).collect();
    // S_{i l} (1 - S_kl)^-1, shared by the S and L updates.
    let through: Vec<Operator> = (0..n).map(|i| &g.s[i][in_l] * &inv).collect();

    let s = outs
        .iter()
        .map(|&i| ins.iter().map(|&j| &g.s[i][j] + &through[i] * &g.s[out_k][j]).collect())
        .collect();
    let l = outs.iter().map(|&i| &g.l[i] + &through[i] * &g.l[out_k]).collect();
    let mut cross = zero_on(&space);
    for j in 0..n {
        cross = cross + g.l[j].adjoint() * &through[j] * &g.l[out_k];
    }
    let h = &g.h + cross.im();
    Ok(SlhTriple::on_space(space, s, l, h))
}

/// Places `g` on channels `ports` of an `n_total`-channel system; the other
/// channels pass straight through. Equivalent to concatenating with an
/// identity and conjugating by a channel permutation.
pub fn embed(g: &SlhTriple, ports: &[usize], n_total: usize) -> Result<SlhTriple> {
    if ports.len() != g.n_ports() {
        return Err(SlhError::PortMismatch(format!(
            "{} port indices given for a {}-port system",
            ports.len(),
            g.n_ports()
        )));
    }
    let mut seen = vec![false; n_total];
    for &p in ports {
        if p >= n_total || std::mem::replace(&mut seen[p], true) {
            return Err(SlhError::PortMismatch(format!("invalid port list {ports:?} for {n_total} channels")));
        }
    }
    let mut s: Vec<Vec<Operator>> = (0..n_total)
        .map(|i| (0..n_total).map(|j| if i == j && !seen[i] { Operator::one() } else { Operator::zero() }).collect())
        .collect();
    let mut l = vec![Operator::zero(); n_total];
    for (a, &pa) in ports.iter().enumerate() {
        for (b, &pb) in ports.iter().enumerate() {
            s[pa][pb] = g.s[a][b].clone();
        }
        l[pa] = g.l[a].clone();
    }
    Ok(SlhTriple::on_space(g.space.clone(), s, l, g.h.clone()))
}

/// Scalar-valued coupling vector helper.
pub fn scalars(values: &[C64]) -> Vec<Operator> {
    values.iter().map(|&v| Operator::scalar(v)).collect()
}
