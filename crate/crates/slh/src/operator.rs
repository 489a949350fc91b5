use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::{Result, SlhError, C64};

/// One tensor factor of the system Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subsystem {
    pub id: usize,
    pub dim: usize,
}

impl Subsystem {
    pub fn qubit(id: usize) -> Self {
        Self { id, dim: 2 }
    }
}

/// Dense operator on a tensor product of subsystems, kept sorted by id.
/// The lowest id is the most significant factor of the basis index.
///
/// Binary arithmetic embeds both sides into the union of their subsystems
/// (tensoring with identities) before combining them.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    subsystems: Vec<Subsystem>,
    matrix: DMatrix<C64>,
}

pub fn space_dim(space: &[Subsystem]) -> usize {
    space.iter().map(|s| s.dim).product()
}

/// Union of two sorted subsystem lists. Panics if an id appears with two
/// different dimensions.
pub fn union(a: &[Subsystem], b: &[Subsystem]) -> Vec<Subsystem> {
    let mut out: Vec<Subsystem> = a.iter().chain(b).copied().collect();
    out.sort();
    out.dedup();
    for w in out.windows(2) {
        assert!(w[0].id != w[1].id, "subsystem {} declared with dimensions {} and {}", w[0].id, w[0].dim, w[1].dim);
    }
    out
}

impl Operator {
    pub fn from_matrix(mut subsystems: Vec<Subsystem>, matrix: DMatrix<C64>) -> Result<Self> {
        subsystems.sort();
        if subsystems.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(SlhError::Dimension("repeated subsystem id".into()));
        }
        let dim = space_dim(&subsystems);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(SlhError::Dimension(format!(
                "matrix is {}x{}, subsystems span dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { subsystems, matrix })
    }

    pub fn scalar(c: C64) -> Self {
        Self { subsystems: Vec::new(), matrix: DMatrix::from_element(1, 1, c) }
    }

    pub fn real(x: f64) -> Self {
        Self::scalar(C64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn identity_on(space: &[Subsystem]) -> Self {
        let d = space_dim(space);
        Self { subsystems: space.to_vec(), matrix: DMatrix::identity(d, d) }
    }

    /// `|to><from|` on qubit `id`.
    pub fn transition(id: usize, from: usize, to: usize) -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(to, from)] = C64::new(1.0, 0.0);
        Self { subsystems: vec![Subsystem::qubit(id)], matrix: m }
    }

    /// `|b><b|` on qubit `id`.
    pub fn projector(id: usize, b: usize) -> Self {
        Self::transition(id, b, b)
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Embeds into a larger space by tensoring with identities.
    pub fn extend_to(&self, target: &[Subsystem]) -> Operator {
        if self.subsystems == target {
            return self.clone();
        }
        let positions: Vec<usize> = self
            .subsystems
            .iter()
            .map(|s| {
                target
                    .iter()
                    .position(|t| t == s)
                    .unwrap_or_else(|| panic!("subsystem {} missing from target space", s.id))
            })
            .collect();
        let total = space_dim(target);
        let mut own = vec![0usize; total];
        let mut rest = vec![0usize; total];
        for (idx, (own_i, rest_i)) in own.iter_mut().zip(rest.iter_mut()).enumerate() {
            let mut rem = idx;
            let mut digits = vec![0usize; target.len()];
            for (slot, t) in target.iter().enumerate().rev() {
                digits[slot] = rem % t.dim;
                rem /= t.dim;
            }
            for (slot, t) in target.iter().enumerate() {
                if let Some(p) = positions.iter().position(|&q| q == slot) {
                    *own_i = *own_i * self.subsystems[p].dim + digits[slot];
                } else {
                    *rest_i = *rest_i * t.dim + digits[slot];
                }
            }
        }
        let matrix = DMatrix::from_fn(total, total, |r, c| {
            if rest[r] == rest[c] {
                self.matrix[(own[r], own[c])]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Operator { subsystems: target.to_vec(), matrix }
    }

    fn unify(&self, other: &Operator) -> (Operator, Operator) {
        let space = union(&self.subsystems, &other.subsystems);
        (self.extend_to(&space), other.extend_to(&space))
    }

    pub fn adjoint(&self) -> Operator {
        Operator { subsystems: self.subsystems.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, c: C64) -> Operator {
        Operator { subsystems: self.subsystems.clone(), matrix: &self.matrix * c }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Anti-Hermitian part divided by `i`: `(X - X^dag) / 2i`.
    pub fn im(&self) -> Operator {
        let diff = &self.matrix - self.matrix.adjoint();
        Operator { subsystems: self.subsystems.clone(), matrix: diff * C64::new(0.0, -0.5) }
    }

    /// Inverse, refusing matrices whose smallest singular value is below `tol`.
    pub fn inverse(&self, tol: f64) -> Option<Operator> {
        let sv = self.matrix.clone().svd(false, false).singular_values;
        if sv.iter().copied().fold(f64::INFINITY, f64::min) < tol {
            return None;
        }
        let inv = self.matrix.clone().try_inverse()?;
        Some(Operator { subsystems: self.subsystems.clone(), matrix: inv })
    }

    /// Largest entry-wise modulus of `self - other` after embedding both.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let (a, b) = self.unify(other);
        (a.matrix - b.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn apply(&self, psi: &DVector<C64>) -> DVector<C64> {
        &self.matrix * psi
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self * other - other * self
    }

    pub fn anticommutator(&self, other: &Operator) -> Operator {
        self * other + other * self
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.subsystems.iter().map(|s| s.id.to_string()).collect();
        writeln!(f, "on [{}]:", ids.join(","))?;
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.matrix[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                let (a, b) = self.unify(rhs);
                Operator { subsystems: a.subsystems, matrix: a.matrix $op b.matrix }
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                &self $op &rhs
            }
        }
        impl $trait<&Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                &self $op rhs
            }
        }
        impl $trait<Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { subsystems: self.subsystems.clone(), matrix: -&self.matrix }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

/// Computational basis vector with the given bit on each subsystem, listed
/// in the order of `space`.
pub fn basis_state(space: &[Subsystem], levels: &[usize]) -> DVector<C64> {
    assert_eq!(space.len(), levels.len(), "one level per subsystem");
    let mut v = DVector::zeros(space_dim(space));
    v[basis_index(space, levels)] = C64::new(1.0, 0.0);
    v
}

pub fn basis_index(space: &[Subsystem], levels: &[usize]) -> usize {
    space.iter().zip(levels).fold(0, |acc, (s, &lv)| {
        assert!(lv < s.dim, "level {lv} out of range for subsystem {}", s.id);
        acc * s.dim + lv
    })
}

pub fn basis_levels(space: &[Subsystem], mut index: usize) -> Vec<usize> {
    let mut levels = vec![0; space.len()];
    for (slot, s) in space.iter().enumerate().rev() {
        levels[slot] = index % s.dim;
        index /= s.dim;
    }
    levels
}
