//! Corrupting a transmitted word: fixed-weight errors and the binary
//! symmetric channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::Assignment;
use crate::error::{param, Result};

/// Set of flipped variable positions, sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ErrorPattern {
    flipped: Vec<usize>,
}

impl ErrorPattern {
    pub fn new(mut flipped: Vec<usize>, n: usize) -> Result<Self> {
        flipped.sort_unstable();
        if flipped.windows(2).any(|w| w[0] == w[1]) {
            return param("error pattern lists an index twice");
        }
        if flipped.last().is_some_and(|&i| i >= n) {
            return param(format!("error index out of range for n = {n}"));
        }
        Ok(Self { flipped })
    }

    pub fn flipped_indices(&self) -> &[usize] {
        &self.flipped
    }

    pub fn weight(&self) -> usize {
        self.flipped.len()
    }

    /// XORs the pattern into `word`. Applying the same pattern twice is the
    /// identity.
    pub fn apply(&self, word: &Assignment) -> Result<Assignment> {
        if self.flipped.last().is_some_and(|&i| i >= word.len()) {
            return param(format!("error index out of range for n = {}", word.len()));
        }
        let mut out = word.clone();
        for &i in &self.flipped {
            out.flip(i);
        }
        Ok(out)
    }
}

/// Flips exactly `t` distinct positions chosen uniformly at random.
pub fn corrupt_fixed_count(
    codeword: &Assignment,
    t: usize,
    seed: u64,
) -> Result<(Assignment, ErrorPattern)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    corrupt_fixed_count_with(codeword, t, &mut rng)
}

pub fn corrupt_fixed_count_with<R: Rng + ?Sized>(
    codeword: &Assignment,
    t: usize,
    rng: &mut R,
) -> Result<(Assignment, ErrorPattern)> {
    let n = codeword.len();
    if t > n {
        return param(format!("cannot flip {t} bits of a length-{n} word"));
    }
    let picked = rand::seq::index::sample(rng, n, t).into_vec();
    let pattern = ErrorPattern::new(picked, n)?;
    Ok((pattern.apply(codeword)?, pattern))
}

/// Binary symmetric channel: every bit flips independently with probability `p`.
pub fn corrupt_iid(codeword: &Assignment, p: f64, seed: u64) -> Result<(Assignment, ErrorPattern)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    corrupt_iid_with(codeword, p, &mut rng)
}

pub fn corrupt_iid_with<R: Rng + ?Sized>(
    codeword: &Assignment,
    p: f64,
    rng: &mut R,
) -> Result<(Assignment, ErrorPattern)> {
    if !(0.0..=1.0).contains(&p) {
        return param(format!("flip probability {p} outside [0, 1]"));
    }
    let flipped: Vec<usize> = (0..codeword.len()).filter(|_| rng.random_bool(p)).collect();
    let pattern = ErrorPattern::new(flipped, codeword.len())?;
    Ok((pattern.apply(codeword)?, pattern))
}
