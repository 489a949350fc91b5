//! Regular LDPC codes represented by their Tanner graphs.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};

/// Maximum number of full configuration-model pairings tried before giving up.
pub const MAX_SAMPLING_ATTEMPTS: usize = 1000;

/// Default cap on the number of subsets enumerated by [`TannerGraph::expansion_audit`].
pub const DEFAULT_AUDIT_BUDGET: u128 = 5_000_000;

/// A binary word of length `n`, one entry per variable node.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return param(format!("bit {pos} has value {} (expected 0 or 1)", bits[pos]));
        }
        Ok(Self(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Bitwise XOR; the lengths must agree.
    pub fn xor(&self, other: &Assignment) -> Result<Assignment> {
        if self.len() != other.len() {
            return param(format!("length mismatch: {} vs {}", self.len(), other.len()));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    pub fn hamming_distance(&self, other: &Assignment) -> Result<usize> {
        Ok(self.xor(other)?.weight())
    }

    pub fn complement(&self) -> Assignment {
        Self(self.0.iter().map(|b| b ^ 1).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses a string of `0`/`1` characters; whitespace is ignored.
impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().filter(|c| !c.is_whitespace()).enumerate() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => return param(format!("character {i} is {other:?}, expected 0 or 1")),
            }
        }
        Ok(Self(bits))
    }
}

/// Sparse bipartite graph of `n` variables and `m` checks, every variable of
/// degree `l` and every check of degree `k`.
///
/// Adjacency lists are kept sorted, so two graphs with the same edge set
/// compare equal. The graph is immutable once built.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    l: usize,
    k: usize,
    var_to_checks: Vec<Vec<usize>>,
    check_to_vars: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Builds a graph from the variable lists of each check and validates
    /// every regularity and simplicity invariant.
    pub fn from_checks(n: usize, l: usize, k: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let m = checks.len();
        if n * l != m * k {
            return param(format!("n*l = {} but m*k = {}", n * l, m * k));
        }
        let mut var_to_checks = vec![Vec::with_capacity(l); n];
        let mut check_to_vars = Vec::with_capacity(m);
        for (c, mut vars) in checks.into_iter().enumerate() {
            if vars.len() != k {
                return param(format!("check {c} has {} variables, expected {k}", vars.len()));
            }
            vars.sort_unstable();
            if vars.windows(2).any(|w| w[0] == w[1]) {
                return param(format!("check {c} lists a variable twice"));
            }
            for &v in &vars {
                if v >= n {
                    return param(format!("check {c} references variable {v} >= n = {n}"));
                }
                var_to_checks[v].push(c);
            }
            check_to_vars.push(vars);
        }
        for (v, checks) in var_to_checks.iter().enumerate() {
            if checks.len() != l {
                return param(format!("variable {v} is in {} checks, expected {l}", checks.len()));
            }
        }
        Ok(Self { n, m, l, k, var_to_checks, check_to_vars })
    }

    /// Samples a random simple `(l, k)`-biregular graph on `n` variables.
    ///
    /// Variable sockets are paired with check sockets by a uniform random
    /// permutation. Repeated `(variable, check)` pairs are then removed by
    /// random double-edge swaps, which keep every degree fixed. If the repair
    /// stalls, the whole pairing is redrawn, up to [`MAX_SAMPLING_ATTEMPTS`]
    /// times.
    pub fn sample_regular(n: usize, l: usize, k: usize, seed: u64) -> Result<Self> {
        if l == 0 || k == 0 {
            return param("degrees l and k must be at least 1");
        }
        if n < k {
            return param(format!("n = {n} is smaller than the check degree k = {k}"));
        }
        if !(n * l).is_multiple_of(k) {
            return param(format!("n*l = {} is not divisible by k = {k}", n * l));
        }
        let m = n * l / k;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let check_sockets: Vec<usize> = (0..m).flat_map(|c| std::iter::repeat_n(c, k)).collect();
        let mut var_sockets: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, l)).collect();

        for _ in 0..MAX_SAMPLING_ATTEMPTS {
            var_sockets.shuffle(&mut rng);
            let mut edges: Vec<(usize, usize)> =
                var_sockets.iter().copied().zip(check_sockets.iter().copied()).collect();
            if repair_multi_edges(&mut edges, &mut rng) {
                let mut checks = vec![Vec::with_capacity(k); m];
                for (v, c) in edges {
                    checks[c].push(v);
                }
                return Self::from_checks(n, l, k, checks);
            }
        }
        Err(Error::Construction(format!(
            "no simple ({l},{k})-regular graph on n = {n} found after {MAX_SAMPLING_ATTEMPTS} attempts"
        )))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn checks_of(&self, v: usize) -> &[usize] {
        &self.var_to_checks[v]
    }

    pub fn vars_of(&self, c: usize) -> &[usize] {
        &self.check_to_vars[c]
    }

    pub fn var_to_checks(&self) -> &[Vec<usize>] {
        &self.var_to_checks
    }

    pub fn check_to_vars(&self) -> &[Vec<usize>] {
        &self.check_to_vars
    }

    /// Parity of every check under `a`. All zero iff `a` is a codeword.
    pub fn syndrome(&self, a: &Assignment) -> Result<Vec<u8>> {
        self.expect_len(a)?;
        Ok(self
            .check_to_vars
            .iter()
            .map(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ a.get(v)))
            .collect())
    }

    pub fn is_codeword(&self, a: &Assignment) -> Result<bool> {
        Ok(self.syndrome(a)?.iter().all(|&s| s == 0))
    }

    pub(crate) fn expect_len(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.n {
            return param(format!("assignment has length {}, graph has n = {}", a.len(), self.n));
        }
        Ok(())
    }

    /// Exhaustive vertex-expansion audit over all variable subsets of size
    /// `1..=max_subset_size`. Refuses (rather than samples) when the number
    /// of subsets exceeds `budget`.
    pub fn expansion_audit(&self, max_subset_size: usize, budget: u128) -> Result<ExpansionReport> {
        if max_subset_size == 0 || max_subset_size > self.n {
            return param(format!("subset size must be in 1..={}", self.n));
        }
        let subsets: u128 = (1..=max_subset_size).map(|s| binomial(self.n, s)).sum();
        if subsets > budget {
            return Err(Error::BudgetExceeded { subsets, budget });
        }

        let mut rows = Vec::with_capacity(max_subset_size);
        let mut hits = vec![0u32; self.m];
        for size in 1..=max_subset_size {
            let mut best: Option<(usize, Vec<usize>)> = None;
            let mut subset: Vec<usize> = (0..size).collect();
            loop {
                let mut neighbours = 0;
                for &v in &subset {
                    for &c in &self.var_to_checks[v] {
                        if hits[c] == 0 {
                            neighbours += 1;
                        }
                        hits[c] += 1;
                    }
                }
                for &v in &subset {
                    for &c in &self.var_to_checks[v] {
                        hits[c] = 0;
                    }
                }
                if best.as_ref().is_none_or(|(b, _)| neighbours < *b) {
                    best = Some((neighbours, subset.clone()));
                }
                if !next_combination(&mut subset, self.n) {
                    break;
                }
            }
            let (min_neighbours, witness) = best.expect("at least one subset per size");
            rows.push(ExpansionRow { size, min_neighbours, witness });
        }
        Ok(ExpansionReport { rows })
    }

    /// Reads the text format: a header `n m l k` followed by `m` lines, each
    /// listing the `k` variable indices of one check.
    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        let file = fs::File::open(path)?;
        let mut lines = BufReader::new(file)
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

        let (lineno, header) = lines.next().ok_or(Error::Format { line: 1, msg: "empty file".into() })?;
        let header = parse_usizes(&header?, lineno + 1)?;
        let [n, m, l, k] = header[..] else {
            return Err(Error::Format { line: lineno + 1, msg: "header must be `n m l k`".into() });
        };
        let mut checks = Vec::with_capacity(m);
        for (lineno, line) in lines {
            checks.push(parse_usizes(&line?, lineno + 1)?);
        }
        if checks.len() != m {
            return Err(Error::Format {
                line: 0,
                msg: format!("header declares m = {m} checks, found {}", checks.len()),
            });
        }
        Self::from_checks(n, l, k, checks)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{} {} {} {}", self.n, self.m, self.l, self.k)?;
        for vars in &self.check_to_vars {
            let line: Vec<String> = vars.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        out.flush()?;
        Ok(())
    }
}

fn parse_usizes(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|e| Error::Format { line: lineno, msg: format!("{tok:?}: {e}") })
        })
        .collect()
}

/// Removes repeated edges by double-edge swaps. Returns false if the repair
/// did not converge within its step budget.
fn repair_multi_edges(edges: &mut [(usize, usize)], rng: &mut ChaCha8Rng) -> bool {
    let mut multiplicity: HashMap<(usize, usize), u32> = HashMap::with_capacity(edges.len());
    let mut duplicates = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let count = multiplicity.entry(*e).or_insert(0);
        *count += 1;
        if *count > 1 {
            duplicates.push(i);
        }
    }
    let count_of = |m: &HashMap<(usize, usize), u32>, e| m.get(&e).copied().unwrap_or(0);
    let max_tries = 1000 * (duplicates.len() + 1);
    let mut tries = 0;
    while let Some(&i) = duplicates.last() {
        tries += 1;
        if tries > max_tries {
            return false;
        }
        let j = rng.random_range(0..edges.len());
        let (vi, ci) = edges[i];
        let (vj, cj) = edges[j];
        if ci == cj
            || count_of(&multiplicity, (vj, cj)) != 1
            || count_of(&multiplicity, (vi, cj)) != 0
            || count_of(&multiplicity, (vj, ci)) != 0
        {
            continue;
        }
        *multiplicity.get_mut(&(vi, ci)).expect("edge i present") -= 1;
        multiplicity.remove(&(vj, cj));
        multiplicity.insert((vi, cj), 1);
        multiplicity.insert((vj, ci), 1);
        edges[i] = (vi, cj);
        edges[j] = (vj, ci);
        duplicates.pop();
    }
    true
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let s = subset.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if subset[i] < n - s + i {
            subset[i] += 1;
            for j in i + 1..s {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, s: usize) -> u128 {
    let s = s.min(n - s);
    (0..s).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Minimum neighbourhood size over all subsets of each size.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub rows: Vec<ExpansionRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionRow {
    pub size: usize,
    pub min_neighbours: usize,
    /// A subset attaining the minimum.
    pub witness: Vec<usize>,
}

impl ExpansionRow {
    pub fn ratio(&self) -> f64 {
        self.min_neighbours as f64 / self.size as f64
    }
}

impl ExpansionReport {
    /// Smallest `|N(V)| / |V|` over every audited subset size.
    pub fn min_ratio(&self) -> f64 {
        self.rows.iter().map(ExpansionRow::ratio).fold(f64::INFINITY, f64::min)
    }
}

/// Exact code rate `(k - l) / k` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeRate {
    pub numer: usize,
    pub denom: usize,
}

impl CodeRate {
    pub fn as_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

pub fn code_rate(l: usize, k: usize) -> Result<CodeRate> {
    if l == 0 || l >= k {
        return param(format!("rate (k - l)/k requires 1 <= l < k, got l = {l}, k = {k}"));
    }
    let g = gcd(k - l, k);
    Ok(CodeRate { numer: (k - l) / g, denom: k / g })
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A fixed `(8, 3, 4)` code whose first check is `{0, 2, 3, 5}`, used as a
/// small worked example throughout the tests and docs.
pub fn small_example_code() -> TannerGraph {
    let checks = vec![
        vec![0, 2, 3, 5],
        vec![1, 4, 6, 7],
        vec![0, 1, 3, 6],
        vec![2, 4, 5, 7],
        vec![0, 1, 5, 7],
        vec![2, 3, 4, 6],
    ];
    TannerGraph::from_checks(8, 3, 4, checks).expect("example code is valid")
}
