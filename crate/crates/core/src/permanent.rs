//! Exact permanents of 0-1 matrices and log-domain permanent bounds.
//!
//! The exact routine is Ryser's inclusion-exclusion formula
//! `per(A) = (-1)^n * sum_S (-1)^|S| * prod_i sum_{j in S} a_ij`,
//! walked in Gray-code order so each step flips a single column and updates
//! every row sum in O(n). Terms are accumulated in `i128` and spill into an
//! arbitrary-precision integer only when they would overflow.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::caps::{check_cap, PERMANENT_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Square 0-1 matrix with rows stored as column bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroOneMatrix {
    n: usize,
    rows: Vec<u64>,
    row_sums: Vec<usize>,
}

impl ZeroOneMatrix {
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n > 64 {
            return Err(Error::InvalidParameters(format!("matrix dimension {n} exceeds 64")));
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::InvalidParameters(format!("row {i} has a column outside 0..{n}")));
        }
        let row_sums = rows.iter().map(|r| r.count_ones() as usize).collect();
        Ok(ZeroOneMatrix { n, rows, row_sums })
    }

    pub fn adjacency(g: &Graph) -> Self {
        Self::from_rows(g.adjacency().iter().map(|r| r.bits()).collect())
            .expect("graph adjacency rows are in range")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| 1u64 << i).collect()).expect("n <= 64")
    }

    pub fn all_ones(n: usize) -> Self {
        let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self::from_rows(vec![full; n]).expect("n <= 64")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn total_ones(&self) -> usize {
        self.row_sums.iter().sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Entry `(i, j)` of the result is entry `(row_perm[i], col_perm[j])` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let rows = row_perm
            .iter()
            .map(|&r| {
                col_perm
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| self.get(r, c))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Self::from_rows(rows).expect("permutation keeps dimensions")
    }
}

/// Below this dimension the Gray-code walk runs on one thread.
const PARALLEL_MIN_N: usize = 18;
const PARALLEL_CHUNKS: u64 = 64;

/// Exact permanent for `n <= 28`.
pub fn permanent_exact(m: &ZeroOneMatrix) -> Result<BigUint> {
    permanent_with(m, m.n >= PARALLEL_MIN_N)
}

pub(crate) fn permanent_with(m: &ZeroOneMatrix, parallel: bool) -> Result<BigUint> {
    check_cap("permanent", m.n, PERMANENT_CAP)?;
    if m.n == 0 {
        return Ok(BigUint::from(1u8));
    }
    if m.row_sums.contains(&0) {
        return Ok(BigUint::zero());
    }
    // Largest possible term is the product of the full row sums.
    let log2_max_term: f64 = m.row_sums.iter().map(|&r| (r as f64).log2()).sum();
    let narrow = log2_max_term < 125.0;
    let end = 1u64 << m.n;
    let total: BigInt = if parallel {
        let step = end.div_ceil(PARALLEL_CHUNKS);
        (0..PARALLEL_CHUNKS)
            .into_par_iter()
            .map(|c| ryser_range(m, (c * step).max(1), ((c + 1) * step).min(end), narrow))
            .reduce(BigInt::zero, |a, b| a + b)
    } else {
        ryser_range(m, 1, end, narrow)
    };
    let total = if m.n % 2 == 1 { -total } else { total };
    Ok(total.to_biguint().expect("permanent of a 0-1 matrix is nonnegative"))
}

/// `sum_{k in lo..hi} (-1)^|S_k| prod_i |row_i ∩ S_k|` where `S_k = k ^ (k >> 1)`.
fn ryser_range(m: &ZeroOneMatrix, lo: u64, hi: u64, narrow: bool) -> BigInt {
    if lo >= hi {
        return BigInt::zero();
    }
    let mut set = lo ^ (lo >> 1);
    let mut sums: Vec<i64> = m.rows.iter().map(|r| (r & set).count_ones() as i64).collect();
    let mut acc = Accumulator::default();

    let add_term = |set: u64, sums: &[i64], acc: &mut Accumulator| {
        let negative = set.count_ones() % 2 == 1;
        if narrow {
            let mut p: i128 = 1;
            for &s in sums {
                if s == 0 {
                    return;
                }
                p *= s as i128;
            }
            acc.add(if negative { -p } else { p });
        } else {
            if sums.contains(&0) {
                return;
            }
            let p: BigInt = sums.iter().map(|&s| BigInt::from(s)).product();
            acc.add_big(if negative { -p } else { p });
        }
    };

    add_term(set, &sums, &mut acc);
    for k in lo + 1..hi {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        let delta = if set & bit == 0 { 1 } else { -1 };
        set ^= bit;
        for (s, &row) in sums.iter_mut().zip(&m.rows) {
            if row & bit != 0 {
                *s += delta;
            }
        }
        add_term(set, &sums, &mut acc);
    }
    acc.finish()
}

/// `i128` running sum that spills into a big integer on overflow.
#[derive(Default)]
struct Accumulator {
    small: i128,
    big: BigInt,
}

impl Accumulator {
    fn add(&mut self, x: i128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += BigInt::from(self.small);
                self.small = x;
            }
        }
    }

    fn add_big(&mut self, x: BigInt) {
        self.big += x;
    }

    fn finish(self) -> BigInt {
        self.big + BigInt::from(self.small)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    Bregman,
    Vdw,
    RegularUpper,
    AlonFriedland,
}

/// A bound stored as its natural logarithm. A value of `-inf` stands for an
/// exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogBound {
    pub value: f64,
    pub kind: BoundKind,
    pub source: BoundSource,
}

impl LogBound {
    pub fn exp(&self) -> f64 {
        self.value.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.value == f64::NEG_INFINITY
    }

    /// Signed log-domain margin by which `x` satisfies the bound; negative
    /// means the bound is violated.
    pub fn slack(&self, x: &BigUint) -> f64 {
        let lx = ln_big(x);
        let s = match self.kind {
            BoundKind::Upper => self.value - lx,
            BoundKind::Lower => lx - self.value,
        };
        // -inf minus -inf: an exact zero against a zero bound
        if s.is_nan() {
            0.0
        } else {
            s
        }
    }

    pub fn admits(&self, x: &BigUint, tol: f64) -> bool {
        self.slack(x) >= -tol
    }
}

/// Natural log of a nonnegative big integer, `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match x.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits - 64;
            ((x >> shift).to_f64().unwrap()).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Bregman's bound `per(A) <= prod_i (r_i!)^(1/r_i)` from the row sums.
/// A zero row gives the exact bound `per(A) = 0`.
pub fn bregman_bound(row_sums: &[usize]) -> LogBound {
    let value = if row_sums.contains(&0) {
        f64::NEG_INFINITY
    } else {
        row_sums.iter().map(|&r| ln_factorial(r as u64) / r as f64).sum()
    };
    LogBound { value, kind: BoundKind::Upper, source: BoundSource::Bregman }
}

/// `n` integers summing to `total`, as equal as possible: the first
/// `total mod n` get the ceiling.
pub fn equal_split(n: usize, total: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let (q, r) = (total / n, total % n);
    (0..n).map(|i| if i < r { q + 1 } else { q }).collect()
}

/// Bregman's bound for any `n x n` 0-1 matrix with `total` ones.
pub fn bregman_bound_for_total(n: usize, total: usize) -> LogBound {
    bregman_bound(&equal_split(n, total))
}

fn check_degree(n: usize, d: usize) -> Result<()> {
    if d == 0 || d > n {
        return Err(Error::InvalidParameters(format!("need 1 <= d <= n, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// `per(A) >= n! (d/n)^n` for the adjacency matrix of any `d`-regular graph,
/// from the doubly stochastic matrix `A / d`.
pub fn vdw_lower(n: usize, d: usize) -> Result<LogBound> {
    check_degree(n, d)?;
    let value = ln_factorial(n as u64) + n as f64 * (d as f64 / n as f64).ln();
    Ok(LogBound { value, kind: BoundKind::Lower, source: BoundSource::Vdw })
}

/// The weaker Stirling form `(d/e)^n` of [`vdw_lower`].
pub fn vdw_lower_weak(n: usize, d: usize) -> Result<LogBound> {
    check_degree(n, d)?;
    let value = n as f64 * ((d as f64).ln() - 1.0);
    Ok(LogBound { value, kind: BoundKind::Lower, source: BoundSource::Vdw })
}

/// `(d!)^(n/d)`, which bounds the permanent, the 2-factor count, and the
/// Hamilton-cycle count of every `d`-regular graph on `n` vertices.
pub fn regular_upper(n: usize, d: usize) -> Result<LogBound> {
    if d == 0 {
        return Err(Error::InvalidParameters("need d >= 1".into()));
    }
    let value = n as f64 / d as f64 * ln_factorial(d as u64);
    Ok(LogBound { value, kind: BoundKind::Upper, source: BoundSource::RegularUpper })
}

/// `(d!)^(n/(2d))`, the perfect-matching bound for `d`-regular graphs.
pub fn alon_friedland_upper(n: usize, d: usize) -> Result<LogBound> {
    if n % 2 == 1 {
        return Err(Error::OddVertexCount { op: "alon_friedland_upper", n });
    }
    if d == 0 {
        return Err(Error::InvalidParameters("need d >= 1".into()));
    }
    let value = n as f64 / (2 * d) as f64 * ln_factorial(d as u64);
    Ok(LogBound { value, kind: BoundKind::Upper, source: BoundSource::AlonFriedland })
}
