//! Edge distribution checks driven by a spectral certificate: the expander
//! mixing inequality, small-set vertex expansion, and edges between large sets.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectral::NdlCertificate;

/// Relative slack before a mixing defect counts as a violation, absorbing
/// floating-point error in cases where the inequality is tight.
pub const MIXING_TOL: f64 = 1e-9;

/// Number of ordered pairs `(u, v)` with `u` in `s`, `v` in `t`, and `uv` an
/// edge. Edges inside `s ∩ t` are therefore counted twice, so
/// `edge_count(g, U, U) = 2 e(U)`.
pub fn edge_count(g: &Graph, s: VertexSet, t: VertexSet) -> Result<usize> {
    g.check_set(s)?;
    g.check_set(t)?;
    Ok(s.iter().map(|u| (g.neighbors(u) & t).len()).sum())
}

/// Edges spanned by `u`.
pub fn spanned_edges(g: &Graph, u: VertexSet) -> Result<usize> {
    Ok(edge_count(g, u, u)? / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixingDefect {
    pub edges: usize,
    /// `|e(S,T) - (d/n)|S||T||`.
    pub defect: f64,
    /// `lambda * sqrt(|S||T|)`.
    pub bound: f64,
}

impl MixingDefect {
    pub fn normalized(&self) -> f64 {
        if self.bound > 0.0 {
            self.defect / self.bound
        } else if self.defect == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn violates(&self) -> bool {
        self.defect > self.bound * (1.0 + MIXING_TOL) + MIXING_TOL
    }
}

pub fn mixing_defect(
    g: &Graph,
    cert: &NdlCertificate,
    s: VertexSet,
    t: VertexSet,
) -> Result<MixingDefect> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySet);
    }
    let edges = edge_count(g, s, t)?;
    let size = (s.len() * t.len()) as f64;
    let expected = cert.d as f64 / cert.n as f64 * size;
    Ok(MixingDefect {
        edges,
        defect: (edges as f64 - expected).abs(),
        bound: cert.lambda * size.sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    pub pairs_checked: usize,
    pub max_normalized_defect: f64,
    pub worst_pair: (VertexSet, VertexSet),
    pub violations: usize,
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    let size = rng.random_range(1..=n);
    index::sample(rng, n, size).into_iter().collect()
}

/// Checks every ordered pair of singletons, the pair `(V, V)`, the star pairs
/// `({v}, N(v))` and `(N(v), {v})`, and `sample_count` random pairs. Each
/// random set draws its size uniformly from `1..=n` and then its members
/// uniformly without replacement.
///
/// A star pair has defect `d (1 - d/n)` against the bound `lambda sqrt(d)`, so
/// the star checks alone refute any claimed `lambda < sqrt(d) (1 - d/n)`.
pub fn verify_mixing(
    g: &Graph,
    cert: &NdlCertificate,
    sample_count: usize,
    seed: u64,
) -> Result<MixingReport> {
    if sample_count == 0 {
        return Err(Error::InvalidParameters("sample_count must be at least 1".into()));
    }
    let n = g.n();
    let all = g.vertices();
    let mut report = MixingReport {
        pairs_checked: 0,
        max_normalized_defect: f64::NEG_INFINITY,
        worst_pair: (all, all),
        violations: 0,
    };
    let mut check = |s: VertexSet, t: VertexSet| -> Result<()> {
        let m = mixing_defect(g, cert, s, t)?;
        report.pairs_checked += 1;
        if m.violates() {
            report.violations += 1;
        }
        if m.normalized() > report.max_normalized_defect {
            report.max_normalized_defect = m.normalized();
            report.worst_pair = (s, t);
        }
        Ok(())
    };
    for u in 0..n {
        for v in 0..n {
            check(VertexSet::singleton(u), VertexSet::singleton(v))?;
        }
    }
    check(all, all)?;
    for v in 0..n {
        let star = g.neighbors(v);
        if !star.is_empty() {
            check(VertexSet::singleton(v), star)?;
            check(star, VertexSet::singleton(v))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let s = random_subset(&mut rng, n);
        let t = random_subset(&mut rng, n);
        check(s, t)?;
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionCheck {
    /// `|N(X)|`, the neighbors of `X` outside `X`.
    pub observed: usize,
    /// `(d - 2 lambda)^2 / (3 lambda^2) * |X|`.
    pub required: f64,
    pub applicable: bool,
    /// `observed >= required`, or vacuously true when not applicable.
    pub holds: bool,
}

/// Small-set expansion. The bound applies when `|X| <= lambda^2 n / d^2`
/// and `d > 2 lambda`; outside that range the formula carries no guarantee.
pub fn expansion_check(g: &Graph, cert: &NdlCertificate, x: VertexSet) -> Result<ExpansionCheck> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    g.check_set(x)?;
    let (n, d, lambda) = (cert.n as f64, cert.d as f64, cert.lambda);
    let neighborhood: VertexSet = x.iter().fold(VertexSet::EMPTY, |acc, v| acc | g.neighbors(v)) - x;
    let observed = neighborhood.len();
    let required = (d - 2.0 * lambda).powi(2) / (3.0 * lambda * lambda) * x.len() as f64;
    let applicable = d > 2.0 * lambda && x.len() as f64 <= lambda * lambda * n / (d * d);
    Ok(ExpansionCheck { observed, required, applicable, holds: !applicable || observed as f64 >= required })
}

/// For disjoint `X`, `Y` both larger than `lambda n / d`, whether some edge
/// joins them. The mixing inequality forces the answer to be `true`.
pub fn large_sets_edge(g: &Graph, cert: &NdlCertificate, x: VertexSet, y: VertexSet) -> Result<bool> {
    if !x.is_disjoint(y) {
        return Err(Error::SetsNotDisjoint);
    }
    let threshold = cert.lambda * cert.n as f64 / cert.d as f64;
    if x.len() as f64 <= threshold || y.len() as f64 <= threshold {
        return Err(Error::SetsTooSmall { x: x.len(), y: y.len(), threshold });
    }
    Ok(edge_count(g, x, y)? > 0)
}
