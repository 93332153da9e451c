//! 2-factors, Hamilton cycles, perfect matchings, and `phi(G, k)`.
//!
//! A 2-factor here is a partition of the vertices into components that are
//! either a single edge or a cycle of length at least 3. Read as a cycle
//! cover of the adjacency matrix, a single edge is a transposition and each
//! longer cycle comes in two orientations, so
//! `per(A) = sum_F 2^c(F)` with `c(F)` the number of long cycles.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::caps::{
    check_cap, ENUMERATION_CAP, HAMILTON_CAP, MATCHING_CAP, NEAR_HAMILTON_CAP, PHI_CAP,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Components in canonical form: a cycle starts at its smallest vertex and
/// continues towards the smaller of that vertex's two cycle-neighbours;
/// components are ordered by first vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoFactor {
    components: Vec<Vec<usize>>,
}

fn canonical_component(mut c: Vec<usize>) -> Vec<usize> {
    if c.len() < 3 {
        c.sort();
        return c;
    }
    let start = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
    c.rotate_left(start);
    if c[1] > c[c.len() - 1] {
        c[1..].reverse();
    }
    c
}

impl TwoFactor {
    /// Validates `components` as a 2-factor of `g` and canonicalizes it.
    pub fn new(g: &Graph, components: Vec<Vec<usize>>) -> Result<TwoFactor> {
        let bad = |msg: String| Err(Error::InvalidTwoFactor(msg));
        let mut seen = VertexSet::EMPTY;
        for c in &components {
            if c.len() < 2 {
                return bad(format!("component {c:?} has fewer than 2 vertices"));
            }
            for &v in c {
                if v >= g.n() {
                    return bad(format!("vertex {v} out of range"));
                }
                if seen.contains(v) {
                    return bad(format!("vertex {v} appears twice"));
                }
                seen.insert(v);
            }
            let closing = if c.len() >= 3 { Some((c[c.len() - 1], c[0])) } else { None };
            for (u, v) in c.windows(2).map(|w| (w[0], w[1])).chain(closing) {
                if !g.has_edge(u, v) {
                    return bad(format!("{u} {v} is not an edge"));
                }
            }
        }
        if seen != g.vertices() {
            return bad("components do not cover every vertex".into());
        }
        Ok(Self::from_canonical_parts(components))
    }

    fn from_canonical_parts(components: Vec<Vec<usize>>) -> TwoFactor {
        let mut components: Vec<_> = components.into_iter().map(canonical_component).collect();
        components.sort();
        TwoFactor { components }
    }

    /// A single-component factor, checked to be a Hamilton cycle of `g`.
    pub fn hamilton_cycle(g: &Graph, cycle: Vec<usize>) -> Result<TwoFactor> {
        if cycle.len() != g.n() || g.n() < 3 {
            return Err(Error::NotAHamiltonCycle(format!(
                "{} vertices in a graph on {}",
                cycle.len(),
                g.n()
            )));
        }
        Self::new(g, vec![cycle]).map_err(|e| match e {
            Error::InvalidTwoFactor(m) => Error::NotAHamiltonCycle(m),
            e => e,
        })
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// `s`: components of any length.
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// `c(F)`: components of length at least 3.
    pub fn cycle_count(&self) -> usize {
        self.components.iter().filter(|c| c.len() >= 3).count()
    }

    /// Edge set with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.components.iter().flat_map(|c| component_edges(c)).collect();
        e.sort();
        e
    }
}

pub(crate) fn component_edges(c: &[usize]) -> Vec<(usize, usize)> {
    let ordered = |u: usize, v: usize| (u.min(v), u.max(v));
    let mut e: Vec<_> = c.windows(2).map(|w| ordered(w[0], w[1])).collect();
    if c.len() >= 3 {
        e.push(ordered(c[c.len() - 1], c[0]));
    }
    e
}

/// Depth-first cover of the vertex set: take the smallest uncovered vertex,
/// grow a path from it through uncovered vertices, and close the path as an
/// edge component (two vertices) or a canonical cycle. Components are
/// emitted before longer extensions are tried, which yields factors in
/// lexicographic order of their canonical encoding.
struct Search<'a, F> {
    g: &'a Graph,
    /// Reference cycle adjacency and the number of its edges that may be
    /// missing from an emitted factor.
    near: Option<(&'a [VertexSet], usize)>,
    stack: Vec<Vec<usize>>,
    visit: F,
}

impl<F: FnMut(&[Vec<usize>])> Search<'_, F> {
    fn cover(&mut self, remaining: VertexSet, deleted: usize) {
        let Some(v) = remaining.first() else {
            (self.visit)(&self.stack);
            return;
        };
        let rest = remaining - VertexSet::singleton(v);
        if (self.g.neighbors(v) & rest).is_empty() {
            return;
        }
        let mut path = vec![v];
        self.grow(&mut path, rest, deleted);
    }

    fn grow(&mut self, path: &mut Vec<usize>, rest: VertexSet, deleted: usize) {
        let first = path[0];
        let last = path[path.len() - 1];
        if path.len() == 2 || (path.len() >= 3 && path[1] < last && self.g.has_edge(last, first)) {
            self.close(path, rest, deleted);
        }
        for w in self.g.neighbors(last) & rest {
            path.push(w);
            self.grow(path, rest - VertexSet::singleton(w), deleted);
            path.pop();
        }
    }

    fn close(&mut self, comp: &[usize], rest: VertexSet, deleted: usize) {
        let deleted = deleted + self.newly_deleted(comp, rest);
        if self.near.is_some_and(|(_, k)| deleted > k) {
            return;
        }
        self.stack.push(comp.to_vec());
        self.cover(rest, deleted);
        self.stack.pop();
    }

    /// Reference edges that are now known to be absent from the factor:
    /// those from `comp` to earlier components, and those inside `comp` that
    /// it does not use.
    fn newly_deleted(&self, comp: &[usize], rest: VertexSet) -> usize {
        let Some((h, _)) = self.near else { return 0 };
        let inside: VertexSet = comp.iter().copied().collect();
        let earlier = self.g.vertices() - rest - inside;
        let own = component_edges(comp);
        comp.iter()
            .map(|&u| {
                let internal = (h[u] & inside)
                    .iter()
                    .filter(|&w| u < w && !own.contains(&(u, w)))
                    .count();
                (h[u] & earlier).len() + internal
            })
            .sum()
    }
}

/// Calls `visit` with the components of every 2-factor of `g`, each exactly
/// once, in lexicographic order of the canonical encoding.
pub fn visit_two_factors(g: &Graph, visit: impl FnMut(&[Vec<usize>])) -> Result<()> {
    check_cap("enumerate_two_factors", g.n(), ENUMERATION_CAP)?;
    let mut s = Search { g, near: None, stack: Vec::new(), visit };
    s.cover(g.vertices(), 0);
    Ok(())
}

pub fn enumerate_two_factors(g: &Graph) -> Result<Vec<TwoFactor>> {
    let mut out = Vec::new();
    visit_two_factors(g, |c| out.push(TwoFactor { components: c.to_vec() }))?;
    Ok(out)
}

/// `f(G, s)` for every `s` that occurs, with totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorHistogram {
    #[serde(serialize_with = "crate::decimal::serialize_map")]
    pub counts: BTreeMap<usize, BigUint>,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub total: BigUint,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub weighted_total: BigUint,
    /// `sum 2^c(F)` over the factors with `s` components.
    #[serde(skip)]
    pub weighted_counts: BTreeMap<usize, BigUint>,
}

pub fn factor_histogram(g: &Graph) -> Result<FactorHistogram> {
    let mut counts: BTreeMap<usize, (u128, u128)> = BTreeMap::new();
    visit_two_factors(g, |comps| {
        let c = comps.iter().filter(|c| c.len() >= 3).count();
        let e = counts.entry(comps.len()).or_default();
        e.0 += 1;
        e.1 += 1 << c;
    })?;
    let total = counts.values().map(|e| e.0).sum::<u128>().into();
    let weighted_total = counts.values().map(|e| e.1).sum::<u128>().into();
    Ok(FactorHistogram {
        counts: counts.iter().map(|(&s, e)| (s, e.0.into())).collect(),
        weighted_counts: counts.iter().map(|(&s, e)| (s, e.1.into())).collect(),
        total,
        weighted_total,
    })
}

/// `sum_F 2^c(F)`, which equals the permanent of the adjacency matrix.
pub fn weighted_cycle_cover_sum(g: &Graph) -> Result<BigUint> {
    Ok(factor_histogram(g)?.weighted_total)
}

/// Number of 2-factors of `g`, `f(G)`.
pub fn two_factor_count(g: &Graph) -> Result<BigUint> {
    let mut count = 0u128;
    visit_two_factors(g, |_| count += 1)?;
    Ok(count.into())
}

const PRIME_A: u64 = (1 << 61) - 1;
const PRIME_B: u64 = (1 << 61) - 31;

/// Hamilton paths that start at vertex 0 and end next to it, modulo `p`.
/// States are (visited set of vertices `1..n`, endpoint).
fn rooted_closable_paths_mod(g: &Graph, p: u64) -> u64 {
    let m = g.n() - 1;
    let shift = |s: VertexSet| (s.bits() >> 1) as usize;
    let adj: Vec<usize> = (1..g.n()).map(|v| shift(g.neighbors(v))).collect();
    let root = shift(g.neighbors(0));
    let mut dp = vec![0u64; (1usize << m) * m];
    for v in 0..m {
        if root >> v & 1 == 1 {
            dp[(1 << v) * m + v] = 1;
        }
    }
    for s in 1usize..1 << m {
        let mut ends = s;
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let x = dp[s * m + v];
            if x == 0 {
                continue;
            }
            let mut next = adj[v] & !s;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                let slot = &mut dp[(s | 1 << w) * m + w];
                *slot += x;
                if *slot >= p {
                    *slot -= p;
                }
            }
        }
    }
    let full = (1usize << m) - 1;
    (0..m).filter(|&v| root >> v & 1 == 1).fold(0, |acc, v| (acc + dp[full * m + v]) % p)
}

/// `h(G)` by a bitmask dynamic program over (visited set, endpoint) with the
/// root fixed at vertex 0. Counts are kept modulo a 61-bit prime, and a
/// second prime plus Chinese remaindering is used when the a-priori path
/// bound `deg(0) * (maxdeg - 1)^(n-2)` does not fit under the first.
pub fn hamilton_count_exact(g: &Graph) -> Result<BigUint> {
    let n = g.n();
    check_cap("hamilton_count", n, HAMILTON_CAP)?;
    if n < 3 {
        return Ok(BigUint::zero());
    }
    let bound = BigUint::from(g.degree(0))
        * BigUint::from(g.max_degree().saturating_sub(1)).pow(n as u32 - 2);
    let a = rooted_closable_paths_mod(g, PRIME_A);
    let paths = if bound < BigUint::from(PRIME_A) {
        BigUint::from(a)
    } else {
        let b = rooted_closable_paths_mod(g, PRIME_B);
        crt(a, PRIME_A, b, PRIME_B)
    };
    // each cycle is traversed in both directions from the root
    Ok(paths >> 1u32)
}

/// The unique `x < pa * pb` with `x = a mod pa` and `x = b mod pb`.
fn crt(a: u64, pa: u64, b: u64, pb: u64) -> BigUint {
    let pb_big = BigUint::from(pb);
    let inv = BigUint::from(pa).modpow(&BigUint::from(pb - 2), &pb_big);
    let diff = (BigUint::from(b) + &pb_big - BigUint::from(a % pb)) % &pb_big;
    let k = diff * inv % &pb_big;
    BigUint::from(a) + k * BigUint::from(pa)
}

/// `m(G)`: match the lowest uncovered vertex to each available neighbour,
/// memoized on the uncovered set.
pub fn perfect_matching_count(g: &Graph) -> Result<BigUint> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount { op: "perfect_matching_count", n });
    }
    check_cap("perfect_matching_count", n, MATCHING_CAP)?;
    fn go(g: &Graph, left: VertexSet, memo: &mut HashMap<u64, u128>) -> u128 {
        let Some(v) = left.first() else { return 1 };
        if let Some(&c) = memo.get(&left.bits()) {
            return c;
        }
        let rest = left - VertexSet::singleton(v);
        let c = (g.neighbors(v) & rest)
            .iter()
            .map(|w| go(g, rest - VertexSet::singleton(w), memo))
            .sum();
        memo.insert(left.bits(), c);
        c
    }
    Ok(go(g, g.vertices(), &mut HashMap::new()).into())
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order of the
/// sorted vertex lists.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(VertexSet)) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(idx.iter().copied().collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k < 2 || k > g.n() {
        return Err(Error::KOutOfRange { k, min: 2, max: g.n() });
    }
    Ok(())
}

/// `phi(G, k)` together with the first maximizing `k`-subset in
/// lexicographic order.
pub fn phi_with_witness(g: &Graph, k: usize) -> Result<(BigUint, VertexSet)> {
    check_cap("phi", g.n(), PHI_CAP)?;
    check_k(g, k)?;
    let mut best: Option<(BigUint, VertexSet)> = None;
    let mut failure = None;
    for_each_subset(g.n(), k, |set| {
        if failure.is_some() {
            return;
        }
        match two_factor_count(&g.induced(set).0) {
            Ok(f) => {
                if best.as_ref().is_none_or(|(b, _)| f > *b) {
                    best = Some((f, set));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(best.expect("k <= n gives at least one subset")),
    }
}

/// `phi(G, k) = max f(G[V0])` over `k`-subsets `V0`.
pub fn phi(g: &Graph, k: usize) -> Result<BigUint> {
    phi_with_witness(g, k).map(|(f, _)| f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearHamiltonCount {
    pub k: usize,
    /// 2-factors `F` with `|E(H) \ E(F)| <= k`: at most `k` edges of `H`
    /// deleted.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub count: BigUint,
    /// `binom(n, k) * maxdeg^(2k)`.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub bound: BigUint,
}

impl NearHamiltonCount {
    pub fn holds(&self) -> bool {
        self.count <= self.bound
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Counts the 2-factors obtained from the Hamilton cycle `h` by deleting at
/// most `k` of its edges and completing the remaining paths. The search
/// charges each edge of `h` as soon as both its endpoints lie in finished
/// components without it, and prunes past `k`.
pub fn two_factors_near_hamilton(g: &Graph, h: &TwoFactor, k: usize) -> Result<NearHamiltonCount> {
    check_cap("two_factors_near_hamilton", g.n(), NEAR_HAMILTON_CAP)?;
    if h.component_count() != 1 {
        return Err(Error::NotAHamiltonCycle(format!("{} components", h.component_count())));
    }
    let h = TwoFactor::hamilton_cycle(g, h.components[0].clone())?;
    if k > 3 {
        return Err(Error::KOutOfRange { k, min: 0, max: 3 });
    }
    let mut h_adj = vec![VertexSet::EMPTY; g.n()];
    for (u, v) in h.edges() {
        h_adj[u].insert(v);
        h_adj[v].insert(u);
    }
    let mut count = 0u64;
    let mut s = Search {
        g,
        near: Some((&h_adj, k)),
        stack: Vec::new(),
        visit: |_: &[Vec<usize>]| count += 1,
    };
    s.cover(g.vertices(), 0);
    let bound = binomial(g.n(), k) * BigUint::from(g.max_degree()).pow(2 * k as u32);
    Ok(NearHamiltonCount { k, count: count.into(), bound })
}
