//! Turning a 2-factor into a Hamilton cycle by cycle merging and Pósa
//! rotations, with every edge deletion and insertion recorded.
//!
//! The engine opens one component into a path, then repeatedly absorbs a
//! neighbouring component through a connecting edge. When neither endpoint
//! of the path has a neighbour outside it, a breadth-first search over
//! rotated paths looks for one that can be extended or closed. Each merge is
//! charged against a budget of `ceil(C ln n / ln(d / lambda))` replacements.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::TwoFactor;
use crate::graph::{Graph, VertexSet};
use crate::spectral::NdlCertificate;

pub const DEFAULT_BUDGET_CONSTANT: f64 = 10.0;
/// Paths kept by one rotation search before it gives up.
pub const POSA_STATE_CAP: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditOp {
    Delete,
    Insert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEdit {
    pub op: EditOp,
    pub u: usize,
    pub v: usize,
}

impl EdgeEdit {
    pub fn delete(u: usize, v: usize) -> Self {
        EdgeEdit { op: EditOp::Delete, u, v }
    }

    pub fn insert(u: usize, v: usize) -> Self {
        EdgeEdit { op: EditOp::Insert, u, v }
    }

    fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationTrace {
    pub success: bool,
    /// Canonical Hamilton cycle on success, empty otherwise.
    pub hamilton_cycle: Vec<usize>,
    pub replacements: usize,
    /// Replacements spent on each component merge, then on the final closure.
    pub per_merge_replacements: Vec<usize>,
    pub budget: usize,
    pub trace: Vec<EdgeEdit>,
}

/// Per-merge replacement budget: `ceil(c ln n / ln(d / lambda))`, at least 1,
/// or `n` when `d / lambda <= 1`.
pub fn merge_budget(n: usize, eigenvalue_ratio: f64, budget_constant: f64) -> usize {
    if eigenvalue_ratio > 1.0 {
        ((budget_constant * (n as f64).ln() / eigenvalue_ratio.ln()).ceil() as usize).max(1)
    } else {
        n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosaResult {
    /// The path, whose endpoints are adjacent; the closing edge is not in the trace.
    Closed(Vec<usize>),
    /// The path, with an endpoint adjacent to a vertex outside it and outside `forbidden`.
    Extendable(Vec<usize>),
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosaOutcome {
    pub result: PosaResult,
    /// One delete and one insert per rotation; empty on failure.
    pub trace: Vec<EdgeEdit>,
    pub rotations: usize,
    pub states_explored: usize,
}

fn check_path(g: &Graph, path: &[usize]) -> Result<VertexSet> {
    let mut seen = VertexSet::EMPTY;
    for &v in path {
        if v >= g.n() || seen.contains(v) {
            return Err(Error::InvalidPath(format!("vertex {v} repeated or out of range")));
        }
        seen.insert(v);
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::InvalidPath(format!("{} {} is not an edge", w[0], w[1])));
    }
    if path.is_empty() {
        return Err(Error::InvalidPath("empty path".into()));
    }
    Ok(seen)
}

/// Rotates `path` until an endpoint can be extended past `V(path) ∪ forbidden`
/// or the endpoints are adjacent (length at least 3), using at most `budget`
/// rotations. Extension is preferred when both apply.
pub fn posa_close(g: &Graph, path: &[usize], forbidden: VertexSet, budget: usize) -> Result<PosaOutcome> {
    check_path(g, path)?;
    g.check_set(forbidden)?;
    if budget == 0 {
        return Err(Error::InvalidParameters("rotation budget must be at least 1".into()));
    }
    Ok(posa_search(g, path, forbidden, budget))
}

struct Node {
    path: Vec<u8>,
    parent: usize,
    edits: [EdgeEdit; 2],
    depth: usize,
}

/// Breadth-first search over paths reachable by rotations, so the first
/// accepting path uses the fewest rotations. Paths are deduplicated up to
/// reversal; rotations at the last endpoint are expanded before those at the
/// first, each in increasing order of the pivot vertex.
fn posa_search(g: &Graph, path: &[usize], forbidden: VertexSet, max_rotations: usize) -> PosaOutcome {
    let on_path: VertexSet = path.iter().copied().collect();
    let blocked = on_path | forbidden;
    let accept = |p: &[u8]| {
        let (a, b) = (p[0] as usize, p[p.len() - 1] as usize);
        let outward = |x: usize| !(g.neighbors(x) - blocked).is_empty();
        if outward(a) || outward(b) {
            Some(false)
        } else if p.len() >= 3 && g.has_edge(a, b) {
            Some(true)
        } else {
            None
        }
    };
    let canonical = |p: &[u8]| -> Vec<u8> {
        if p[0] <= p[p.len() - 1] {
            p.to_vec()
        } else {
            p.iter().rev().copied().collect()
        }
    };
    let start: Vec<u8> = path.iter().map(|&v| v as u8).collect();
    let mut seen = HashSet::from([canonical(&start)]);
    let dummy = [EdgeEdit::delete(0, 0); 2];
    let mut nodes = vec![Node { path: start, parent: usize::MAX, edits: dummy, depth: 0 }];
    let mut i = 0;
    while i < nodes.len() {
        if let Some(closed) = accept(&nodes[i].path) {
            let mut trace = Vec::new();
            let mut j = i;
            while nodes[j].parent != usize::MAX {
                trace.extend(nodes[j].edits.iter().rev());
                j = nodes[j].parent;
            }
            trace.reverse();
            let p: Vec<usize> = nodes[i].path.iter().map(|&v| v as usize).collect();
            return PosaOutcome {
                result: if closed { PosaResult::Closed(p) } else { PosaResult::Extendable(p) },
                rotations: nodes[i].depth,
                trace,
                states_explored: i + 1,
            };
        }
        if nodes[i].depth < max_rotations {
            for (next, edits) in rotations(g, &nodes[i].path) {
                if nodes.len() >= POSA_STATE_CAP {
                    break;
                }
                if seen.insert(canonical(&next)) {
                    let depth = nodes[i].depth + 1;
                    nodes.push(Node { path: next, parent: i, edits, depth });
                }
            }
        }
        i += 1;
    }
    PosaOutcome { result: PosaResult::Failed, trace: Vec::new(), rotations: 0, states_explored: nodes.len() }
}

/// All one-step rotations of `p`. Pivoting the last endpoint `x` on an
/// earlier vertex `p_i ~ x` deletes `p_i p_{i+1}` and inserts `p_i x`; the
/// first endpoint is handled symmetrically.
fn rotations(g: &Graph, p: &[u8]) -> Vec<(Vec<u8>, [EdgeEdit; 2])> {
    let k = p.len() - 1;
    if k < 2 {
        return Vec::new();
    }
    let mut pos = [usize::MAX; 64];
    for (i, &v) in p.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut out = Vec::new();
    let last = p[k] as usize;
    for y in g.neighbors(last) {
        let i = pos[y];
        if i == usize::MAX || i + 1 >= k {
            continue;
        }
        let mut q = p[..=i].to_vec();
        q.extend(p[i + 1..].iter().rev());
        let edits = [EdgeEdit::delete(y, p[i + 1] as usize), EdgeEdit::insert(y, last)];
        out.push((q, edits));
    }
    let first = p[0] as usize;
    for y in g.neighbors(first) {
        let i = pos[y];
        if i == usize::MAX || i < 2 {
            continue;
        }
        let mut q: Vec<u8> = p[..i].iter().rev().copied().collect();
        q.extend(&p[i..]);
        let edits = [EdgeEdit::delete(y, p[i - 1] as usize), EdgeEdit::insert(y, first)];
        out.push((q, edits));
    }
    out
}

/// Opens `cycle` at `v` by deleting the edge to `v`'s smaller cycle-neighbour
/// `w`; the path runs from `v` away from `w` and ends at `w`.
fn open_cycle(cycle: &[usize], v: usize) -> (Vec<usize>, usize) {
    let len = cycle.len();
    let i = cycle.iter().position(|&x| x == v).expect("v lies on the cycle");
    let (prev, next) = (cycle[(i + len - 1) % len], cycle[(i + 1) % len]);
    let path: Vec<usize> = if prev < next {
        (0..len).map(|j| cycle[(i + j) % len]).collect()
    } else {
        (0..len).map(|j| cycle[(i + len - j) % len]).collect()
    };
    (path, prev.min(next))
}

/// Snapshot of the merge loop: the growing path, the vertices it covers, the
/// untouched components, and the edits made so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationState {
    pub current_path: Vec<usize>,
    pub absorbed: VertexSet,
    pub remaining_components: Vec<Vec<usize>>,
    pub trace: Vec<EdgeEdit>,
}

impl RotationState {
    fn outside(&self, g: &Graph, v: usize) -> VertexSet {
        g.neighbors(v) - self.absorbed
    }

    /// Lexicographically smallest `(endpoint, outside neighbour)` pair.
    fn best_extension(&self, g: &Graph) -> Option<(usize, usize)> {
        let (a, b) = (self.current_path[0], self.current_path[self.current_path.len() - 1]);
        let mut ends = [a, b];
        ends.sort();
        ends.iter().find_map(|&e| self.outside(g, e).first().map(|y| (e, y)))
    }

    /// Appends the component containing `y` through the edge `end y`,
    /// reversing the path first if `end` is its first vertex. Returns the
    /// number of edits.
    fn absorb(&mut self, end: usize, y: usize) -> usize {
        if self.current_path[0] == end && self.current_path.len() > 1 {
            self.current_path.reverse();
        }
        let ci = self
            .remaining_components
            .iter()
            .position(|c| c.contains(&y))
            .expect("outside vertices belong to remaining components");
        let comp = self.remaining_components.remove(ci);
        let before = self.trace.len();
        let tail = if comp.len() == 2 {
            if comp[0] == y { comp } else { vec![comp[1], comp[0]] }
        } else {
            let (tail, w) = open_cycle(&comp, y);
            self.trace.push(EdgeEdit::delete(y, w));
            tail
        };
        self.trace.push(EdgeEdit::insert(end, y));
        for &v in &tail {
            self.absorbed.insert(v);
        }
        self.current_path.extend(tail);
        self.trace.len() - before
    }

    fn apply_rotations(&mut self, out: PosaOutcome, path: Vec<usize>) -> usize {
        let n = out.trace.len();
        self.trace.extend(out.trace);
        self.current_path = path;
        n
    }
}

struct Engine<'a> {
    g: &'a Graph,
    budget: usize,
    state: RotationState,
    per_merge: Vec<usize>,
}

impl Engine<'_> {
    fn finish(self, cycle: Option<Vec<usize>>) -> RotationTrace {
        let hamilton_cycle = cycle
            .map(|c| {
                TwoFactor::hamilton_cycle(self.g, c)
                    .expect("engine output is a Hamilton cycle")
                    .components()[0]
                    .clone()
            })
            .unwrap_or_default();
        RotationTrace {
            success: !hamilton_cycle.is_empty(),
            hamilton_cycle,
            replacements: self.state.trace.len(),
            per_merge_replacements: self.per_merge,
            budget: self.budget,
            trace: self.state.trace,
        }
    }

    /// Smallest vertex of the closed path with a neighbour outside it, where
    /// the cycle is reopened.
    fn reopen(&mut self) -> Option<usize> {
        let path = &self.state.current_path;
        let v = path.iter().copied().filter(|&v| !self.state.outside(self.g, v).is_empty()).min()?;
        let (p, w) = open_cycle(path, v);
        self.state.trace.push(EdgeEdit::delete(v, w));
        self.state.current_path = p;
        Some(1)
    }

    fn run(mut self) -> RotationTrace {
        let g = self.g;
        let comps = &self.state.remaining_components;
        if comps.len() == 1 {
            let only = comps[0].clone();
            return self.finish((only.len() >= 3).then_some(only));
        }
        // first component, by smallest vertex, with a vertex that has an outside neighbour
        let start = comps.iter().enumerate().find_map(|(ci, c)| {
            let inside: VertexSet = c.iter().copied().collect();
            c.iter().copied().filter(|&v| !(g.neighbors(v) - inside).is_empty()).min().map(|v| (ci, v))
        });
        let Some((ci, v)) = start else { return self.finish(None) };
        let comp = self.state.remaining_components.remove(ci);
        let mut spent = 0;
        self.state.current_path = if comp.len() == 2 {
            comp.clone()
        } else {
            let (p, w) = open_cycle(&comp, v);
            self.state.trace.push(EdgeEdit::delete(v, w));
            spent += 1;
            p
        };
        self.state.absorbed = comp.iter().copied().collect();

        while !self.state.remaining_components.is_empty() {
            if let Some((end, y)) = self.state.best_extension(g) {
                spent += self.state.absorb(end, y);
                self.per_merge.push(spent);
                if spent > self.budget {
                    return self.finish(None);
                }
                spent = 0;
                continue;
            }
            let allowance = self.budget.saturating_sub(spent) / 2;
            let out = posa_search(g, &self.state.current_path, VertexSet::EMPTY, allowance);
            match out.result.clone() {
                PosaResult::Extendable(p) => spent += self.state.apply_rotations(out, p),
                PosaResult::Closed(p) => {
                    spent += self.state.apply_rotations(out, p);
                    let p = &self.state.current_path;
                    self.state.trace.push(EdgeEdit::insert(p[0], p[p.len() - 1]));
                    spent += 1;
                    match self.reopen() {
                        Some(c) => spent += c,
                        None => return self.finish(None),
                    }
                }
                PosaResult::Failed => return self.finish(None),
            }
        }

        let mut spent = 0;
        let p = &self.state.current_path;
        if !(p.len() >= 3 && g.has_edge(p[0], p[p.len() - 1])) {
            let out = posa_search(g, p, VertexSet::EMPTY, self.budget / 2);
            match out.result.clone() {
                PosaResult::Closed(q) => spent += self.state.apply_rotations(out, q),
                _ => return self.finish(None),
            }
        }
        let p = self.state.current_path.clone();
        self.state.trace.push(EdgeEdit::insert(p[0], p[p.len() - 1]));
        spent += 1;
        self.per_merge.push(spent);
        if spent > self.budget {
            return self.finish(None);
        }
        self.finish(Some(p))
    }
}

/// Converts the 2-factor `f` of `g` into a Hamilton cycle, or reports
/// failure with the edits made up to that point. Failure is an ordinary
/// outcome, not an error.
pub fn two_factor_to_hamilton(
    g: &Graph,
    f: &TwoFactor,
    cert: &NdlCertificate,
    budget_constant: f64,
) -> Result<RotationTrace> {
    let f = TwoFactor::new(g, f.components().to_vec())?;
    if cert.n != g.n() {
        return Err(Error::InvalidParameters(format!(
            "certificate is for n = {}, graph has n = {}",
            cert.n,
            g.n()
        )));
    }
    if !(budget_constant.is_finite() && budget_constant > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "budget constant must be positive, got {budget_constant}"
        )));
    }
    let engine = Engine {
        g,
        budget: merge_budget(g.n(), cert.eigenvalue_ratio, budget_constant),
        state: RotationState {
            current_path: Vec::new(),
            absorbed: VertexSet::EMPTY,
            remaining_components: f.components().to_vec(),
            trace: Vec::new(),
        },
        per_merge: Vec::new(),
    };
    Ok(engine.run())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayOutcome {
    /// Canonical Hamilton cycle formed by the final edge set.
    HamiltonCycle(Vec<usize>),
    /// Final edge set, which is not a Hamilton cycle.
    Partial(Vec<(usize, usize)>),
}

/// The canonical Hamilton cycle whose edge set is `edges`, if there is one.
fn cycle_from_edges(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    if n < 3 || edges.len() != n {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut cycle = vec![0, adj[0][0].min(adj[0][1])];
    while cycle.len() < n {
        let (prev, cur) = (cycle[cycle.len() - 2], cycle[cycle.len() - 1]);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        if next == 0 {
            return None;
        }
        cycle.push(next);
    }
    Some(cycle)
}

/// Re-applies `trace` to the edge set of `f` without consulting the engine,
/// checking each deletion and insertion, and compares the result with the
/// recorded outcome.
pub fn replay(g: &Graph, f: &TwoFactor, trace: &RotationTrace) -> Result<ReplayOutcome> {
    let f = TwoFactor::new(g, f.components().to_vec())?;
    let bad = |m: String| Err(Error::InconsistentTrace(m));
    let mut edges: BTreeSet<(usize, usize)> = f.edges().into_iter().collect();
    for (i, e) in trace.trace.iter().enumerate() {
        let key = e.key();
        match e.op {
            EditOp::Delete if !edges.remove(&key) => {
                return bad(format!("step {i}: deleted edge {} {} is absent", e.u, e.v));
            }
            EditOp::Insert if e.u >= g.n() || e.v >= g.n() || !g.has_edge(e.u, e.v) => {
                return bad(format!("step {i}: inserted pair {} {} is not an edge", e.u, e.v));
            }
            EditOp::Insert if !edges.insert(key) => {
                return bad(format!("step {i}: inserted edge {} {} is already present", e.u, e.v));
            }
            _ => {}
        }
    }
    if trace.replacements != trace.trace.len() {
        return bad(format!(
            "{} replacements recorded, trace has {}",
            trace.replacements,
            trace.trace.len()
        ));
    }
    match (cycle_from_edges(g.n(), &edges), trace.success) {
        (Some(c), true) => {
            let recorded = TwoFactor::hamilton_cycle(g, trace.hamilton_cycle.clone())
                .map_err(|e| Error::InconsistentTrace(format!("recorded cycle: {e}")))?;
            if recorded.components()[0] != c {
                return bad("replayed cycle differs from the recorded one".into());
            }
            Ok(ReplayOutcome::HamiltonCycle(c))
        }
        (Some(c), false) => Ok(ReplayOutcome::HamiltonCycle(c)),
        (None, true) => bad("trace claims success but the edges do not form a Hamilton cycle".into()),
        (None, false) => Ok(ReplayOutcome::Partial(edges.into_iter().collect())),
    }
}

/// Some 2-factor of `g`, found by a depth-first search whose choices are
/// shuffled by `seed`; `None` if `g` has no 2-factor.
pub fn random_two_factor(g: &Graph, seed: u64) -> Option<TwoFactor> {
    fn cover(g: &Graph, rng: &mut ChaCha8Rng, rest: VertexSet, out: &mut Vec<Vec<usize>>) -> bool {
        let Some(v) = rest.first() else { return true };
        let mut path = vec![v];
        grow(g, rng, &mut path, rest - VertexSet::singleton(v), out)
    }
    fn grow(
        g: &Graph,
        rng: &mut ChaCha8Rng,
        path: &mut Vec<usize>,
        rest: VertexSet,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let (first, last) = (path[0], path[path.len() - 1]);
        // None closes the current component; Some(w) extends the path to w
        let mut moves: Vec<Option<usize>> = (g.neighbors(last) & rest).iter().map(Some).collect();
        if path.len() == 2 || (path.len() >= 3 && path[1] < last && g.has_edge(last, first)) {
            moves.push(None);
        }
        moves.shuffle(rng);
        for m in moves {
            let done = match m {
                None => {
                    out.push(path.clone());
                    let ok = cover(g, rng, rest, out);
                    if !ok {
                        out.pop();
                    }
                    ok
                }
                Some(w) => {
                    path.push(w);
                    let ok = grow(g, rng, path, rest - VertexSet::singleton(w), out);
                    path.pop();
                    ok
                }
            };
            if done {
                return true;
            }
        }
        false
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = Vec::new();
    cover(g, &mut rng, g.vertices(), &mut comps)
        .then(|| TwoFactor::new(g, comps).expect("search builds valid components"))
}
