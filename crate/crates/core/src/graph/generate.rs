use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Graph, VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// Restarts allowed before the configuration model reports a timeout.
pub const RANDOM_REGULAR_MAX_RESTARTS: usize = 1_000_000;

/// The deterministic test families plus the seeded random-regular one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphFamily {
    /// Quadratic-residue graph on `Z_q`, `q` prime with `q = 1 (mod 4)`.
    Paley { q: usize },
    RandomRegular { n: usize, d: usize },
    Complete { n: usize },
    Cycle { n: usize },
    Petersen,
    /// `i ~ i +- s (mod n)` for every `s` in `connections`.
    Circulant { n: usize, connections: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphFamilySpec {
    #[serde(flatten)]
    pub family: GraphFamily,
    pub seed: u64,
}

impl GraphFamilySpec {
    pub fn new(family: GraphFamily) -> Self {
        GraphFamilySpec { family, seed: 0 }
    }

    pub fn with_seed(family: GraphFamily, seed: u64) -> Self {
        GraphFamilySpec { family, seed }
    }
}

impl From<GraphFamily> for GraphFamilySpec {
    fn from(family: GraphFamily) -> Self {
        GraphFamilySpec::new(family)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(invalid(format!("n = {n} exceeds {MAX_VERTICES}")));
    }
    Ok(())
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p))
}

/// Builds the graph described by `spec`. Only the random-regular family
/// consumes the seed; every family is a pure function of `spec`.
pub fn generate(spec: &GraphFamilySpec) -> Result<Graph> {
    match &spec.family {
        GraphFamily::Paley { q } => paley(*q),
        GraphFamily::RandomRegular { n, d } => random_regular(*n, *d, spec.seed),
        GraphFamily::Complete { n } => {
            check_n(*n)?;
            let rows = (0..*n).map(|v| VertexSet::full(*n) - VertexSet::singleton(v)).collect();
            Graph::from_adjacency(rows)
        }
        GraphFamily::Cycle { n } => {
            if *n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            check_n(*n)?;
            Graph::from_edges(*n, (0..*n).map(|i| (i, (i + 1) % n)))
        }
        GraphFamily::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
        GraphFamily::Circulant { n, connections } => circulant(*n, connections),
    }
}

fn paley(q: usize) -> Result<Graph> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(invalid(format!("paley needs a prime q = 1 (mod 4), got {q}")));
    }
    check_n(q)?;
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let rows = (0..q)
        .map(|i| (0..q).filter(|&j| j != i && residue[(q + j - i) % q]).collect())
        .collect();
    Graph::from_adjacency(rows)
}

fn circulant(n: usize, connections: &[usize]) -> Result<Graph> {
    check_n(n)?;
    if n == 0 {
        return Err(invalid("circulant needs n >= 1"));
    }
    let mut rows = vec![VertexSet::EMPTY; n];
    for &s in connections {
        if s == 0 || s > n / 2 {
            return Err(invalid(format!("connection {s} not in 1..={}", n / 2)));
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.insert((i + s) % n);
            row.insert((i + n - s) % n);
        }
    }
    Graph::from_adjacency(rows)
}

/// Configuration model: shuffle the `n*d` half-edges, pair them off in order,
/// and restart from scratch whenever a loop or a repeated edge appears.
fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d < 2 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(invalid(format!(
            "random-regular needs 2 <= d < n and n*d even, got n = {n}, d = {d}"
        )));
    }
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'restart: for _ in 0..RANDOM_REGULAR_MAX_RESTARTS {
        points.shuffle(&mut rng);
        let mut rows = vec![VertexSet::EMPTY; n];
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || rows[u].contains(v) {
                continue 'restart;
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        return Graph::from_adjacency(rows);
    }
    Err(Error::GenerationTimeout { restarts: RANDOM_REGULAR_MAX_RESTARTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(family: GraphFamily) -> Result<Graph> {
        generate(&family.into())
    }

    #[test]
    fn complete_four() {
        let g = gen(GraphFamily::Complete { n: 4 }).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn paley_five_is_the_five_cycle() {
        // residues mod 5 are {1, 4}: i ~ i +- 1
        let g = gen(GraphFamily::Paley { q: 5 }).unwrap();
        let c5 = gen(GraphFamily::Cycle { n: 5 }).unwrap();
        assert_eq!(g, c5);
    }

    #[test]
    fn paley_degree() {
        for q in [5, 13, 17, 29, 37] {
            let g = gen(GraphFamily::Paley { q }).unwrap();
            assert_eq!(g.regular_degree(), Some((q - 1) / 2), "q = {q}");
        }
        assert!(gen(GraphFamily::Paley { q: 7 }).is_err());
        assert!(gen(GraphFamily::Paley { q: 9 }).is_err());
        assert!(gen(GraphFamily::Paley { q: 1 }).is_err());
    }

    #[test]
    fn petersen_shape() {
        let g = gen(GraphFamily::Petersen).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edge_count(), 15);
        // girth 5: no triangles and no 4-cycles
        for u in 0..10 {
            for v in g.neighbors(u) {
                assert!((g.neighbors(u) & g.neighbors(v)).is_empty());
            }
            for w in 0..10 {
                if w != u {
                    assert!((g.neighbors(u) & g.neighbors(w)).len() <= 1);
                }
            }
        }
    }

    #[test]
    fn random_regular_is_regular_and_deterministic() {
        let spec = GraphFamilySpec::with_seed(GraphFamily::RandomRegular { n: 10, d: 3 }, 1);
        let g = generate(&spec).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(generate(&spec).unwrap(), g);
    }

    #[test]
    fn random_regular_parameter_errors() {
        for (n, d) in [(10, 1), (10, 10), (9, 3)] {
            assert!(matches!(
                gen(GraphFamily::RandomRegular { n, d }),
                Err(Error::InvalidParameters(_))
            ));
        }
    }

    #[test]
    fn circulant_matches_cycle_and_validates() {
        let g = gen(GraphFamily::Circulant { n: 7, connections: vec![1] }).unwrap();
        assert_eq!(g, gen(GraphFamily::Cycle { n: 7 }).unwrap());
        let h = gen(GraphFamily::Circulant { n: 8, connections: vec![1, 4] }).unwrap();
        assert_eq!(h.regular_degree(), Some(3));
        assert!(gen(GraphFamily::Circulant { n: 8, connections: vec![5] }).is_err());
        assert!(gen(GraphFamily::Circulant { n: 8, connections: vec![0] }).is_err());
    }
}
