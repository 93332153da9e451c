//! Fixture graphs shared by the benchmarks.

use ndl_core::{generate, Graph, GraphFamily, GraphFamilySpec};

/// A seeded random `d`-regular graph on `n` vertices.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Graph {
    generate(&GraphFamilySpec::with_seed(GraphFamily::RandomRegular { n, d }, seed))
        .expect("benchmark parameters are feasible")
}

pub fn complete(n: usize) -> Graph {
    generate(&GraphFamily::Complete { n }.into()).expect("n is within range")
}
