//! Brute-force reference counters for unit tests. Everything here walks all
//! `n!` permutations, so keep `n <= 8`.

use std::collections::BTreeSet;

use crate::graph::Graph;

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn is_cover(g: &Graph, sigma: &[usize]) -> bool {
    sigma.iter().enumerate().all(|(i, &j)| g.has_edge(i, j))
}

/// A 2-factor as the set of its components, each a sorted vertex list plus
/// its sorted edge list, so that orientation and rotation are forgotten.
pub type Shape = BTreeSet<(Vec<usize>, Vec<(usize, usize)>)>;

fn shape(sigma: &[usize]) -> Shape {
    let mut seen = vec![false; sigma.len()];
    let mut out = Shape::new();
    for s in 0..sigma.len() {
        if seen[s] {
            continue;
        }
        let mut verts = Vec::new();
        let mut edges = Vec::new();
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            verts.push(v);
            let w = sigma[v];
            edges.push((v.min(w), v.max(w)));
            v = w;
        }
        verts.sort();
        edges.sort();
        edges.dedup();
        out.insert((verts, edges));
    }
    out
}

/// Distinct 2-factors (with the number of cycles of length >= 3 in each) and
/// the number of fixed-point-free permutations supported on edges.
pub fn cycle_covers(g: &Graph) -> (Vec<(Shape, usize)>, u64) {
    let mut shapes = BTreeSet::new();
    let mut perms = 0;
    for_each_permutation(g.n(), |sigma| {
        if is_cover(g, sigma) {
            perms += 1;
            shapes.insert(shape(sigma));
        }
    });
    let out = shapes
        .into_iter()
        .map(|s| {
            let c = s.iter().filter(|(v, _)| v.len() >= 3).count();
            (s, c)
        })
        .collect();
    (out, perms)
}

pub fn hamilton_cycles(g: &Graph) -> u64 {
    let n = g.n();
    if n < 3 {
        return 0;
    }
    let mut count = 0;
    for_each_permutation(n - 1, |rest| {
        let order: Vec<usize> = std::iter::once(0).chain(rest.iter().map(|&v| v + 1)).collect();
        if (0..n).all(|i| g.has_edge(order[i], order[(i + 1) % n])) {
            count += 1;
        }
    });
    count / 2
}

/// Perfect matchings as edge-supported fixed-point-free involutions.
pub fn perfect_matchings(g: &Graph) -> u64 {
    let mut count = 0;
    for_each_permutation(g.n(), |sigma| {
        if is_cover(g, sigma) && sigma.iter().enumerate().all(|(i, &j)| sigma[j] == i) {
            count += 1;
        }
    });
    count
}
