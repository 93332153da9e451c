//! Adjacency spectra by cyclic Jacobi rotations, and `(n, d, lambda)`
//! certification of regular graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Off-diagonal Frobenius norm at which a Jacobi run stops.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Gap below `d` under which the second eigenvalue counts as a repeat of `d`.
pub const CONNECTIVITY_TOL: f64 = 1e-6;
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct JacobiOutcome {
    /// Diagonal after the final sweep, unsorted.
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
    pub off_norm: f64,
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on a dense symmetric `n x n` row-major matrix, which is
/// overwritten. Rotations sweep the upper triangle row by row until the
/// off-diagonal Frobenius norm drops below [`JACOBI_OFF_DIAGONAL_TOL`] or
/// [`JACOBI_MAX_SWEEPS`] sweeps have run.
pub fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> JacobiOutcome {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(a, n);
    while off >= JACOBI_OFF_DIAGONAL_TOL && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(a, n);
    }
    JacobiOutcome { eigenvalues: (0..n).map(|i| a[i * n + i]).collect(), sweeps, off_norm: off }
}

pub fn adjacency_matrix(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![0.0; n * n];
    for u in 0..n {
        for v in g.neighbors(u) {
            a[u * n + v] = 1.0;
        }
    }
    a
}

/// Adjacency eigenvalues in descending order.
pub fn spectrum(g: &Graph) -> Vec<f64> {
    let mut a = adjacency_matrix(g);
    let mut ev = jacobi_eigenvalues(&mut a, g.n()).eigenvalues;
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Spectral certificate of a `d`-regular graph, with the two growth
/// conditions of the Hamilton-count theorem reported as numeric margins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NdlCertificate {
    pub n: usize,
    pub d: usize,
    /// `max(|lambda_2|, |lambda_n|)`.
    pub lambda: f64,
    pub eigenvalues: Vec<f64>,
    /// `d / lambda`.
    pub eigenvalue_ratio: f64,
    /// `(d / lambda) / (ln n)^(1 + epsilon)`; at least 1 when the first condition holds.
    pub cond1_margin: f64,
    /// `ln d * ln(d / lambda) / ln n`; must grow without bound for the second condition.
    pub cond2_ratio: f64,
    pub connected: bool,
    pub epsilon: f64,
}

impl NdlCertificate {
    /// A copy whose `lambda` is replaced and whose derived ratios are
    /// recomputed. The eigenvalue list is left alone.
    pub fn with_lambda(&self, lambda: f64) -> NdlCertificate {
        let mut c = self.clone();
        c.lambda = lambda;
        c.fill_ratios();
        c
    }

    fn fill_ratios(&mut self) {
        let n = self.n as f64;
        let d = self.d as f64;
        self.eigenvalue_ratio = d / self.lambda;
        self.cond1_margin = self.eigenvalue_ratio / n.ln().powf(1.0 + self.epsilon);
        self.cond2_ratio = d.ln() * self.eigenvalue_ratio.ln() / n.ln();
    }
}

pub fn certify(g: &Graph, epsilon: f64) -> Result<NdlCertificate> {
    let d = g.require_regular()?;
    if g.n() < 3 {
        return Err(Error::InvalidParameters(format!("certify needs n >= 3, got {}", g.n())));
    }
    if d == 0 {
        return Err(Error::InvalidParameters("certify needs d >= 1".into()));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameters(format!("epsilon must be positive, got {epsilon}")));
    }
    let eigenvalues = spectrum(g);
    let second = eigenvalues[1];
    let last = eigenvalues[g.n() - 1];
    let mut cert = NdlCertificate {
        n: g.n(),
        d,
        lambda: second.abs().max(last.abs()),
        connected: second < d as f64 - CONNECTIVITY_TOL,
        eigenvalues,
        eigenvalue_ratio: 0.0,
        cond1_margin: 0.0,
        cond2_ratio: 0.0,
        epsilon,
    };
    cert.fill_ratios();
    Ok(cert)
}
