//! Spectral certification of `(n, d, lambda)`-graphs together with exact
//! desk-scale counters for the quantities that control their Hamilton cycles:
//! permanents, 2-factors, Hamilton cycles, perfect matchings, and a Pósa
//! rotation engine that turns 2-factors into Hamilton cycles.

pub mod caps;
mod decimal;
pub mod error;
pub mod experiments;
pub mod factors;
pub mod graph;
pub mod hamiltonize;
pub mod mixing;
pub mod permanent;
pub mod spectral;

#[cfg(test)]
mod oracle;

pub use caps::SizeCaps;
pub use num_bigint::BigUint;
pub use error::{Error, Result};
pub use experiments::{
    bounds_report, janson_expectation_gnm, janson_expectation_gnp, monte_carlo_gnp,
    phi_estimate_report, tail_diagnostics, trend_table, BoundsReport, Check, MonteCarloReport,
    PhiEstimateReport, TailDiagnostics, TrendRow,
};
pub use factors::{
    enumerate_two_factors, factor_histogram, hamilton_count_exact, perfect_matching_count, phi,
    two_factor_count, two_factors_near_hamilton, weighted_cycle_cover_sum, FactorHistogram,
    NearHamiltonCount, TwoFactor,
};
pub use graph::{
    generate, read_edge_list, write_edge_list, Graph, GraphFamily, GraphFamilySpec, VertexSet,
};
pub use hamiltonize::{
    posa_close, random_two_factor, replay, two_factor_to_hamilton, EdgeEdit, EditOp,
    ReplayOutcome, RotationTrace,
};
pub use mixing::{ExpansionCheck, MixingDefect, MixingReport};
pub use permanent::{permanent_exact, BoundKind, BoundSource, LogBound, ZeroOneMatrix};
pub use spectral::{certify, spectrum, NdlCertificate};
