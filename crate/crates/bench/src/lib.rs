//! Shared fixtures for the criterion benches.

use dickman_core::{CoefficientTables, TableExtents};

pub fn default_tables() -> CoefficientTables {
    CoefficientTables::build(TableExtents::default()).expect("default extents are valid")
}

/// Geometric grid `start, start*factor, ...` up to `end`.
pub fn geometric_grid(start: f64, end: f64, factor: f64) -> Vec<f64> {
    std::iter::successors(Some(start), |u| Some(u * factor))
        .take_while(|&u| u <= end * (1.0 + 1e-12))
        .collect()
}
