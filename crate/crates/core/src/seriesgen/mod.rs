//! Coefficient tables for the expansions, built from their generating functions.
//!
//! * `C_r`: Taylor coefficients of `e^{gamma z} / Gamma(1 - z)`. Using the
//!   log-Gamma series, `gamma` cancels and the generating function becomes
//!   `exp(-sum_{k>=2} zeta(k) z^k / k)`, so the table is a single series
//!   exponential. A second route through Bell polynomials checks it.
//! * `C_{r,kappa}`: coefficients of `e^{gamma z} / Gamma(kappa + 1 - z)`, obtained
//!   row by row from `C_{r,kappa} = sum_{j<=r} C_{j,kappa-1} / kappa^{r-j+1}`.
//! * `E_{j,m}`: coefficient of `z^j` in `(integral_0^z (1 - e^{-t})/t dt)^m`.

mod bell;
mod series;
mod tables;
mod zeta;

pub use bell::BellTable;
pub use series::{ein_series, series_int_power, TruncatedSeries};
pub use tables::{
    dickman_constants, dickman_constants_bell, e_coefficients, generalized_dickman,
    CoefficientTables, DickmanConstants, ECoefficientTable, GeneralizedDickmanTable, TableExtents,
    BUILDER_VERSION,
};
pub use zeta::{zeta_values, ZetaTable};
