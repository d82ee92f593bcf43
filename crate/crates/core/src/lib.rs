//! Dickman's rho, its generalization rho_kappa, and the multiple integrals
//! `K_ell(u)` / `K_ell(u, kappa)` behind them.
//!
//! The fast path evaluates refined asymptotic expansions from precomputed
//! coefficient tables ([`seriesgen`], [`logalg`], [`expand`]). Independent
//! brute-force routes ([`oracle`], [`smoothlab`]) exist to check them.

mod error;
pub mod expand;
pub mod logalg;
pub mod numeric;
pub mod oracle;
pub mod seriesgen;
pub mod smoothlab;

pub use error::{Error, Result};
pub use expand::{
    rho, rho_kappa, EvalResult, Expander, ExpansionRequest, KBackend, Method, DEFAULT_RHO_TERMS,
};
pub use logalg::{LogDerivativeTable, LogLaurentPoly};
pub use oracle::{k_ell_kappa_oracle, k_ell_oracle, rho_ode, KOracle, QuadratureConfig, RhoOde};
pub use seriesgen::{CoefficientTables, TableExtents, TruncatedSeries};
pub use smoothlab::{divisor_sum_smooth, psi, SmoothSieve, SmoothSumReport};
