//! Brute-force ground truth: nested quadrature for `K_ell`, the convolution
//! identity for `K_ell(u, kappa)`, and a delay-equation march for rho.

mod cheb;
mod kell;
mod quad;
mod rho_ode;

pub use cheb::ChebPatch;
pub use kell::{k_ell_kappa_oracle, k_ell_oracle, KOracle, QuadratureConfig, MAX_ORACLE_ELL};
pub use quad::{gauss_legendre, integrate};
pub use rho_ode::{rho_ode, RhoOde, MAX_RHO_U};
