//! Asymptotic expansions of `K_ell(u)` and `K_ell(u, kappa)`, and the
//! alternating sums that assemble rho and rho_kappa from them.
//!
//! For `u >= ell`:
//!
//! ```text
//! K_ell(u) ~ sum_{j=0}^{J} sum_{m=0}^{ell} sum_{r=0}^{ell-m}
//!              (-1)^r / (m! (ell-m-r)!) E_{j,m} C_r (log^{ell-m-r} u)^{(j)}
//! ```
//!
//! with error `O(log^ell(eu) / u^{J+1})`. The kappa version has the main term
//! `sum_m sum_{n=m}^{kappa} sum_r (-1)^r kappa! / (m! (ell-m-r)!) E_{n,m} C_{r,kappa-n} u^{kappa-n} log^{ell-m-r} u`
//! plus corrections `j = 1..=J` carrying `kappa! E_{kappa+j,m} C_r (log^{ell-m-r} u)^{(j)}`.

use crate::error::{ensure, Result};
use crate::logalg::LogDerivativeTable;
use crate::numeric::{factorial, CompensatedSum};
use crate::oracle::{KOracle, QuadratureConfig};
use crate::seriesgen::CoefficientTables;

/// J used by the alternating sums when the expansion backend is asked for rho.
pub const DEFAULT_RHO_TERMS: u32 = 24;

/// Safety factor applied to the first omitted term in [`EvalResult::error_estimate`].
pub const ERROR_ESTIMATE_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionRequest {
    pub ell: u32,
    pub kappa: u32,
    pub u: f64,
    /// Highest correction order `J`.
    pub terms: u32,
}

impl ExpansionRequest {
    pub fn new(ell: u32, kappa: u32, u: f64, terms: u32) -> Self {
        Self {
            ell,
            kappa,
            u,
            terms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Heuristic magnitude `A(ell, J) log^ell(eu) / u^{J+1}`, where `A` bounds the
    /// first omitted correction times [`ERROR_ESTIMATE_FACTOR`]. Advisory only.
    pub error_estimate: f64,
    /// Number of non-zero terms accumulated.
    pub terms_used: usize,
    pub request: ExpansionRequest,
}

/// Evaluates the expansions from a shared, immutable set of coefficient tables.
#[derive(Debug, Clone)]
pub struct Expander<'t> {
    tables: &'t CoefficientTables,
    logs: LogDerivativeTable,
    inv_fact: Vec<f64>,
}

impl<'t> Expander<'t> {
    pub fn new(tables: &'t CoefficientTables) -> Self {
        let ext = tables.extents();
        let kmax = ext.rmax.min(ext.mmax) as u32;
        Self {
            tables,
            logs: LogDerivativeTable::new(kmax, ext.jmax as u32 + 1),
            inv_fact: (0..=kmax).map(|k| 1.0 / factorial(k)).collect(),
        }
    }

    pub fn tables(&self) -> &CoefficientTables {
        self.tables
    }

    fn check(&self, req: &ExpansionRequest) -> Result<()> {
        let ext = self.tables.extents();
        ensure!(req.ell >= 1, InvalidArgument, "ell must be at least 1");
        ensure!(
            req.u.is_finite(),
            InvalidArgument,
            "u must be finite, got {}",
            req.u
        );
        ensure!(
            req.u >= req.ell as f64,
            Domain,
            "the expansion needs u >= ell (u = {}, ell = {})",
            req.u,
            req.ell
        );
        let ell = req.ell as usize;
        ensure!(
            ell <= ext.rmax && ell <= ext.mmax,
            ResourceCap,
            "ell = {ell} exceeds the coefficient tables (rmax = {}, mmax = {})",
            ext.rmax,
            ext.mmax
        );
        ensure!(
            (req.kappa as usize) <= ext.kmax,
            ResourceCap,
            "kappa = {} exceeds the table extent kmax = {}",
            req.kappa,
            ext.kmax
        );
        ensure!(
            (req.kappa + req.terms) as usize <= ext.jmax,
            ResourceCap,
            "kappa + J = {} exceeds the table extent jmax = {}",
            req.kappa + req.terms,
            ext.jmax
        );
        Ok(())
    }

    /// `|E_{n,m}|`, falling back to the bound `m^n / n!` past the table.
    fn e_abs_or_bound(&self, n: usize, m: usize) -> f64 {
        match self.tables.e(n, m) {
            Some(e) => e.abs(),
            None => (m as f64).powi(n as i32) / factorial(n as u32),
        }
    }

    /// Corrections of order `j`: `scale * sum_{m,r} (-1)^r E_{e_index,m} C_r (log^{ell-m-r} u)^{(j)} / (m! (ell-m-r)!)`.
    fn correction(
        &self,
        ell: u32,
        j: u32,
        e_index: usize,
        scale: f64,
        u: f64,
        acc: &mut CompensatedSum,
    ) -> Result<usize> {
        let mut used = 0;
        for m in 0..=ell {
            let e = self.tables.e(e_index, m as usize).unwrap_or(0.0);
            if e == 0.0 {
                continue;
            }
            for r in 0..=(ell - m) {
                let c = self.tables.c(r as usize).unwrap_or(0.0);
                let k = ell - m - r;
                let poly = self.logs.get(k, j);
                if c == 0.0 || poly.is_zero() {
                    continue;
                }
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let w =
                    sign * scale * self.inv_fact[m as usize] * self.inv_fact[k as usize] * e * c;
                acc.add(w * poly.evaluate(u)?);
                used += 1;
            }
        }
        Ok(used)
    }

    /// `A(ell, J) log^ell(eu) / u^{J+1}` with `A` the l1 size of the first omitted correction.
    fn error_estimate(&self, ell: u32, kappa: u32, terms: u32, u: f64) -> f64 {
        let j = terms + 1;
        let n = (kappa + j) as usize;
        let mut a = 0.0;
        for m in 0..=ell {
            let e = self.e_abs_or_bound(n, m as usize);
            for r in 0..=(ell - m) {
                let k = ell - m - r;
                let c = self.tables.c(r as usize).unwrap_or(0.0).abs();
                a += e
                    * c
                    * self.logs.get(k, j).l1_norm()
                    * self.inv_fact[m as usize]
                    * self.inv_fact[k as usize];
            }
        }
        a *= ERROR_ESTIMATE_FACTOR * factorial(kappa);
        a * (1.0 + u.ln()).powi(ell as i32) / u.powi(j as i32)
    }

    /// `K_ell(u)` to correction order `req.terms`; `req.kappa` must be 0.
    pub fn k_ell(&self, req: &ExpansionRequest) -> Result<EvalResult> {
        ensure!(
            req.kappa == 0,
            InvalidArgument,
            "k_ell takes kappa = 0; use k_ell_kappa"
        );
        self.check(req)?;
        let mut acc = CompensatedSum::new();
        let mut used = 0;
        for j in 0..=req.terms {
            used += self.correction(req.ell, j, j as usize, 1.0, req.u, &mut acc)?;
        }
        Ok(EvalResult {
            value: acc.value(),
            error_estimate: self.error_estimate(req.ell, 0, req.terms, req.u),
            terms_used: used,
            request: *req,
        })
    }

    fn main_term(&self, ell: u32, kappa: u32, u: f64, acc: &mut CompensatedSum) -> usize {
        let kfact = factorial(kappa);
        let log_u = u.ln();
        let mut used = 0;
        for m in 0..=ell.min(kappa) {
            for n in m..=kappa {
                let e = self.tables.e(n as usize, m as usize).unwrap_or(0.0);
                if e == 0.0 {
                    continue;
                }
                let u_pow = u.powi((kappa - n) as i32);
                for r in 0..=(ell - m) {
                    let c = self
                        .tables
                        .c_kappa(r as usize, (kappa - n) as usize)
                        .unwrap_or(0.0);
                    if c == 0.0 {
                        continue;
                    }
                    let k = ell - m - r;
                    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                    let w = sign
                        * kfact
                        * self.inv_fact[m as usize]
                        * self.inv_fact[k as usize]
                        * e
                        * c;
                    acc.add(w * u_pow * log_u.powi(k as i32));
                    used += 1;
                }
            }
        }
        used
    }

    /// Main term of the `K_ell(u, kappa)` expansion (no `1/u^j` corrections).
    pub fn k_ell_kappa_main(&self, ell: u32, kappa: u32, u: f64) -> Result<f64> {
        self.check(&ExpansionRequest::new(ell, kappa, u, 0))?;
        let mut acc = CompensatedSum::new();
        self.main_term(ell, kappa, u, &mut acc);
        Ok(acc.value())
    }

    /// `K_ell(u, kappa)`: main term plus corrections `j = 1..=req.terms`.
    pub fn k_ell_kappa(&self, req: &ExpansionRequest) -> Result<EvalResult> {
        self.check(req)?;
        let kfact = factorial(req.kappa);
        let mut acc = CompensatedSum::new();
        let mut used = self.main_term(req.ell, req.kappa, req.u, &mut acc);
        for j in 1..=req.terms {
            used +=
                self.correction(req.ell, j, (req.kappa + j) as usize, kfact, req.u, &mut acc)?;
        }
        Ok(EvalResult {
            value: acc.value(),
            error_estimate: self.error_estimate(req.ell, req.kappa, req.terms, req.u),
            terms_used: used,
            request: *req,
        })
    }
}

/// How the alternating sums obtain each `K_ell`.
#[derive(Debug, Clone, Copy)]
pub enum Method<'e> {
    /// Expansion with at most `terms` corrections (capped by the tables).
    Expansion {
        expander: &'e Expander<'e>,
        terms: u32,
    },
    /// Nested quadrature.
    Oracle(QuadratureConfig),
}

/// Stateful evaluator of `K_ell(u, kappa)`; the oracle variant keeps its
/// interpolation cache across calls.
#[derive(Debug, Clone)]
pub enum KBackend<'e> {
    Expansion {
        expander: &'e Expander<'e>,
        terms: u32,
    },
    Oracle(KOracle),
}

impl<'e> KBackend<'e> {
    pub fn new(method: Method<'e>) -> Result<Self> {
        Ok(match method {
            Method::Expansion { expander, terms } => KBackend::Expansion { expander, terms },
            Method::Oracle(cfg) => KBackend::Oracle(KOracle::new(cfg)?),
        })
    }

    /// `K_ell(u, kappa)` for `ell >= 1`; zero for `u <= ell`.
    pub fn k_ell_kappa(&mut self, ell: u32, kappa: u32, u: f64) -> Result<f64> {
        match self {
            KBackend::Oracle(o) => o.k_ell_kappa(ell, kappa, u),
            KBackend::Expansion { expander, terms } => {
                if u <= ell as f64 {
                    return Ok(0.0);
                }
                let jmax = expander.tables().extents().jmax as u32;
                ensure!(
                    kappa as usize <= expander.tables().extents().kmax && kappa <= jmax,
                    ResourceCap,
                    "kappa = {kappa} exceeds the coefficient tables"
                );
                let terms = (*terms).min(jmax - kappa);
                let req = ExpansionRequest::new(ell, kappa, u, terms);
                Ok(expander.k_ell_kappa(&req)?.value)
            }
        }
    }

    /// rho(u) = sum_{0 <= ell < u} (-1)^ell K_ell(u), with `K_0 = 1`.
    pub fn rho(&mut self, u: f64) -> Result<f64> {
        self.rho_kappa(u, 1)
    }

    /// rho_kappa(u) = sum_{0 <= ell < u} (-kappa)^ell / (kappa-1)! K_ell(u, kappa-1),
    /// with `K_0(u, kappa-1) = u^{kappa-1}`.
    pub fn rho_kappa(&mut self, u: f64, kappa: u32) -> Result<f64> {
        ensure!(
            kappa >= 1,
            InvalidArgument,
            "kappa must be at least 1, got {kappa}"
        );
        ensure!(u.is_finite(), InvalidArgument, "u must be finite, got {u}");
        ensure!(u >= 0.0, Domain, "rho is defined for u >= 0, got {u}");
        let k = kappa - 1;
        let mut acc = CompensatedSum::new();
        acc.add(u.powi(k as i32));
        let mut ell = 1u32;
        let mut weight = 1.0;
        while (ell as f64) < u {
            weight *= -(kappa as f64);
            acc.add(weight * self.k_ell_kappa(ell, k, u)?);
            ell += 1;
        }
        Ok(acc.value() / factorial(k))
    }
}

pub fn rho(u: f64, method: Method<'_>) -> Result<f64> {
    KBackend::new(method)?.rho(u)
}

pub fn rho_kappa(u: f64, kappa: u32, method: Method<'_>) -> Result<f64> {
    KBackend::new(method)?.rho_kappa(u, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seriesgen::TableExtents;

    fn tables() -> CoefficientTables {
        CoefficientTables::build(TableExtents::default()).unwrap()
    }

    #[test]
    fn k1_is_log() {
        let t = tables();
        let x = Expander::new(&t);
        let r = x.k_ell(&ExpansionRequest::new(1, 0, 10.0, 5)).unwrap();
        assert!((r.value - 10f64.ln()).abs() < 1e-15);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn k2_near_three() {
        let t = tables();
        let x = Expander::new(&t);
        let r = x.k_ell(&ExpansionRequest::new(2, 0, 3.0, 6)).unwrap();
        assert!((r.value - 0.14722).abs() < 1e-4, "{}", r.value);
        assert!(r.error_estimate > 0.0 && r.error_estimate.is_finite());
    }

    #[test]
    fn kappa_one_closed_form() {
        let t = tables();
        let x = Expander::new(&t);
        let main = x.k_ell_kappa_main(1, 1, 2.0).unwrap();
        assert!((main - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((x.k_ell_kappa_main(1, 0, 10.0).unwrap() - 10f64.ln()).abs() < 1e-15);
        let r = x.k_ell_kappa(&ExpansionRequest::new(1, 1, 5.0, 0)).unwrap();
        assert!((r.value - (5.0 * 5f64.ln() - 4.0)).abs() < 1e-14);
        assert!((r.value - 4.0471896).abs() < 1e-7);
    }

    #[test]
    fn domain_and_extent_errors() {
        let t = tables();
        let x = Expander::new(&t);
        assert!(matches!(
            x.k_ell(&ExpansionRequest::new(3, 0, 2.5, 2)),
            Err(crate::Error::Domain(_))
        ));
        assert!(matches!(
            x.k_ell(&ExpansionRequest::new(2, 0, 5.0, 31)),
            Err(crate::Error::ResourceCap(_))
        ));
        assert!(x.k_ell(&ExpansionRequest::new(2, 1, 5.0, 3)).is_err());
        assert!(x.k_ell(&ExpansionRequest::new(0, 0, 5.0, 3)).is_err());
        assert!(x
            .k_ell_kappa(&ExpansionRequest::new(2, 13, 5.0, 3))
            .is_err());
    }

    #[test]
    fn rho_small_arguments() {
        let t = tables();
        let x = Expander::new(&t);
        let m = Method::Expansion {
            expander: &x,
            terms: DEFAULT_RHO_TERMS,
        };
        assert_eq!(rho(0.5, m).unwrap(), 1.0);
        assert!((rho(2.0, m).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!(rho(-1.0, m).is_err());
        assert!(rho_kappa(1.0, 0, m).is_err());
    }

    #[test]
    fn rho_kappa_closed_forms() {
        let t = tables();
        let x = Expander::new(&t);
        let m = Method::Expansion {
            expander: &x,
            terms: DEFAULT_RHO_TERMS,
        };
        for u in [0.0, 0.3, 1.0] {
            assert!((rho_kappa(u, 2, m).unwrap() - u).abs() < 1e-15);
        }
        let u: f64 = 1.5;
        let want = u - 2.0 * (u * u.ln() - u + 1.0);
        assert!((rho_kappa(u, 2, m).unwrap() - want).abs() < 1e-14);
        assert!((want - 1.2836).abs() < 1e-4);
    }
}
