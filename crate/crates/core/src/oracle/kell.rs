use std::collections::HashMap;

use super::cheb::ChebPatch;
use super::quad::integrate;
use crate::error::{ensure, Result};

/// Largest `ell` the quadrature oracle accepts.
pub const MAX_ORACLE_ELL: u32 = 5;

/// Settings for the quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance per integration level.
    pub tol: f64,
    /// Maximum bisection depth of the adaptive rule.
    pub max_depth: u32,
    /// Chebyshev nodes per unit interval for tabulated inner levels.
    pub cheb_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_depth: 40,
            cheb_nodes: 64,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            (1e-12..=1e-2).contains(&self.tol),
            InvalidArgument,
            "quadrature tolerance must lie in [1e-12, 1e-2], got {:e}",
            self.tol
        );
        ensure!(
            self.max_depth >= 1,
            InvalidArgument,
            "max_depth must be positive"
        );
        ensure!(
            self.cheb_nodes >= 8,
            InvalidArgument,
            "need at least 8 Chebyshev nodes"
        );
        Ok(())
    }
}

/// Quadrature ground truth for `K_ell(u)` and `K_ell(u, kappa)`.
///
/// `K_1(u) = log u` and
/// `K_ell(u) = (1/ell) * integral_1^{u-ell+1} K_{ell-1}(u - t) dt / t`,
/// which is the defining `ell`-fold integral with `t_ell` integrated last.
/// Inner levels (`ell >= 2`) are tabulated on unit intervals `[ell+i, ell+i+1]`
/// as Chebyshev interpolants and memoized in this value, so one oracle reused
/// over a grid of `u` builds every patch once.
#[derive(Debug, Clone)]
pub struct KOracle {
    cfg: QuadratureConfig,
    patches: HashMap<(u32, usize), ChebPatch>,
}

impl KOracle {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            patches: HashMap::new(),
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Number of memoized interpolation patches.
    pub fn cached_patches(&self) -> usize {
        self.patches.len()
    }

    fn check(ell: u32, u: f64) -> Result<()> {
        ensure!(ell >= 1, InvalidArgument, "ell must be at least 1");
        ensure!(
            ell <= MAX_ORACLE_ELL,
            ResourceCap,
            "quadrature oracle supports ell <= {MAX_ORACLE_ELL}, got {ell}"
        );
        ensure!(u.is_finite(), InvalidArgument, "u must be finite, got {u}");
        ensure!(u >= 0.0, Domain, "u must be non-negative, got {u}");
        Ok(())
    }

    /// `K_ell(u)`; exactly zero for `u <= ell`.
    pub fn k_ell(&mut self, ell: u32, u: f64) -> Result<f64> {
        Self::check(ell, u)?;
        if u <= ell as f64 {
            return Ok(0.0);
        }
        if ell == 1 {
            return Ok(u.ln());
        }
        self.ensure_level(ell - 1, u - 1.0)?;
        self.integrate_level(ell, u, self.cfg.tol)
    }

    /// `K_ell(u, kappa) = kappa * integral_ell^u (u - t)^{kappa-1} K_ell(t) dt`; `kappa = 0` is `K_ell(u)`.
    pub fn k_ell_kappa(&mut self, ell: u32, kappa: u32, u: f64) -> Result<f64> {
        Self::check(ell, u)?;
        if kappa == 0 {
            return self.k_ell(ell, u);
        }
        if u <= ell as f64 {
            return Ok(0.0);
        }
        let k = kappa as f64;
        let depth = self.cfg.max_depth;
        if ell == 1 {
            let f = |t: f64| (u - t).powi(kappa as i32 - 1) * t.ln();
            return Ok(k * integrate(&f, 1.0, u, self.cfg.tol / k, depth)?);
        }
        self.ensure_level(ell, u)?;
        let this = &*self;
        let f = |t: f64| (u - t).powi(kappa as i32 - 1) * this.eval_level(ell, t);
        let lo = ell as f64;
        let total = u - lo;
        let mut acc = 0.0;
        let mut a = lo;
        while a < u {
            let b = (a + 1.0).min(u);
            acc += integrate(&f, a, b, self.cfg.tol / k * (b - a) / total, depth)?;
            a = b;
        }
        Ok(k * acc)
    }

    /// `K_level(v)` from the exact formula (level 1) or the tabulated patches.
    fn eval_level(&self, level: u32, v: f64) -> f64 {
        let lo = level as f64;
        if v <= lo {
            return 0.0;
        }
        if level == 1 {
            return v.ln();
        }
        let x = v - lo;
        let i = x.floor() as usize;
        match self.patches.get(&(level, i)) {
            Some(p) => p.eval(v),
            // v sits exactly on the right end of the last built patch
            None => self.patches[&(level, i - 1)].eval(v),
        }
    }

    /// Builds the patches of `level` covering `[level, upto]`.
    fn ensure_level(&mut self, level: u32, upto: f64) -> Result<()> {
        if level <= 1 || upto <= level as f64 {
            return Ok(());
        }
        self.ensure_level(level - 1, upto - 1.0)?;
        let count = (upto - level as f64).ceil() as usize;
        let tol = 0.1 * self.cfg.tol;
        for i in 0..count {
            if self.patches.contains_key(&(level, i)) {
                continue;
            }
            let lo = level as f64 + i as f64;
            let nodes = ChebPatch::nodes(lo, lo + 1.0, self.cfg.cheb_nodes);
            let values = nodes
                .iter()
                .map(|&v| self.integrate_level(level, v, tol))
                .collect::<Result<Vec<_>>>()?;
            self.patches
                .insert((level, i), ChebPatch::from_values(lo, lo + 1.0, &values));
        }
        Ok(())
    }

    /// `(1/level) * integral_1^{u-level+1} K_{level-1}(u - t) dt / t`, split where
    /// `u - t` crosses the patch boundaries of the inner level.
    fn integrate_level(&self, level: u32, u: f64, tol: f64) -> Result<f64> {
        let inner = level - 1;
        let hi = u - inner as f64;
        if hi <= 1.0 {
            return Ok(0.0);
        }
        let depth = self.cfg.max_depth;
        let scale = level as f64;
        if inner == 1 {
            let f = |t: f64| (u - t).ln() / t;
            return Ok(integrate(&f, 1.0, hi, tol * scale, depth)? / scale);
        }
        let f = |t: f64| self.eval_level(inner, u - t) / t;
        let total = hi - 1.0;
        let mut acc = 0.0;
        let mut b = hi;
        while b > 1.0 {
            let a = (b - 1.0).max(1.0);
            acc += integrate(&f, a, b, tol * scale * (b - a) / total, depth)?;
            b = a;
        }
        Ok(acc / scale)
    }
}

/// `K_ell(u)` with a fresh oracle.
pub fn k_ell_oracle(ell: u32, u: f64, cfg: QuadratureConfig) -> Result<f64> {
    KOracle::new(cfg)?.k_ell(ell, u)
}

/// `K_ell(u, kappa)` with a fresh oracle.
pub fn k_ell_kappa_oracle(ell: u32, kappa: u32, u: f64, cfg: QuadratureConfig) -> Result<f64> {
    KOracle::new(cfg)?.k_ell_kappa(ell, kappa, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::with_tol(1e-12)
    }

    #[test]
    fn vanishes_on_empty_domain() {
        assert_eq!(k_ell_oracle(2, 2.0, cfg()).unwrap(), 0.0);
        assert_eq!(k_ell_oracle(3, 1.5, cfg()).unwrap(), 0.0);
        assert_eq!(k_ell_kappa_oracle(2, 3, 2.0, cfg()).unwrap(), 0.0);
        assert_eq!(k_ell_kappa_oracle(1, 2, 1.0, cfg()).unwrap(), 0.0);
    }

    #[test]
    fn level_one_is_log() {
        assert_eq!(k_ell_oracle(1, 7.0, cfg()).unwrap(), 7f64.ln());
        assert!((k_ell_oracle(1, 7.0, cfg()).unwrap() - 1.9459101).abs() < 1e-7);
    }

    #[test]
    fn k2_at_three() {
        // K_2(u) = int_2^u log(s-1)/s ds, so K_2(3) is a dilogarithm value;
        // compare with a composite Simpson rule on the derivative form.
        let n = 20_000;
        let h = 1.0 / n as f64;
        let g = |s: f64| (s - 1.0).ln() / s;
        let mut simpson = g(2.0) + g(3.0);
        for i in 1..n {
            let s = 2.0 + i as f64 * h;
            simpson += if i % 2 == 1 { 4.0 } else { 2.0 } * g(s);
        }
        simpson *= h / 3.0;
        let k2 = k_ell_oracle(2, 3.0, cfg()).unwrap();
        assert!((k2 - simpson).abs() < 1e-13, "{k2} vs {simpson}");
        assert!((k2 - 0.14722).abs() < 1e-5);
    }

    #[test]
    fn convolution_closed_forms() {
        let v = k_ell_kappa_oracle(1, 1, 2.0, cfg()).unwrap();
        assert!((v - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-14);
        // 2 * int_1^3 (3 - t) log t dt = 9 log 3 - 8
        let v = k_ell_kappa_oracle(1, 2, 3.0, cfg()).unwrap();
        assert!((v - (9.0 * 3f64.ln() - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn kappa_zero_delegates() {
        let a = k_ell_kappa_oracle(3, 0, 7.3, cfg()).unwrap();
        let b = k_ell_oracle(3, 7.3, cfg()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(k_ell_oracle(6, 10.0, cfg()).is_err());
        assert!(k_ell_oracle(0, 10.0, cfg()).is_err());
        assert!(k_ell_oracle(2, f64::NAN, cfg()).is_err());
        assert!(k_ell_oracle(2, -1.0, cfg()).is_err());
        assert!(QuadratureConfig::with_tol(1e-14).validate().is_err());
        assert!(QuadratureConfig::with_tol(0.1).validate().is_err());
    }

    #[test]
    fn derivative_identity_for_levels() {
        // u K_ell'(u) = K_{ell-1}(u - 1)
        let mut o = KOracle::new(cfg()).unwrap();
        for (ell, u) in [(2u32, 4.5), (3, 5.5), (4, 6.25)] {
            let h = 1e-4;
            let d = (o.k_ell(ell, u + h).unwrap() - o.k_ell(ell, u - h).unwrap()) / (2.0 * h);
            let rhs = o.k_ell(ell - 1, u - 1.0).unwrap() / u;
            assert!(
                (d - rhs).abs() <= 1e-7 * rhs.abs().max(1e-3),
                "ell={ell}: {d} vs {rhs}"
            );
        }
        assert!(o.cached_patches() > 0);
    }
}
