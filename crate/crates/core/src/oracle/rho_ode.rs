use crate::error::{ensure, Result};

/// Largest argument the march accepts; rho is below 1e-60 long before this.
pub const MAX_RHO_U: f64 = 200.0;

/// Dickman's rho tabulated by marching `rho'(u) = -rho(u - 1) / u` one unit
/// interval at a time from `rho = 1` on `[0, 1]`.
///
/// On `[n, n+1]`, `rho(n + s) = rho(n) - integral_n^{n+s} rho(t - 1) / t dt`
/// and the integrand is already tabulated on the previous interval, so each
/// step is an explicit fourth-order cumulative quadrature on the fixed grid.
/// Integers are grid points, so no rule straddles a kink.
#[derive(Debug, Clone)]
pub struct RhoOde {
    per_unit: usize,
    // intervals[i][k] = rho(i + k / per_unit), k = 0..=per_unit
    intervals: Vec<Vec<f64>>,
}

impl RhoOde {
    /// Tabulates rho on `[0, umax]` with grid spacing at most `step`.
    pub fn new(umax: f64, step: f64) -> Result<Self> {
        ensure!(
            step > 0.0 && step <= 1e-3,
            InvalidArgument,
            "step must lie in (0, 1e-3], got {step}"
        );
        ensure!(umax.is_finite(), InvalidArgument, "u must be finite");
        ensure!(umax >= 0.0, Domain, "rho is defined for u >= 0, got {umax}");
        ensure!(
            umax <= MAX_RHO_U,
            ResourceCap,
            "rho march capped at u = {MAX_RHO_U}"
        );
        let per_unit = (1.0 / step).ceil() as usize;
        let h = 1.0 / per_unit as f64;
        let units = (umax.ceil() as usize).max(1);

        let mut intervals = vec![vec![1.0; per_unit + 1]];
        for n in 1..units {
            let prev = &intervals[n - 1];
            let f: Vec<f64> = (0..=per_unit)
                .map(|k| prev[k] / (n as f64 + k as f64 * h))
                .collect();
            let start = prev[per_unit];
            let row = cumulative_integral(&f, h)
                .into_iter()
                .map(|i| start - i)
                .collect();
            intervals.push(row);
        }
        Ok(Self {
            per_unit,
            intervals,
        })
    }

    pub fn umax(&self) -> f64 {
        self.intervals.len() as f64
    }

    pub fn step(&self) -> f64 {
        1.0 / self.per_unit as f64
    }

    /// rho(u) by cubic interpolation inside the unit interval holding `u`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        ensure!(u >= 0.0, Domain, "rho is defined for u >= 0, got {u}");
        ensure!(
            u <= self.umax(),
            Domain,
            "u = {u} lies beyond the tabulated range"
        );
        if u <= 1.0 {
            return Ok(1.0);
        }
        let n = (u.floor() as usize).min(self.intervals.len() - 1);
        let row = &self.intervals[n];
        let s = (u - n as f64) * self.per_unit as f64;
        let k = (s.floor() as usize).min(self.per_unit);
        if s == k as f64 {
            return Ok(row[k]);
        }
        let first = k.saturating_sub(1).min(self.per_unit - 3);
        let xs: [f64; 4] = std::array::from_fn(|i| (first + i) as f64);
        let ys: [f64; 4] = std::array::from_fn(|i| row[first + i]);
        Ok(lagrange4(&xs, &ys, s))
    }
}

/// `I_k = integral_0^{k h} f` for every grid point, fourth order throughout.
fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    let mut out = vec![0.0; n + 1];
    // even k: composite Simpson from 0
    for k in (2..=n).step_by(2) {
        out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    // odd k >= 3: Simpson to k-3, then the 3/8 rule
    for k in (3..=n).step_by(2) {
        out[k] = out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }
    out
}

fn lagrange4(xs: &[f64; 4], ys: &[f64; 4], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        let mut w = ys[i];
        for j in 0..4 {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += w;
    }
    acc
}

/// rho(u) from a fresh march with spacing `step`.
pub fn rho_ode(u: f64, step: f64) -> Result<f64> {
    RhoOde::new(u, step)?.eval(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_patch() {
        assert_eq!(rho_ode(0.0, 1e-3).unwrap(), 1.0);
        assert_eq!(rho_ode(0.5, 1e-3).unwrap(), 1.0);
        assert_eq!(rho_ode(1.0, 1e-3).unwrap(), 1.0);
    }

    #[test]
    fn second_unit_interval_is_one_minus_log() {
        for u in [1.25, 1.5, 1.777, 2.0] {
            let r = rho_ode(u, 1e-4).unwrap();
            assert!((r - (1.0 - u.ln())).abs() < 1e-12, "u={u}: {r}");
        }
    }

    #[test]
    fn known_values() {
        let t = RhoOde::new(4.0, 1e-4).unwrap();
        assert!((t.eval(3.0).unwrap() - 0.0486084).abs() < 1e-7);
        assert!((t.eval(4.0).unwrap() - 0.00491093).abs() < 1e-8);
    }

    #[test]
    fn coarse_and_fine_steps_agree() {
        let a = rho_ode(5.3, 1e-3).unwrap();
        let b = rho_ode(5.3, 1e-4).unwrap();
        assert!((a - b).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(rho_ode(-0.1, 1e-4).is_err());
        assert!(rho_ode(2.0, 1e-2).is_err());
        assert!(rho_ode(2.0, 0.0).is_err());
        assert!(rho_ode(1e4, 1e-3).is_err());
    }

    #[test]
    fn cumulative_rule_exactness() {
        let h = 0.1;
        let quad: Vec<f64> = (0..=10).map(|k| (k as f64 * h).powi(2)).collect();
        let cubic: Vec<f64> = (0..=10).map(|k| (k as f64 * h).powi(3)).collect();
        let iq = cumulative_integral(&quad, h);
        let ic = cumulative_integral(&cubic, h);
        for k in 0..=10 {
            let x = k as f64 * h;
            assert!((iq[k] - x.powi(3) / 3.0).abs() < 1e-15, "k={k}");
            // the one-step starter is only exact to degree two
            if k != 1 {
                assert!((ic[k] - x.powi(4) / 4.0).abs() < 1e-15, "k={k}");
            }
        }
    }
}
