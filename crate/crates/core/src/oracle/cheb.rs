//! Chebyshev interpolation on a closed interval.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct ChebPatch {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl ChebPatch {
    /// First-kind Chebyshev nodes of `[lo, hi]`.
    pub fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| {
                let x = (PI * (k as f64 + 0.5) / n as f64).cos();
                0.5 * (lo + hi) + 0.5 * (hi - lo) * x
            })
            .collect()
    }

    /// Interpolant through `values` sampled at [`ChebPatch::nodes`].
    pub fn from_values(lo: f64, hi: f64, values: &[f64]) -> Self {
        let n = values.len();
        let coeffs = (0..n)
            .map(|j| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * s / n as f64;
                if j == 0 {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect();
        Self { lo, hi, coeffs }
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Magnitude of the last two coefficients; a cheap interpolation error proxy.
    pub fn tail(&self) -> f64 {
        self.coeffs.iter().rev().take(2).map(|c| c.abs()).sum()
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, v: f64) -> f64 {
        let x = (2.0 * v - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }
}
