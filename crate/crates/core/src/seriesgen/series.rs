//! Truncated formal power series in one variable.

use std::ops::{Add, Mul};

use crate::error::{ensure, Result};

/// Coefficients `a_0..=a_N` of a power series truncated after `z^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        ensure!(
            !coeffs.is_empty(),
            InvalidArgument,
            "a series needs at least one coefficient"
        );
        ensure!(
            coeffs.iter().all(|c| c.is_finite()),
            InvalidArgument,
            "series coefficients must be finite"
        );
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = 1.0;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// `exp(self)` for a series with vanishing constant term.
    ///
    /// Uses `b_0 = 1`, `n b_n = sum_{k=1}^{n} k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        ensure!(
            self.coeffs[0] == 0.0,
            InvalidArgument,
            "exp needs a zero constant term, got {}",
            self.coeffs[0]
        );
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0;
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            b[n] = s / n as f64;
        }
        Self::new(b)
    }

    /// `self^m` by repeated multiplication.
    pub fn powi(&self, m: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Sum truncated at the smaller of the two orders.
    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Cauchy product truncated at the smaller of the two orders.
    fn mul(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|i| (0..=i).map(|k| self.coeffs[k] * rhs.coeffs[i - k]).sum())
            .collect();
        TruncatedSeries { coeffs }
    }
}

/// `g(z) = sum_{n>=1} (-1)^{n-1} z^n / (n * n!)`, the integral from 0 to z of `(1 - e^{-t})/t`.
pub fn ein_series(order: usize) -> TruncatedSeries {
    let mut coeffs = vec![0.0; order + 1];
    let mut fact = 1.0;
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        fact *= n as f64;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        *c = sign / (n as f64 * fact);
    }
    TruncatedSeries { coeffs }
}

/// The m-th power of [`ein_series`] truncated at `order`; its `z^j` coefficient is `E_{j,m}`.
pub fn series_int_power(m: u32, order: usize) -> Result<TruncatedSeries> {
    ensure!(
        order >= m as usize,
        InvalidArgument,
        "order {order} must be at least the power {m}"
    );
    Ok(ein_series(order).powi(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exp_of_zero_is_one() {
        let e = TruncatedSeries::zero(5).exp().unwrap();
        assert_eq!(e.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn exp_of_z() {
        let e = TruncatedSeries::new(vec![0.0, 1.0, 0.0, 0.0])
            .unwrap()
            .exp()
            .unwrap();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (a, b) in e.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = TruncatedSeries::new(vec![0.5, 1.0]).unwrap();
        assert!(s.exp().is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TruncatedSeries::new(vec![0.0, f64::NAN]).is_err());
        assert!(TruncatedSeries::new(vec![]).is_err());
    }

    #[test]
    fn base_series_and_its_square() {
        let g = series_int_power(1, 3).unwrap();
        let want = [0.0, 1.0, -0.25, 1.0 / 18.0];
        for (a, b) in g.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-16, "{a} vs {b}");
        }
        let g2 = series_int_power(2, 3).unwrap();
        assert_eq!(g2.coeff(0), 0.0);
        assert_eq!(g2.coeff(1), 0.0);
        assert_eq!(g2.coeff(2), 1.0);
        assert!((g2.coeff(3) + 0.5).abs() < 1e-16);
        assert_eq!(series_int_power(0, 4).unwrap(), TruncatedSeries::one(4));
        assert!(series_int_power(5, 3).is_err());
    }

    #[test]
    fn arithmetic_stays_within_order() {
        let a = TruncatedSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = TruncatedSeries::new(vec![1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a * &b).coeffs(), &[1.0, 3.0, 6.0]);
    }

    proptest! {
        // exp(a + b) = exp(a) exp(b)
        #[test]
        fn exp_is_a_homomorphism(
            a in proptest::collection::vec(-1.0f64..1.0, 6),
            b in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            let mut a = a; a[0] = 0.0;
            let mut b = b; b[0] = 0.0;
            let sa = TruncatedSeries::new(a).unwrap();
            let sb = TruncatedSeries::new(b).unwrap();
            let lhs = (&sa + &sb).exp().unwrap();
            let rhs = &sa.exp().unwrap() * &sb.exp().unwrap();
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
            }
        }
    }
}
