//! Finite sums `sum c_{a,b} log^a(u) u^{-b}`, closed under `d/du`.
//!
//! Derivatives of `log^k u` of any order live in this space, so they are
//! computed exactly from the term rule
//! `d/du [log^a u * u^{-b}] = (a log^{a-1} u - b log^a u) u^{-b-1}`.

use std::collections::BTreeMap;
use std::ops::Add;

use crate::error::{ensure, Result};
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogLaurentPoly {
    // (log power a, inverse power b) -> coefficient; zero entries are never stored
    terms: BTreeMap<(u32, u32), f64>,
}

impl LogLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(log_power: u32, inv_power: u32, coeff: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(log_power, inv_power, coeff);
        p
    }

    /// `log^k u`.
    pub fn log_power(k: u32) -> Self {
        Self::term(k, 0, 1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, log_power: u32, inv_power: u32) -> f64 {
        self.terms
            .get(&(log_power, inv_power))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    fn add_term(&mut self, a: u32, b: u32, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            out.add_term(a, b, c * s);
        }
        out
    }

    fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b + 1, c * a as f64);
            }
            if b > 0 {
                out.add_term(a, b + 1, -c * b as f64);
            }
        }
        out
    }

    /// The `times`-fold derivative in `u`.
    pub fn differentiate(&self, times: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..times {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// Value at `u > 0`, accumulated with compensated summation.
    pub fn evaluate(&self, u: f64) -> Result<f64> {
        ensure!(
            u > 0.0 && u.is_finite(),
            Domain,
            "log-Laurent evaluation needs finite u > 0, got {u}"
        );
        let l = u.ln();
        let inv = 1.0 / u;
        let mut acc = CompensatedSum::new();
        for (&(a, b), &c) in &self.terms {
            acc.add(c * l.powi(a as i32) * inv.powi(b as i32));
        }
        Ok(acc.value())
    }
}

impl Add for &LogLaurentPoly {
    type Output = LogLaurentPoly;

    fn add(self, rhs: Self) -> LogLaurentPoly {
        let mut out = self.clone();
        for (&(a, b), &c) in &rhs.terms {
            out.add_term(a, b, c);
        }
        out
    }
}

/// `(log^k u)^{(j)}` for all `k <= kmax`, `j <= jmax`, indexed `[k][j]`.
#[derive(Debug, Clone)]
pub struct LogDerivativeTable {
    polys: Vec<Vec<LogLaurentPoly>>,
}

impl LogDerivativeTable {
    pub fn new(kmax: u32, jmax: u32) -> Self {
        let polys = (0..=kmax)
            .map(|k| {
                let mut row = Vec::with_capacity(jmax as usize + 1);
                let mut p = LogLaurentPoly::log_power(k);
                for _ in 0..=jmax {
                    let next = p.differentiate(1);
                    row.push(p);
                    p = next;
                }
                row
            })
            .collect();
        Self { polys }
    }

    pub fn get(&self, k: u32, j: u32) -> &LogLaurentPoly {
        &self.polys[k as usize][j as usize]
    }
}
