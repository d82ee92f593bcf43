//! Riemann zeta at integers `k >= 2` by Euler-Maclaurin summation.

use crate::error::{ensure, Result};

// B_{2j} for j = 1..=12.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const HEAD_TERMS: u32 = 12;

/// `zeta(2), ..., zeta(kmax)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTable {
    values: Vec<f64>,
}

impl ZetaTable {
    pub fn kmax(&self) -> u32 {
        self.values.len() as u32 + 1
    }

    /// `zeta(k)` for `2 <= k <= kmax`.
    pub fn get(&self, k: u32) -> Option<f64> {
        if k < 2 {
            return None;
        }
        self.values.get(k as usize - 2).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn zeta_values(kmax: u32) -> Result<ZetaTable> {
    ensure!(
        kmax >= 2,
        InvalidArgument,
        "kmax must be at least 2, got {kmax}"
    );
    Ok(ZetaTable {
        values: (2..=kmax).map(zeta_int).collect(),
    })
}

/// `zeta(s)` for integer `s >= 2`.
///
/// Head `sum_{n<N} n^{-s}` plus the Euler-Maclaurin tail at `N = 12` with twelve
/// Bernoulli corrections; the remainder is far below one ulp for every `s >= 2`.
fn zeta_int(s: u32) -> f64 {
    let sf = s as f64;
    let n = HEAD_TERMS as f64;
    let n_pow = n.powi(-(s as i32));

    let mut tail = n * n_pow / (sf - 1.0) + 0.5 * n_pow;
    // rising = s (s+1) ... (s+2j-2), fact = (2j)!
    let mut rising = sf;
    let mut fact = 2.0;
    let mut power = n_pow / n;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = j as f64 + 1.0;
        if j > 1.0 {
            rising *= (sf + 2.0 * j - 3.0) * (sf + 2.0 * j - 2.0);
            fact *= (2.0 * j - 1.0) * (2.0 * j);
            power /= n * n;
        }
        tail += b / fact * rising * power;
    }

    // smallest terms first
    let mut head = tail;
    for k in (2..HEAD_TERMS).rev() {
        head += (k as f64).powi(-(s as i32));
    }
    1.0 + head
}
