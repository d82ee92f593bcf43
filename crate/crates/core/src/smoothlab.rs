//! Exact smooth-number counts and generalized divisor sums, compared with
//! the rho_kappa prediction `sum_{n in S(x,y)} d_kappa(n) ~ rho_kappa(u) x log^{kappa-1} y`.

use rayon::prelude::*;

use crate::error::{ensure, Result};
use crate::expand::{KBackend, Method};
use crate::numeric::{binomial, format_sig17};

/// Largest `x` the sieve accepts.
pub const MAX_SIEVE_X: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

/// Largest-prime-factor sieve for `n <= x`, processed in segments.
///
/// Only primes up to `min(y, sqrt(x))` are divided out; what remains of `n`
/// afterwards is 1 or a single prime above `sqrt(x)`, which settles both the
/// largest prime factor and the last exponent.
#[derive(Debug, Clone)]
pub struct SmoothSieve {
    x: u64,
    y: u64,
    primes: Vec<u64>,
}

/// One segment of the sieve: `lpf[i]` and `d_kappa[i]` for `n = lo + i`.
#[derive(Debug, Clone)]
pub struct Segment {
    pub lo: u64,
    /// Largest prime factor, with `lpf(1) = 1`.
    pub lpf: Vec<u64>,
    pub d_kappa: Vec<u64>,
}

impl SmoothSieve {
    pub fn new(x: u64, y: u64) -> Result<Self> {
        ensure!(
            x >= 2 && y >= 2,
            InvalidArgument,
            "need x, y >= 2 (x = {x}, y = {y})"
        );
        ensure!(
            x <= MAX_SIEVE_X,
            ResourceCap,
            "x = {x} exceeds the sieve cap {MAX_SIEVE_X}"
        );
        let root = (x as f64).sqrt() as u64 + 1;
        Ok(Self {
            x,
            y,
            primes: primes_up_to(root),
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// Sieves `[lo, hi)` (1-based, `hi <= x + 1`).
    pub fn segment(&self, lo: u64, hi: u64, kappa: u32) -> Segment {
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut lpf = vec![1u64; len];
        let mut dk = vec![1u64; len];
        let weight = |e: u64| binomial(e + kappa as u64 - 1, kappa as u64 - 1);
        for &p in &self.primes {
            if p * p > hi && p > self.y {
                break;
            }
            let mut n = lo.div_ceil(p) * p;
            while n < hi {
                let i = (n - lo) as usize;
                let mut e = 0;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                    e += 1;
                }
                lpf[i] = p;
                dk[i] *= weight(e);
                n += p;
            }
        }
        for i in 0..len {
            if rem[i] > 1 {
                lpf[i] = rem[i];
                dk[i] *= kappa as u64;
            }
        }
        Segment {
            lo,
            lpf,
            d_kappa: dk,
        }
    }

    fn segments(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut lo = 1;
        while lo <= self.x {
            let hi = (lo + SEGMENT).min(self.x + 1);
            out.push((lo, hi));
            lo = hi;
        }
        out
    }

    /// `(Psi(x, y), sum_{n in S(x,y)} d_kappa(n))`; segments run in parallel.
    pub fn totals(&self, kappa: u32) -> Result<(u64, u64)> {
        ensure!(
            (1..=4).contains(&kappa),
            InvalidArgument,
            "kappa must lie in [1, 4], got {kappa}"
        );
        Ok(self
            .segments()
            .into_par_iter()
            .map(|(lo, hi)| {
                let seg = self.segment(lo, hi, kappa);
                seg.lpf
                    .iter()
                    .zip(&seg.d_kappa)
                    .filter(|(&p, _)| p <= self.y)
                    .fold((0u64, 0u64), |(c, s), (_, &d)| (c + 1, s + d))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
    }

    /// `Psi(x, y)`.
    pub fn count(&self) -> u64 {
        self.totals(1).expect("kappa = 1 is valid").0
    }

    /// `flags[n]` is true iff `1 <= n <= x` is y-smooth.
    pub fn smooth_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.x as usize + 1];
        for (lo, hi) in self.segments() {
            let seg = self.segment(lo, hi, 1);
            for (i, &p) in seg.lpf.iter().enumerate() {
                flags[(lo as usize) + i] = p <= self.y;
            }
        }
        flags
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// `Psi(x, y)`, the number of y-smooth integers in `[1, x]`.
pub fn psi(x: u64, y: u64) -> Result<u64> {
    Ok(SmoothSieve::new(x, y)?.count())
}

/// Exact divisor sum over smooth numbers against the rho_kappa prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothSumReport {
    pub x: u64,
    pub y: u64,
    /// `log x / log y`
    pub u: f64,
    pub kappa: u32,
    pub exact: u64,
    pub predicted: f64,
    pub rel_dev: f64,
}

impl SmoothSumReport {
    pub const CSV_HEADER: &'static str = "x,y,u,kappa,exact,predicted,relDev";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.x,
            self.y,
            format_sig17(self.u),
            self.kappa,
            self.exact,
            format_sig17(self.predicted),
            format_sig17(self.rel_dev)
        )
    }
}

pub fn divisor_sum_smooth(
    x: u64,
    y: u64,
    kappa: u32,
    method: Method<'_>,
) -> Result<SmoothSumReport> {
    let sieve = SmoothSieve::new(x, y)?;
    let (_, exact) = sieve.totals(kappa)?;
    let u = (x as f64).ln() / (y as f64).ln();
    let rho = KBackend::new(method)?.rho_kappa(u, kappa)?;
    let predicted = rho * x as f64 * (y as f64).ln().powi(kappa as i32 - 1);
    Ok(SmoothSumReport {
        x,
        y,
        u,
        kappa,
        exact,
        predicted,
        rel_dev: (exact as f64 - predicted).abs() / predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::QuadratureConfig;

    fn lpf_brute(mut n: u64) -> u64 {
        let mut best = 1;
        let mut p = 2;
        while p * p <= n {
            while n.is_multiple_of(p) {
                best = p;
                n /= p;
            }
            p += 1;
        }
        if n > 1 {
            best = n;
        }
        best
    }

    fn d_kappa_brute(n: u64, kappa: u32) -> u64 {
        // ordered kappa-tuples with product n
        if kappa == 1 {
            return 1;
        }
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| d_kappa_brute(n / d, kappa - 1))
            .sum()
    }

    #[test]
    fn powers_of_two() {
        let s = SmoothSieve::new(10, 2).unwrap();
        let flags = s.smooth_flags();
        let smooth: Vec<usize> = (1..=10).filter(|&n| flags[n]).collect();
        assert_eq!(smooth, vec![1, 2, 4, 8]);
        assert_eq!(s.count(), 4);
        assert_eq!(s.totals(2).unwrap(), (4, 10));
    }

    #[test]
    fn psi_100_10() {
        assert_eq!(psi(100, 10).unwrap(), 46);
        let brute = (1..=100u64).filter(|&n| lpf_brute(n) <= 10).count();
        assert_eq!(brute, 46);
    }

    #[test]
    fn segment_matches_brute_force() {
        let s = SmoothSieve::new(5000, 50).unwrap();
        for kappa in 1..=4 {
            let seg = s.segment(1, 2001, kappa);
            for n in 1..=2000u64 {
                let i = (n - 1) as usize;
                assert_eq!(seg.lpf[i], lpf_brute(n), "lpf({n})");
                if n <= 300 {
                    assert_eq!(seg.d_kappa[i], d_kappa_brute(n, kappa), "d_{kappa}({n})");
                }
            }
        }
    }

    #[test]
    fn whole_range_when_y_covers_x() {
        assert_eq!(psi(1000, 1000).unwrap(), 1000);
        assert_eq!(psi(1000, 5000).unwrap(), 1000);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(psi(1, 2).is_err());
        assert!(psi(10, 1).is_err());
        assert!(matches!(
            psi(MAX_SIEVE_X + 1, 10),
            Err(crate::Error::ResourceCap(_))
        ));
        assert!(SmoothSieve::new(100, 10).unwrap().totals(5).is_err());
    }

    #[test]
    fn report_for_tiny_case() {
        let r = divisor_sum_smooth(10, 2, 2, Method::Oracle(QuadratureConfig::default())).unwrap();
        assert_eq!(r.exact, 10);
        assert!(r.u > 3.3 && r.u < 3.33);
        assert!(r.predicted > 0.0);
        let row = r.csv_row();
        assert!(row.starts_with("10,2,"));
        assert_eq!(row.split(',').count(), 7);
    }
}
