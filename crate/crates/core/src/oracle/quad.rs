//! Adaptive Gauss-Legendre quadrature.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1] by Newton iteration.
fn legendre_rule(n: usize) -> Rule {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed 15-point rule on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let s: f64 = r
        .nodes
        .iter()
        .zip(&r.weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum();
    s * half
}

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// An interval is accepted when the 15-point rule on the whole and on the two
/// halves agree within the local tolerance (or within rounding of the value);
/// otherwise both halves are refined with half the tolerance each.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss_legendre(f, a, b);
    refine(f, a, b, whole, tol, max_depth)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = gauss_legendre(f, a, m);
    let right = gauss_legendre(f, m, b);
    let halves = left + right;
    if !halves.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    let diff = (halves - whole).abs();
    if diff <= tol || diff <= 64.0 * f64::EPSILON * halves.abs() {
        return Ok(halves);
    }
    if depth == 0 {
        return Err(Error::ResourceCap(format!(
            "adaptive quadrature did not reach {tol:e} on [{a}, {b}] (estimate {diff:e})"
        )));
    }
    Ok(
        refine(f, a, m, left, 0.5 * tol, depth - 1)?
            + refine(f, m, b, right, 0.5 * tol, depth - 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let r = rule();
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 29 is the limit for 15 points
        let v = gauss_legendre(&|x: f64| x.powi(28), -1.0, 1.0);
        assert!((v - 2.0 / 29.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_log_integrals() {
        let v = integrate(&|t: f64| t.ln(), 1.0, 2.0, 1e-12, 30).unwrap();
        assert!((v - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        let v = integrate(&|t: f64| 1.0 / t, 1.0, 1e4, 1e-12, 40).unwrap();
        assert!((v - 1e4f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn degenerate_interval() {
        assert_eq!(integrate(&|t: f64| t, 3.0, 3.0, 1e-10, 10).unwrap(), 0.0);
    }

    #[test]
    fn depth_exhaustion_is_reported() {
        let r = integrate(&|t: f64| (1.0 / t).sin(), 1e-9, 1.0, 1e-12, 3);
        assert!(matches!(r, Err(Error::ResourceCap(_))));
    }
}
