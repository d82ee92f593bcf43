//! Partial exponential Bell polynomials.

/// Table of `B_{n,k}(x_1, ..., x_{n-k+1})` for `0 <= k <= n <= nmax`.
///
/// `x[i]` holds `x_{i+1}`. Built with the recurrence
/// `B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B_{n-i,k-1}`, `B_{0,0} = 1`.
#[derive(Debug, Clone)]
pub struct BellTable {
    rows: Vec<Vec<f64>>,
}

impl BellTable {
    pub fn new(x: &[f64], nmax: usize) -> Self {
        assert!(x.len() >= nmax, "need x_1..x_nmax");
        let binom = binomial_rows(nmax);
        let mut rows = vec![vec![0.0; nmax + 1]; nmax + 1];
        rows[0][0] = 1.0;
        for n in 1..=nmax {
            for k in 1..=n {
                let mut acc = 0.0;
                for i in 1..=(n - k + 1) {
                    acc += binom[n - 1][i - 1] * x[i - 1] * rows[n - i][k - 1];
                }
                rows[n][k] = acc;
            }
        }
        Self { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> f64 {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .copied()
            .unwrap_or(0.0)
    }
}

fn binomial_rows(nmax: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; nmax + 1]; nmax + 1];
    for n in 0..=nmax {
        rows[n][0] = 1.0;
        for k in 1..=n {
            rows[n][k] = rows[n - 1][k - 1] + if k < n { rows[n - 1][k] } else { 0.0 };
        }
    }
    rows
}
