use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bell::BellTable;
use super::series::{series_int_power, TruncatedSeries};
use super::zeta::{zeta_values, ZetaTable};
use crate::error::{ensure, Error, Result};
use crate::numeric::factorial;

/// Written into the cache metadata; bump when the builders change numerically.
pub const BUILDER_VERSION: &str = concat!("dickman-core/", env!("CARGO_PKG_VERSION"));

/// Dickman constants `C_0..=C_rmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickmanConstants {
    c: Vec<f64>,
}

impl DickmanConstants {
    pub fn rmax(&self) -> usize {
        self.c.len() - 1
    }

    pub fn get(&self, r: usize) -> Option<f64> {
        self.c.get(r).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }
}

/// Series route: coefficients of `exp(-sum_{k=2}^{rmax} zeta(k) z^k / k)`.
pub fn dickman_constants(rmax: usize) -> Result<DickmanConstants> {
    let zeta = zeta_values(rmax.max(2) as u32)?;
    let mut log_series = vec![0.0; rmax + 1];
    for (k, a) in log_series.iter_mut().enumerate().skip(2) {
        *a = -zeta.get(k as u32).expect("zeta table covers rmax") / k as f64;
    }
    let c = TruncatedSeries::new(log_series)?.exp()?.into_coeffs();
    Ok(DickmanConstants { c })
}

/// Bell route: `C_r = (1/r!) sum_{k=1}^{r} (-1)^k B_{r,k}(0, 1! zeta(2), 2! zeta(3), ...)`.
pub fn dickman_constants_bell(rmax: usize, zeta: &ZetaTable) -> Result<DickmanConstants> {
    ensure!(
        rmax < 2 || zeta.kmax() as usize >= rmax,
        InvalidArgument,
        "zeta table stops at {} but rmax is {rmax}",
        zeta.kmax()
    );
    // x_i = (i-1)! zeta(i), with x_1 = 0
    let x: Vec<f64> = (1..=rmax)
        .map(|i| {
            if i == 1 {
                0.0
            } else {
                factorial(i as u32 - 1) * zeta.get(i as u32).unwrap()
            }
        })
        .collect();
    let bell = BellTable::new(&x, rmax);
    let mut c = vec![1.0; rmax + 1];
    for (r, cr) in c.iter_mut().enumerate().skip(1) {
        let s: f64 = (1..=r)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * bell.get(r, k))
            .sum();
        *cr = s / factorial(r as u32);
    }
    Ok(DickmanConstants { c })
}

/// Generalized Dickman constants `C_{r,kappa}`, stored with `kappa` as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedDickmanTable {
    rows: Vec<Vec<f64>>,
}

impl GeneralizedDickmanTable {
    pub fn rmax(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn kmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, r: usize, kappa: usize) -> Option<f64> {
        self.rows.get(kappa).and_then(|row| row.get(r)).copied()
    }

    pub fn row(&self, kappa: usize) -> Option<&[f64]> {
        self.rows.get(kappa).map(Vec::as_slice)
    }
}

/// Rows `kappa = 1..=kmax` from `C_{r,kappa} = sum_{j=0}^{r} C_{j,kappa-1} / kappa^{r-j+1}`.
pub fn generalized_dickman(rmax: usize, kmax: usize) -> Result<GeneralizedDickmanTable> {
    Ok(generalized_from_base(&dickman_constants(rmax)?, kmax))
}

fn generalized_from_base(base: &DickmanConstants, kmax: usize) -> GeneralizedDickmanTable {
    let rmax = base.rmax();
    let mut rows = Vec::with_capacity(kmax + 1);
    rows.push(base.c.clone());
    for kappa in 1..=kmax {
        let prev: &Vec<f64> = &rows[kappa - 1];
        let inv = 1.0 / kappa as f64;
        // running sum S_r = sum_j C_{j,k-1} kappa^{j-r-1} satisfies S_r = (S_{r-1} + C_{r,k-1}) / kappa
        let mut row = vec![0.0; rmax + 1];
        let mut acc = 0.0;
        for r in 0..=rmax {
            acc = (acc + prev[r]) * inv;
            row[r] = acc;
        }
        rows.push(row);
    }
    GeneralizedDickmanTable { rows }
}

/// `E_{j,m}` with `m` as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct ECoefficientTable {
    rows: Vec<Vec<f64>>,
}

impl ECoefficientTable {
    pub fn jmax(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn mmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, j: usize, m: usize) -> Option<f64> {
        self.rows.get(m).and_then(|row| row.get(j)).copied()
    }
}

pub fn e_coefficients(jmax: usize, mmax: usize) -> Result<ECoefficientTable> {
    ensure!(
        jmax >= mmax,
        InvalidArgument,
        "jmax ({jmax}) must be at least mmax ({mmax})"
    );
    let rows = (0..=mmax)
        .map(|m| series_int_power(m as u32, jmax).map(TruncatedSeries::into_coeffs))
        .collect::<Result<Vec<_>>>()?;
    Ok(ECoefficientTable { rows })
}

/// Sizes of the three coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableExtents {
    pub rmax: usize,
    pub kmax: usize,
    pub jmax: usize,
    pub mmax: usize,
}

impl Default for TableExtents {
    fn default() -> Self {
        Self {
            rmax: 30,
            kmax: 12,
            jmax: 30,
            mmax: 12,
        }
    }
}

/// Every constant the expansions need, built once and shared read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTables {
    c: DickmanConstants,
    c_kappa: GeneralizedDickmanTable,
    e: ECoefficientTable,
    zeta_kmax: u32,
    builder_version: String,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    rmax: usize,
    kmax: usize,
    jmax: usize,
    mmax: usize,
    #[serde(rename = "C")]
    c: Vec<f64>,
    #[serde(rename = "Ckappa")]
    c_kappa: Vec<Vec<f64>>,
    #[serde(rename = "E")]
    e: Vec<Vec<f64>>,
    meta: CacheMeta,
}

#[derive(Serialize, Deserialize)]
struct CacheMeta {
    zeta_kmax: u32,
    builder_version: String,
}

impl CoefficientTables {
    pub fn build(ext: TableExtents) -> Result<Self> {
        let c = dickman_constants(ext.rmax)?;
        let c_kappa = generalized_from_base(&c, ext.kmax);
        let e = e_coefficients(ext.jmax, ext.mmax)?;
        Ok(Self {
            c,
            c_kappa,
            e,
            zeta_kmax: ext.rmax.max(2) as u32,
            builder_version: BUILDER_VERSION.to_string(),
        })
    }

    pub fn extents(&self) -> TableExtents {
        TableExtents {
            rmax: self.c.rmax(),
            kmax: self.c_kappa.kmax(),
            jmax: self.e.jmax(),
            mmax: self.e.mmax(),
        }
    }

    pub fn dickman(&self) -> &DickmanConstants {
        &self.c
    }

    pub fn generalized(&self) -> &GeneralizedDickmanTable {
        &self.c_kappa
    }

    pub fn e_table(&self) -> &ECoefficientTable {
        &self.e
    }

    pub fn c(&self, r: usize) -> Option<f64> {
        self.c.get(r)
    }

    pub fn c_kappa(&self, r: usize, kappa: usize) -> Option<f64> {
        self.c_kappa.get(r, kappa)
    }

    pub fn e(&self, j: usize, m: usize) -> Option<f64> {
        self.e.get(j, m)
    }

    pub fn to_json(&self) -> Result<String> {
        let ext = self.extents();
        let file = CacheFile {
            rmax: ext.rmax,
            kmax: ext.kmax,
            jmax: ext.jmax,
            mmax: ext.mmax,
            c: self.c.c.clone(),
            c_kappa: self.c_kappa.rows.clone(),
            e: self.e.rows.clone(),
            meta: CacheMeta {
                zeta_kmax: self.zeta_kmax,
                builder_version: self.builder_version.clone(),
            },
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CacheFile = serde_json::from_str(text)?;
        let bad = |what: &str| {
            Err(Error::Cache(format!(
                "{what} does not match the declared extents"
            )))
        };
        if f.c.len() != f.rmax + 1 {
            return bad("C");
        }
        if f.c_kappa.len() != f.kmax + 1 || f.c_kappa.iter().any(|r| r.len() != f.rmax + 1) {
            return bad("Ckappa");
        }
        if f.e.len() != f.mmax + 1 || f.e.iter().any(|r| r.len() != f.jmax + 1) {
            return bad("E");
        }
        if f.c_kappa[0] != f.c {
            return Err(Error::Cache("Ckappa row 0 differs from C".into()));
        }
        Ok(Self {
            c: DickmanConstants { c: f.c },
            c_kappa: GeneralizedDickmanTable { rows: f.c_kappa },
            e: ECoefficientTable { rows: f.e },
            zeta_kmax: f.meta.zeta_kmax,
            builder_version: f.meta.builder_version,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn first_dickman_constants() {
        let c = dickman_constants(1).unwrap();
        assert_eq!(c.values(), &[1.0, 0.0]);

        let z = zeta_values(4).unwrap();
        let (z2, z4) = (z.get(2).unwrap(), z.get(4).unwrap());
        let c = dickman_constants(4).unwrap();
        assert!(rel(c.get(2).unwrap(), -z2 / 2.0) < 1e-15);
        assert!(rel(c.get(2).unwrap(), -0.8224670334241132) < 1e-15);
        assert!(rel(c.get(4).unwrap(), z2 * z2 / 8.0 - z4 / 4.0) < 1e-14);
        // zeta(2)^2 = 5/2 zeta(4), so C_4 = zeta(4)/16
        assert!(rel(c.get(4).unwrap(), z4 / 16.0) < 1e-14);
        assert!((c.get(4).unwrap() - 0.0676452).abs() < 1e-7);
    }

    #[test]
    fn exp_route_order_three() {
        // exp(-zeta(2) z^2/2 - zeta(3) z^3/3)
        let c = dickman_constants(3).unwrap();
        assert!((c.get(2).unwrap() + 0.8224670334).abs() < 1e-10);
        assert!((c.get(3).unwrap() + 0.4006856344).abs() < 1e-10);
    }

    #[test]
    fn bell_route_small_r() {
        let z = zeta_values(2).unwrap();
        let c = dickman_constants_bell(2, &z).unwrap();
        assert_eq!(c.get(0), Some(1.0));
        assert_eq!(c.get(1), Some(0.0));
        assert!(rel(c.get(2).unwrap(), -z.get(2).unwrap() / 2.0) < 1e-16);
        assert!(dickman_constants_bell(5, &z).is_err());
    }

    #[test]
    fn generalized_first_entries() {
        let t = generalized_dickman(4, 3).unwrap();
        assert_eq!(t.get(0, 1), Some(1.0));
        assert_eq!(t.get(1, 1), Some(1.0));
        assert_eq!(t.row(0).unwrap(), dickman_constants(4).unwrap().values());
        assert!(rel(t.get(0, 3).unwrap(), 1.0 / 6.0) < 1e-15);
    }

    #[test]
    fn e_coefficients_small_entries_and_bound() {
        let e = e_coefficients(3, 2).unwrap();
        assert_eq!(e.get(1, 1), Some(1.0));
        assert_eq!(e.get(2, 1), Some(-0.25));
        assert_eq!(e.get(3, 2), Some(-0.5));
        assert!(e.get(3, 2).unwrap().abs() <= 2f64.powi(3) / 6.0);
        assert!(e_coefficients(2, 3).is_err());
    }

    #[test]
    fn cache_round_trip_is_bit_identical() {
        let t = CoefficientTables::build(TableExtents {
            rmax: 10,
            kmax: 4,
            jmax: 12,
            mmax: 5,
        })
        .unwrap();
        let text = t.to_json().unwrap();
        let back = CoefficientTables::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn cache_rejects_shape_mismatch() {
        let t = CoefficientTables::build(TableExtents {
            rmax: 3,
            kmax: 2,
            jmax: 3,
            mmax: 2,
        })
        .unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        v["rmax"] = serde_json::json!(5);
        assert!(CoefficientTables::from_json(&v.to_string()).is_err());
    }
}
