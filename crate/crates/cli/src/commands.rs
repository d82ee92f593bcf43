use std::io::Write;
use std::path::Path;

use dickman_core::smoothlab::SmoothSumReport;
use dickman_core::{
    divisor_sum_smooth, CoefficientTables, Error, Expander, ExpansionRequest, KBackend, KOracle,
    Method, QuadratureConfig, Result, RhoOde, TableExtents, DEFAULT_RHO_TERMS,
};
use rayon::prelude::*;

use crate::output::{Cell, Table};
use crate::{Cli, Command, Common, EvalMethod, Format, RhoMethod};

/// Most grid points a single `table` run may produce.
pub const MAX_GRID_POINTS: usize = 100_000;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn quadrature(common: &Common) -> Result<QuadratureConfig> {
    let cfg = QuadratureConfig::with_tol(common.tol);
    cfg.validate()?;
    Ok(cfg)
}

fn load_tables(common: &Common) -> Result<CoefficientTables> {
    match &common.coeffs {
        Some(path) if path.exists() => CoefficientTables::load(path),
        Some(path) => {
            let t = CoefficientTables::build(TableExtents::default())?;
            t.save(path)?;
            Ok(t)
        }
        None => CoefficientTables::build(TableExtents::default()),
    }
}

fn emit(common: &Common, body: &str) -> Result<()> {
    match &common.out {
        Some(path) => write_file(path, body.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)?;
    Ok(())
}

fn render(common: &Common, table: &Table) -> String {
    match common.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn geometric_grid(start: f64, end: f64, factor: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite() && factor.is_finite()) {
        return Err(usage("grid bounds and factor must be finite"));
    }
    if start <= 0.0 || end < start {
        return Err(usage(format!(
            "need 0 < u-start <= u-end, got {start} and {end}"
        )));
    }
    if factor <= 1.0 {
        return Err(usage(format!("factor must exceed 1, got {factor}")));
    }
    let n = ((end / start).ln() / factor.ln() + 1e-9).floor() as usize + 1;
    if n > MAX_GRID_POINTS {
        return Err(Error::ResourceCap(format!(
            "grid has {n} points, limit is {MAX_GRID_POINTS}"
        )));
    }
    Ok((0..n).map(|i| start * factor.powi(i as i32)).collect())
}

pub fn run(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    quadrature(common)?;
    match &cli.command {
        Command::Coeffs {
            rmax,
            kmax,
            jmax,
            mmax,
        } => {
            let ext = TableExtents {
                rmax: *rmax,
                kmax: *kmax,
                jmax: *jmax,
                mmax: *mmax,
            };
            let json = CoefficientTables::build(ext)?.to_json()?;
            emit(common, &json)
        }
        Command::Eval {
            ell,
            kappa,
            u,
            terms,
            method,
        } => {
            let table = eval(common, *ell, *kappa, *u, *terms, *method)?;
            emit(common, &render(common, &table))
        }
        Command::Rho {
            u,
            kappa,
            method,
            step,
        } => {
            let table = rho(common, *u, *kappa, *method, *step)?;
            emit(common, &render(common, &table))
        }
        Command::Table {
            ell,
            kappa,
            terms,
            u_start,
            u_end,
            factor,
        } => {
            let grid = geometric_grid(*u_start, *u_end, *factor)?;
            let tables = load_tables(common)?;
            let expander = Expander::new(&tables);
            let rows = grid
                .par_iter()
                .map(|&u| {
                    let r =
                        expander.k_ell_kappa(&ExpansionRequest::new(*ell, *kappa, u, *terms))?;
                    Ok(vec![
                        u.into(),
                        (*ell).into(),
                        (*kappa).into(),
                        (*terms).into(),
                        r.value.into(),
                        r.error_estimate.into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            let mut table = Table::new(&["u", "ell", "kappa", "J", "value", "errorEstimate"]);
            rows.into_iter().for_each(|r| table.push(r));
            emit(common, &render(common, &table))
        }
        Command::Compare {
            ell,
            kappa,
            u,
            terms_max,
        } => {
            let table = compare(common, *ell, *kappa, *u, *terms_max)?;
            emit(common, &render(common, &table))
        }
        Command::SieveCheck { x, y, kappa } => {
            let report = divisor_sum_smooth(*x, *y, *kappa, Method::Oracle(quadrature(common)?))?;
            let mut table = Table::new(&["x", "y", "u", "kappa", "exact", "predicted", "relDev"]);
            table.push(report_row(&report));
            emit(common, &render(common, &table))
        }
    }
}

fn report_row(r: &SmoothSumReport) -> Vec<Cell> {
    vec![
        r.x.into(),
        r.y.into(),
        r.u.into(),
        r.kappa.into(),
        r.exact.into(),
        r.predicted.into(),
        r.rel_dev.into(),
    ]
}

fn eval(
    common: &Common,
    ell: u32,
    kappa: u32,
    u: f64,
    terms: u32,
    method: EvalMethod,
) -> Result<Table> {
    let mut table = Table::new(&[
        "ell",
        "kappa",
        "u",
        "J",
        "method",
        "value",
        "errorEstimate",
        "oracle",
        "deviation",
    ]);
    let head =
        |m: &str| -> Vec<Cell> { vec![ell.into(), kappa.into(), u.into(), terms.into(), m.into()] };
    let expansion = || -> Result<(f64, f64)> {
        let tables = load_tables(common)?;
        let r = Expander::new(&tables).k_ell_kappa(&ExpansionRequest::new(ell, kappa, u, terms))?;
        Ok((r.value, r.error_estimate))
    };
    let oracle =
        || -> Result<f64> { KOracle::new(quadrature(common)?)?.k_ell_kappa(ell, kappa, u) };
    let row = match method {
        EvalMethod::Expansion => {
            let (v, e) = expansion()?;
            [
                head("expansion"),
                vec![v.into(), e.into(), f64::NAN.into(), f64::NAN.into()],
            ]
            .concat()
        }
        EvalMethod::Oracle => {
            let o = oracle()?;
            [
                head("oracle"),
                vec![o.into(), common.tol.into(), o.into(), 0.0.into()],
            ]
            .concat()
        }
        EvalMethod::Both => {
            let (v, e) = expansion()?;
            let o = oracle()?;
            [
                head("both"),
                vec![v.into(), e.into(), o.into(), (v - o).abs().into()],
            ]
            .concat()
        }
    };
    table.push(row);
    Ok(table)
}

fn rho(common: &Common, u: f64, kappa: u32, method: RhoMethod, step: f64) -> Result<Table> {
    let value = match method {
        RhoMethod::Ode => {
            if kappa != 1 {
                return Err(usage("the ode method only covers kappa = 1"));
            }
            if !u.is_finite() {
                return Err(usage(format!("u must be finite, got {u}")));
            }
            RhoOde::new(u.max(1.0), step)?.eval(u)?
        }
        RhoMethod::Sum => {
            KBackend::new(Method::Oracle(quadrature(common)?))?.rho_kappa(u, kappa)?
        }
        RhoMethod::Expansion => {
            let tables = load_tables(common)?;
            let expander = Expander::new(&tables);
            KBackend::new(Method::Expansion {
                expander: &expander,
                terms: DEFAULT_RHO_TERMS,
            })?
            .rho_kappa(u, kappa)?
        }
    };
    let name = match method {
        RhoMethod::Sum => "sum",
        RhoMethod::Ode => "ode",
        RhoMethod::Expansion => "expansion",
    };
    let mut table = Table::new(&["u", "kappa", "method", "value"]);
    table.push(vec![u.into(), kappa.into(), name.into(), value.into()]);
    Ok(table)
}

fn compare(common: &Common, ell: u32, kappa: u32, u: f64, terms_max: u32) -> Result<Table> {
    let tables = load_tables(common)?;
    let expander = Expander::new(&tables);
    let truth = KOracle::new(quadrature(common)?)?.k_ell_kappa(ell, kappa, u)?;
    let rows = (0..=terms_max)
        .into_par_iter()
        .map(|j| {
            let r = expander.k_ell_kappa(&ExpansionRequest::new(ell, kappa, u, j))?;
            Ok(vec![
                j.into(),
                r.value.into(),
                truth.into(),
                (r.value - truth).abs().into(),
                r.error_estimate.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["J", "value", "oracle", "deviation", "errorEstimate"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
