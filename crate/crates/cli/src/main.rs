//! `dickman`: evaluate Dickman-type functions and their asymptotic expansions from the shell.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dickman_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "dickman",
    version,
    about = "Dickman function expansions, oracles and smooth-number checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Coefficient cache to load; built at default extents and written here if missing.
    #[arg(long, global = true, value_name = "FILE")]
    pub coeffs: Option<std::path::PathBuf>,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Absolute tolerance for the quadrature oracle.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    Expansion,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RhoMethod {
    /// Alternating sum of oracle K_ell values.
    Sum,
    /// Step-by-step march of the delay equation (kappa = 1 only).
    Ode,
    /// Alternating sum of expansion K_ell values.
    Expansion,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the coefficient tables and write them as JSON.
    Coeffs {
        #[arg(long, default_value_t = 30)]
        rmax: usize,
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        #[arg(long, default_value_t = 30)]
        jmax: usize,
        #[arg(long, default_value_t = 12)]
        mmax: usize,
    },
    /// Evaluate K_ell(u, kappa) by expansion, oracle, or both.
    Eval {
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        kappa: u32,
        #[arg(long)]
        u: f64,
        #[arg(long = "J", default_value_t = 4)]
        terms: u32,
        #[arg(long, value_enum, default_value_t = EvalMethod::Expansion)]
        method: EvalMethod,
    },
    /// Evaluate rho_kappa(u).
    Rho {
        #[arg(long)]
        u: f64,
        #[arg(long, default_value_t = 1)]
        kappa: u32,
        #[arg(long, value_enum, default_value_t = RhoMethod::Sum)]
        method: RhoMethod,
        /// Step of the delay-equation march.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Expansion values on a geometric grid of u.
    Table {
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        kappa: u32,
        #[arg(long = "J", default_value_t = 4)]
        terms: u32,
        #[arg(long = "u-start")]
        u_start: f64,
        #[arg(long = "u-end")]
        u_end: f64,
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
    },
    /// Deviation of the expansion from the oracle for J = 0..J-max.
    Compare {
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        kappa: u32,
        #[arg(long)]
        u: f64,
        #[arg(long = "J-max", default_value_t = 6)]
        terms_max: u32,
    },
    /// Exact smooth divisor sum against the rho_kappa prediction.
    SieveCheck {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = 1)]
        kappa: u32,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 2,
        Error::Domain(_) => 3,
        Error::ResourceCap(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dickman: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
