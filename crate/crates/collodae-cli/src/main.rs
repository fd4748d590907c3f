//! `collodae` — batch experiment runner for the least-squares collocation
//! library.
//!
//! Sweeps (basis, N, n, variant) grids for one of six experiments and writes
//! one table per reported quantity, as CSV (full precision) or markdown
//! (three significant digits). Configuration comes from an optional
//! KEY=VALUE file plus flag overrides; flags win.
//!
//! Exit codes: 0 success, 2 configuration error, 3 internal numeric failure.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::Settings;

/// Error type carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit code 2).
    Config(String),
    /// Internal numeric or I/O failure during the sweep (exit code 3).
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> CliError {
        CliError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> CliError {
        CliError::Numeric(msg.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "collodae",
    about = "Experiment runner for least-squares collocation of linear boundary-value DAEs",
    disable_help_subcommand = true
)]
struct Cli {
    /// KEY=VALUE config file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Experiment: repmap-conditioning | constraint-conditioning |
    /// system-conditioning | solve | convergence | projection-test.
    #[arg(long)]
    experiment: Option<String>,

    /// Comma-separated basis list (legendre, modified-legendre, chebyshev,
    /// runge-kutta; short forms L, mL, Ch, RK) or "all".
    #[arg(long)]
    basis: Option<String>,

    /// Comma-separated ansatz degrees, e.g. "3,5,10,20".
    #[arg(long = "N", value_name = "LIST")]
    degrees: Option<String>,

    /// Comma-separated grid sizes, e.g. "10,20,40,80,160,320".
    #[arg(long = "n", value_name = "LIST")]
    grids: Option<String>,

    /// Comma-separated functional variants (C, I, R).
    #[arg(long)]
    variant: Option<String>,

    /// Collocation points per interval: "N+k" or a fixed integer
    /// (default N+1).
    #[arg(long = "M", value_name = "RULE")]
    m_rule: Option<String>,

    /// Collocation node family: gauss-legendre (default) or uniform.
    #[arg(long)]
    nodes: Option<String>,

    /// Benchmark problem: index3 (default), hessenberg2, campbell-moore.
    #[arg(long)]
    problem: Option<String>,

    /// Decay parameter η (index3, hessenberg2).
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,

    /// Parameter λ (hessenberg2).
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// Spring constant ρ ≠ 0 (campbell-moore).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,

    /// Boundary-row weighting: unscaled (default) or sqrt-mean-step.
    #[arg(long)]
    boundary: Option<String>,

    /// Output directory (default: current directory).
    #[arg(long)]
    out: Option<String>,

    /// Output format: csv (default) or md.
    #[arg(long)]
    format: Option<String>,
}

impl Cli {
    fn flag_settings(&self) -> Settings {
        Settings {
            experiment: self.experiment.clone(),
            basis: self.basis.clone(),
            degrees: self.degrees.clone(),
            grids: self.grids.clone(),
            variant: self.variant.clone(),
            m_rule: self.m_rule.clone(),
            nodes: self.nodes.clone(),
            problem: self.problem.clone(),
            eta: self.eta,
            lambda: self.lambda,
            rho: self.rho,
            boundary: self.boundary.clone(),
            out_dir: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file_settings = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let config = file_settings.overlay(cli.flag_settings()).resolve()?;
    let tables = experiments::run(&config)?;

    // per-cell failures never abort a sweep; surface them on stderr
    let failed: usize = tables
        .iter()
        .flat_map(|t| t.cells.iter().flatten())
        .filter(|c| c.is_err())
        .count();
    if failed > 0 {
        let mut seen = Vec::new();
        for table in &tables {
            for (row, n) in table.grids.iter().enumerate() {
                for (col, cell) in table.cells[row].iter().enumerate() {
                    if let Err(reason) = cell {
                        if !seen.contains(reason) {
                            eprintln!(
                                "warning: {} N={} n={n} basis={}: {reason}",
                                table.quantity,
                                table.degree,
                                table.bases[col].label()
                            );
                            seen.push(reason.clone());
                        }
                    }
                }
            }
        }
        eprintln!("warning: {failed} cell(s) failed; recorded as nan (csv) / n/a (md)");
    }

    for path in output::write_tables(&config, &tables)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version exit 0; real usage errors are config errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Numeric(_)) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
