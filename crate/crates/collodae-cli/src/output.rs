//! CSV and markdown table writers.
//!
//! CSV carries full-precision values (shortest round-trip decimal); markdown
//! rounds for display to three significant digits in `5.77e+4` style. Both
//! start with a metadata header recording every parameter of the sweep, and
//! neither embeds anything non-deterministic, so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use collodae::WeightVariant;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::experiments::Table;
use crate::CliError;

/// Three-significant-digit scientific notation with an explicit exponent
/// sign: 57723.4 → "5.77e+4".
pub fn fmt_sci3(x: f64) -> String {
    if !x.is_finite() {
        return "n/a".to_string();
    }
    let s = format!("{x:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// Full-precision cell: shortest decimal that round-trips the f64.
fn fmt_full(cell: &Result<f64, String>) -> String {
    match cell {
        Ok(v) if v.is_finite() => format!("{v}"),
        _ => "nan".to_string(),
    }
}

fn fmt_display(cell: &Result<f64, String>) -> String {
    match cell {
        Ok(v) => fmt_sci3(*v),
        Err(_) => "n/a".to_string(),
    }
}

fn metadata_lines(config: &ExperimentConfig, comment: &str) -> String {
    let mut out = String::new();
    let bases: Vec<&str> = config.bases.iter().map(|b| b.label()).collect();
    let grids: Vec<String> = config.grids.iter().map(|n| n.to_string()).collect();
    let degrees: Vec<String> = config.degrees.iter().map(|d| d.to_string()).collect();
    let variants: Vec<&str> = config.variants.iter().map(|v| v.label()).collect();
    let _ = writeln!(out, "{comment} experiment: {}", config.experiment.label());
    let _ = writeln!(out, "{comment} problem: {}", config.problem.describe());
    let _ = writeln!(out, "{comment} bases: {}", bases.join(","));
    let _ = writeln!(out, "{comment} N: {}", degrees.join(","));
    let _ = writeln!(out, "{comment} n: {}", grids.join(","));
    if config.experiment.uses_variant() {
        let _ = writeln!(out, "{comment} variants: {}", variants.join(","));
        let _ = writeln!(out, "{comment} M: {}", config.m_rule);
        let _ = writeln!(
            out,
            "{comment} nodes: {}",
            match config.nodes {
                collodae::NodeKind::GaussLegendre => "gauss-legendre",
                collodae::NodeKind::Uniform => "uniform",
            }
        );
        let _ = writeln!(
            out,
            "{comment} boundary: {}",
            match config.boundary {
                collodae::BoundaryWeighting::Unscaled => "unscaled",
                collodae::BoundaryWeighting::SqrtMeanStep => "sqrt-mean-step",
            }
        );
    }
    out
}

fn variant_suffix(variant: Option<WeightVariant>) -> String {
    variant.map(|v| format!("_{}", v.label())).unwrap_or_default()
}

/// Render one table as a CSV file body.
fn render_csv(config: &ExperimentConfig, table: &Table) -> String {
    let mut out = metadata_lines(config, "#");
    let _ = writeln!(out, "# quantity: {}", table.quantity);
    let _ = writeln!(out, "# table N: {}", table.degree);
    if let Some(v) = table.variant {
        let _ = writeln!(out, "# table variant: {}", v.label());
    }
    let _ = write!(out, "n");
    for basis in &table.bases {
        let _ = write!(out, ",{}", basis.label());
    }
    let _ = writeln!(out);
    for (row, n) in table.grids.iter().enumerate() {
        let _ = write!(out, "{n}");
        for cell in &table.cells[row] {
            let _ = write!(out, ",{}", fmt_full(cell));
        }
        let _ = writeln!(out);
    }
    for (label, cells) in &table.extra_rows {
        let _ = write!(out, "# {label}");
        for cell in cells {
            let _ = write!(out, ",{}", fmt_full(cell));
        }
        let _ = writeln!(out);
    }
    out
}

/// Render all tables of one quantity (one markdown table per N block).
fn render_md(config: &ExperimentConfig, quantity: &str, tables: &[&Table]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} — {}", config.experiment.label(), quantity);
    let _ = writeln!(out);
    for line in metadata_lines(config, ">").lines() {
        let _ = writeln!(out, "{line}");
    }
    for table in tables {
        let _ = writeln!(out);
        match table.variant {
            Some(v) => {
                let _ = writeln!(out, "## N = {}, variant {}", table.degree, v.label());
            }
            None => {
                let _ = writeln!(out, "## N = {}", table.degree);
            }
        }
        let _ = writeln!(out);
        let _ = write!(out, "| n |");
        for basis in &table.bases {
            let _ = write!(out, " {} |", basis.label());
        }
        let _ = writeln!(out);
        let _ = write!(out, "| ---: |");
        for _ in &table.bases {
            let _ = write!(out, " ---: |");
        }
        let _ = writeln!(out);
        for (row, n) in table.grids.iter().enumerate() {
            let _ = write!(out, "| {n} |");
            for cell in &table.cells[row] {
                let _ = write!(out, " {} |", fmt_display(cell));
            }
            let _ = writeln!(out);
        }
        for (label, cells) in &table.extra_rows {
            let _ = write!(out, "| {label} |");
            for cell in cells {
                let _ = write!(out, " {} |", fmt_display(cell));
            }
            let _ = writeln!(out);
        }
    }
    out
}

/// Write every table; returns the written paths. CSV: one file per
/// (quantity, N, variant). Markdown: one file per quantity with one table
/// per N block.
pub fn write_tables(config: &ExperimentConfig, tables: &[Table]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|e| {
        CliError::config(format!(
            "cannot create output directory {}: {e}",
            config.out_dir.display()
        ))
    })?;
    let experiment = config.experiment.label();
    let mut written = Vec::new();
    match config.format {
        OutputFormat::Csv => {
            for table in tables {
                let name = format!(
                    "{experiment}_{}_N{}{}.csv",
                    table.quantity,
                    table.degree,
                    variant_suffix(table.variant)
                );
                let path = config.out_dir.join(name);
                write_file(&path, &render_csv(config, table))?;
                written.push(path);
            }
        }
        OutputFormat::Md => {
            for &quantity in crate::experiments::quantities(config.experiment) {
                let group: Vec<&Table> =
                    tables.iter().filter(|t| t.quantity == quantity).collect();
                let name = format!("{experiment}_{quantity}.md");
                let path = config.out_dir.join(name);
                write_file(&path, &render_md(config, quantity, &group))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)
        .map_err(|e| CliError::numeric(format!("cannot write {}: {e}", path.display())))
}
