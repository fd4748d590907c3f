//! Experiment sweeps: one table per reported quantity, rows indexed by the
//! grid list, columns by the basis list. Cells run in parallel; results are
//! written back by index so output never depends on completion order.

use collodae::{
    assemble_with, constraint_conditioning, error_h1d, fitted_loglog_slope, kappa_c_of_a,
    make_uniform_partition, max_jump, project_coefficients, rep_map_conditioning, solve, Basis,
    BasisKind, CoefficientVector, DaeProblem, Layout, Partition, WeightVariant,
};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::CliError;

/// A computed cell: quantity label → value (or the per-cell failure reason).
type CellValues = Vec<(&'static str, Result<f64, String>)>;

/// One output table: a fixed quantity at a fixed degree (and variant, where
/// the experiment uses one), rows = grids, columns = bases.
#[derive(Debug, Clone)]
pub struct Table {
    pub quantity: &'static str,
    pub degree: usize,
    pub variant: Option<WeightVariant>,
    pub grids: Vec<usize>,
    pub bases: Vec<BasisKind>,
    /// cells[row][col], indexed like (grids, bases).
    pub cells: Vec<Vec<Result<f64, String>>>,
    /// Derived rows appended below the grid rows (label, one value per basis).
    pub extra_rows: Vec<(String, Vec<Result<f64, String>>)>,
}

impl Table {
    fn new(
        quantity: &'static str,
        degree: usize,
        variant: Option<WeightVariant>,
        grids: &[usize],
        bases: &[BasisKind],
    ) -> Table {
        Table {
            quantity,
            degree,
            variant,
            grids: grids.to_vec(),
            bases: bases.to_vec(),
            cells: vec![vec![Err("not computed".to_string()); bases.len()]; grids.len()],
            extra_rows: Vec::new(),
        }
    }
}

/// Quantities each experiment reports, in output order.
pub fn quantities(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::RepmapConditioning => {
            &["smin_uhat", "smin_u", "smax_u", "kappa_uhat", "kappa_u"]
        }
        ExperimentKind::ConstraintConditioning => &["kappa_c", "pinv_c_h"],
        ExperimentKind::SystemConditioning => &["kappa_c_of_a"],
        ExperimentKind::Solve => &["err_h1d", "residual"],
        ExperimentKind::Convergence => &["err_h1d"],
        ExperimentKind::ProjectionTest => &["jump_before", "jump_after"],
    }
}

/// Run the configured sweep and return the assembled tables in a
/// deterministic order: quantity-major, then degree, then variant.
pub fn run(config: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let problem = config.problem.build()?;
    let variants: Vec<Option<WeightVariant>> = if config.experiment.uses_variant() {
        config.variants.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };

    // enumerate cells: (degree, variant, row, col) over the basis/grid lists
    struct Job {
        degree_idx: usize,
        variant_idx: usize,
        row: usize,
        col: usize,
    }
    let mut jobs = Vec::new();
    for (degree_idx, _) in config.degrees.iter().enumerate() {
        for (variant_idx, _) in variants.iter().enumerate() {
            for (row, _) in config.grids.iter().enumerate() {
                for (col, _) in config.bases.iter().enumerate() {
                    jobs.push(Job {
                        degree_idx,
                        variant_idx,
                        row,
                        col,
                    });
                }
            }
        }
    }

    // compute all cells in parallel; the indexed collect keeps job order
    let results: Vec<CellValues> = jobs
        .par_iter()
        .map(|job| {
            compute_cell(
                config,
                &problem,
                config.degrees[job.degree_idx],
                variants[job.variant_idx],
                config.grids[job.row],
                config.bases[job.col],
            )
        })
        .collect();

    // scatter into per-(quantity, degree, variant) tables
    let mut tables: Vec<Table> = Vec::new();
    for &quantity in quantities(config.experiment) {
        for &degree in &config.degrees {
            for &variant in &variants {
                tables.push(Table::new(
                    quantity,
                    degree,
                    variant,
                    &config.grids,
                    &config.bases,
                ));
            }
        }
    }
    let n_var = variants.len();
    let n_deg = config.degrees.len();
    for (job, values) in jobs.iter().zip(results) {
        for (q_idx, (quantity, value)) in values.into_iter().enumerate() {
            let table_idx = (q_idx * n_deg + job.degree_idx) * n_var + job.variant_idx;
            let table = &mut tables[table_idx];
            debug_assert_eq!(table.quantity, quantity);
            table.cells[job.row][job.col] = value;
        }
    }

    if config.experiment == ExperimentKind::Convergence {
        append_fitted_orders(&mut tables);
    }

    // a sweep in which every single cell failed produced no numbers at all;
    // report that as a numeric failure rather than writing empty artifacts
    let all_failed = tables
        .iter()
        .flat_map(|t| t.cells.iter().flatten())
        .all(|c| c.is_err());
    if all_failed {
        let first = tables
            .iter()
            .flat_map(|t| t.cells.iter().flatten())
            .find_map(|c| c.as_ref().err())
            .cloned()
            .unwrap_or_default();
        return Err(CliError::numeric(format!(
            "every cell of the sweep failed; first error: {first}"
        )));
    }
    Ok(tables)
}

/// Least-squares fit of the convergence order per basis column, appended as
/// an extra `order` row. Requires at least two successful cells per column.
fn append_fitted_orders(tables: &mut [Table]) {
    for table in tables.iter_mut() {
        let mut row = Vec::with_capacity(table.bases.len());
        for col in 0..table.bases.len() {
            let mut hs = Vec::new();
            let mut errs = Vec::new();
            for (r, &n) in table.grids.iter().enumerate() {
                if let Ok(v) = table.cells[r][col] {
                    if v > 0.0 {
                        hs.push(1.0 / n as f64);
                        errs.push(v);
                    }
                }
            }
            row.push(if hs.len() >= 2 {
                Ok(fitted_loglog_slope(&hs, &errs))
            } else {
                Err("needs at least two successful grids".to_string())
            });
        }
        table.extra_rows.push(("order".to_string(), row));
    }
}

fn make_basis(kind: BasisKind, degree: usize) -> Result<Basis, String> {
    Basis::new(kind, degree).map_err(|e| e.to_string())
}

fn partition_for(problem: &DaeProblem, n: usize) -> Result<Partition, String> {
    let (a, b) = problem.interval();
    make_uniform_partition(a, b, n).map_err(|e| e.to_string())
}

/// Compute every quantity of one (degree, variant, n, basis) cell. Failures
/// are recorded per cell; they never abort the sweep.
fn compute_cell(
    config: &ExperimentConfig,
    problem: &DaeProblem,
    degree: usize,
    variant: Option<WeightVariant>,
    n: usize,
    kind: BasisKind,
) -> CellValues {
    let quantities = quantities(config.experiment);
    let fail = |msg: String| -> CellValues {
        quantities.iter().map(|&q| (q, Err(msg.clone()))).collect()
    };

    let basis = match make_basis(kind, degree) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let partition = match partition_for(problem, n) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };

    match config.experiment {
        ExperimentKind::RepmapConditioning => {
            match rep_map_conditioning(&partition, &basis, problem.m(), problem.k()) {
                Ok(report) => vec![
                    ("smin_uhat", Ok(report.sigma_min_uhat)),
                    ("smin_u", Ok(report.sigma_min_u)),
                    ("smax_u", Ok(report.sigma_max_u)),
                    ("kappa_uhat", Ok(report.kappa_uhat())),
                    ("kappa_u", Ok(report.kappa_u())),
                ],
                Err(e) => fail(e.to_string()),
            }
        }
        ExperimentKind::ConstraintConditioning => {
            let layout = match Layout::new(n, problem.m(), problem.k(), degree) {
                Ok(l) => l,
                Err(e) => return fail(e.to_string()),
            };
            match constraint_conditioning(&partition, &basis, layout) {
                Ok(report) => vec![
                    ("kappa_c", Ok(report.kappa())),
                    ("pinv_c_h", Ok(report.pinv_norm() * partition.h())),
                ],
                Err(e) => fail(e.to_string()),
            }
        }
        ExperimentKind::SystemConditioning | ExperimentKind::Solve | ExperimentKind::Convergence => {
            let variant = variant.expect("variant-dependent experiment");
            let system = match assemble_with(
                problem,
                &partition,
                &basis,
                config.m_rule.m_for(degree),
                config.nodes,
                variant,
                config.boundary,
            ) {
                Ok(s) => s,
                Err(e) => return fail(e.to_string()),
            };
            match config.experiment {
                ExperimentKind::SystemConditioning => match kappa_c_of_a(&system) {
                    Ok(rc) => vec![("kappa_c_of_a", Ok(rc.kappa()))],
                    Err(e) => fail(e.to_string()),
                },
                _ => {
                    let sol = match solve(&system) {
                        Ok(s) => s,
                        Err(e) => return fail(e.to_string()),
                    };
                    let err = error_h1d(problem, &sol.coefficients, &partition, &basis)
                        .map_err(|e| e.to_string());
                    if config.experiment == ExperimentKind::Solve {
                        vec![("err_h1d", err), ("residual", Ok(sol.residual_norm))]
                    } else {
                        vec![("err_h1d", err)]
                    }
                }
            }
        }
        ExperimentKind::ProjectionTest => {
            let layout = match Layout::new(n, problem.m(), problem.k(), degree) {
                Ok(l) => l,
                Err(e) => return fail(e.to_string()),
            };
            // alternating unit-jump step function in the first differential
            // component: the canonical discontinuous test input
            let mut c = CoefficientVector::zeros(layout);
            for j in (1..=n).step_by(2) {
                c.comp_mut(j, 0)[0] = 1.0 / partition.h_j(j);
            }
            let before = max_jump(&c, &partition, &basis).map_err(|e| e.to_string());
            let after = project_coefficients(&c, &partition, &basis)
                .and_then(|q| max_jump(&q, &partition, &basis))
                .map_err(|e| e.to_string());
            vec![("jump_before", before), ("jump_after", after)]
        }
    }
}
