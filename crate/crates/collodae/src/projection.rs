//! Projections of coefficient vectors onto the continuity-constraint kernel.
//!
//! All three projectors have the form Q = I − W⁻¹𝒞ᵀ(𝒞W⁻¹𝒞ᵀ)⁻¹𝒞 with an
//! SPD weight W; they differ in the inner product in which the correction is
//! minimal:
//!
//! * `project_coefficients` — W = I: the Euclidean projector Q_π, smallest
//!   coefficient change. The Schur complement 𝒞_s𝒞_sᵀ is tridiagonal, so the
//!   cost is linear in n.
//! * `project_l2` — W = 𝒰ᵀ𝒰: smallest L² change of the represented function.
//! * `project_h1` — W = 𝒰̂ᵀ𝒰̂: smallest broken-H¹ change.
//!
//! The constraints only involve differential components, so each of the k
//! differential coefficient runs is corrected independently (by a tridiagonal
//! solve with per-interval (N+1)×(N+1) Cholesky factors) and algebraic
//! coefficients pass through unchanged.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::basis::Basis;
use crate::constraint::build_c;
use crate::error::{Error, Result};
use crate::linalg::SymTridiag;
use crate::mesh::Partition;
use crate::repmap::{build_interp_matrices, evaluate_local, CoefficientVector, Layout};

/// Which norm the projector minimizes the correction in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionNorm {
    /// Euclidean norm of the coefficient vector (Q_π).
    Coefficients,
    /// L²(a,b) norm of the represented function.
    L2,
    /// Broken H¹ norm of the represented function.
    H1Dpi,
}

/// Euclidean projection Q_π c onto ker 𝒞.
pub fn project_coefficients(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
) -> Result<CoefficientVector> {
    project(c, partition, basis, ProjectionNorm::Coefficients)
}

/// L²-optimal projection onto ker 𝒞.
pub fn project_l2(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
) -> Result<CoefficientVector> {
    project(c, partition, basis, ProjectionNorm::L2)
}

/// Broken-H¹-optimal projection onto ker 𝒞.
pub fn project_h1(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
) -> Result<CoefficientVector> {
    project(c, partition, basis, ProjectionNorm::H1Dpi)
}

/// Per-interval weight block W_j for a differential component.
fn weight_block(
    norm: ProjectionNorm,
    h: f64,
    gram_vbar: &DMatrix<f64>,
    gram_vring: &DMatrix<f64>,
) -> DMatrix<f64> {
    match norm {
        ProjectionNorm::Coefficients => DMatrix::identity(gram_vbar.nrows(), gram_vbar.ncols()),
        ProjectionNorm::L2 => gram_vbar * h.powi(3),
        ProjectionNorm::H1Dpi => gram_vbar * h.powi(3) + gram_vring * h,
    }
}

/// Shared implementation: per differential component κ solve
/// (𝒞_s W⁻¹ 𝒞_sᵀ) d = 𝒞_s c^κ and subtract W⁻¹𝒞_sᵀ d. The Schur complement
/// is symmetric tridiagonal for every weight because constraint row j only
/// touches intervals j and j+1.
pub fn project(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
    norm: ProjectionNorm,
) -> Result<CoefficientVector> {
    let layout = c.layout;
    if layout.n != partition.n() || layout.degree != basis.degree() {
        return Err(Error::shape("layout incompatible with partition or basis"));
    }
    if layout.n < 2 {
        return Ok(c.clone()); // no interior breakpoints, nothing to enforce
    }
    let cm = build_c(partition, basis, layout)?;
    let f = DVector::from_column_slice(cm.integral_weights());
    let nn = layout.degree + 1;
    let n = layout.n;

    let mats = build_interp_matrices(basis)?;
    let gram_vbar = mats.gram_vbar();
    let gram_vring = mats.gram_vring();

    // per-interval solves W_j⁻¹ f and W_j⁻¹ e_0, cached over distinct stepsizes
    let mut cache: Vec<(u64, DVector<f64>, DVector<f64>)> = Vec::new();
    let mut wf: Vec<DVector<f64>> = Vec::with_capacity(n); // 0-indexed by j−1
    let mut we: Vec<DVector<f64>> = Vec::with_capacity(n);
    for j in 1..=n {
        let h = partition.h_j(j);
        let key = h.to_bits();
        if let Some((_, cf, ce)) = cache.iter().find(|(k, _, _)| *k == key) {
            wf.push(cf.clone());
            we.push(ce.clone());
            continue;
        }
        let w = weight_block(norm, h, &gram_vbar, &gram_vring);
        let chol: Cholesky<f64, Dyn> = Cholesky::new(w)
            .ok_or_else(|| Error::numerical("norm weight block is not positive definite"))?;
        let mut e0 = DVector::zeros(nn);
        e0[0] = 1.0;
        let cf = chol.solve(&f);
        let ce = chol.solve(&e0);
        cache.push((key, cf.clone(), ce.clone()));
        wf.push(cf);
        we.push(ce);
    }

    // Schur complement 𝒞_s W⁻¹ 𝒞_sᵀ as a symmetric tridiagonal matrix
    let h_of = |j: usize| partition.h_j(j);
    let diag: Vec<f64> = (1..n)
        .map(|j| {
            h_of(j) * h_of(j) * f.dot(&wf[j - 1]) + h_of(j + 1) * h_of(j + 1) * we[j][0]
        })
        .collect();
    let off: Vec<f64> = (1..n - 1)
        .map(|j| -h_of(j + 1) * h_of(j + 1) * wf[j][0])
        .collect();
    let schur = SymTridiag { diag, off };

    let mut out = c.clone();
    for kappa in 0..layout.k {
        let comp: Vec<f64> = (1..=n).flat_map(|j| c.comp(j, kappa).to_vec()).collect();
        let g = cm.apply_component(&comp)?;
        let d = schur.solve_spd(&g)?;
        for j in 1..=n {
            let h = h_of(j);
            let target = out.comp_mut(j, kappa);
            if j <= n - 1 {
                for l in 0..nn {
                    target[l] -= h * wf[j - 1][l] * d[j - 1];
                }
            }
            if j >= 2 {
                for l in 0..nn {
                    target[l] += h * we[j - 1][l] * d[j - 2];
                }
            }
        }
    }
    Ok(out)
}

/// Largest one-sided discontinuity of the represented differential components
/// over the interior breakpoints: max_{j,κ<k} |x_κ(t_j−) − x_κ(t_j+)|.
pub fn max_jump(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
) -> Result<f64> {
    let layout = c.layout;
    let mut jump: f64 = 0.0;
    for j in 1..layout.n {
        let left = evaluate_local(c, partition, basis, j, 1.0)?;
        let right = evaluate_local(c, partition, basis, j + 1, 0.0)?;
        for kappa in 0..layout.k {
            jump = jump.max((left[kappa] - right[kappa]).abs());
        }
    }
    Ok(jump)
}

/// Dense Gram matrix 𝒰ᵀ𝒰 (or 𝒰̂ᵀ𝒰̂) of the norm map, block diagonal over
/// (interval, component). Intended for small cross-checks.
pub fn norm_gram_dense(
    partition: &Partition,
    basis: &Basis,
    layout: Layout,
    norm: ProjectionNorm,
) -> Result<DMatrix<f64>> {
    if layout.n != partition.n() || layout.degree != basis.degree() {
        return Err(Error::shape("layout incompatible with partition or basis"));
    }
    let mats = build_interp_matrices(basis)?;
    let gram_vbar = mats.gram_vbar();
    let gram_vring = mats.gram_vring();
    let gram_v = mats.gram_v();
    let nn = layout.degree;
    let mut out = DMatrix::zeros(layout.dim(), layout.dim());
    for j in 1..=layout.n {
        let h = partition.h_j(j);
        for kappa in 0..layout.m {
            let off = layout.comp_offset(j, kappa);
            if kappa < layout.k {
                let block = match norm {
                    ProjectionNorm::Coefficients => DMatrix::identity(nn + 1, nn + 1),
                    ProjectionNorm::L2 => &gram_vbar * h.powi(3),
                    ProjectionNorm::H1Dpi => &gram_vbar * h.powi(3) + &gram_vring * h,
                };
                out.view_mut((off, off), (nn + 1, nn + 1)).copy_from(&block);
            } else {
                out.view_mut((off, off), (nn, nn)).copy_from(&(&gram_v * h));
            }
        }
    }
    Ok(out)
}
