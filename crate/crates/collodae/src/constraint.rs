//! Continuity constraints across breakpoints and their conditioning.
//!
//! A coefficient vector represents a continuous function iff for every
//! interior breakpoint t_j and every differential component κ
//!
//!   h_j ⟨f, c_{jκ}⟩ − h_{j+1} c_{j+1,κ,0} = 0,
//!
//! where f_l = p̄_l(1) (so f_0 = 1 and f_l = ∫₀¹ p_{l−1} for l ≥ 1): the
//! left-hand value of x_κ on interval j has to match the right-hand value on
//! interval j+1, which only sees the constant-mode coefficient because
//! p̄_l(0) = 0 for l ≥ 1. Stacking the rows over j = 1..n−1 and κ = 0..k−1
//! gives 𝒞 ∈ ℝ^{k(n−1) × n(mN+k)}.
//!
//! The components decouple and share one per-component matrix 𝒞_s of shape
//! (n−1) × n(N+1), whose Gram 𝒞_s𝒞_sᵀ is symmetric tridiagonal with
//! diagonal h_j²|f|² + h_{j+1}² and off-diagonal −h_{j+1}². On a uniform grid
//! it is Toeplitz and its eigenvalues are h²(1 + |f|² − 2cos(jπ/n)).

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, SymTridiag};
use crate::mesh::Partition;
use crate::repmap::Layout;

/// The constraint matrix in structured form: the integral vector f, the
/// stepsizes, and the layout. Dense forms are assembled on demand.
#[derive(Debug, Clone)]
pub struct ConstraintMatrix {
    layout: Layout,
    f: Vec<f64>,
    h: Vec<f64>,
}

/// Build 𝒞 for the given grid, basis, and unknown layout.
pub fn build_c(partition: &Partition, basis: &Basis, layout: Layout) -> Result<ConstraintMatrix> {
    if layout.n != partition.n() {
        return Err(Error::shape(format!(
            "layout has n = {} but partition has n = {}",
            layout.n,
            partition.n()
        )));
    }
    if layout.degree != basis.degree() {
        return Err(Error::shape(format!(
            "layout degree {} does not match basis degree {}",
            layout.degree,
            basis.degree()
        )));
    }
    let f = basis.integral_weights_f();
    let h = (1..=partition.n()).map(|j| partition.h_j(j)).collect();
    Ok(ConstraintMatrix {
        layout,
        f,
        h,
    })
}

impl ConstraintMatrix {
    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Number of constraint rows, k(n−1).
    pub fn rows(&self) -> usize {
        self.layout.k * (self.layout.n - 1)
    }

    /// The vector f with f_l = p̄_l(1).
    pub fn integral_weights(&self) -> &[f64] {
        &self.f
    }

    /// |f|².
    pub fn f_norm_squared(&self) -> f64 {
        self.f.iter().map(|v| v * v).sum()
    }

    /// 𝒞c. Row order is breakpoint-major: row (j−1)k + κ for j = 1..n−1.
    pub fn apply(&self, c: &DVector<f64>) -> Result<DVector<f64>> {
        if c.len() != self.layout.dim() {
            return Err(Error::shape("vector length does not match constraint layout"));
        }
        let (n, k) = (self.layout.n, self.layout.k);
        let mut out = DVector::zeros(self.rows());
        for j in 1..n {
            for kappa in 0..k {
                let left = self.layout.comp_offset(j, kappa);
                let right = self.layout.comp_offset(j + 1, kappa);
                let mut v = 0.0;
                for (l, &fl) in self.f.iter().enumerate() {
                    v += fl * c[left + l];
                }
                out[(j - 1) * k + kappa] = self.h[j - 1] * v - self.h[j] * c[right];
            }
        }
        Ok(out)
    }

    /// Dense 𝒞 ∈ ℝ^{k(n−1) × n(mN+k)} (for small cross-checks).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let (n, k) = (self.layout.n, self.layout.k);
        let mut out = DMatrix::zeros(self.rows(), self.layout.dim());
        for j in 1..n {
            for kappa in 0..k {
                let row = (j - 1) * k + kappa;
                let left = self.layout.comp_offset(j, kappa);
                let right = self.layout.comp_offset(j + 1, kappa);
                for (l, &fl) in self.f.iter().enumerate() {
                    out[(row, left + l)] = self.h[j - 1] * fl;
                }
                out[(row, right)] = -self.h[j];
            }
        }
        out
    }

    /// Per-component scaled matrix 𝒞_s ∈ ℝ^{(n−1) × n(N+1)} (the same for
    /// every differential component).
    pub fn component_dense(&self) -> DMatrix<f64> {
        let n = self.layout.n;
        let nn = self.layout.degree + 1;
        let mut out = DMatrix::zeros(n - 1, n * nn);
        for j in 1..n {
            for (l, &fl) in self.f.iter().enumerate() {
                out[(j - 1, (j - 1) * nn + l)] = self.h[j - 1] * fl;
            }
            out[(j - 1, j * nn)] = -self.h[j];
        }
        out
    }

    /// g = 𝒞_s c^κ for a single differential component's coefficient run
    /// (length n(N+1)).
    pub fn apply_component(&self, comp: &[f64]) -> Result<DVector<f64>> {
        let n = self.layout.n;
        let nn = self.layout.degree + 1;
        if comp.len() != n * nn {
            return Err(Error::shape("component length does not match n(N+1)"));
        }
        let mut out = DVector::zeros(n - 1);
        for j in 1..n {
            let mut v = 0.0;
            for (l, &fl) in self.f.iter().enumerate() {
                v += fl * comp[(j - 1) * nn + l];
            }
            out[j - 1] = self.h[j - 1] * v - self.h[j] * comp[j * nn];
        }
        Ok(out)
    }

    /// 𝒞_sᵀ d for a multiplier vector d (length n−1).
    pub fn apply_component_transpose(&self, d: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.layout.n;
        let nn = self.layout.degree + 1;
        if d.len() != n - 1 {
            return Err(Error::shape("multiplier length does not match n−1"));
        }
        let mut out = DVector::zeros(n * nn);
        for j in 1..n {
            for (l, &fl) in self.f.iter().enumerate() {
                out[(j - 1) * nn + l] += self.h[j - 1] * fl * d[j - 1];
            }
            out[j * nn] -= self.h[j] * d[j - 1];
        }
        Ok(out)
    }

    /// The symmetric tridiagonal Gram 𝒞_s𝒞_sᵀ: diagonal h_j²|f|² + h_{j+1}²,
    /// off-diagonal −h_{j+1}² (f_0 = 1 kills every other cross term).
    pub fn cs_cst_matrix(&self) -> SymTridiag {
        let n = self.layout.n;
        let fsq = self.f_norm_squared();
        let diag: Vec<f64> = (1..n)
            .map(|j| self.h[j - 1] * self.h[j - 1] * fsq + self.h[j] * self.h[j])
            .collect();
        let off: Vec<f64> = (1..n.saturating_sub(1))
            .map(|j| -self.h[j] * self.h[j])
            .collect();
        SymTridiag { diag, off }
    }
}

/// Eigenvalues of the uniform-grid Gram 𝒞_s𝒞_sᵀ in closed form:
/// λ_j = h²(1 + |f|² − 2cos(jπ/n)), j = 1..n−1, ascending. The singular
/// values of 𝒞 are the square roots, each with multiplicity k.
pub fn toeplitz_eigenvalues(n: usize, h: f64, f_norm_squared: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("need at least one interior breakpoint (n ≥ 2)"));
    }
    let mut lambdas: Vec<f64> = (1..n)
        .map(|j| h * h * (1.0 + f_norm_squared - 2.0 * (j as f64 * std::f64::consts::PI / n as f64).cos()))
        .collect();
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(lambdas)
}

/// Extremal singular values of 𝒞.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintReport {
    pub sigma_max: f64,
    pub sigma_min: f64,
}

impl ConstraintReport {
    pub fn kappa(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }

    /// ‖𝒞⁺‖ = 1/σ_min.
    pub fn pinv_norm(&self) -> f64 {
        1.0 / self.sigma_min
    }
}

/// σ_max(𝒞), σ_min(𝒞) from the tridiagonal Gram spectrum. Works on any grid;
/// on uniform grids it agrees with `toeplitz_eigenvalues` to rounding.
pub fn constraint_conditioning(
    partition: &Partition,
    basis: &Basis,
    layout: Layout,
) -> Result<ConstraintReport> {
    if partition.n() < 2 {
        return Err(Error::invalid(
            "constraint conditioning needs n ≥ 2 (no interior breakpoints otherwise)",
        ));
    }
    let c = build_c(partition, basis, layout)?;
    let eigs = c.cs_cst_matrix().eigenvalues();
    let min = eigs.first().copied().unwrap_or(0.0);
    let max = eigs.last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::numerical("constraint Gram matrix is not positive definite"));
    }
    Ok(ConstraintReport {
        sigma_max: max.sqrt(),
        sigma_min: min.sqrt(),
    })
}

/// Orthonormal basis 𝒟 of ker 𝒞 ∈ ℝ^{n(mN+k) × (nmN+k)}, exploiting the
/// component decoupling: one full QR of 𝒞_sᵀ yields an orthonormal kernel
/// basis K of the per-component matrix, scattered into the rows of each
/// differential component; algebraic coefficients are unconstrained and get
/// identity columns. Blocks touch disjoint rows, so 𝒟ᵀ𝒟 = I exactly.
pub fn nullspace_basis(
    partition: &Partition,
    basis: &Basis,
    layout: Layout,
) -> Result<DMatrix<f64>> {
    let dim = layout.dim();
    if partition.n() < 2 {
        // no constraints: the kernel is everything
        return Ok(DMatrix::identity(dim, dim));
    }
    let c = build_c(partition, basis, layout)?;
    let cs_t = c.component_dense().transpose();
    let kernel = orthogonal_complement(&cs_t)?; // n(N+1) × (nN+1)
    let (n, m, k, nn) = (layout.n, layout.m, layout.k, layout.degree + 1);
    let kcols = kernel.ncols();
    debug_assert_eq!(kcols, n * (nn - 1) + 1);
    let total_cols = k * kcols + (m - k) * n * (nn - 1);
    debug_assert_eq!(total_cols, dim - c.rows());
    let mut d = DMatrix::zeros(dim, total_cols);
    // differential components: scatter the shared kernel block
    for kappa in 0..k {
        let col0 = kappa * kcols;
        for j in 1..=n {
            let row0 = layout.comp_offset(j, kappa);
            for l in 0..nn {
                for q in 0..kcols {
                    d[(row0 + l, col0 + q)] = kernel[((j - 1) * nn + l, q)];
                }
            }
        }
    }
    // algebraic components: identity columns
    let mut col = k * kcols;
    for kappa in k..m {
        for j in 1..=n {
            let row0 = layout.comp_offset(j, kappa);
            for l in 0..nn - 1 {
                d[(row0 + l, col)] = 1.0;
                col += 1;
            }
        }
    }
    debug_assert_eq!(col, total_cols);
    Ok(d)
}
