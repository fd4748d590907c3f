//! The representation map ℛ between coefficient vectors c ∈ ℝ^{n(mN+k)} and
//! piecewise polynomials, its interpolation inverse, and the norm matrices
//! 𝒰 (L²) and 𝒰̂ (broken H¹) whose extremal singular values are the operator
//! norms of ℛ and ℛ⁻¹.
//!
//! On subinterval j with local coordinate τ = (t − t_{j−1})/h_j, differential
//! components (κ < k) are x_κ = Σ_l c_{jκl}·h_j·p̄_l(τ) (N+1 coefficients)
//! and algebraic components x_κ = Σ_l c_{jκl}·p_l(τ) (N coefficients); the
//! stepsize factor makes (Dx)'_κ = Σ_{l≥1} c_{jκl}·p_{l−1}(τ) free of h_j.

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::linalg::sv_extremes;
use crate::mesh::Partition;
use crate::quadrature::{gauss_legendre, QuadratureRule};

/// Index structure of coefficient vectors: n subintervals, m components of
/// which the first k are differential, polynomial degree N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub degree: usize,
}

impl Layout {
    /// 0 < k ≤ m: at least one differential component; a layout without
    /// algebraic components (k = m) is allowed for norm studies.
    pub fn new(n: usize, m: usize, k: usize, degree: usize) -> Result<Layout> {
        if n == 0 || m == 0 || degree == 0 {
            return Err(Error::invalid("layout needs n ≥ 1, m ≥ 1, N ≥ 1"));
        }
        if k == 0 || k > m {
            return Err(Error::invalid(format!(
                "need 0 < k ≤ m, got k = {k}, m = {m}"
            )));
        }
        Ok(Layout { n, m, k, degree })
    }

    /// Coefficients per subinterval: mN + k.
    pub fn block_size(&self) -> usize {
        self.m * self.degree + self.k
    }

    /// Total coefficient dimension n(mN + k).
    pub fn dim(&self) -> usize {
        self.n * self.block_size()
    }

    /// Coefficient count of component κ (0-based): N+1 if differential, N if
    /// algebraic.
    pub fn comp_len(&self, kappa: usize) -> usize {
        debug_assert!(kappa < self.m);
        if kappa < self.k {
            self.degree + 1
        } else {
            self.degree
        }
    }

    /// Offset of the coefficient run (j, κ) in the flat vector; j is 1-based.
    pub fn comp_offset(&self, j: usize, kappa: usize) -> usize {
        debug_assert!((1..=self.n).contains(&j));
        debug_assert!(kappa < self.m);
        let within = if kappa < self.k {
            kappa * (self.degree + 1)
        } else {
            self.k * (self.degree + 1) + (kappa - self.k) * self.degree
        };
        (j - 1) * self.block_size() + within
    }
}

/// A coefficient vector tagged with its layout.
#[derive(Debug, Clone)]
pub struct CoefficientVector {
    pub layout: Layout,
    pub data: DVector<f64>,
}

impl CoefficientVector {
    pub fn zeros(layout: Layout) -> CoefficientVector {
        CoefficientVector {
            layout,
            data: DVector::zeros(layout.dim()),
        }
    }

    pub fn from_data(layout: Layout, data: DVector<f64>) -> Result<CoefficientVector> {
        if data.len() != layout.dim() {
            return Err(Error::shape(format!(
                "coefficient vector length {} does not match layout dimension {}",
                data.len(),
                layout.dim()
            )));
        }
        Ok(CoefficientVector { layout, data })
    }

    /// The coefficients c_{jκ·} as a slice; j is 1-based, κ 0-based.
    pub fn comp(&self, j: usize, kappa: usize) -> &[f64] {
        let off = self.layout.comp_offset(j, kappa);
        &self.data.as_slice()[off..off + self.layout.comp_len(kappa)]
    }

    pub fn comp_mut(&mut self, j: usize, kappa: usize) -> &mut [f64] {
        let off = self.layout.comp_offset(j, kappa);
        let len = self.layout.comp_len(kappa);
        &mut self.data.as_mut_slice()[off..off + len]
    }
}

/// Interpolation/norm matrices of one basis family at degree N:
/// V̄_{il} = p̄_l(σ̄_i) at the N+1-point rule, V_{il} = p_l(σ_i) at the
/// N-point rule, V̊_{il} = p̄'_l(σ̄_i) (first column zero), plus the weight
/// roots Γ̄ = diag(γ̄^{1/2}), Γ = diag(γ^{1/2}).
#[derive(Debug, Clone)]
pub struct RepMapMatrices {
    pub vbar: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub vring: DMatrix<f64>,
    pub sigma_bar: Vec<f64>,
    pub sigma: Vec<f64>,
    pub gamma_bar: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl RepMapMatrices {
    /// Γ̄V̄ (rows weighted by γ̄_i^{1/2}).
    pub fn weighted_vbar(&self) -> DMatrix<f64> {
        weight_rows(&self.vbar, &self.gamma_bar)
    }

    /// ΓV.
    pub fn weighted_v(&self) -> DMatrix<f64> {
        weight_rows(&self.v, &self.gamma)
    }

    /// Γ̄V̊.
    pub fn weighted_vring(&self) -> DMatrix<f64> {
        weight_rows(&self.vring, &self.gamma_bar)
    }

    /// Gram matrix V̄ᵀΓ̄²V̄ (entrywise ∫₀¹ p̄_α p̄_β by quadrature exactness).
    pub fn gram_vbar(&self) -> DMatrix<f64> {
        let w = self.weighted_vbar();
        w.transpose() * w
    }

    /// VᵀΓ²V (entrywise ∫₀¹ p_α p_β).
    pub fn gram_v(&self) -> DMatrix<f64> {
        let w = self.weighted_v();
        w.transpose() * w
    }

    /// V̊ᵀΓ̄²V̊ (entrywise ∫₀¹ p̄'_α p̄'_β).
    pub fn gram_vring(&self) -> DMatrix<f64> {
        let w = self.weighted_vring();
        w.transpose() * w
    }

    /// The stacked per-interval factor [h·Γ̄V̄ ; Γ̄V̊] whose singular values
    /// control the broken-H¹ norm of differential components.
    pub fn u_reduced(&self, h: f64) -> DMatrix<f64> {
        let top = self.weighted_vbar() * h;
        let bottom = self.weighted_vring();
        let mut stacked = DMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
        stacked.view_mut((0, 0), (top.nrows(), top.ncols())).copy_from(&top);
        stacked
            .view_mut((top.nrows(), 0), (bottom.nrows(), bottom.ncols()))
            .copy_from(&bottom);
        stacked
    }
}

fn weight_rows(m: &DMatrix<f64>, weights: &[f64]) -> DMatrix<f64> {
    let mut out = m.clone();
    for (i, &w) in weights.iter().enumerate() {
        let root = w.sqrt();
        for j in 0..out.ncols() {
            out[(i, j)] *= root;
        }
    }
    out
}

/// Build V̄, V, V̊ with the canonical node choice: Gauss rules with N+1 and N
/// points (exact to degrees 2N+1 and 2N−1, beyond the required 2N and 2N−2,
/// with positive weights — the Gram matrices are then node-independent).
pub fn build_interp_matrices(basis: &Basis) -> Result<RepMapMatrices> {
    let n = basis.degree();
    build_interp_matrices_with_rules(basis, &gauss_legendre(n + 1), &gauss_legendre(n))
}

/// Same with caller-chosen quadrature rules (σ̄-rule must be exact to degree
/// 2N, σ-rule to 2N−2, for the Gram identities to hold). Square interpolation
/// requires exactly N+1 and N nodes; larger rules are allowed for Gram/norm
/// work.
pub fn build_interp_matrices_with_rules(
    basis: &Basis,
    rule_bar: &QuadratureRule,
    rule: &QuadratureRule,
) -> Result<RepMapMatrices> {
    let n = basis.degree();
    if rule_bar.exactness_degree < 2 * n || rule.exactness_degree + 2 < 2 * n {
        return Err(Error::invalid(
            "quadrature rules too weak for the Gram identities (need degrees 2N and 2N−2)",
        ));
    }
    let mut vbar = DMatrix::zeros(rule_bar.nodes.len(), n + 1);
    let mut vring = DMatrix::zeros(rule_bar.nodes.len(), n + 1);
    for (i, &node) in rule_bar.nodes.iter().enumerate() {
        let pbars = basis.eval_all_pbar(node)?;
        let ps = basis.eval_all_p(node)?;
        for l in 0..=n {
            vbar[(i, l)] = pbars[l];
            vring[(i, l)] = if l == 0 { 0.0 } else { ps[l - 1] };
        }
    }
    let mut v = DMatrix::zeros(rule.nodes.len(), n);
    for (i, &node) in rule.nodes.iter().enumerate() {
        let ps = basis.eval_all_p(node)?;
        for l in 0..n {
            v[(i, l)] = ps[l];
        }
    }
    // defensive nonsingularity check for the square (interpolation) case
    if vbar.is_square() && vbar.clone().lu().determinant().abs() < 1e-300 {
        return Err(Error::numerical("singular antiderivative collocation matrix"));
    }
    if v.is_square() && !v.is_empty() && v.clone().lu().determinant().abs() < 1e-300 {
        return Err(Error::numerical("singular collocation matrix"));
    }
    Ok(RepMapMatrices {
        vbar,
        v,
        vring,
        sigma_bar: rule_bar.nodes.clone(),
        sigma: rule.nodes.clone(),
        gamma_bar: rule_bar.weights.clone(),
        gamma: rule.weights.clone(),
    })
}

fn check_compat(c: &CoefficientVector, partition: &Partition, basis: &Basis) -> Result<()> {
    if c.layout.n != partition.n() {
        return Err(Error::shape(format!(
            "layout has n = {} but partition has n = {}",
            c.layout.n,
            partition.n()
        )));
    }
    if c.layout.degree != basis.degree() {
        return Err(Error::shape(format!(
            "layout degree {} does not match basis degree {}",
            c.layout.degree,
            basis.degree()
        )));
    }
    Ok(())
}

/// x(t) = (ℛc)(t) ∈ ℝ^m under the half-open interval convention
/// ([t_{j−1}, t_j); t = b belongs to the last subinterval).
pub fn evaluate(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
    t: f64,
) -> Result<DVector<f64>> {
    check_compat(c, partition, basis)?;
    let (j, tau) = partition.local_coordinate(t)?;
    evaluate_local(c, partition, basis, j, tau)
}

/// As `evaluate`, but at an explicit subinterval j (1-based) and local
/// coordinate τ ∈ [0,1]; needed for one-sided limits at breakpoints.
pub fn evaluate_local(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
    j: usize,
    tau: f64,
) -> Result<DVector<f64>> {
    check_compat(c, partition, basis)?;
    let layout = c.layout;
    let h = partition.h_j(j);
    let pbars = basis.eval_all_pbar(tau)?;
    let ps = basis.eval_all_p(tau)?;
    let mut x = DVector::zeros(layout.m);
    for kappa in 0..layout.m {
        let coeffs = c.comp(j, kappa);
        x[kappa] = if kappa < layout.k {
            h * coeffs.iter().zip(&pbars).map(|(a, b)| a * b).sum::<f64>()
        } else {
            coeffs.iter().zip(&ps).map(|(a, b)| a * b).sum::<f64>()
        };
    }
    Ok(x)
}

/// (Dx)'(t) ∈ ℝ^k; the h_j scaling of the differential ansatz cancels.
pub fn evaluate_dx_derivative(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
    t: f64,
) -> Result<DVector<f64>> {
    check_compat(c, partition, basis)?;
    let (j, tau) = partition.local_coordinate(t)?;
    evaluate_dx_derivative_local(c, partition, basis, j, tau)
}

/// As `evaluate_dx_derivative`, at an explicit subinterval and local
/// coordinate.
pub fn evaluate_dx_derivative_local(
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
    j: usize,
    tau: f64,
) -> Result<DVector<f64>> {
    check_compat(c, partition, basis)?;
    let _ = partition.h_j(j);
    let layout = c.layout;
    let ps = basis.eval_all_p(tau)?;
    let mut dx = DVector::zeros(layout.k);
    for kappa in 0..layout.k {
        let coeffs = c.comp(j, kappa);
        dx[kappa] = coeffs
            .iter()
            .skip(1)
            .zip(&ps)
            .map(|(a, b)| a * b)
            .sum::<f64>();
    }
    Ok(dx)
}

/// Interpolation inverse ℛ⁻¹: sample x at the per-interval nodes σ̄ (first k
/// components) and σ (remaining components) and solve the small collocation
/// systems c_{jκ} = V̄⁻¹(X_{jκ}/h_j) resp. V⁻¹X_{jκ}. Exact on the ansatz
/// space.
pub fn coefficients_from_function(
    x: &dyn Fn(f64) -> DVector<f64>,
    partition: &Partition,
    basis: &Basis,
    layout: Layout,
) -> Result<CoefficientVector> {
    if layout.n != partition.n() || layout.degree != basis.degree() {
        return Err(Error::shape("layout incompatible with partition or basis"));
    }
    let n = basis.degree();
    let mats = build_interp_matrices(basis)?;
    let lu_bar = mats.vbar.clone().lu();
    let lu = mats.v.clone().lu();
    let mut c = CoefficientVector::zeros(layout);
    for j in 1..=layout.n {
        let t0 = partition.t(j - 1);
        let h = partition.h_j(j);
        // all samples of this subinterval, by component
        let bar_samples: Vec<DVector<f64>> =
            mats.sigma_bar.iter().map(|&s| x(t0 + s * h)).collect();
        let plain_samples: Vec<DVector<f64>> =
            mats.sigma.iter().map(|&s| x(t0 + s * h)).collect();
        for kappa in 0..layout.m {
            if kappa < layout.k {
                let rhs = DVector::from_iterator(
                    n + 1,
                    bar_samples.iter().map(|smp| smp[kappa] / h),
                );
                let sol = lu_bar
                    .solve(&rhs)
                    .ok_or_else(|| Error::numerical("singular antiderivative collocation matrix"))?;
                c.comp_mut(j, kappa).copy_from_slice(sol.as_slice());
            } else {
                let rhs =
                    DVector::from_iterator(n, plain_samples.iter().map(|smp| smp[kappa]));
                let sol = lu
                    .solve(&rhs)
                    .ok_or_else(|| Error::numerical("singular collocation matrix"))?;
                c.comp_mut(j, kappa).copy_from_slice(sol.as_slice());
            }
        }
    }
    Ok(c)
}

/// ‖ℛc‖_{L²(a,b)} = |𝒰c|, from the block structure of 𝒰 (no quadrature):
/// differential blocks h_j^{3/2}·Γ̄V̄, algebraic blocks h_j^{1/2}·ΓV.
pub fn norm_l2(c: &CoefficientVector, partition: &Partition, basis: &Basis) -> Result<f64> {
    check_compat(c, partition, basis)?;
    let mats = build_interp_matrices(basis)?;
    Ok(norm_l2_with(c, partition, &mats))
}

/// ‖ℛc‖ in the broken H¹ norm: adds h_j^{1/2}·Γ̄V̊ rows for the derivative
/// part of differential components.
pub fn norm_h1dpi(c: &CoefficientVector, partition: &Partition, basis: &Basis) -> Result<f64> {
    check_compat(c, partition, basis)?;
    let mats = build_interp_matrices(basis)?;
    Ok(norm_h1dpi_with(c, partition, &mats))
}

pub(crate) fn norm_l2_with(
    c: &CoefficientVector,
    partition: &Partition,
    mats: &RepMapMatrices,
) -> f64 {
    let layout = c.layout;
    let gvbar = mats.weighted_vbar();
    let gv = mats.weighted_v();
    let mut sq = 0.0;
    for j in 1..=layout.n {
        let h = partition.h_j(j);
        for kappa in 0..layout.m {
            let coeffs = DVector::from_column_slice(c.comp(j, kappa));
            if kappa < layout.k {
                sq += h.powi(3) * (&gvbar * &coeffs).norm_squared();
            } else {
                sq += h * (&gv * &coeffs).norm_squared();
            }
        }
    }
    sq.sqrt()
}

pub(crate) fn norm_h1dpi_with(
    c: &CoefficientVector,
    partition: &Partition,
    mats: &RepMapMatrices,
) -> f64 {
    let layout = c.layout;
    let gvbar = mats.weighted_vbar();
    let gvring = mats.weighted_vring();
    let gv = mats.weighted_v();
    let mut sq = 0.0;
    for j in 1..=layout.n {
        let h = partition.h_j(j);
        for kappa in 0..layout.m {
            let coeffs = DVector::from_column_slice(c.comp(j, kappa));
            if kappa < layout.k {
                sq += h.powi(3) * (&gvbar * &coeffs).norm_squared();
                sq += h * (&gvring * &coeffs).norm_squared();
            } else {
                sq += h * (&gv * &coeffs).norm_squared();
            }
        }
    }
    sq.sqrt()
}

/// Extremal singular values of 𝒰 and 𝒰̂ and the induced operator norms of
/// ℛ and ℛ⁻¹.
#[derive(Debug, Clone, Copy)]
pub struct RepMapReport {
    pub sigma_max_u: f64,
    pub sigma_min_u: f64,
    pub sigma_max_uhat: f64,
    pub sigma_min_uhat: f64,
}

impl RepMapReport {
    /// ‖ℛ‖ from coefficients to L².
    pub fn norm_r_l2(&self) -> f64 {
        self.sigma_max_u
    }

    /// ‖ℛ⁻¹‖ from L² (restricted to the ansatz space) to coefficients.
    pub fn norm_r_inv_l2(&self) -> f64 {
        1.0 / self.sigma_min_u
    }

    /// ‖ℛ‖ from coefficients to broken H¹.
    pub fn norm_r_h1(&self) -> f64 {
        self.sigma_max_uhat
    }

    /// ‖ℛ⁻¹‖ from broken H¹ to coefficients.
    pub fn norm_r_inv_h1(&self) -> f64 {
        1.0 / self.sigma_min_uhat
    }

    pub fn kappa_u(&self) -> f64 {
        self.sigma_max_u / self.sigma_min_u
    }

    pub fn kappa_uhat(&self) -> f64 {
        self.sigma_max_uhat / self.sigma_min_uhat
    }
}

/// Extremal singular values of the block-diagonal 𝒰, 𝒰̂ for the layout
/// (m, k), computed exactly from the per-interval blocks:
/// the spectrum of a block-diagonal matrix is the union of block spectra, so
/// the extrema are min/max over j of the small-block extrema.
pub fn rep_map_conditioning(
    partition: &Partition,
    basis: &Basis,
    m: usize,
    k: usize,
) -> Result<RepMapReport> {
    let layout = Layout::new(partition.n(), m, k, basis.degree())?;
    let mats = build_interp_matrices(basis)?;
    let gvbar = mats.weighted_vbar();
    let gv = mats.weighted_v();
    let (bar_max, bar_min) = sv_extremes(&gvbar);
    let (v_max, v_min) = if layout.k < layout.m {
        sv_extremes(&gv)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY) // no algebraic blocks
    };
    let has_alg = layout.k < layout.m;

    let mut smax_u = f64::NEG_INFINITY;
    let mut smin_u = f64::INFINITY;
    let mut smax_uhat = f64::NEG_INFINITY;
    let mut smin_uhat = f64::INFINITY;

    // distinct stepsizes only (bitwise dedup keeps uniform grids O(1))
    let mut seen: Vec<u64> = Vec::new();
    for j in 1..=partition.n() {
        let h = partition.h_j(j);
        if seen.contains(&h.to_bits()) {
            continue;
        }
        seen.push(h.to_bits());
        let rh = h.sqrt();
        // L² blocks: h^{3/2}·Γ̄V̄ and h^{1/2}·ΓV
        smax_u = smax_u.max(h * rh * bar_max);
        smin_u = smin_u.min(h * rh * bar_min);
        if has_alg {
            smax_u = smax_u.max(rh * v_max);
            smin_u = smin_u.min(rh * v_min);
        }
        // H¹ blocks: h^{1/2}·[h·Γ̄V̄ ; Γ̄V̊] and the same algebraic block
        let (red_max, red_min) = sv_extremes(&mats.u_reduced(h));
        smax_uhat = smax_uhat.max(rh * red_max);
        smin_uhat = smin_uhat.min(rh * red_min);
        if has_alg {
            smax_uhat = smax_uhat.max(rh * v_max);
            smin_uhat = smin_uhat.min(rh * v_min);
        }
    }
    Ok(RepMapReport {
        sigma_max_u: smax_u,
        sigma_min_u: smin_u,
        sigma_max_uhat: smax_uhat,
        sigma_min_uhat: smin_uhat,
    })
}
