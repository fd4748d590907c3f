//! Solving the constrained least-squares problem by the nullspace method,
//! the restricted condition number κ_𝒞(𝒜), and a-priori perturbation
//! bounds.
//!
//! With an orthonormal kernel basis 𝒟 of the continuity constraint 𝒞, the
//! constrained problem  min |𝒜c − r| s.t. 𝒞c = 0  is equivalent to the
//! unconstrained problem  min_d |𝒜𝒟d − r|, c = 𝒟d. Since P = 𝒟𝒟ᵀ is the
//! orthogonal projector onto ker 𝒞, the nonzero singular values of 𝒜P and
//! 𝒜𝒟 agree, so
//!
//!   κ_𝒞(𝒜) = ‖𝒜P‖·‖(𝒜P)⁺‖ = σ_max(𝒜𝒟)/σ_min(𝒜𝒟).


use crate::assembly::DiscreteSystem;
use crate::constraint::nullspace_basis;
use crate::error::{Error, Result};
use crate::linalg::{lstsq, sv_extremes};
use crate::repmap::CoefficientVector;

/// Result of a least-squares collocation solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coefficients: CoefficientVector,
    /// |𝔯| = |𝒜c − r|, the square root of the discrete functional value.
    pub residual_norm: f64,
    /// σ_max(𝒜𝒟) = ‖𝒜P‖.
    pub sigma_max: f64,
    /// σ_min(𝒜𝒟) = 1/‖(𝒜P)⁺‖.
    pub sigma_min: f64,
}

impl SolveResult {
    pub fn kappa_c_of_a(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }
}

/// Solve min |𝒜c − r| subject to the continuity constraints, via one SVD of
/// 𝒜𝒟. Errors if 𝒜𝒟 is numerically rank deficient (the discrete problem
/// then does not determine the solution).
pub fn solve(system: &DiscreteSystem) -> Result<SolveResult> {
    let d_basis = nullspace_basis(&system.partition, &system.basis, system.layout)?;
    let ad = system.to_dense() * &d_basis;
    let r = system.rhs_dense();
    let (d_sol, sigma_max, sigma_min) = lstsq(&ad, &r).map_err(|e| {
        Error::numerical(format!(
            "constrained least-squares solve failed ({e}); \
             the assembled system is rank deficient on the constraint kernel"
        ))
    })?;
    let c = &d_basis * &d_sol;
    let residual_norm = (&ad * &d_sol - &r).norm();
    Ok(SolveResult {
        coefficients: CoefficientVector::from_data(system.layout, c)?,
        residual_norm,
        sigma_max,
        sigma_min,
    })
}

/// Extremal singular values of 𝒜 restricted to ker 𝒞.
#[derive(Debug, Clone, Copy)]
pub struct RestrictedConditioning {
    pub sigma_max: f64,
    pub sigma_min: f64,
}

impl RestrictedConditioning {
    pub fn kappa(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }

    /// ‖(𝒜P)⁺‖.
    pub fn pinv_norm(&self) -> f64 {
        1.0 / self.sigma_min
    }
}

/// κ_𝒞(𝒜) data without solving: one SVD of 𝒜𝒟.
pub fn kappa_c_of_a(system: &DiscreteSystem) -> Result<RestrictedConditioning> {
    let d_basis = nullspace_basis(&system.partition, &system.basis, system.layout)?;
    let ad = system.to_dense() * &d_basis;
    let (sigma_max, sigma_min) = sv_extremes(&ad);
    if sigma_min <= 0.0 {
        return Err(Error::numerical("𝒜 restricted to ker 𝒞 is singular"));
    }
    Ok(RestrictedConditioning {
        sigma_max,
        sigma_min,
    })
}

/// Norm data for the perturbation bound with unchanged constraint kernel
/// (Δ𝒞 = 0, or more generally ker(𝒞+Δ𝒞) = ker 𝒞). All inputs are norms,
/// not matrices; ‖Δ𝒜P‖ = ‖Δ𝒜𝒟‖ for any orthonormal kernel basis 𝒟.
#[derive(Debug, Clone, Copy)]
pub struct FixedKernelInputs {
    /// ‖(𝒜P)⁺‖ = 1/σ_min(𝒜𝒟).
    pub pinv_ap_norm: f64,
    /// ‖Δ𝒜P‖.
    pub delta_ap_norm: f64,
    /// ‖𝒜P‖ = σ_max(𝒜𝒟).
    pub ap_norm: f64,
    /// |c|, norm of the unperturbed solution.
    pub c_norm: f64,
    /// |r|, norm of the right-hand side.
    pub r_norm: f64,
    /// |𝔯| = |r − 𝒜c|, the unperturbed residual.
    pub residual_norm: f64,
    /// |Δr|.
    pub delta_r_norm: f64,
}

/// A-priori bound on the solution perturbation.
#[derive(Debug, Clone, Copy)]
pub struct FixedKernelBound {
    /// Bound on |Δc|.
    pub absolute: f64,
    /// Bound on |Δc|/|c|; unavailable when r = 0 or c = 0.
    pub relative: Option<f64>,
    /// ω = ‖(𝒜P)⁺‖·‖Δ𝒜P‖ (must be < 1).
    pub omega: f64,
}

/// Perturbation bound for min |(𝒜+Δ𝒜)c − (r+Δr)| over the *unchanged*
/// kernel:
///
///   |Δc| ≤ ‖(𝒜P)⁺‖/(1−ω) · { ‖Δ𝒜P‖·(|c| + ‖(𝒜P)⁺‖·|𝔯|) + |Δr| }
///
///   |Δc|/|c| ≤ 1/(1−ω) · { [κ_𝒞(𝒜) + |𝔯|/(‖𝒜P‖|c|)·κ_𝒞(𝒜)²]·‖Δ𝒜P‖/‖𝒜P‖
///                           + ‖(𝒜P)⁺‖|r|/|c| · |Δr|/|r| }
pub fn perturbation_bound_fixed_kernel(inp: &FixedKernelInputs) -> Result<FixedKernelBound> {
    let omega = inp.pinv_ap_norm * inp.delta_ap_norm;
    if !(omega < 1.0) {
        return Err(Error::numerical(format!(
            "perturbation too large: ω = ‖(𝒜P)⁺‖·‖Δ𝒜P‖ = {omega} is not < 1"
        )));
    }
    let absolute = inp.pinv_ap_norm / (1.0 - omega)
        * (inp.delta_ap_norm * (inp.c_norm + inp.pinv_ap_norm * inp.residual_norm)
            + inp.delta_r_norm);
    let relative = if inp.r_norm > 0.0 && inp.c_norm > 0.0 {
        let kappa = inp.ap_norm * inp.pinv_ap_norm;
        Some(
            ((kappa + inp.residual_norm / (inp.ap_norm * inp.c_norm) * kappa * kappa)
                * (inp.delta_ap_norm / inp.ap_norm)
                + inp.pinv_ap_norm * inp.r_norm / inp.c_norm * (inp.delta_r_norm / inp.r_norm))
                / (1.0 - omega),
        )
    } else {
        None
    };
    Ok(FixedKernelBound {
        absolute,
        relative,
        omega,
    })
}

/// Norm data for the perturbation bound when Δ𝒞 moves the constraint kernel.
#[derive(Debug, Clone, Copy)]
pub struct PerturbedKernelInputs {
    /// ‖𝒞⁺‖ = 1/σ_min(𝒞).
    pub pinv_c_norm: f64,
    /// ‖Δ𝒞‖.
    pub delta_c_norm: f64,
    /// κ(𝒞) = ‖𝒞‖·‖𝒞⁺‖.
    pub kappa_c: f64,
    /// ‖𝒜 + Δ𝒜‖ (the full matrix, not restricted).
    pub a_plus_delta_norm: f64,
    /// ‖(𝒜P)⁺‖.
    pub pinv_ap_norm: f64,
    /// ‖Δ𝒜P‖.
    pub delta_ap_norm: f64,
    /// ‖𝒜P‖.
    pub ap_norm: f64,
    /// |c|.
    pub c_norm: f64,
    /// |r|.
    pub r_norm: f64,
    /// |𝔯| = |r − 𝒜c|.
    pub residual_norm: f64,
    /// |Δr|.
    pub delta_r_norm: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PerturbedKernelBound {
    pub absolute: f64,
    pub relative: Option<f64>,
    /// ϰ = ‖𝒞⁺‖·‖Δ𝒞‖ (must be < 1/2).
    pub varkappa: f64,
    /// ω_Δ = ‖(𝒜P)⁺‖·‖ℜ‖ with ‖ℜ‖ replaced by its bound (must be < 1).
    pub omega_delta: f64,
    /// Upper bound on ‖ℜ‖ = ‖Δ𝒜𝒟 + (𝒜+Δ𝒜)(𝒟_Δ − 𝒟)‖.
    pub frak_r_bound: f64,
}

/// Perturbation bound when the perturbed problem constrains with 𝒞 + Δ𝒞:
/// the kernel itself drifts by at most
///
///   t = ‖𝒞⁺‖/(1−ϰ) · (√2·κ(𝒞) + 1) · ‖Δ𝒞‖,
///
/// the reduced matrix by ‖ℜ‖ ≤ ‖Δ𝒜P‖ + ‖𝒜+Δ𝒜‖·t, and
///
///   |Δc| ≤ ‖(𝒜P)⁺‖/(1−ω_Δ)·{ ‖ℜ‖·(|c| + ‖(𝒜P)⁺‖|𝔯|) + |Δr| } + t·|c|,
///
/// with the relative bound analogous (trailing term t instead of t·|c|).
/// Preconditions: ϰ < 1/2 and ω_Δ < 1.
pub fn perturbation_bound_perturbed_kernel(
    inp: &PerturbedKernelInputs,
) -> Result<PerturbedKernelBound> {
    let varkappa = inp.pinv_c_norm * inp.delta_c_norm;
    if !(varkappa < 0.5) {
        return Err(Error::numerical(format!(
            "constraint perturbation too large: ϰ = ‖𝒞⁺‖·‖Δ𝒞‖ = {varkappa} is not < 1/2"
        )));
    }
    let drift = inp.pinv_c_norm / (1.0 - varkappa)
        * (std::f64::consts::SQRT_2 * inp.kappa_c + 1.0)
        * inp.delta_c_norm;
    let frak_r_bound = inp.delta_ap_norm + inp.a_plus_delta_norm * drift;
    let omega_delta = inp.pinv_ap_norm * frak_r_bound;
    if !(omega_delta < 1.0) {
        return Err(Error::numerical(format!(
            "perturbation too large: ω_Δ = ‖(𝒜P)⁺‖·‖ℜ‖ = {omega_delta} is not < 1"
        )));
    }
    let absolute = inp.pinv_ap_norm / (1.0 - omega_delta)
        * (frak_r_bound * (inp.c_norm + inp.pinv_ap_norm * inp.residual_norm)
            + inp.delta_r_norm)
        + drift * inp.c_norm;
    let relative = if inp.r_norm > 0.0 && inp.c_norm > 0.0 {
        let kappa = inp.ap_norm * inp.pinv_ap_norm;
        Some(
            ((kappa + inp.residual_norm / (inp.ap_norm * inp.c_norm) * kappa * kappa)
                * (frak_r_bound / inp.ap_norm)
                + inp.pinv_ap_norm * inp.r_norm / inp.c_norm * (inp.delta_r_norm / inp.r_norm))
                / (1.0 - omega_delta)
                + drift,
        )
    } else {
        None
    };
    Ok(PerturbedKernelBound {
        absolute,
        relative,
        varkappa,
        omega_delta,
        frak_r_bound,
    })
}
