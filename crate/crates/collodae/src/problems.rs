//! Benchmark boundary-value DAEs with known exact solutions, and the broken
//! H¹_D error measure used in convergence studies.

use nalgebra::{DMatrix, DVector};

use crate::assembly::DaeProblem;
use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::mesh::Partition;
use crate::quadrature::gauss_legendre;
use crate::repmap::{evaluate_dx_derivative_local, evaluate_local, CoefficientVector};

/// Index-3 example on [0,1] (m = 3, k = 2, no boundary conditions: the
/// solution is fully determined by consistency). The parameter η controls the
/// conditioning of the problem; η = 0 decouples the chain.
///
/// Exact solution u = (e^{−2t}·sin t, e^{−t}·cos t, e^{−t}·sin t).
pub fn example_index3(eta: f64) -> DaeProblem {
    let u1 = |t: f64| (-2.0 * t).exp() * t.sin();
    let u2 = |t: f64| (-t).exp() * t.cos();
    let du1 = |t: f64| (-2.0 * t).exp() * (t.cos() - 2.0 * t.sin());
    let du2 = |t: f64| -(-t).exp() * (t.cos() + t.sin());
    DaeProblem::new(
        3,
        2,
        (0.0, 1.0),
        move |t| DMatrix::from_row_slice(3, 2, &[1.0, 0.0, t * eta, 1.0, 0.0, 0.0]),
        move |t| {
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    0.0,
                    0.0,
                    1.0,
                    eta + 1.0,
                    0.0,
                    0.0,
                    t * eta,
                    1.0,
                    0.0,
                ],
            )
        },
        move |t| {
            DVector::from_vec(vec![
                du1(t) + (-t).exp() * t.sin(),
                t * eta * du1(t) + du2(t) + (eta + 1.0) * u1(t),
                t * eta * u1(t) + u2(t),
            ])
        },
        DMatrix::zeros(0, 3),
        DMatrix::zeros(0, 3),
        DVector::zeros(0),
    )
    .expect("example data is consistent")
    .with_exact_solution(
        move |t| DVector::from_vec(vec![u1(t), u2(t), (-t).exp() * t.sin()]),
        move |t| DVector::from_vec(vec![du1(t), du2(t)]),
    )
}

/// Hessenberg index-2 example on [0,1] (m = 3, k = 2, one initial condition
/// x₁(0) = 0). Stiffness parameter η (default −25 in the experiments) and
/// shift λ.
///
/// Exact solution x = (e^{−t}·sin t, e^{−2t}·sin t, e^{−t}·cos t).
pub fn example_hessenberg2(eta: f64, lambda: f64) -> DaeProblem {
    let x1 = |t: f64| (-t).exp() * t.sin();
    let x2 = |t: f64| (-2.0 * t).exp() * t.sin();
    let x3 = |t: f64| (-t).exp() * t.cos();
    let dx1 = |t: f64| (-t).exp() * (t.cos() - t.sin());
    let dx2 = |t: f64| (-2.0 * t).exp() * (t.cos() - 2.0 * t.sin());
    let b_at = move |t: f64| {
        DMatrix::from_row_slice(
            3,
            3,
            &[
                lambda,
                -1.0,
                -1.0,
                eta * t * (1.0 - eta * t) - eta,
                lambda,
                -eta * t,
                1.0 - eta * t,
                1.0,
                0.0,
            ],
        )
    };
    let mut g_a = DMatrix::zeros(1, 3);
    g_a[(0, 0)] = 1.0;
    DaeProblem::new(
        3,
        2,
        (0.0, 1.0),
        |_| DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
        b_at,
        move |t| {
            let b = b_at(t);
            let x = DVector::from_vec(vec![x1(t), x2(t), x3(t)]);
            let mut q = &b * &x;
            q[0] += dx1(t);
            q[1] += dx2(t);
            q
        },
        g_a,
        DMatrix::zeros(1, 3),
        DVector::zeros(1),
    )
    .expect("example data is consistent")
    .with_exact_solution(
        move |t| DVector::from_vec(vec![x1(t), x2(t), x3(t)]),
        move |t| DVector::from_vec(vec![dx1(t), dx2(t)]),
    )
}

/// Index-3 multibody example on [0,5] (m = 7, k = 6, four initial
/// conditions): the equations of motion of a constrained mechanical system
/// with drift parameter ρ ≠ 0.
///
/// Exact solution x = (sin t, cos t, 2cos²t, cos t, −sin t, −2·sin 2t,
/// −ρ⁻¹·sin t).
pub fn example_campbell_moore(rho: f64) -> Result<DaeProblem> {
    if rho == 0.0 {
        return Err(Error::invalid(
            "the multibody example needs ρ ≠ 0 (the Lagrange multiplier scales with 1/ρ)",
        ));
    }
    let b_at = move |t: f64| {
        let (s, c) = t.sin_cos();
        DMatrix::from_row_slice(
            7,
            7,
            &[
                0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, //
                0.0, 0.0, s, 0.0, 1.0, -c, -2.0 * rho * c * c, //
                0.0, 0.0, -c, -1.0, 0.0, -s, -2.0 * rho * s * c, //
                0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0 * rho * s, //
                2.0 * rho * c * c, 2.0 * rho * s * c, -2.0 * rho * s, 0.0, 0.0, 0.0, 0.0,
            ],
        )
    };
    let x_at = move |t: f64| {
        let (s, c) = t.sin_cos();
        DVector::from_vec(vec![
            s,
            c,
            2.0 * c * c,
            c,
            -s,
            -2.0 * (2.0 * t).sin(),
            -s / rho,
        ])
    };
    let dx_at = move |t: f64| {
        let (s, c) = t.sin_cos();
        DVector::from_vec(vec![
            c,
            -s,
            -2.0 * (2.0 * t).sin(),
            -s,
            -c,
            -4.0 * (2.0 * t).cos(),
        ])
    };
    let a_mat = {
        let mut a = DMatrix::zeros(7, 6);
        for i in 0..6 {
            a[(i, i)] = 1.0;
        }
        a
    };
    let mut g_a = DMatrix::zeros(4, 7);
    for (row, comp) in [1usize, 2, 4, 5].into_iter().enumerate() {
        g_a[(row, comp)] = 1.0;
    }
    let a_for_q = a_mat.clone();
    Ok(DaeProblem::new(
        7,
        6,
        (0.0, 5.0),
        move |_| a_mat.clone(),
        b_at,
        move |t| &a_for_q * dx_at(t) + b_at(t) * x_at(t),
        g_a,
        DMatrix::zeros(4, 7),
        DVector::from_vec(vec![1.0, 2.0, 0.0, 0.0]),
    )?
    .with_exact_solution(x_at, dx_at))
}

/// Broken H¹_D distance between the represented approximation and the
/// problem's exact solution:
///
///   ( Σ_j ∫_j |x_π − x*|² + |(Dx_π)' − (Dx*)'|² dt )^{1/2},
///
/// by per-interval Gauss quadrature with N+3 points (the integrand is a
/// squared polynomial of degree ≤ 2N+2 against smooth data).
pub fn error_h1d(
    problem: &DaeProblem,
    c: &CoefficientVector,
    partition: &Partition,
    basis: &Basis,
) -> Result<f64> {
    let exact = problem
        .exact_solution()
        .ok_or_else(|| Error::invalid("problem has no exact solution attached"))?;
    let rule = gauss_legendre(basis.degree() + 3);
    let mut sq = 0.0;
    for j in 1..=partition.n() {
        let t0 = partition.t(j - 1);
        let h = partition.h_j(j);
        for (&tau, &gamma) in rule.nodes.iter().zip(&rule.weights) {
            let t = t0 + tau * h;
            let x = evaluate_local(c, partition, basis, j, tau)?;
            let dx = evaluate_dx_derivative_local(c, partition, basis, j, tau)?;
            let x_star = (exact.x)(t);
            let dx_star = (exact.dx)(t);
            sq += h * gamma * ((x - x_star).norm_squared() + (dx - dx_star).norm_squared());
        }
    }
    Ok(sq.sqrt())
}
