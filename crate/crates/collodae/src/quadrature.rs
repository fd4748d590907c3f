//! Gauss–Legendre rules on [0,1], collocation node sets, and the weight
//! matrices L^C, L^I, L^R of the least-squares functional.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poly;

/// A quadrature rule on [0,1] with positive weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Largest polynomial degree integrated exactly.
    pub exactness_degree: usize,
}

impl QuadratureRule {
    /// ∫₀¹ g(τ) dτ approximated by the rule.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Gauss–Legendre rule with `count` nodes on [0,1] (exact to degree
/// 2·count − 1), computed from the symmetric Jacobi matrix (Golub–Welsch):
/// nodes are its eigenvalues, weights come from the first components of the
/// eigenvectors.
pub fn gauss_legendre(count: usize) -> QuadratureRule {
    assert!(count >= 1, "need at least one node");
    if count == 1 {
        return QuadratureRule {
            nodes: vec![0.5],
            weights: vec![1.0],
            exactness_degree: 1,
        };
    }
    // Jacobi matrix for Legendre polynomials on [−1,1]: zero diagonal,
    // off-diagonal β_i = i / sqrt(4i² − 1).
    let mut jacobi = DMatrix::<f64>::zeros(count, count);
    for i in 1..count {
        let fi = i as f64;
        let beta = fi / (4.0 * fi * fi - 1.0).sqrt();
        jacobi[(i - 1, i)] = beta;
        jacobi[(i, i - 1)] = beta;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            // weight on [−1,1] is 2·v0²; the map to [0,1] halves lengths.
            (0.5 * (x + 1.0), v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        exactness_degree: 2 * count - 1,
    }
}

/// Collocation node families for the per-interval residual sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    GaussLegendre,
    Uniform,
}

/// M collocation nodes 0 ≤ ρ_1 < … < ρ_M ≤ 1.
pub fn collocation_nodes(m_points: usize, kind: NodeKind) -> Result<Vec<f64>> {
    if m_points == 0 {
        return Err(Error::invalid("need at least one collocation node"));
    }
    match kind {
        NodeKind::GaussLegendre => Ok(gauss_legendre(m_points).nodes),
        NodeKind::Uniform => {
            if m_points == 1 {
                return Err(Error::invalid(
                    "uniform collocation needs at least two nodes",
                ));
            }
            Ok((0..m_points)
                .map(|i| i as f64 / (m_points - 1) as f64)
                .collect())
        }
    }
}

/// The three choices of the SPD weight matrix L in the discrete functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightVariant {
    /// L = M⁻¹·I — plain averaging.
    C,
    /// L = diag(γ_1,…,γ_M) — interpolatory quadrature weights at ρ.
    I,
    /// L = (V⁻¹)ᵀV⁻¹ — exact integration of the degree-(M−1) interpolant.
    R,
}

impl WeightVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C" => Ok(WeightVariant::C),
            "I" => Ok(WeightVariant::I),
            "R" => Ok(WeightVariant::R),
            other => Err(Error::invalid(format!("unknown functional variant {other:?}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WeightVariant::C => "C",
            WeightVariant::I => "I",
            WeightVariant::R => "R",
        }
    }
}

/// SPD weight matrix L together with a factor S such that SᵀS = L.
///
/// Assembly applies S directly so the functional becomes an ordinary
/// Euclidean least-squares problem.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    pub variant: WeightVariant,
    pub l: DMatrix<f64>,
    pub s: DMatrix<f64>,
}

/// L²(0,1)-orthonormalized shifted Legendre polynomial φ_d(τ) =
/// √(2d+1)·P_d(2τ−1).
pub fn orthonormal_legendre(d: usize, tau: f64) -> f64 {
    (2.0 * d as f64 + 1.0).sqrt() * poly::legendre(d, 2.0 * tau - 1.0)
}

/// Interpolatory quadrature weights at arbitrary distinct nodes ρ ⊂ [0,1]:
/// the weights γ with Σ γ_i p(ρ_i) = ∫₀¹ p for all p of degree < M, found by
/// solving the collocation system in the orthonormal Legendre basis.
pub fn interpolatory_weights(rho: &[f64]) -> Result<Vec<f64>> {
    let m = rho.len();
    let v = orthonormal_collocation_matrix(rho)?;
    // Vᵀ γ = (∫φ_0, …, ∫φ_{M−1}) = (1, 0, …, 0) since φ_0 ≡ 1 and the rest
    // are orthogonal to constants.
    let mut rhs = DVector::<f64>::zeros(m);
    rhs[0] = 1.0;
    v.transpose()
        .lu()
        .solve(&rhs)
        .map(|g| g.iter().copied().collect())
        .ok_or_else(|| Error::numerical("singular collocation matrix (coincident nodes?)"))
}

fn orthonormal_collocation_matrix(rho: &[f64]) -> Result<DMatrix<f64>> {
    let m = rho.len();
    if m == 0 {
        return Err(Error::invalid("empty node set"));
    }
    for w in rho.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::invalid("collocation nodes must be strictly increasing"));
        }
    }
    Ok(DMatrix::from_fn(m, m, |i, a| {
        orthonormal_legendre(a, rho[i])
    }))
}

/// Build the weight matrix for a variant at M nodes ρ.
pub fn weight_matrix(variant: WeightVariant, m_points: usize, rho: &[f64]) -> Result<WeightMatrix> {
    if rho.len() != m_points {
        return Err(Error::shape(format!(
            "expected {m_points} nodes, got {}",
            rho.len()
        )));
    }
    match variant {
        WeightVariant::C => {
            let l = DMatrix::identity(m_points, m_points) / m_points as f64;
            let s = DMatrix::identity(m_points, m_points) / (m_points as f64).sqrt();
            Ok(WeightMatrix { variant, l, s })
        }
        WeightVariant::I => {
            let gamma = interpolatory_weights(rho)?;
            if gamma.iter().any(|&g| g <= 0.0) {
                return Err(Error::numerical(
                    "interpolatory weights not positive at these nodes",
                ));
            }
            let l = DMatrix::from_diagonal(&DVector::from_iterator(
                m_points,
                gamma.iter().copied(),
            ));
            let s = DMatrix::from_diagonal(&DVector::from_iterator(
                m_points,
                gamma.iter().map(|g| g.sqrt()),
            ));
            Ok(WeightMatrix { variant, l, s })
        }
        WeightVariant::R => {
            let v = orthonormal_collocation_matrix(rho)?;
            let v_inv = v
                .clone()
                .lu()
                .try_inverse()
                .ok_or_else(|| Error::numerical("singular collocation matrix (coincident nodes?)"))?;
            let l = v_inv.transpose() * &v_inv;
            Ok(WeightMatrix {
                variant,
                l,
                s: v_inv,
            })
        }
    }
}
