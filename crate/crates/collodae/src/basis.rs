//! The four polynomial basis families {p_0,…,p_{N−1}} on [0,1], their
//! antiderivative bases {p̄_0,…,p̄_N} (p̄_0 ≡ 1, p̄_i' = p_{i−1}), and the
//! integral vector f = [1, ∫p_0, …, ∫p_{N−1}].
//!
//! Differential solution components are expanded in the scaled antiderivative
//! basis, algebraic components and derivatives in {p_i} directly; the
//! continuity constraint and the conditioning results all hinge on endpoint
//! values of p̄, which is why f lives here.

use crate::error::{Error, Result};
use crate::poly;
use crate::quadrature::gauss_legendre;

/// The supported basis families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Shifted Legendre: p_i(τ) = P_i(2τ−1).
    Legendre,
    /// Derivatives of the modified Legendre antiderivative basis:
    /// p̄_i(τ) = P_i(2τ−1) − (−1)^i for i ≥ 1, hence p_i = 2·P'_{i+1}(2τ−1).
    ModifiedLegendre,
    /// Shifted Chebyshev: p_i(τ) = T_i(2τ−1).
    Chebyshev,
    /// Lagrange cardinal polynomials at N interior interpolation nodes
    /// (default: shifted Chebyshev nodes), represented internally in the
    /// shifted Chebyshev coefficient basis.
    RungeKutta,
}

impl BasisKind {
    /// Stable lowercase label used in CLI output and CSV headers.
    pub fn label(&self) -> &'static str {
        match self {
            BasisKind::Legendre => "legendre",
            BasisKind::ModifiedLegendre => "modified-legendre",
            BasisKind::Chebyshev => "chebyshev",
            BasisKind::RungeKutta => "runge-kutta",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "legendre" | "l" => Ok(BasisKind::Legendre),
            "modified-legendre" | "mlegendre" | "ml" | "modified_legendre" => {
                Ok(BasisKind::ModifiedLegendre)
            }
            "chebyshev" | "ch" => Ok(BasisKind::Chebyshev),
            "runge-kutta" | "rungekutta" | "rk" | "runge_kutta" => Ok(BasisKind::RungeKutta),
            other => Err(Error::invalid(format!("unknown basis family {other:?}"))),
        }
    }

    /// All four families, in the column order used by the experiment tables.
    pub fn all() -> [BasisKind; 4] {
        [
            BasisKind::Legendre,
            BasisKind::ModifiedLegendre,
            BasisKind::Chebyshev,
            BasisKind::RungeKutta,
        ]
    }
}

/// Chebyshev representation of the Runge-Kutta cardinal polynomials.
#[derive(Debug, Clone)]
struct RkData {
    nodes: Vec<f64>,
    /// Coefficients of p_i in T_d(2τ−1), d < N.
    p_cheb: Vec<Vec<f64>>,
    /// Coefficients of p̄_{i+1} = ∫₀^τ p_i, d ≤ N.
    pbar_cheb: Vec<Vec<f64>>,
}

/// A basis family instantiated at polynomial degree N.
#[derive(Debug, Clone)]
pub struct Basis {
    kind: BasisKind,
    degree: usize,
    rk: Option<RkData>,
}

/// The N shifted Chebyshev nodes τ_κ = ½(1 + cos((2κ−1)π/(2N))) in
/// increasing order; all lie in the open interval (0,1).
pub fn chebyshev_interp_nodes(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    (1..=n)
        .rev()
        .map(|kappa| 0.5 * (1.0 + ((2 * kappa - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos()))
        .collect()
}

impl Basis {
    /// Family `kind` at degree N ≥ 1. Runge-Kutta uses the default shifted
    /// Chebyshev interpolation nodes.
    pub fn new(kind: BasisKind, n: usize) -> Result<Basis> {
        if n == 0 {
            return Err(Error::invalid("polynomial degree N must be at least 1"));
        }
        let rk = match kind {
            BasisKind::RungeKutta => Some(RkData::build(&chebyshev_interp_nodes(n))?),
            _ => None,
        };
        Ok(Basis { kind, degree: n, rk })
    }

    /// Runge-Kutta family with user-supplied interpolation nodes
    /// 0 < τ_1 < … < τ_N < 1.
    pub fn runge_kutta_with_nodes(nodes: &[f64]) -> Result<Basis> {
        if nodes.is_empty() {
            return Err(Error::invalid("need at least one interpolation node"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("interpolation nodes must be strictly increasing"));
        }
        if nodes[0] <= 0.0 || *nodes.last().unwrap() >= 1.0 {
            return Err(Error::invalid("interpolation nodes must lie in the open interval (0,1)"));
        }
        Ok(Basis {
            kind: BasisKind::RungeKutta,
            degree: nodes.len(),
            rk: Some(RkData::build(nodes)?),
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// The polynomial degree N (the family spans 𝔓_{N−1}, the antiderivative
    /// basis spans 𝔓_N).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Interpolation nodes of a Runge-Kutta family.
    pub fn rk_nodes(&self) -> Option<&[f64]> {
        self.rk.as_ref().map(|d| d.nodes.as_slice())
    }

    fn check_tau(tau: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::invalid(format!("τ = {tau} outside [0,1]")));
        }
        Ok(())
    }

    /// p_i(τ) for 0 ≤ i < N.
    pub fn eval_p(&self, i: usize, tau: f64) -> Result<f64> {
        if i >= self.degree {
            return Err(Error::invalid(format!(
                "basis index {i} out of range (N = {})",
                self.degree
            )));
        }
        Self::check_tau(tau)?;
        let x = 2.0 * tau - 1.0;
        Ok(match self.kind {
            BasisKind::Legendre => poly::legendre(i, x),
            BasisKind::ModifiedLegendre => 2.0 * *poly::legendre_deriv_all(i + 1, x).last().unwrap(),
            BasisKind::Chebyshev => poly::chebyshev(i, x),
            BasisKind::RungeKutta => poly::cheb_clenshaw(&self.rk.as_ref().unwrap().p_cheb[i], x),
        })
    }

    /// p̄_i(τ) for 0 ≤ i ≤ N; p̄_0 ≡ 1 and p̄_i(0) = 0 for i ≥ 1.
    pub fn eval_pbar(&self, i: usize, tau: f64) -> Result<f64> {
        if i > self.degree {
            return Err(Error::invalid(format!(
                "antiderivative index {i} out of range (N = {})",
                self.degree
            )));
        }
        Self::check_tau(tau)?;
        if i == 0 {
            return Ok(1.0);
        }
        let x = 2.0 * tau - 1.0;
        Ok(match self.kind {
            BasisKind::Legendre => {
                if i == 1 {
                    tau
                } else {
                    let p = poly::legendre_all(i, x);
                    (p[i] - p[i - 2]) / (2.0 * (2.0 * i as f64 - 1.0))
                }
            }
            BasisKind::ModifiedLegendre => {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                poly::legendre(i, x) - sign
            }
            BasisKind::Chebyshev => match i {
                1 => tau,
                2 => (poly::chebyshev(2, x) - 1.0) / 8.0,
                _ => {
                    let t = poly::chebyshev_all(i, x);
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    0.25 * ((t[i] - sign) / i as f64 - (t[i - 2] - sign) / (i as f64 - 2.0))
                }
            },
            BasisKind::RungeKutta => {
                poly::cheb_clenshaw(&self.rk.as_ref().unwrap().pbar_cheb[i - 1], x)
            }
        })
    }

    /// p̄_i'(τ): 0 for i = 0, p_{i−1}(τ) for i ≥ 1.
    pub fn eval_pbar_derivative(&self, i: usize, tau: f64) -> Result<f64> {
        if i > self.degree {
            return Err(Error::invalid(format!(
                "antiderivative index {i} out of range (N = {})",
                self.degree
            )));
        }
        if i == 0 {
            Self::check_tau(tau)?;
            return Ok(0.0);
        }
        self.eval_p(i - 1, tau)
    }

    /// All values p_0(τ), …, p_{N−1}(τ).
    pub fn eval_all_p(&self, tau: f64) -> Result<Vec<f64>> {
        Self::check_tau(tau)?;
        let n = self.degree;
        let x = 2.0 * tau - 1.0;
        Ok(match self.kind {
            BasisKind::Legendre => poly::legendre_all(n - 1, x),
            BasisKind::ModifiedLegendre => {
                let dp = poly::legendre_deriv_all(n, x);
                (0..n).map(|i| 2.0 * dp[i + 1]).collect()
            }
            BasisKind::Chebyshev => poly::chebyshev_all(n - 1, x),
            BasisKind::RungeKutta => {
                let rk = self.rk.as_ref().unwrap();
                (0..n)
                    .map(|i| poly::cheb_clenshaw(&rk.p_cheb[i], x))
                    .collect()
            }
        })
    }

    /// All values p̄_0(τ), …, p̄_N(τ).
    pub fn eval_all_pbar(&self, tau: f64) -> Result<Vec<f64>> {
        Self::check_tau(tau)?;
        (0..=self.degree).map(|i| self.eval_pbar(i, tau)).collect()
    }

    /// The integral vector f ∈ ℝ^{N+1}: f_1 = 1, f_{i+2} = ∫₀¹ p_i.
    ///
    /// Closed forms per family; Runge-Kutta integrates the cardinals with a
    /// Gauss rule exact beyond degree N−1 (the entries are exactly the
    /// interpolatory quadrature weights of the nodes).
    pub fn integral_weights_f(&self) -> Vec<f64> {
        let n = self.degree;
        let mut f = Vec::with_capacity(n + 1);
        f.push(1.0);
        match self.kind {
            BasisKind::Legendre => {
                f.push(1.0);
                f.extend(std::iter::repeat(0.0).take(n - 1));
            }
            BasisKind::ModifiedLegendre => {
                for i in 0..n {
                    f.push(if i % 2 == 0 { 2.0 } else { 0.0 });
                }
            }
            BasisKind::Chebyshev => {
                for i in 0..n {
                    if i == 1 {
                        f.push(0.0);
                    } else {
                        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                        f.push(0.5 * (1.0 + sign) / (1.0 - (i * i) as f64));
                    }
                }
            }
            BasisKind::RungeKutta => {
                let rule = gauss_legendre(n / 2 + 1);
                for i in 0..n {
                    f.push(rule.integrate(|tau| self.eval_p(i, tau).unwrap()));
                }
            }
        }
        f
    }
}

impl RkData {
    /// Build the Chebyshev-coefficient representation of the Lagrange
    /// cardinals for `nodes` by collocation at N shifted Chebyshev points.
    fn build(nodes: &[f64]) -> Result<RkData> {
        let n = nodes.len();
        let cheb_pts = chebyshev_interp_nodes(n);
        // Collocation matrix T_{κd} = T_d(2ξ_κ−1) at the Chebyshev points.
        let mut t = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (row, &xi) in cheb_pts.iter().enumerate() {
            let vals = poly::chebyshev_all(n.saturating_sub(1), 2.0 * xi - 1.0);
            for (col, &v) in vals.iter().enumerate() {
                t[(row, col)] = v;
            }
        }
        let lu = t.lu();

        let lagrange = |i: usize, x: f64| -> f64 {
            let mut prod = 1.0;
            for (j, &tj) in nodes.iter().enumerate() {
                if j != i {
                    prod *= (x - tj) / (nodes[i] - tj);
                }
            }
            prod
        };

        let mut p_cheb = Vec::with_capacity(n);
        let mut pbar_cheb = Vec::with_capacity(n);
        for i in 0..n {
            let rhs = nalgebra::DVector::from_iterator(
                n,
                cheb_pts.iter().map(|&xi| lagrange(i, xi)),
            );
            let coeffs = lu
                .solve(&rhs)
                .ok_or_else(|| Error::numerical("degenerate interpolation nodes"))?;
            let coeffs: Vec<f64> = coeffs.iter().copied().collect();
            pbar_cheb.push(poly::cheb_antiderivative_tau(&coeffs));
            p_cheb.push(coeffs);
        }
        Ok(RkData {
            nodes: nodes.to_vec(),
            p_cheb,
            pbar_cheb,
        })
    }
}
