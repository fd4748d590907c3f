//! Problem description and assembly of the discrete least-squares system.
//!
//! The continuous problem is a linear boundary-value DAE with properly
//! involved derivative,
//!
//!   A(t)(Dx)'(t) + B(t)x(t) = q(t),  t ∈ [a,b],   G_a x(a) + G_b x(b) = d,
//!
//! with A(t) ∈ ℝ^{m×k}, B(t) ∈ ℝ^{m×m}, D = [I_k 0] ∈ ℝ^{k×m}, and boundary
//! data G_a, G_b ∈ ℝ^{ℓ×m} satisfying ker D ⊆ ker G_a ∩ ker G_b (the last
//! m−k columns vanish: boundary conditions may only involve the continuous,
//! differentiated part of the solution).
//!
//! Discretization: on each subinterval, the residual is sampled at M ≥ N+1
//! collocation points ρ_i and weighted by h_j^{1/2}(S ⊗ I_m) where SᵀS = L
//! is the chosen weight matrix, so that |𝒜c − r|² is the discrete functional
//! Φ_{π,M}. The boundary rows G_a Ω_1(0), G_b Ω_n(1) are appended unweighted
//! by default (an optional uniform scaling by the root mean stepsize is
//! available for conditioning studies).

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::mesh::Partition;
use crate::quadrature::{collocation_nodes, weight_matrix, NodeKind, WeightVariant};
use crate::repmap::{CoefficientVector, Layout};

/// Time-dependent matrix coefficient.
pub type MatrixFn = Box<dyn Fn(f64) -> DMatrix<f64> + Send + Sync>;
/// Time-dependent vector coefficient.
pub type VectorFn = Box<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

/// A known exact solution for convergence studies: x(t) ∈ ℝ^m and the
/// derivative (Dx)'(t) ∈ ℝ^k of its differentiated part.
pub struct ExactSolution {
    pub x: VectorFn,
    pub dx: VectorFn,
}

/// A linear boundary-value DAE in the form above.
pub struct DaeProblem {
    m: usize,
    k: usize,
    interval: (f64, f64),
    a_fn: MatrixFn,
    b_fn: MatrixFn,
    q_fn: VectorFn,
    g_a: DMatrix<f64>,
    g_b: DMatrix<f64>,
    d: DVector<f64>,
    exact: Option<ExactSolution>,
}

impl std::fmt::Debug for DaeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DaeProblem")
            .field("m", &self.m)
            .field("k", &self.k)
            .field("l_dyn", &self.d.len())
            .field("interval", &self.interval)
            .finish_non_exhaustive()
    }
}

impl DaeProblem {
    /// Validating constructor. `a_fn(t)` must be m×k, `b_fn(t)` m×m, `q_fn(t)`
    /// length m (checked at t = a); G_a, G_b are ℓ×m with ℓ ≤ k and zero
    /// columns beyond the first k.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: usize,
        k: usize,
        interval: (f64, f64),
        a_fn: impl Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
        b_fn: impl Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
        q_fn: impl Fn(f64) -> DVector<f64> + Send + Sync + 'static,
        g_a: DMatrix<f64>,
        g_b: DMatrix<f64>,
        d: DVector<f64>,
    ) -> Result<DaeProblem> {
        if k == 0 || k >= m {
            return Err(Error::invalid(format!(
                "need 0 < k < m for a DAE with nontrivial algebraic part, got k = {k}, m = {m}"
            )));
        }
        if interval.0 >= interval.1 {
            return Err(Error::invalid("empty time interval"));
        }
        let l = d.len();
        if g_a.shape() != (l, m) || g_b.shape() != (l, m) {
            return Err(Error::shape(format!(
                "boundary matrices must be {l}×{m} to match d ∈ ℝ^{l}"
            )));
        }
        if l > k {
            return Err(Error::invalid(format!(
                "{l} boundary conditions exceed the k = {k} dynamical degrees of freedom"
            )));
        }
        for col in k..m {
            for row in 0..l {
                if g_a[(row, col)] != 0.0 || g_b[(row, col)] != 0.0 {
                    return Err(Error::invalid(
                        "boundary conditions must not involve algebraic components \
                         (columns beyond k of G_a, G_b must vanish)",
                    ));
                }
            }
        }
        let t0 = interval.0;
        if a_fn(t0).shape() != (m, k) {
            return Err(Error::shape(format!("A(t) must be {m}×{k}")));
        }
        if b_fn(t0).shape() != (m, m) {
            return Err(Error::shape(format!("B(t) must be {m}×{m}")));
        }
        if q_fn(t0).len() != m {
            return Err(Error::shape(format!("q(t) must have length {m}")));
        }
        Ok(DaeProblem {
            m,
            k,
            interval,
            a_fn: Box::new(a_fn),
            b_fn: Box::new(b_fn),
            q_fn: Box::new(q_fn),
            g_a,
            g_b,
            d,
            exact: None,
        })
    }

    pub fn with_exact_solution(
        mut self,
        x: impl Fn(f64) -> DVector<f64> + Send + Sync + 'static,
        dx: impl Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    ) -> DaeProblem {
        self.exact = Some(ExactSolution {
            x: Box::new(x),
            dx: Box::new(dx),
        });
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of boundary conditions ℓ.
    pub fn l_dyn(&self) -> usize {
        self.d.len()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn a_at(&self, t: f64) -> DMatrix<f64> {
        (self.a_fn)(t)
    }

    pub fn b_at(&self, t: f64) -> DMatrix<f64> {
        (self.b_fn)(t)
    }

    pub fn q_at(&self, t: f64) -> DVector<f64> {
        (self.q_fn)(t)
    }

    pub fn boundary_data(&self) -> (&DMatrix<f64>, &DMatrix<f64>, &DVector<f64>) {
        (&self.g_a, &self.g_b, &self.d)
    }

    pub fn exact_solution(&self) -> Option<&ExactSolution> {
        self.exact.as_ref()
    }
}

/// Scaling applied to the appended boundary rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryWeighting {
    /// Rows G_a Ω_1(0), G_b Ω_n(1) enter with weight one.
    #[default]
    Unscaled,
    /// Rows scaled by ((b−a)/n)^{1/2}, commensurate with the collocation
    /// rows on quasi-uniform grids.
    SqrtMeanStep,
}

/// The assembled block-structured least-squares system min |𝒜c − r|.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub layout: Layout,
    pub partition: Partition,
    pub basis: Basis,
    pub m_points: usize,
    pub variant: WeightVariant,
    pub weighting: BoundaryWeighting,
    /// Per-interval collocation blocks, each mM × (mN+k).
    pub blocks: Vec<DMatrix<f64>>,
    /// Matching right-hand side pieces, each of length mM.
    pub rhs_blocks: Vec<DVector<f64>>,
    /// Boundary rows against the first interval's coefficients (ℓ × (mN+k)).
    pub boundary_first: DMatrix<f64>,
    /// Boundary rows against the last interval's coefficients.
    pub boundary_last: DMatrix<f64>,
    pub boundary_rhs: DVector<f64>,
}

/// Assemble with default (unweighted) boundary rows.
pub fn assemble(
    problem: &DaeProblem,
    partition: &Partition,
    basis: &Basis,
    m_points: usize,
    nodes: NodeKind,
    variant: WeightVariant,
) -> Result<DiscreteSystem> {
    assemble_with(
        problem,
        partition,
        basis,
        m_points,
        nodes,
        variant,
        BoundaryWeighting::Unscaled,
    )
}

/// Assemble the discrete system. Requires M ≥ N+1 and a partition covering
/// the problem's interval.
pub fn assemble_with(
    problem: &DaeProblem,
    partition: &Partition,
    basis: &Basis,
    m_points: usize,
    nodes: NodeKind,
    variant: WeightVariant,
    weighting: BoundaryWeighting,
) -> Result<DiscreteSystem> {
    let nn = basis.degree();
    if m_points < nn + 1 {
        return Err(Error::invalid(format!(
            "M = {m_points} collocation points cannot control a degree-{nn} ansatz: \
             convergence of the least-squares method requires M ≥ N+1 = {}",
            nn + 1
        )));
    }
    let (pa, pb) = problem.interval();
    if (partition.a() - pa).abs() > 1e-12 * (pb - pa) || (partition.b() - pb).abs() > 1e-12 * (pb - pa)
    {
        return Err(Error::invalid(format!(
            "partition covers [{}, {}] but the problem lives on [{pa}, {pb}]",
            partition.a(),
            partition.b()
        )));
    }
    let layout = Layout::new(partition.n(), problem.m(), problem.k(), nn)?;
    let rho = collocation_nodes(m_points, nodes)?;
    let weights = weight_matrix(variant, m_points, &rho)?;
    let s = &weights.s;

    // per-point basis values, shared across intervals
    let pbar_at: Vec<Vec<f64>> = rho
        .iter()
        .map(|&r| basis.eval_all_pbar(r))
        .collect::<Result<_>>()?;
    let p_at: Vec<Vec<f64>> = rho
        .iter()
        .map(|&r| basis.eval_all_p(r))
        .collect::<Result<_>>()?;

    let (m, k) = (problem.m(), problem.k());
    let bs = layout.block_size();
    let mut blocks = Vec::with_capacity(partition.n());
    let mut rhs_blocks = Vec::with_capacity(partition.n());
    for j in 1..=partition.n() {
        let t0 = partition.t(j - 1);
        let h = partition.h_j(j);
        // raw residual rows per collocation point: W_i ∈ ℝ^{m×(mN+k)}
        let mut raw = vec![DMatrix::zeros(m, bs); m_points];
        let mut raw_rhs = vec![DVector::zeros(m); m_points];
        for (i, &r) in rho.iter().enumerate() {
            let t = t0 + r * h;
            let a_t = problem.a_at(t);
            let b_t = problem.b_at(t);
            raw_rhs[i] = problem.q_at(t);
            let w = &mut raw[i];
            for kappa in 0..m {
                let off = layout.comp_offset(1, kappa); // within-block offset
                if kappa < k {
                    for l in 0..=nn {
                        let deriv = if l == 0 { 0.0 } else { p_at[i][l - 1] };
                        let val = h * pbar_at[i][l];
                        for row in 0..m {
                            w[(row, off + l)] = a_t[(row, kappa)] * deriv + b_t[(row, kappa)] * val;
                        }
                    }
                } else {
                    for l in 0..nn {
                        let val = p_at[i][l];
                        for row in 0..m {
                            w[(row, off + l)] = b_t[(row, kappa)] * val;
                        }
                    }
                }
            }
        }
        // weighted block: h^{1/2}(S ⊗ I_m), i.e. row-block i' = Σ_i S_{i'i} W_i
        let rh = h.sqrt();
        let mut block = DMatrix::zeros(m * m_points, bs);
        let mut rhs = DVector::zeros(m * m_points);
        for ip in 0..m_points {
            for i in 0..m_points {
                let sv = s[(ip, i)];
                if sv == 0.0 {
                    continue;
                }
                for row in 0..m {
                    for col in 0..bs {
                        block[(ip * m + row, col)] += rh * sv * raw[i][(row, col)];
                    }
                    rhs[ip * m + row] += rh * sv * raw_rhs[i][row];
                }
            }
        }
        blocks.push(block);
        rhs_blocks.push(rhs);
    }

    // boundary rows: G_a x(a) + G_b x(b) = d with x(a), x(b) expressed in the
    // first/last interval's coefficients
    let (g_a, g_b, d) = problem.boundary_data();
    let l = d.len();
    let scale = match weighting {
        BoundaryWeighting::Unscaled => 1.0,
        BoundaryWeighting::SqrtMeanStep => ((pb - pa) / partition.n() as f64).sqrt(),
    };
    let mut boundary_first = DMatrix::zeros(l, bs);
    let mut boundary_last = DMatrix::zeros(l, bs);
    let h1 = partition.h_j(1);
    let hn = partition.h_j(partition.n());
    let f = basis.integral_weights_f();
    let p_at0 = basis.eval_all_p(0.0)?;
    let p_at1 = basis.eval_all_p(1.0)?;
    for kappa in 0..m {
        let off = layout.comp_offset(1, kappa);
        if kappa < k {
            // p̄_l(0) = δ_{l0}, p̄_l(1) = f_l
            for row in 0..l {
                boundary_first[(row, off)] = scale * g_a[(row, kappa)] * h1;
                for (lidx, &fl) in f.iter().enumerate() {
                    boundary_last[(row, off + lidx)] = scale * g_b[(row, kappa)] * hn * fl;
                }
            }
        } else {
            for lidx in 0..nn {
                for row in 0..l {
                    boundary_first[(row, off + lidx)] = scale * g_a[(row, kappa)] * p_at0[lidx];
                    boundary_last[(row, off + lidx)] = scale * g_b[(row, kappa)] * p_at1[lidx];
                }
            }
        }
    }
    let boundary_rhs = d * scale;

    Ok(DiscreteSystem {
        layout,
        partition: partition.clone(),
        basis: basis.clone(),
        m_points,
        variant,
        weighting,
        blocks,
        rhs_blocks,
        boundary_first,
        boundary_last,
        boundary_rhs,
    })
}

impl DiscreteSystem {
    /// Collocation rows plus boundary rows.
    pub fn nrows(&self) -> usize {
        self.layout.n * self.layout.m * self.m_points + self.boundary_rhs.len()
    }

    pub fn ncols(&self) -> usize {
        self.layout.dim()
    }

    /// 𝒜v by blocks; boundary rows touch only the first and last interval's
    /// columns (which coincide for n = 1).
    pub fn apply(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.ncols() {
            return Err(Error::shape("vector length does not match system columns"));
        }
        let bs = self.layout.block_size();
        let rows_per_block = self.layout.m * self.m_points;
        let mut out = DVector::zeros(self.nrows());
        for (jm1, block) in self.blocks.iter().enumerate() {
            let seg = v.rows(jm1 * bs, bs);
            out.rows_mut(jm1 * rows_per_block, rows_per_block)
                .copy_from(&(block * seg));
        }
        let l = self.boundary_rhs.len();
        if l > 0 {
            let n = self.layout.n;
            let first = v.rows(0, bs);
            let last = v.rows((n - 1) * bs, bs);
            let bd = &self.boundary_first * first + &self.boundary_last * last;
            out.rows_mut(self.nrows() - l, l).copy_from(&bd);
        }
        Ok(out)
    }

    /// Stacked right-hand side r.
    pub fn rhs_dense(&self) -> DVector<f64> {
        let mut out = DVector::zeros(self.nrows());
        let rows_per_block = self.layout.m * self.m_points;
        for (jm1, rhs) in self.rhs_blocks.iter().enumerate() {
            out.rows_mut(jm1 * rows_per_block, rows_per_block)
                .copy_from(rhs);
        }
        let l = self.boundary_rhs.len();
        if l > 0 {
            out.rows_mut(self.nrows() - l, l).copy_from(&self.boundary_rhs);
        }
        out
    }

    /// Dense 𝒜 (block diagonal plus boundary rows).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let bs = self.layout.block_size();
        let rows_per_block = self.layout.m * self.m_points;
        let mut out = DMatrix::zeros(self.nrows(), self.ncols());
        for (jm1, block) in self.blocks.iter().enumerate() {
            out.view_mut((jm1 * rows_per_block, jm1 * bs), (rows_per_block, bs))
                .copy_from(block);
        }
        let l = self.boundary_rhs.len();
        if l > 0 {
            let n = self.layout.n;
            let row0 = self.nrows() - l;
            // add (not overwrite): for n = 1 both boundary pieces hit block 1
            for row in 0..l {
                for col in 0..bs {
                    out[(row0 + row, col)] += self.boundary_first[(row, col)];
                    out[(row0 + row, (n - 1) * bs + col)] += self.boundary_last[(row, col)];
                }
            }
        }
        out
    }

    /// 𝒜c − r.
    pub fn residual(&self, c: &CoefficientVector) -> Result<DVector<f64>> {
        if c.layout != self.layout {
            return Err(Error::shape("coefficient layout does not match system"));
        }
        Ok(self.apply(&c.data)? - self.rhs_dense())
    }

    /// The discrete functional Φ_{π,M}(ℛc) = |𝒜c − r|².
    pub fn functional_value(&self, c: &CoefficientVector) -> Result<f64> {
        Ok(self.residual(c)?.norm_squared())
    }
}
