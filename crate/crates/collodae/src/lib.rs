//! Least-squares collocation for linear boundary-value DAEs with properly
//! involved derivative,
//!
//! ```text
//!     A(t) (Dx)'(t) + B(t) x(t) = q(t),   t ∈ [a,b],
//!     G_a x(a) + G_b x(b) = d,            D = [I_k 0] ∈ R^{k×m},
//! ```
//!
//! discretized on a partition of [a,b] by piecewise polynomials of degree N
//! (differential components, continuous across breakpoints) and N−1
//! (algebraic components), with the residual sampled at M ≥ N+1 collocation
//! points per subinterval. The discrete problem is an equality-constrained
//! linear least-squares problem
//!
//! ```text
//!     min |𝒜c − r|²   subject to   𝒞c = 0,
//! ```
//!
//! solved by the nullspace method. Alongside the solver the crate provides
//! the conditioning analysis that motivates it: singular values and operator
//! norms of the representation map between coefficient vectors and piecewise
//! polynomials (`repmap`), conditioning of the continuity constraint
//! (`constraint`), restricted condition numbers κ_𝒞(𝒜) and perturbation
//! bounds (`solver`), and orthogonal projections onto the constraint kernel
//! in the Euclidean, L², and broken-H¹ geometries (`projection`).
//!
//! `problems` ships three classic higher-index benchmark DAEs with closed-form
//! solutions for convergence and conditioning experiments.

pub mod assembly;
pub mod basis;
pub mod constraint;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod problems;
pub mod projection;
pub mod quadrature;
pub mod repmap;
pub mod solver;

mod poly;

pub use assembly::{assemble, assemble_with, BoundaryWeighting, DaeProblem, DiscreteSystem};
pub use basis::{Basis, BasisKind};
pub use constraint::{build_c, constraint_conditioning, ConstraintReport};
pub use error::{Error, Result};
pub use linalg::fitted_loglog_slope;
pub use mesh::{make_partition, make_uniform_partition, Partition};
pub use problems::{
    error_h1d, example_campbell_moore, example_hessenberg2, example_index3,
};
pub use projection::{max_jump, project_coefficients, project_h1, project_l2};
pub use quadrature::{collocation_nodes, gauss_legendre, NodeKind, WeightVariant};
pub use repmap::{rep_map_conditioning, CoefficientVector, Layout, RepMapReport};
pub use solver::{kappa_c_of_a, solve, RestrictedConditioning, SolveResult};
