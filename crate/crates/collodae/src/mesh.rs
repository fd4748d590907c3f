//! Partitions of the interval [a,b].

use crate::error::{Error, Result};

/// A partition a = t_0 < t_1 < … < t_n = b with derived stepsizes.
///
/// Breakpoints are stored explicitly so non-uniform grids are first class;
/// the theory only requires a bounded mesh ratio h/h_min.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    /// Number of subintervals n.
    pub fn n(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Left endpoint a = t_0.
    pub fn a(&self) -> f64 {
        self.breakpoints[0]
    }

    /// Right endpoint b = t_n.
    pub fn b(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Breakpoint t_j, 0 ≤ j ≤ n.
    pub fn t(&self, j: usize) -> f64 {
        self.breakpoints[j]
    }

    /// All breakpoints t_0 … t_n.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Stepsize h_j = t_j − t_{j−1} of subinterval j ∈ 1..=n.
    pub fn h_j(&self, j: usize) -> f64 {
        debug_assert!((1..=self.n()).contains(&j));
        self.breakpoints[j] - self.breakpoints[j - 1]
    }

    /// Maximal stepsize h = max_j h_j.
    pub fn h(&self) -> f64 {
        (1..=self.n()).map(|j| self.h_j(j)).fold(0.0, f64::max)
    }

    /// Minimal stepsize h_min = min_j h_j.
    pub fn h_min(&self) -> f64 {
        (1..=self.n())
            .map(|j| self.h_j(j))
            .fold(f64::INFINITY, f64::min)
    }

    /// Mesh ratio h / h_min (= 1 for uniform grids).
    pub fn mesh_ratio(&self) -> f64 {
        self.h() / self.h_min()
    }

    /// True when all stepsizes agree to a tight relative tolerance.
    pub fn is_uniform(&self) -> bool {
        self.mesh_ratio() <= 1.0 + 1e-12
    }

    /// Index j ∈ 1..=n of the subinterval containing t under the half-open
    /// convention [t_{j−1}, t_j); t = b belongs to the last subinterval.
    pub fn interval_of(&self, t: f64) -> Result<usize> {
        if t < self.a() || t > self.b() {
            return Err(Error::invalid(format!(
                "t = {t} outside [{}, {}]",
                self.a(),
                self.b()
            )));
        }
        // partition_point returns the count of breakpoints ≤ t among t_0..t_{n-1}
        // scanned from the left; clamp t = b into interval n.
        let j = self.breakpoints[..self.breakpoints.len() - 1]
            .partition_point(|&tj| tj <= t);
        Ok(j.clamp(1, self.n()))
    }

    /// Local coordinate τ = (t − t_{j−1})/h_j ∈ [0,1] of t in its subinterval.
    pub fn local_coordinate(&self, t: f64) -> Result<(usize, f64)> {
        let j = self.interval_of(t)?;
        let tau = (t - self.t(j - 1)) / self.h_j(j);
        Ok((j, tau.clamp(0.0, 1.0)))
    }
}

/// Uniform partition of [a,b] into n subintervals; t_n is forced to b exactly.
pub fn make_uniform_partition(a: f64, b: f64, n: usize) -> Result<Partition> {
    if !(a < b) {
        return Err(Error::invalid(format!("need a < b, got a = {a}, b = {b}")));
    }
    if n == 0 {
        return Err(Error::invalid("need at least one subinterval"));
    }
    let mut breakpoints: Vec<f64> = (0..=n)
        .map(|j| a + (b - a) * (j as f64) / (n as f64))
        .collect();
    breakpoints[n] = b;
    Ok(Partition { breakpoints })
}

/// Partition from an explicit strictly increasing breakpoint list.
pub fn make_partition(breakpoints: &[f64]) -> Result<Partition> {
    if breakpoints.len() < 2 {
        return Err(Error::invalid("need at least two breakpoints"));
    }
    if breakpoints.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("breakpoints must be finite"));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("breakpoints must be strictly increasing"));
    }
    Ok(Partition {
        breakpoints: breakpoints.to_vec(),
    })
}
