//! Small dense-linear-algebra helpers on top of nalgebra: a Householder QR
//! that exposes the *full* orthogonal factor (nalgebra's QR is thin-only),
//! a symmetric positive definite tridiagonal solver, and SVD conveniences.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Full Householder QR of a tall matrix A (rows ≥ cols): returns the complete
/// orthogonal factor Q ∈ ℝ^{rows×rows} and R ∈ ℝ^{rows×cols} with A = QR.
///
/// The construction is deterministic (fixed sign convention), which the
/// reproducibility of kernel bases relies on.
pub fn householder_qr_full(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let rows = a.nrows();
    let cols = a.ncols();
    assert!(rows >= cols, "full QR helper expects a tall matrix");
    let mut r = a.clone();
    // Householder vectors, one per column, each of length rows − j.
    let mut vs: Vec<DVector<f64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let x = r.view((j, j), (rows - j, 1)).into_owned();
        let norm = x.norm();
        let mut v = DVector::from_column_slice(x.as_slice());
        if norm > 0.0 {
            let alpha = if x[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm = v.norm();
            if vnorm > 0.0 {
                v /= vnorm;
                // apply H = I − 2vvᵀ to the trailing block of R
                for col in j..cols {
                    let mut block = r.view_mut((j, col), (rows - j, 1));
                    let dot = 2.0 * v.dot(&block.column(0).into_owned());
                    for i in 0..rows - j {
                        block[(i, 0)] -= dot * v[i];
                    }
                }
            } else {
                v.fill(0.0);
            }
        }
        vs.push(v);
    }
    // accumulate Q = H_0 · H_1 · … · H_{cols−1} by applying the reflectors to
    // the identity from the last to the first.
    let mut q = DMatrix::<f64>::identity(rows, rows);
    for j in (0..cols).rev() {
        let v = &vs[j];
        if v.iter().all(|&x| x == 0.0) {
            continue;
        }
        for col in 0..rows {
            let mut block = q.view_mut((j, col), (rows - j, 1));
            let dot = 2.0 * v.dot(&block.column(0).into_owned());
            for i in 0..rows - j {
                block[(i, 0)] -= dot * v[i];
            }
        }
    }
    (q, r)
}

/// Orthonormal basis of ker(Bᵀ) for a tall full-column-rank B ∈ ℝ^{rows×cols}:
/// the trailing rows − cols columns of the full Q factor of B.
pub fn orthogonal_complement(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let rows = b.nrows();
    let cols = b.ncols();
    if cols > rows {
        return Err(Error::shape("complement expects a tall matrix"));
    }
    let (q, r) = householder_qr_full(b);
    // defensive rank check on R's leading diagonal (R is rows×cols)
    let rdiag: Vec<f64> = (0..cols).map(|i| r[(i, i)]).collect();
    let scale = rdiag.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
    if cols > 0 && (scale == 0.0 || rdiag.iter().any(|&d| d.abs() < 1e-13 * scale)) {
        return Err(Error::numerical("rank-deficient constraint factor"));
    }
    Ok(q.columns(cols, rows - cols).into_owned())
}

/// Symmetric tridiagonal matrix (diag of length n, off-diagonal length n−1).
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// LDLᵀ solve without pivoting; valid for positive definite matrices.
    pub fn solve_spd(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.order();
        if b.len() != n {
            return Err(Error::shape(format!(
                "rhs length {} does not match order {n}",
                b.len()
            )));
        }
        if n == 0 {
            return Ok(DVector::zeros(0));
        }
        let mut d = vec![0.0_f64; n];
        let mut l = vec![0.0_f64; n.saturating_sub(1)];
        d[0] = self.diag[0];
        if d[0] <= 0.0 {
            return Err(Error::numerical("tridiagonal matrix not positive definite"));
        }
        for i in 1..n {
            l[i - 1] = self.off[i - 1] / d[i - 1];
            d[i] = self.diag[i] - l[i - 1] * self.off[i - 1];
            if d[i] <= 0.0 {
                return Err(Error::numerical("tridiagonal matrix not positive definite"));
            }
        }
        // forward: L z = b
        let mut z = b.clone();
        for i in 1..n {
            z[i] -= l[i - 1] * z[i - 1];
        }
        // diagonal + backward: Lᵀ x = D⁻¹ z
        for i in 0..n {
            z[i] /= d[i];
        }
        for i in (0..n - 1).rev() {
            z[i] -= l[i] * z[i + 1];
        }
        Ok(z)
    }

    /// All eigenvalues, ascending (dense symmetric eigensolve; the orders
    /// used here are a few hundred at most).
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.order() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = self
            .to_dense()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}

/// (σ_max, σ_min) of a dense matrix (σ_min over min(rows, cols) values).
pub fn sv_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0.0, 0.0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let mut smax = 0.0_f64;
    let mut smin = f64::INFINITY;
    for &s in sv.iter() {
        smax = smax.max(s);
        smin = smin.min(s);
    }
    (smax, smin)
}

/// Spectral norm σ_max.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    sv_extremes(m).0
}

/// Least squares via SVD: minimizer of |Ax − b|, plus (σ_max, σ_min) of A.
/// Fails when A is (numerically) rank deficient.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, f64, f64)> {
    if a.nrows() != b.len() {
        return Err(Error::shape(format!(
            "matrix has {} rows but rhs has {}",
            a.nrows(),
            b.len()
        )));
    }
    let svd = a.clone().svd(true, true);
    let mut smax = 0.0_f64;
    let mut smin = f64::INFINITY;
    for &s in svd.singular_values.iter() {
        smax = smax.max(s);
        smin = smin.min(s);
    }
    if smax == 0.0 || smin < 1e-12 * smax {
        return Err(Error::numerical(format!(
            "rank-deficient least-squares matrix (σ_max = {smax:.3e}, σ_min = {smin:.3e})"
        )));
    }
    let x = svd
        .solve(b, 0.0)
        .map_err(|e| Error::numerical(format!("SVD solve failed: {e}")))?;
    Ok((x.column(0).into_owned(), smax, smin))
}

/// Moore–Penrose pseudoinverse with relative cutoff.
pub fn pseudoinverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    svd.pseudo_inverse(1e-13 * smax.max(1e-300))
        .map_err(|e| Error::numerical(format!("pseudoinverse failed: {e}")))
}

/// Least-squares slope of ln(y) against ln(x); used for observed convergence
/// orders (y ~ C·x^slope).
pub fn fitted_loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2);
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
