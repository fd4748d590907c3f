//! Scalar three-term recurrences for Legendre and Chebyshev polynomials and
//! small helpers for Chebyshev series (Clenshaw evaluation, antiderivative).
//!
//! Everything works in the standard argument x ∈ [−1,1]; callers shift with
//! x = 2τ − 1.

/// Values P_0(x), …, P_n(x) of the Legendre polynomials.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n == 0 {
        return p;
    }
    p.push(x);
    for d in 1..n {
        let df = d as f64;
        let next = ((2.0 * df + 1.0) * x * p[d] - df * p[d - 1]) / (df + 1.0);
        p.push(next);
    }
    p
}

/// P_n(x).
pub fn legendre(n: usize, x: f64) -> f64 {
    *legendre_all(n, x).last().unwrap()
}

/// Values P'_0(x), …, P'_n(x) via P'_{d+1} = (2d+1)·P_d + P'_{d−1}.
pub fn legendre_deriv_all(n: usize, x: f64) -> Vec<f64> {
    let p = legendre_all(n, x);
    let mut dp = Vec::with_capacity(n + 1);
    dp.push(0.0);
    if n == 0 {
        return dp;
    }
    dp.push(1.0);
    for d in 1..n {
        dp.push((2.0 * d as f64 + 1.0) * p[d] + dp[d - 1]);
    }
    dp
}

/// Values T_0(x), …, T_n(x) of the Chebyshev polynomials (first kind).
pub fn chebyshev_all(n: usize, x: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(1.0);
    if n == 0 {
        return t;
    }
    t.push(x);
    for d in 1..n {
        t.push(2.0 * x * t[d] - t[d - 1]);
    }
    t
}

/// T_n(x).
pub fn chebyshev(n: usize, x: f64) -> f64 {
    *chebyshev_all(n, x).last().unwrap()
}

/// Clenshaw evaluation of Σ_d a_d·T_d(x).
pub fn cheb_clenshaw(coeffs: &[f64], x: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &a in coeffs.iter().skip(1).rev() {
        let b0 = a + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - b2
}

/// Antiderivative in the shifted variable: given g(τ) = Σ_d a_d·T_d(2τ−1),
/// returns the coefficients of G(τ) = ∫₀^τ g in the same basis (G(0) = 0).
///
/// Uses ∫T_0 dx = T_1, ∫T_1 dx = T_2/4, ∫T_d dx = T_{d+1}/(2(d+1)) −
/// T_{d−1}/(2(d−1)) for d ≥ 2, times the chain factor dτ = dx/2; the constant
/// term is fixed from T_d(−1) = (−1)^d.
pub fn cheb_antiderivative_tau(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut out = vec![0.0; n + 1];
    for (d, &a) in coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        match d {
            0 => out[1] += a,
            1 => out[2] += a / 4.0,
            _ => {
                let df = d as f64;
                out[d + 1] += a / (2.0 * (df + 1.0));
                out[d - 1] -= a / (2.0 * (df - 1.0));
            }
        }
    }
    // chain rule x = 2τ − 1
    for c in out.iter_mut() {
        *c *= 0.5;
    }
    // enforce G(0) = 0, i.e. value 0 at x = −1
    let at_minus_one: f64 = out
        .iter()
        .enumerate()
        .map(|(d, &c)| c * if d % 2 == 0 { 1.0 } else { -1.0 })
        .sum();
    out[0] -= at_minus_one;
    out
}
