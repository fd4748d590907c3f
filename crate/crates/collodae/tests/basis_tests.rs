use approx::assert_abs_diff_eq;
use collodae::basis::{Basis, BasisKind};
use collodae::quadrature::gauss_legendre;

fn all_kinds() -> [BasisKind; 4] {
    [
        BasisKind::Legendre,
        BasisKind::ModifiedLegendre,
        BasisKind::Chebyshev,
        BasisKind::RungeKutta,
    ]
}

#[test]
fn pbar_derivative_is_previous_p() {
    // p̄'_i = p_{i−1} for i ≥ 1, checked by central differences
    let eps = 1e-6;
    for kind in all_kinds() {
        for n in [1usize, 3, 5, 8] {
            let basis = Basis::new(kind, n).unwrap();
            for i in 1..=n {
                for &tau in &[0.1, 0.35, 0.5, 0.82] {
                    let fd = (basis.eval_pbar(i, tau + eps).unwrap()
                        - basis.eval_pbar(i, tau - eps).unwrap())
                        / (2.0 * eps);
                    let p = basis.eval_p(i - 1, tau).unwrap();
                    assert_abs_diff_eq!(fd, p, epsilon = 1e-6 * (1.0 + p.abs()));
                    let pd = basis.eval_pbar_derivative(i, tau).unwrap();
                    assert_eq!(pd, p);
                }
            }
        }
    }
}

#[test]
fn pbar_endpoint_values() {
    // p̄_0 ≡ 1 and p̄_i(0) = 0 for i ≥ 1 in every family; p̄_i(1) matches the
    // integral weight vector f
    for kind in all_kinds() {
        for n in [2usize, 4, 7] {
            let basis = Basis::new(kind, n).unwrap();
            assert_eq!(basis.eval_pbar(0, 0.37).unwrap(), 1.0);
            for i in 1..=n {
                assert_abs_diff_eq!(basis.eval_pbar(i, 0.0).unwrap(), 0.0, epsilon = 1e-13);
            }
            let f = basis.integral_weights_f();
            assert_eq!(f.len(), n + 1);
            assert_abs_diff_eq!(f[0], 1.0, epsilon = 1e-14);
            for i in 1..=n {
                assert_abs_diff_eq!(
                    basis.eval_pbar(i, 1.0).unwrap(),
                    f[i],
                    epsilon = 1e-12 * (1.0 + f[i].abs())
                );
            }
        }
    }
}

#[test]
fn integral_weights_match_quadrature() {
    // f_{i+1} = ∫₀¹ p_i, checked against Gauss quadrature
    for kind in all_kinds() {
        for n in [1usize, 3, 6] {
            let basis = Basis::new(kind, n).unwrap();
            let f = basis.integral_weights_f();
            let rule = gauss_legendre(n + 2);
            for i in 0..n {
                let quad = rule.integrate(|t| basis.eval_p(i, t).unwrap());
                assert_abs_diff_eq!(f[i + 1], quad, epsilon = 1e-13 * (1.0 + quad.abs()));
            }
        }
    }
}

#[test]
fn modified_legendre_f_norm() {
    // |f|² = 2N+1 for even N, 2N+3 for odd N
    for n in [3usize, 4, 5, 10, 20] {
        let basis = Basis::new(BasisKind::ModifiedLegendre, n).unwrap();
        let fsq: f64 = basis.integral_weights_f().iter().map(|v| v * v).sum();
        let expected = if n % 2 == 0 { 2 * n + 1 } else { 2 * n + 3 } as f64;
        assert_abs_diff_eq!(fsq, expected, epsilon = 1e-11);
    }
}

#[test]
fn chebyshev_f_closed_form() {
    // f_{i+1} = (1 + (−1)^i)/(2(1 − i²)) for i ≠ 1, f_2 = 0
    let n = 8;
    let basis = Basis::new(BasisKind::Chebyshev, n).unwrap();
    let f = basis.integral_weights_f();
    for i in 0..n {
        let expected = if i == 1 {
            0.0
        } else {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * (1.0 + sign) / (1.0 - (i * i) as f64)
        };
        assert_abs_diff_eq!(f[i + 1], expected, epsilon = 1e-13);
    }
}

#[test]
fn runge_kutta_partition_of_unity() {
    // the Lagrange cardinal functions sum to one everywhere
    for n in [2usize, 5, 9] {
        let basis = Basis::new(BasisKind::RungeKutta, n).unwrap();
        for &tau in &[0.0, 0.21, 0.5, 0.77, 1.0] {
            let s: f64 = basis.eval_all_p(tau).unwrap().iter().sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-11);
        }
    }
}

#[test]
fn runge_kutta_cardinality_at_nodes() {
    let n = 6;
    let basis = Basis::new(BasisKind::RungeKutta, n).unwrap();
    let nodes: Vec<f64> = basis.rk_nodes().unwrap().to_vec();
    for (i, &xi) in nodes.iter().enumerate() {
        for j in 0..n {
            let v = basis.eval_p(j, xi).unwrap();
            let target = if i == j { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(v, target, epsilon = 1e-10);
        }
    }
}

#[test]
fn runge_kutta_custom_nodes() {
    let nodes = [0.2, 0.4, 0.9];
    let basis = Basis::runge_kutta_with_nodes(&nodes).unwrap();
    assert_eq!(basis.degree(), 3);
    assert_abs_diff_eq!(basis.eval_p(1, 0.4).unwrap(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(basis.eval_p(1, 0.2).unwrap(), 0.0, epsilon = 1e-12);
    // nodes must be strictly increasing and interior
    assert!(Basis::runge_kutta_with_nodes(&[0.5, 0.5]).is_err());
    assert!(Basis::runge_kutta_with_nodes(&[0.0, 0.5]).is_err());
}

#[test]
fn legendre_family_closed_forms() {
    let basis = Basis::new(BasisKind::Legendre, 5).unwrap();
    // p_2(τ) = P_2(2τ−1) = (3x²−1)/2 with x = 2τ−1
    for &tau in &[0.0, 0.3, 0.72, 1.0] {
        let x: f64 = 2.0 * tau - 1.0;
        assert_abs_diff_eq!(
            basis.eval_p(2, tau).unwrap(),
            0.5 * (3.0 * x * x - 1.0),
            epsilon = 1e-14
        );
    }
    // antiderivative p̄_i = (P_i − P_{i−2})/(2(2i−1)) vanishes at both ends
    // for i ≥ 2
    for i in 2..=5 {
        assert_abs_diff_eq!(basis.eval_pbar(i, 1.0).unwrap(), 0.0, epsilon = 1e-14);
    }
}

#[test]
fn eval_all_agrees_with_single() {
    for kind in all_kinds() {
        let basis = Basis::new(kind, 7).unwrap();
        for &tau in &[0.0, 0.13, 0.5, 0.99, 1.0] {
            let ps = basis.eval_all_p(tau).unwrap();
            let pbars = basis.eval_all_pbar(tau).unwrap();
            for i in 0..7 {
                assert_abs_diff_eq!(ps[i], basis.eval_p(i, tau).unwrap(), epsilon = 1e-12);
            }
            for i in 0..=7 {
                assert_abs_diff_eq!(pbars[i], basis.eval_pbar(i, tau).unwrap(), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn labels_and_parsing_round_trip() {
    for kind in all_kinds() {
        assert_eq!(BasisKind::parse(kind.label()).unwrap(), kind);
    }
    assert_eq!(BasisKind::parse("mL").unwrap(), BasisKind::ModifiedLegendre);
    assert_eq!(BasisKind::parse("RK").unwrap(), BasisKind::RungeKutta);
    assert!(BasisKind::parse("spline").is_err());
}

#[test]
fn domain_is_validated() {
    let basis = Basis::new(BasisKind::Legendre, 3).unwrap();
    assert!(basis.eval_p(0, -0.1).is_err());
    assert!(basis.eval_p(0, 1.1).is_err());
    assert!(basis.eval_p(3, 0.5).is_err()); // p index < N
    assert!(basis.eval_pbar(4, 0.5).is_err()); // p̄ index ≤ N
    assert!(Basis::new(BasisKind::Legendre, 0).is_err());
}
