use approx::assert_abs_diff_eq;
use collodae::quadrature::{
    collocation_nodes, gauss_legendre, interpolatory_weights, orthonormal_legendre, weight_matrix,
    NodeKind, WeightVariant,
};

#[test]
fn gauss_rule_exactness() {
    // an M-point Gauss rule on [0,1] integrates monomials up to degree 2M−1
    for m in [1usize, 2, 4, 7, 12] {
        let rule = gauss_legendre(m);
        assert_eq!(rule.nodes.len(), m);
        assert_eq!(rule.exactness_degree, 2 * m - 1);
        for d in 0..=rule.exactness_degree {
            let exact = 1.0 / (d as f64 + 1.0);
            let quad = rule.integrate(|t| t.powi(d as i32));
            assert_abs_diff_eq!(quad, exact, epsilon = 1e-13);
        }
        // degree 2M is not integrated exactly (for small M the defect is
        // large enough to observe above rounding)
        if m <= 4 {
            let d = rule.exactness_degree + 1;
            let defect =
                (rule.integrate(|t| t.powi(d as i32)) - 1.0 / (d as f64 + 1.0)).abs();
            assert!(defect > 1e-12, "rule unexpectedly exact at degree {d}");
        }
    }
}

#[test]
fn gauss_nodes_symmetric_and_weights_positive() {
    let rule = gauss_legendre(9);
    let total: f64 = rule.weights.iter().sum();
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
    for (i, &w) in rule.weights.iter().enumerate() {
        assert!(w > 0.0);
        assert_abs_diff_eq!(
            rule.nodes[i] + rule.nodes[rule.nodes.len() - 1 - i],
            1.0,
            epsilon = 1e-14
        );
    }
}

#[test]
fn collocation_node_kinds() {
    let g = collocation_nodes(5, NodeKind::GaussLegendre).unwrap();
    assert_eq!(g, gauss_legendre(5).nodes);
    // uniform nodes include both endpoints: i/(M−1)
    let u = collocation_nodes(4, NodeKind::Uniform).unwrap();
    assert_eq!(u[0], 0.0);
    assert_eq!(*u.last().unwrap(), 1.0);
    for w in u.windows(2) {
        assert_abs_diff_eq!(w[1] - w[0], 1.0 / 3.0, epsilon = 1e-15);
    }
    assert!(collocation_nodes(0, NodeKind::Uniform).is_err());
    assert!(collocation_nodes(1, NodeKind::Uniform).is_err());
}

#[test]
fn orthonormal_legendre_is_orthonormal() {
    let rule = gauss_legendre(12);
    for a in 0..6 {
        for b in 0..6 {
            let ip = rule.integrate(|t| orthonormal_legendre(a, t) * orthonormal_legendre(b, t));
            let target = if a == b { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(ip, target, epsilon = 1e-12);
        }
    }
}

#[test]
fn interpolatory_weights_reproduce_gauss() {
    // at Gauss nodes the interpolatory rule IS the Gauss rule
    let rule = gauss_legendre(6);
    let gamma = interpolatory_weights(&rule.nodes).unwrap();
    for (g, w) in gamma.iter().zip(rule.weights.iter()) {
        assert_abs_diff_eq!(g, w, epsilon = 1e-13);
    }
}

#[test]
fn interpolatory_weights_exactness_at_uniform_nodes() {
    let nodes = collocation_nodes(5, NodeKind::Uniform).unwrap();
    let gamma = interpolatory_weights(&nodes).unwrap();
    // exact for all polynomials of degree < 5
    for d in 0..5usize {
        let quad: f64 = nodes
            .iter()
            .zip(gamma.iter())
            .map(|(&t, &g)| g * t.powi(d as i32))
            .sum();
        assert_abs_diff_eq!(quad, 1.0 / (d as f64 + 1.0), epsilon = 1e-12);
    }
}

#[test]
fn weight_matrix_factorizations() {
    // SᵀS = L for every variant, and L has the advertised shape
    let nodes = collocation_nodes(5, NodeKind::GaussLegendre).unwrap();
    for variant in [WeightVariant::C, WeightVariant::I, WeightVariant::R] {
        let w = weight_matrix(variant, 5, &nodes).unwrap();
        let sts = w.s.transpose() * &w.s;
        assert_abs_diff_eq!((sts - &w.l).norm(), 0.0, epsilon = 1e-12);
        // L is symmetric positive definite
        assert_abs_diff_eq!((w.l.transpose() - &w.l).norm(), 0.0, epsilon = 1e-13);
        assert!(w.l.clone().cholesky().is_some());
    }
}

#[test]
fn averaging_variant_is_scaled_identity() {
    let nodes = collocation_nodes(4, NodeKind::Uniform).unwrap();
    let w = weight_matrix(WeightVariant::C, 4, &nodes).unwrap();
    for i in 0..4 {
        assert_abs_diff_eq!(w.l[(i, i)], 0.25, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(w.l.norm(), 0.5, epsilon = 1e-14);
}

#[test]
fn exact_variant_equals_interpolatory_at_gauss_nodes() {
    // with M Gauss points the interpolant-exact weight matrix coincides with
    // the diagonal quadrature one
    for m in [3usize, 5, 8] {
        let nodes = collocation_nodes(m, NodeKind::GaussLegendre).unwrap();
        let wi = weight_matrix(WeightVariant::I, m, &nodes).unwrap();
        let wr = weight_matrix(WeightVariant::R, m, &nodes).unwrap();
        let diff = (&wi.l - &wr.l).norm() / wi.l.norm();
        assert!(diff < 1e-11, "M = {m}: relative deviation {diff:.3e}");
    }
}

#[test]
fn exact_variant_differs_at_uniform_nodes() {
    let nodes = collocation_nodes(6, NodeKind::Uniform).unwrap();
    let wi = weight_matrix(WeightVariant::I, 6, &nodes).unwrap();
    let wr = weight_matrix(WeightVariant::R, 6, &nodes).unwrap();
    assert!((&wi.l - &wr.l).norm() > 1e-6);
}

#[test]
fn variant_labels_parse() {
    for v in [WeightVariant::C, WeightVariant::I, WeightVariant::R] {
        assert_eq!(WeightVariant::parse(v.label()).unwrap(), v);
    }
    assert_eq!(WeightVariant::parse(" r ").unwrap(), WeightVariant::R);
    assert!(WeightVariant::parse("Q").is_err());
}

#[test]
fn node_count_mismatch_rejected() {
    let nodes = collocation_nodes(4, NodeKind::GaussLegendre).unwrap();
    assert!(weight_matrix(WeightVariant::I, 5, &nodes).is_err());
}
