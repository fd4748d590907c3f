use approx::assert_abs_diff_eq;
use collodae::basis::{Basis, BasisKind};
use collodae::mesh::{make_partition, make_uniform_partition};
use collodae::projection::{norm_gram_dense, ProjectionNorm};
use collodae::quadrature::gauss_legendre;
use collodae::repmap::{
    build_interp_matrices, coefficients_from_function, evaluate, evaluate_dx_derivative,
    evaluate_dx_derivative_local, evaluate_local, norm_h1dpi, norm_l2, rep_map_conditioning,
    CoefficientVector, Layout,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_kinds() -> [BasisKind; 4] {
    [
        BasisKind::Legendre,
        BasisKind::ModifiedLegendre,
        BasisKind::Chebyshev,
        BasisKind::RungeKutta,
    ]
}

fn random_coefficients(layout: Layout, seed: u64) -> CoefficientVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = DVector::from_fn(layout.dim(), |_, _| rng.random_range(-1.0..1.0));
    CoefficientVector::from_data(layout, data).unwrap()
}

#[test]
fn layout_indexing_is_consistent() {
    let layout = Layout::new(4, 5, 3, 6).unwrap();
    assert_eq!(layout.block_size(), 5 * 6 + 3);
    assert_eq!(layout.dim(), 4 * layout.block_size());
    // offsets tile the vector without gaps, component-major inside a block
    let mut expected = 0usize;
    for j in 1..=4 {
        for kappa in 0..5 {
            assert_eq!(layout.comp_offset(j, kappa), expected);
            expected += layout.comp_len(kappa);
        }
    }
    assert_eq!(expected, layout.dim());
    // differential components carry one more coefficient
    assert_eq!(layout.comp_len(0), 7);
    assert_eq!(layout.comp_len(4), 6);
    assert!(Layout::new(4, 3, 4, 6).is_err()); // k > m
    assert!(Layout::new(0, 3, 2, 6).is_err());
}

#[test]
fn coefficient_vector_component_views() {
    let layout = Layout::new(3, 3, 2, 2).unwrap();
    let mut c = CoefficientVector::zeros(layout);
    c.comp_mut(2, 1)[0] = 5.0;
    c.comp_mut(3, 2)[1] = -2.0;
    assert_eq!(c.comp(2, 1), &[5.0, 0.0, 0.0]);
    assert_eq!(c.comp(3, 2), &[0.0, -2.0]);
    assert_eq!(c.comp(1, 0), &[0.0, 0.0, 0.0]);
    let bad = DVector::zeros(layout.dim() + 1);
    assert!(CoefficientVector::from_data(layout, bad).is_err());
}

#[test]
fn lowest_mode_evaluates_to_advertised_shape() {
    // differential components are scaled by h_j, algebraic ones are not
    let partition = make_partition(&[0.0, 0.5, 2.0]).unwrap();
    let basis = Basis::new(BasisKind::Legendre, 3).unwrap();
    let layout = Layout::new(2, 2, 1, 3).unwrap();
    let mut c = CoefficientVector::zeros(layout);
    c.comp_mut(1, 0)[0] = 1.0; // differential, interval 1 (h = 0.5)
    c.comp_mut(2, 1)[0] = 1.0; // algebraic, interval 2
    let x1 = evaluate(&c, &partition, &basis, 0.25).unwrap();
    assert_abs_diff_eq!(x1[0], 0.5, epsilon = 1e-14); // h·c₀·p̄₀ = h
    assert_abs_diff_eq!(x1[1], 0.0, epsilon = 1e-14);
    let x2 = evaluate(&c, &partition, &basis, 1.7).unwrap();
    assert_abs_diff_eq!(x2[0], 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(x2[1], 1.0, epsilon = 1e-14); // c₀·p₀ = 1
}

#[test]
fn interpolation_round_trip() {
    // ℛ⁻¹ ∘ ℛ = identity on the ansatz space, for every basis family
    let partition = make_partition(&[0.0, 0.3, 0.55, 1.1]).unwrap();
    for kind in all_kinds() {
        let basis = Basis::new(kind, 4).unwrap();
        let layout = Layout::new(3, 3, 2, 4).unwrap();
        let c = random_coefficients(layout, 17);

        let part = partition.clone();
        let b = basis.clone();
        let cc = c.clone();
        let func = move |t: f64| evaluate(&cc, &part, &b, t).unwrap();
        let recovered =
            coefficients_from_function(&func, &partition, &basis, layout).unwrap();

        for j in 1..=3 {
            for kappa in 0..3 {
                for (a, b) in c.comp(j, kappa).iter().zip(recovered.comp(j, kappa)) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-10);
                }
            }
        }
    }
}

#[test]
fn dx_derivative_matches_finite_differences() {
    let partition = make_uniform_partition(0.0, 1.0, 4).unwrap();
    let basis = Basis::new(BasisKind::Chebyshev, 5).unwrap();
    let layout = Layout::new(4, 3, 2, 5).unwrap();
    let c = random_coefficients(layout, 3);
    let eps = 1e-6;
    for &t in &[0.1, 0.33, 0.61, 0.9] {
        let d = evaluate_dx_derivative(&c, &partition, &basis, t).unwrap();
        assert_eq!(d.len(), 2);
        let xp = evaluate(&c, &partition, &basis, t + eps).unwrap();
        let xm = evaluate(&c, &partition, &basis, t - eps).unwrap();
        for kappa in 0..2 {
            let fd = (xp[kappa] - xm[kappa]) / (2.0 * eps);
            assert_abs_diff_eq!(d[kappa], fd, epsilon = 1e-5 * (1.0 + fd.abs()));
        }
    }
}

#[test]
fn breakpoint_evaluation_uses_half_open_intervals() {
    let partition = make_uniform_partition(0.0, 1.0, 2).unwrap();
    let basis = Basis::new(BasisKind::Legendre, 2).unwrap();
    let layout = Layout::new(2, 2, 1, 2).unwrap();
    let mut c = CoefficientVector::zeros(layout);
    c.comp_mut(1, 1)[0] = 1.0; // algebraic component = 1 on [0, 0.5) only
    let at_break = evaluate(&c, &partition, &basis, 0.5).unwrap();
    assert_abs_diff_eq!(at_break[1], 0.0, epsilon = 1e-14); // right limit wins
    let left = evaluate_local(&c, &partition, &basis, 1, 1.0).unwrap();
    assert_abs_diff_eq!(left[1], 1.0, epsilon = 1e-14);
    // t = b evaluates on the last interval, not past it
    assert!(evaluate(&c, &partition, &basis, 1.0).is_ok());
    assert!(evaluate(&c, &partition, &basis, 1.0 + 1e-9).is_err());
    assert!(evaluate(&c, &partition, &basis, -1e-9).is_err());
}

#[test]
fn norms_match_brute_force_quadrature() {
    let partition = make_partition(&[0.0, 0.4, 1.0, 1.5]).unwrap();
    for kind in all_kinds() {
        let basis = Basis::new(kind, 3).unwrap();
        let layout = Layout::new(3, 3, 2, 3).unwrap();
        let c = random_coefficients(layout, 11);

        let rule = gauss_legendre(6);
        let mut sq_l2 = 0.0;
        let mut sq_der = 0.0;
        for j in 1..=3 {
            let h = partition.h_j(j);
            sq_l2 += h * rule.integrate(|tau| {
                evaluate_local(&c, &partition, &basis, j, tau)
                    .unwrap()
                    .norm_squared()
            });
            sq_der += h * rule.integrate(|tau| {
                evaluate_dx_derivative_local(&c, &partition, &basis, j, tau)
                    .unwrap()
                    .norm_squared()
            });
        }

        let l2 = norm_l2(&c, &partition, &basis).unwrap();
        let h1 = norm_h1dpi(&c, &partition, &basis).unwrap();
        assert_abs_diff_eq!(l2, sq_l2.sqrt(), epsilon = 1e-11);
        assert_abs_diff_eq!(h1, (sq_l2 + sq_der).sqrt(), epsilon = 1e-11);
    }
}

#[test]
fn gram_blocks_are_consistent() {
    // the derivative Gram shares its trailing block with the algebraic one:
    // both quadratures are exact for products of the p-family
    for kind in all_kinds() {
        let basis = Basis::new(kind, 4).unwrap();
        let mats = build_interp_matrices(&basis).unwrap();
        let ring = mats.gram_vring();
        let v = mats.gram_v();
        assert_eq!(ring.nrows(), 5);
        assert_eq!(v.nrows(), 4);
        for a in 0..4 {
            assert_abs_diff_eq!(ring[(0, a + 1)], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ring[(a + 1, 0)], 0.0, epsilon = 1e-12);
            for b in 0..4 {
                assert_abs_diff_eq!(
                    ring[(a + 1, b + 1)],
                    v[(a, b)],
                    epsilon = 1e-11 * (1.0 + v[(a, b)].abs())
                );
            }
        }
    }
}

#[test]
fn conditioning_matches_dense_gram() {
    // blockwise singular-value extremes of 𝒰 and 𝒰̂ agree with eigenvalues
    // of the dense Gram matrices on a nonuniform grid
    let partition = make_partition(&[0.0, 0.2, 0.7, 1.0]).unwrap();
    let basis = Basis::new(BasisKind::ModifiedLegendre, 3).unwrap();
    let layout = Layout::new(3, 3, 2, 3).unwrap();
    let report = rep_map_conditioning(&partition, &basis, 3, 2).unwrap();

    for (norm, smax, smin) in [
        (ProjectionNorm::L2, report.sigma_max_u, report.sigma_min_u),
        (
            ProjectionNorm::H1Dpi,
            report.sigma_max_uhat,
            report.sigma_min_uhat,
        ),
    ] {
        let gram = norm_gram_dense(&partition, &basis, layout, norm).unwrap();
        let eigs = gram.symmetric_eigenvalues();
        let emax = eigs.iter().cloned().fold(f64::MIN, f64::max);
        let emin = eigs.iter().cloned().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(smax, emax.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(smin, emin.sqrt(), epsilon = 1e-10);
    }
}

#[test]
fn conditioning_norm_accessors() {
    let partition = make_uniform_partition(0.0, 1.0, 10).unwrap();
    let basis = Basis::new(BasisKind::Legendre, 3).unwrap();
    let report = rep_map_conditioning(&partition, &basis, 3, 2).unwrap();
    assert_eq!(report.norm_r_l2(), report.sigma_max_u);
    assert_eq!(report.norm_r_inv_l2(), 1.0 / report.sigma_min_u);
    assert_eq!(report.norm_r_h1(), report.sigma_max_uhat);
    assert_eq!(report.norm_r_inv_h1(), 1.0 / report.sigma_min_uhat);
    assert_abs_diff_eq!(
        report.kappa_u(),
        report.sigma_max_u / report.sigma_min_u,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(
        report.kappa_uhat(),
        report.sigma_max_uhat / report.sigma_min_uhat,
        epsilon = 1e-14
    );
}

#[test]
fn conditioning_golden_value() {
    // smallest singular value of the full norm map on [0,1], ten uniform
    // subintervals, degree 3: the extremal mode is a low-order function
    // every family represents the same way, so the value is shared across
    // families — frozen reference value
    for kind in all_kinds() {
        let partition = make_uniform_partition(0.0, 1.0, 10).unwrap();
        let basis = Basis::new(kind, 3).unwrap();
        let report = rep_map_conditioning(&partition, &basis, 3, 2).unwrap();
        let rel = (report.sigma_min_uhat - 3.1569e-2).abs() / 3.1569e-2;
        assert!(
            rel < 1e-3,
            "{kind:?}: σ_min = {:.6e}",
            report.sigma_min_uhat
        );
    }
}

#[test]
fn pure_ode_case_has_no_algebraic_blocks() {
    // k = m is allowed: every component is differential
    let partition = make_uniform_partition(0.0, 1.0, 5).unwrap();
    let basis = Basis::new(BasisKind::Legendre, 3).unwrap();
    let layout = Layout::new(5, 2, 2, 3).unwrap();
    assert_eq!(layout.block_size(), 2 * 3 + 2);
    let report = rep_map_conditioning(&partition, &basis, 2, 2).unwrap();
    assert!(report.sigma_max_u.is_finite() && report.sigma_min_u > 0.0);
    let gram = norm_gram_dense(&partition, &basis, layout, ProjectionNorm::L2).unwrap();
    let eigs = gram.symmetric_eigenvalues();
    let emax = eigs.iter().cloned().fold(f64::MIN, f64::max);
    assert_abs_diff_eq!(report.sigma_max_u, emax.sqrt(), epsilon = 1e-10);
}
