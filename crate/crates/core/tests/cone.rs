//! Cone Laplacian, Weyl residual chain and volume comparison.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use hypspec::cone::{
    cone_radial_laplacian, cone_weyl_residual, direct_cone_check, volume_comparison, Cone, VolumeQuadrature,
};
use hypspec::radial::{epsilon_window, psi, ClosureRadial, Kernel, Psi, QuadratureConfig, SpectralParams};
use hypspec::submanifold::{builtin_graphs, cone_patch, orthogonal_cap};
use hypspec::Error;
use proptest::prelude::*;

fn equator() -> Cone {
    Cone::latitude_circle(FRAC_PI_2, 256).unwrap()
}

#[test]
fn equator_link_volume_is_two_pi() {
    assert!((equator().omega() - 2.0 * PI).abs() < 1e-12);
    let sphere = Cone::equatorial_sphere(3, 4).unwrap();
    assert!((sphere.omega() - 4.0 * PI).abs() < 1e-13);
}

#[test]
fn weyl_chain_for_unit_circle_link() {
    let cfg = QuadratureConfig::default();
    let rep = cone_weyl_residual(&equator(), 2.0, &[20.0, 41.0, 83.0], Some((Kernel::Bump, 0.1)), &cfg).unwrap();
    assert_eq!(rep.rows.len(), 3);
    for row in &rep.rows {
        assert!(row.pass, "{row:?}");
        assert!(row.residual <= row.epsilon_k * row.norm);
        // ε_k is exactly four times the window constant.
        assert_eq!(row.epsilon_window, epsilon_window(2, 2.0, row.window).unwrap());
        assert_eq!(row.epsilon_k, 4.0 * row.epsilon_window);
    }
    assert!(rep.ratios_decreasing && rep.all_pass());
    assert!(rep.mollification.iter().all(|m| m.all_pass()));
}

#[test]
fn link_volume_cancels_in_verdicts() {
    let cfg = QuadratureConfig::default();
    let a = cone_weyl_residual(&equator(), 3.0, &[20.0, 41.0, 83.0], None, &cfg).unwrap();
    let b = cone_weyl_residual(&Cone::latitude_circle(0.4, 128).unwrap(), 3.0, &[20.0, 41.0, 83.0], None, &cfg).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.pass, y.pass);
        assert!((x.ratio - y.ratio).abs() < 1e-12 * x.ratio);
    }
    assert_eq!(a.all_pass(), b.all_pass());
}

#[test]
fn weyl_input_errors() {
    let cfg = QuadratureConfig::default();
    assert!(matches!(
        cone_weyl_residual(&equator(), 2.0, &[20.0, 40.0, 83.0], None, &cfg),
        Err(Error::InvalidInput(_))
    ));
    // λ at the bottom of the continuous spectrum has β = 0.
    assert!(cone_weyl_residual(&equator(), 0.25, &[20.0, 41.0], None, &cfg).is_err());
}

#[test]
fn direct_two_dimensional_quadrature_matches_factorization() {
    let cfg = QuadratureConfig::default();
    for cone in [equator(), Cone::latitude_circle(0.6, 256).unwrap()] {
        for smoothing in [None, Some((Kernel::Bump, 0.1))] {
            let d = direct_cone_check(&cone, 2.0, 20.0, smoothing, &cfg).unwrap();
            assert!(d.relative_difference() < 1e-6, "{d:?}");
        }
    }
    // Windows reaching past the resolvable radius are refused.
    assert!(matches!(direct_cone_check(&equator(), 2.0, 41.0, None, &cfg), Err(Error::Precondition(_))));
}

#[test]
fn radial_laplacian_of_psi() {
    let params = SpectralParams::new(3, 2.5).unwrap();
    let f = Psi(params);
    for r in [0.3, 2.0, 9.0] {
        let lap = cone_radial_laplacian(&f, 3, r).unwrap();
        let expected = -psi(&params, r).value * (2.5 + params.alpha(r));
        assert!((lap - expected).norm() < 1e-10 * expected.norm().max(1.0));
    }
}

#[test]
fn cone_against_itself() {
    let cone = Cone::latitude_circle(FRAC_PI_4, 256).unwrap();
    let patch = cone_patch(FRAC_PI_4).unwrap();
    for r in [6.0, 10.0, 14.0] {
        let f = ClosureRadial::sine_bump(r, 4.0);
        let v = volume_comparison(&[patch.clone()], &cone, &f, r, &VolumeQuadrature::default()).unwrap();
        assert!(v.eps_hat < 1e-8, "R={r}: {v:?}");
    }
}

#[test]
fn geodesic_plane_matches_cone_over_its_boundary() {
    // The sphere orthogonal to the ideal boundary with radius 1 bounds the
    // latitude circle at 45°; both shell areas equal 2π sin α (cosh b − cosh a).
    let cone = Cone::latitude_circle(FRAC_PI_4, 256).unwrap();
    let cap = orthogonal_cap(2, 1.0).unwrap();
    for r in [6.0, 10.0, 14.0] {
        let f = ClosureRadial::sine_bump(r, 4.0);
        let v = volume_comparison(&[cap.clone()], &cone, &f, r, &VolumeQuadrature::default()).unwrap();
        assert!(v.eps_hat < 1e-8, "R={r}: {v:?}");
        // Closed form of ∫ sin²(π(t−R)/4) sinh t over [R, R+4], times ω.
        let k = PI / 4.0;
        let closed = 0.5 * ((r + 4.0).cosh() - r.cosh())
            - 0.5 * (((r + 4.0).cosh() - r.cosh()) / (1.0 + 4.0 * k * k));
        let expected = 2.0 * PI * FRAC_PI_4.sin() * closed;
        assert!((v.cone_integral - expected).abs() < 1e-9 * expected, "{} vs {expected}", v.cone_integral);
    }
}

#[test]
fn graphs_approach_the_equatorial_cone() {
    for g in builtin_graphs() {
        let mut previous = f64::INFINITY;
        for r in [2.0, 4.0, 6.0] {
            let f = ClosureRadial::sine_bump(r, 4.0);
            let v = volume_comparison(&[g.clone()], &equator(), &f, r, &VolumeQuadrature::default()).unwrap();
            assert!(v.eps_hat < previous, "{} R={r}: {v:?}", g.name());
            previous = v.eps_hat;
        }
    }
}

#[test]
fn volume_comparison_edge_cases() {
    let cone = equator();
    let patches = builtin_graphs();
    let zero = volume_comparison(&patches, &cone, &ClosureRadial::zero(), 5.0, &VolumeQuadrature::default()).unwrap();
    assert_eq!((zero.sigma_integral, zero.cone_integral, zero.eps_hat), (0.0, 0.0, 0.0));
    let inside = ClosureRadial::sine_bump(3.0, 4.0);
    assert!(matches!(
        volume_comparison(&patches, &cone, &inside, 5.0, &VolumeQuadrature::default()),
        Err(Error::Precondition(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weyl_ratios_decrease(lambda_excess in 0.2..6.0f64, r0 in 16.0..30.0f64, grow in 2.05..2.5f64) {
        let cfg = QuadratureConfig::default();
        let windows = [r0, r0 * grow, r0 * grow * grow];
        let rep = cone_weyl_residual(&equator(), 0.25 + lambda_excess, &windows, None, &cfg).unwrap();
        prop_assert!(rep.ratios_decreasing, "{:?}", rep.rows);
    }
}
