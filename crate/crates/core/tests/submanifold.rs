//! Curvature of immersed patches and the asymptotic-minimality diagnostic on
//! geometries with known mean curvature.

use hypspec::hyperbolic::BallPoint;
use hypspec::submanifold::{
    builtin_graphs, bump_graph, epsilon_r, mean_curvature, mean_curvature_in_frame, orthogonal_cap,
    orthogonality_defect, second_fundamental_form, tilted_cap, totally_geodesic_disk, BumpHeight, BumpShape,
    EpsilonProfile, MetricTag, Sampler,
};
use hypspec::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn coarse() -> Sampler {
    Sampler {
        radial: 60,
        angular: 16,
        ..Sampler::default()
    }
}

fn codim_two_graph() -> hypspec::submanifold::ImmersedPatch {
    let height = BumpHeight {
        components: vec![(0.3, BumpShape::Radial), (0.2, BumpShape::Cosine(0, 2.0))],
    };
    bump_graph("two-bumps", 2, &height).unwrap()
}

#[test]
fn flat_disk_has_no_curvature() {
    let p = totally_geodesic_disk(3, 5).unwrap();
    for u in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [0.0, 0.0, 0.95]] {
        let r = mean_curvature(&p, &u).unwrap();
        assert!(r.norm_hyperbolic < 1e-12 && r.norm_euclidean < 1e-12);
    }
}

#[test]
fn orthogonal_cap_is_minimal_across_the_chart() {
    let p = orthogonal_cap(2, 1.0).unwrap();
    for target in [0.5, 0.7, 0.9, 0.99] {
        let u = p.param_at_norm(&[0.6, 0.8], target).unwrap();
        let r = mean_curvature(&p, &u).unwrap();
        assert!(r.norm_hyperbolic < 1e-6, "|x| = {target}: {}", r.norm_hyperbolic);
        assert!(!r.violation);
    }
}

#[test]
fn tilted_cap_has_constant_curvature() {
    for theta in [0.3, 0.8, 1.2] {
        let p = tilted_cap(2, theta).unwrap();
        for u in [[0.0, 0.0], [0.4, 0.1], [-0.2, 0.85]] {
            let r = mean_curvature(&p, &u).unwrap();
            let expected = 2.0 * f64::cos(theta);
            assert!((r.norm_hyperbolic - expected).abs() < 1e-8, "theta {theta}: {}", r.norm_hyperbolic);
        }
    }
}

#[test]
fn orthogonality_defect_separates_orthogonal_and_tilted_caps() {
    let ortho = orthogonal_cap(2, 1.0).unwrap();
    let flat = totally_geodesic_disk(2, 3).unwrap();
    let tilted = tilted_cap(2, std::f64::consts::FRAC_PI_3).unwrap();
    let defects = |patch: &hypspec::submanifold::ImmersedPatch| -> Vec<f64> {
        [0.99, 0.999]
            .iter()
            .map(|&t| orthogonality_defect(patch, &patch.param_at_norm(&[1.0, 0.0], t).unwrap()).unwrap())
            .collect()
    };
    assert!(defects(&flat).iter().all(|d| *d < 1e-12));
    let o = defects(&ortho);
    assert!(o[1] < o[0] && o[1] < 1e-2, "{o:?}");
    let t = defects(&tilted);
    assert!(t[1] > 0.4, "{t:?}");
    assert!(matches!(orthogonality_defect(&flat, &[0.1, 0.0]), Err(Error::InvalidInput(_))));
}

#[test]
fn epsilon_vanishes_on_geodesic_patches() {
    let o = BallPoint::origin(3);
    let patches = [totally_geodesic_disk(2, 3).unwrap(), orthogonal_cap(2, 1.0).unwrap()];
    for r in [0.5, 2.0, 6.0] {
        let e = epsilon_r(&patches, &o, r, &coarse()).unwrap();
        assert!(e.value <= 1e-6, "r = {r}: {}", e.value);
        assert!(e.samples_used > 0);
    }
}

#[test]
fn epsilon_decays_on_boundary_flat_graphs() {
    let o = BallPoint::origin(3);
    for patch in builtin_graphs() {
        let profile = EpsilonProfile::sample(std::slice::from_ref(&patch), &o, &coarse()).unwrap();
        let values: Vec<f64> = [1.0, 3.0, 6.0, 10.0].iter().map(|&r| profile.epsilon(r).value).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{}: {values:?}", patch.name());
    }
}

#[test]
fn epsilon_plateaus_on_the_tilted_cap() {
    let o = BallPoint::origin(3);
    let theta = std::f64::consts::FRAC_PI_3;
    let e = epsilon_r(&[tilted_cap(2, theta).unwrap()], &o, 8.0, &coarse()).unwrap();
    assert!((e.value - 2.0 * theta.cos()).abs() < 1e-6, "{}", e.value);
}

#[test]
fn epsilon_rejects_bad_input() {
    let o = BallPoint::origin(3);
    assert!(matches!(epsilon_r(&[], &o, 1.0, &coarse()), Err(Error::InvalidInput(_))));
    let disk = [totally_geodesic_disk(2, 3).unwrap()];
    assert!(epsilon_r(&disk, &o, 0.0, &coarse()).is_err());
    assert!(epsilon_r(&disk, &BallPoint::origin(4), 1.0, &coarse()).is_err());
    let profile = EpsilonProfile::sample(&disk, &o, &coarse()).unwrap();
    assert_eq!(profile.epsilon(profile.max_distance() + 1.0).value, f64::INFINITY);
}

proptest! {
    #[test]
    fn second_fundamental_form_is_symmetric(x in -0.6..0.6f64, y in -0.6..0.6f64) {
        let patch = codim_two_graph();
        for tag in [MetricTag::Euclidean, MetricTag::Hyperbolic] {
            for form in second_fundamental_form(&patch, &[x, y], tag).unwrap() {
                let scale = form.norm().max(1.0);
                prop_assert!((&form - form.transpose()).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn mean_curvature_ignores_the_normal_frame(x in -0.6..0.6f64, y in -0.6..0.6f64, a in 0.0..6.3f64) {
        let patch = codim_two_graph();
        let base = mean_curvature(&patch, &[x, y]).unwrap();
        let q = DMatrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
        let turned = mean_curvature_in_frame(&patch, &[x, y], &q).unwrap();
        prop_assert!((base.norm_hyperbolic - turned.norm_hyperbolic).abs() < 1e-10 * base.norm_hyperbolic.max(1.0));
        prop_assert!((base.norm_euclidean - turned.norm_euclidean).abs() < 1e-10 * base.norm_euclidean.max(1.0));
        prop_assert!(!turned.violation);
    }

    #[test]
    fn epsilon_is_non_increasing(r1 in 0.1..12.0f64, dr in 0.0..6.0f64) {
        let o = BallPoint::origin(3);
        let patch = &builtin_graphs()[1];
        let profile = EpsilonProfile::sample(std::slice::from_ref(patch), &o, &coarse()).unwrap();
        prop_assert!(profile.epsilon(r1 + dr).value <= profile.epsilon(r1).value);
    }
}
