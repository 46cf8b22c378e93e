//! Finite-element spectra, the radial Laplacian error and the discrete Weyl
//! residual on meshed surfaces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use hypspec::cone::{cone_weyl_residual, Cone, VolumeQuadrature};
use hypspec::hyperbolic::BallPoint;
use hypspec::mesh::{
    assemble, assemble_with, band_vertices, cheeger_side_bound, dirichlet_bottom, dirichlet_bottom_with_bound,
    measure_sigma_diagnostics, radial_laplacian_error, sigma_weyl_residual, smallest_eigenpairs, BoundaryCondition,
    CsrMatrix, EigenConfig, HyperbolicMesh, MeshMetric, SigmaDiagnostics, SigmaMesh,
};
use hypspec::radial::{ClosureRadial, Kernel, QuadratureConfig};
use hypspec::submanifold::{builtin_graphs, epsilon_r, tilted_cap, totally_geodesic_disk, ImmersedPatch, Sampler};
use hypspec::Error;
use nalgebra::DVector;
use proptest::prelude::*;

/// `u″ + coth(t) u′ + λu` integrated by RK4 from `t0` with initial data
/// `(u, u′)`; returns `u(t1)`.
fn shoot(lambda: f64, t0: f64, u0: f64, du0: f64, t1: f64) -> f64 {
    let steps = 20_000;
    let h = (t1 - t0) / steps as f64;
    let rhs = |t: f64, u: f64, v: f64| (v, -v / t.tanh() - lambda * u);
    let (mut t, mut u, mut v) = (t0, u0, du0);
    for _ in 0..steps {
        let k1 = rhs(t, u, v);
        let k2 = rhs(t + h / 2.0, u + h / 2.0 * k1.0, v + h / 2.0 * k1.1);
        let k3 = rhs(t + h / 2.0, u + h / 2.0 * k2.0, v + h / 2.0 * k2.1);
        let k4 = rhs(t + h, u + h * k3.0, v + h * k3.1);
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        t += h;
    }
    u
}

/// Smallest `λ` with `end(λ) = 0`, by a geometric scan for a sign change and bisection.
fn first_root(end: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 0.01);
    let start = end(lo).signum();
    while end(hi).signum() == start {
        lo = hi;
        hi *= 1.02;
        assert!(hi < 1e5, "no sign change");
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if end(mid).signum() == start {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Radial Dirichlet ground state of the geodesic disk of radius `r` in `H²`.
fn disk_oracle(r: f64) -> f64 {
    let t0 = 1e-6;
    first_root(|l| shoot(l, t0, 1.0 - l * t0 * t0 / 4.0, -l * t0 / 2.0, r))
}

/// Radial Dirichlet ground state of the geodesic annulus `a < r < b`.
fn annulus_oracle(a: f64, b: f64) -> f64 {
    first_root(|l| shoot(l, a, 0.0, 1.0, b))
}

fn geodesic() -> ImmersedPatch {
    totally_geodesic_disk(2, 3).unwrap()
}

#[test]
fn shooting_oracle_reproduces_the_euclidean_limit() {
    // Small disks are nearly flat: λ₀ ≈ j₀²/R² with j₀ = 2.404825557695773.
    let r = 0.05;
    let j0 = 2.404825557695773;
    let l = disk_oracle(r);
    assert!((l * r * r / (j0 * j0) - 1.0).abs() < 1e-3, "{l}");
}

#[test]
fn unit_square_converges_at_second_order() {
    let cfg = EigenConfig::default();
    let exact = 2.0 * PI * PI;
    let l: Vec<f64> = [25, 50, 100]
        .iter()
        .map(|&n| dirichlet_bottom(&HyperbolicMesh::unit_square(n).unwrap(), 1, &cfg).unwrap().lambda0())
        .collect();
    assert!(((l[1] - exact) / exact).abs() < 0.02, "{l:?}");
    assert!(l.windows(2).all(|w| w[1] < w[0] && w[1] > exact));
    let order = ((l[0] - l[1]) / (l[1] - l[2])).log2();
    assert!((1.7..=2.3).contains(&order), "order {order}");
}

#[test]
fn free_assembly_annihilates_constants() {
    let mesh = HyperbolicMesh::polar(&geodesic(), None, 3.0, 30, 32).unwrap();
    let ops = assemble_with(&mesh, BoundaryCondition::Free).unwrap();
    let scale = ops.stiffness.diagonal().iter().cloned().fold(0.0, f64::max);
    assert!(ops.stiffness.row_sums().iter().all(|s| s.abs() < 1e-10 * scale));
    assert!(ops.stiffness.asymmetry() < 1e-12 * scale);
    assert!((ops.mass.total() - ops.volume).abs() < 1e-10 * ops.volume);
    assert!((ops.lumped_mass.iter().sum::<f64>() - ops.volume).abs() < 1e-10 * ops.volume);
    assert_eq!(ops.unknowns.len(), mesh.vertices().len());
}

#[test]
fn polar_disk_area_matches_hyperbolic_area() {
    for r in [4.0, 8.0] {
        let mesh = HyperbolicMesh::polar(&geodesic(), None, r, 160, 64).unwrap();
        let exact = 2.0 * PI * (f64::cosh(r) - 1.0);
        assert!((mesh.volume() / exact - 1.0).abs() < 0.01, "R = {r}: {} vs {exact}", mesh.volume());
    }
}

#[test]
fn geodesic_disk_bottom_matches_shooting() {
    let cfg = EigenConfig::hyperbolic(2);
    let big = HyperbolicMesh::polar(&geodesic(), None, 8.0, 160, 64).unwrap();
    let mut prev = f64::INFINITY;
    for r in [4.0, 6.0, 8.0] {
        let mesh = big.restrict_to_radius(r).unwrap();
        let rep = dirichlet_bottom(&mesh, 1, &cfg).unwrap();
        let oracle = disk_oracle(r);
        assert!((rep.lambda0() / oracle - 1.0).abs() < 1e-3, "R = {r}: {} vs {oracle}", rep.lambda0());
        assert!(rep.lambda0() < prev && rep.lambda0() > 0.25);
        assert!(rep.residuals[0] < 1e-8);
        prev = rep.lambda0();
    }
}

#[test]
fn several_eigenpairs_are_consistent_and_certified() {
    let mesh = HyperbolicMesh::polar(&geodesic(), None, 4.0, 40, 32).unwrap();
    let ops = assemble(&mesh).unwrap();
    let sol = smallest_eigenpairs(&ops.stiffness, &ops.mass, 3, &EigenConfig::hyperbolic(2)).unwrap();
    assert_eq!(sol.values.len(), 3);
    assert!(sol.values.windows(2).all(|w| w[0] <= w[1]));
    for i in 0..3 {
        assert!(sol.residuals[i] < 1e-8, "{:?}", sol.residuals);
        assert!((sol.rayleigh[i] - sol.values[i]).abs() < 1e-9 * sol.values[i]);
    }
    // The second and third modes are the rotated pair cos θ, sin θ.
    assert!((sol.values[1] - sol.values[2]).abs() < 1e-3 * sol.values[1]);
}

#[test]
fn eigen_solver_rejects_bad_requests() {
    let mesh = HyperbolicMesh::unit_square(4).unwrap();
    let ops = assemble(&mesh).unwrap();
    let n = ops.unknowns.len();
    assert!(smallest_eigenpairs(&ops.stiffness, &ops.mass, 0, &EigenConfig::default()).is_err());
    assert!(smallest_eigenpairs(&ops.stiffness, &ops.mass, n + 1, &EigenConfig::default()).is_err());
    let other = CsrMatrix::from_triplets(1, vec![(0, 0, 1.0)]).unwrap();
    assert!(smallest_eigenpairs(&ops.stiffness, &other, 1, &EigenConfig::default()).is_err());
}

#[test]
fn domain_monotonicity() {
    let cfg = EigenConfig::hyperbolic(2);
    let big = HyperbolicMesh::polar(&geodesic(), None, 6.0, 60, 32).unwrap();
    let l: Vec<f64> = [3.0, 4.5, 6.0]
        .iter()
        .map(|&r| dirichlet_bottom(&big.restrict_to_radius(r).unwrap(), 1, &cfg).unwrap().lambda0())
        .collect();
    assert!(l.windows(2).all(|w| w[1] < w[0]), "{l:?}");
}

#[test]
fn annulus_bottom_exceeds_cheeger_side_bound() {
    let patch = geodesic();
    let coarse = HyperbolicMesh::polar(&patch, Some(2.0), 8.0, 60, 32).unwrap();
    let fine = HyperbolicMesh::polar(&patch, Some(2.0), 8.0, 120, 64).unwrap();
    let eps = epsilon_r(std::slice::from_ref(&patch), &BallPoint::origin(3), 2.0, &Sampler::default()).unwrap();
    assert!(eps.value < 1e-6);
    let (c, f) = dirichlet_bottom_with_bound(&coarse, &fine, eps.value, 1, &EigenConfig::hyperbolic(2)).unwrap();
    let oracle = annulus_oracle(2.0, 8.0);
    assert!((f.lambda0() / oracle - 1.0).abs() < 1e-3, "{} vs {oracle}", f.lambda0());
    assert!((c.lambda0() / oracle - 1.0).abs() < 4e-3);
    assert_eq!(f.comparisons.len(), 1);
    let cmp = &f.comparisons[0];
    assert!(cmp.pass && (cmp.bound - cheeger_side_bound(2, eps.value)).abs() < 1e-15);
    assert!(f.all_comparisons_pass());
}

#[test]
fn cheeger_side_bound_clamps_at_zero() {
    assert_eq!(cheeger_side_bound(2, 0.0), 0.25);
    assert_eq!(cheeger_side_bound(3, 0.0), 1.0);
    assert_eq!(cheeger_side_bound(2, 1.5), 0.0);
}

#[test]
fn missing_boundary_is_a_precondition_error() {
    // A closed octahedron in flat coordinates has no boundary.
    let v: Vec<DVector<f64>> = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
    .iter()
    .map(|p| DVector::from_row_slice(p))
    .collect();
    let faces = vec![
        vec![0, 2, 4],
        vec![2, 1, 4],
        vec![1, 3, 4],
        vec![3, 0, 4],
        vec![2, 0, 5],
        vec![1, 2, 5],
        vec![3, 1, 5],
        vec![0, 3, 5],
    ];
    let mesh = HyperbolicMesh::from_embedding(2, v, faces, None, MeshMetric::Euclidean).unwrap();
    assert_eq!(mesh.interior_count(), 6);
    assert!(matches!(dirichlet_bottom(&mesh, 1, &EigenConfig::default()), Err(Error::Precondition(_))));
}

#[test]
fn degenerate_simplex_is_named() {
    let v: Vec<DVector<f64>> =
        [[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.2, 0.0]].iter().map(|p| DVector::from_row_slice(p)).collect();
    let err = HyperbolicMesh::from_embedding(2, v, vec![vec![0, 1, 2], vec![0, 1, 3]], None, MeshMetric::Hyperbolic)
        .unwrap_err();
    assert!(matches!(err, Error::Assembly { simplex: 1, .. }), "{err}");
}

#[test]
fn mesh_file_round_trip() {
    let mesh = HyperbolicMesh::polar(&geodesic(), None, 2.0, 6, 32).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disk.mesh");
    mesh.write(&path).unwrap();
    let back = HyperbolicMesh::read(&path).unwrap();
    assert_eq!(back.vertices().len(), mesh.vertices().len());
    assert_eq!(back.simplices(), mesh.simplices());
    assert_eq!(back.boundary(), mesh.boundary());
    assert!(back.vertices().iter().zip(mesh.vertices()).all(|(a, b)| a == b));
    // Reloaded meshes use flat chords between the stored vertices.
    let chords = HyperbolicMesh::from_embedding(
        2,
        mesh.vertices().to_vec(),
        mesh.simplices().to_vec(),
        Some(mesh.boundary().to_vec()),
        MeshMetric::Hyperbolic,
    )
    .unwrap();
    assert_eq!(back.volume(), chords.volume());
    assert!((back.volume() / mesh.volume() - 1.0).abs() < 0.1);

    let missing = dir.path().join("absent.mesh");
    assert!(matches!(HyperbolicMesh::read(&missing), Err(Error::File { .. })));
    let bad = dir.path().join("bad.mesh");
    std::fs::write(&bad, "2 3 1 0\n0.0 0.0\n").unwrap();
    match HyperbolicMesh::read(&bad) {
        Err(Error::File { message, .. }) => assert!(message.contains("line"), "{message}"),
        other => panic!("{other:?}"),
    }
}

fn probe_report(patch: &ImmersedPatch) -> hypspec::mesh::LaplacianErrorReport {
    let mesh = HyperbolicMesh::polar(patch, Some(2.5), 8.5, 120, 64).unwrap();
    let vertices = band_vertices(&mesh, 3.0, 8.0).unwrap();
    radial_laplacian_error(patch, &mesh, &ClosureRadial::exponential(0.5), &vertices, Some(0.1)).unwrap()
}

const BANDS: [(f64, f64); 3] = [(3.0, 4.0), (5.0, 6.0), (7.0, 8.0)];

#[test]
fn laplacian_error_decays_on_graphs() {
    for patch in builtin_graphs() {
        let (sups, decreasing) = probe_report(&patch).band_trend(&BANDS).unwrap();
        assert!(decreasing, "{}: {sups:?}", patch.name());
        assert!(sups[2] < 1e-2 * sups[0], "{}: {sups:?}", patch.name());
    }
}

#[test]
fn laplacian_error_plateaus_on_tilted_cap() {
    let rep = probe_report(&tilted_cap(2, FRAC_PI_3).unwrap());
    let (sups, decreasing) = rep.band_trend(&BANDS).unwrap();
    assert!(!decreasing, "{sups:?}");
    assert!(sups.iter().all(|s| *s > 0.05), "{sups:?}");
}

#[test]
fn laplacian_error_vanishes_on_geodesic_plane() {
    let rep = probe_report(&geodesic());
    let (sups, _) = rep.band_trend(&BANDS).unwrap();
    assert!(sups.iter().all(|s| *s < 1e-5), "{sups:?}");
    assert_eq!(rep.bound_violations(), 0);
    assert!(rep.samples.iter().all(|s| s.consistency < 1e-5 * s.scale));
}

const WINDOWS: [f64; 3] = [4.5, 9.2, 18.5];
const SMOOTHING: Option<(Kernel, f64)> = Some((Kernel::Bump, 0.04));

fn equator() -> Cone {
    Cone::latitude_circle(FRAC_PI_2, 256).unwrap()
}

fn diagnostics(patch: &ImmersedPatch) -> SigmaDiagnostics {
    measure_sigma_diagnostics(patch, &equator(), &WINDOWS, &SigmaMesh::default(), &VolumeQuadrature::default())
        .unwrap()
}

#[test]
fn sigma_weyl_on_geodesic_plane_matches_cone() {
    let patch = geodesic();
    let cfg = QuadratureConfig::default();
    let d = diagnostics(&patch);
    assert!(d.decays());
    let rep = sigma_weyl_residual(&patch, 2.0, &WINDOWS, SMOOTHING, Some(&d), &SigmaMesh::default(), &cfg).unwrap();
    let cone = cone_weyl_residual(&equator(), 2.0, &WINDOWS, SMOOTHING, &cfg).unwrap();
    for (s, c) in rep.rows.iter().zip(&cone.rows) {
        assert!((s.ratio / c.ratio - 1.0).abs() < 0.03, "{} vs {}", s.ratio, c.ratio);
        assert!(s.ratio <= 2.0 * s.cone_bound);
    }
    assert!(rep.ratios_decreasing && rep.hypotheses_hold && rep.pass);
}

#[test]
fn sigma_weyl_passes_on_graph_and_fails_on_tilted_cap() {
    let cfg = QuadratureConfig::default();
    let graph = builtin_graphs().remove(0);
    let d = diagnostics(&graph);
    let rep = sigma_weyl_residual(&graph, 2.0, &WINDOWS, SMOOTHING, Some(&d), &SigmaMesh::default(), &cfg).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.rows.last().unwrap().ratio <= rep.final_bound);

    let cap = tilted_cap(2, FRAC_PI_3).unwrap();
    let d = diagnostics(&cap);
    assert!(!d.decays());
    let rep = sigma_weyl_residual(&cap, 2.0, &WINDOWS, SMOOTHING, Some(&d), &SigmaMesh::default(), &cfg).unwrap();
    assert!(!rep.hypotheses_hold && !rep.pass);
}

#[test]
fn sigma_weyl_input_errors() {
    let patch = geodesic();
    let cfg = QuadratureConfig::default();
    let mesh = SigmaMesh::default();
    let run = |w: &[f64], d: Option<&SigmaDiagnostics>| sigma_weyl_residual(&patch, 2.0, w, SMOOTHING, d, &mesh, &cfg);
    assert!(matches!(run(&WINDOWS, None), Err(Error::Precondition(_))));
    let d = SigmaDiagnostics {
        windows: vec![4.5, 9.2],
        laplacian: vec![0.0; 2],
        volume: vec![0.0; 2],
    };
    assert!(matches!(run(&WINDOWS, Some(&d)), Err(Error::Precondition(_))));
    let d = SigmaDiagnostics {
        windows: vec![4.5, 8.0],
        laplacian: vec![0.0; 2],
        volume: vec![0.0; 2],
    };
    assert!(matches!(run(&[4.5, 8.0], Some(&d)), Err(Error::InvalidInput(_))));
    assert!(matches!(run(&[], Some(&d)), Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stiffness_is_symmetric_and_nonnegative(rings in 2usize..8, sectors in 3usize..12, outer in 0.5f64..4.0) {
        let mesh = HyperbolicMesh::polar(&geodesic(), None, outer, rings, sectors).unwrap();
        let ops = assemble(&mesh).unwrap();
        let scale = ops.stiffness.diagonal().iter().cloned().fold(0.0, f64::max);
        prop_assert!(ops.stiffness.asymmetry() <= 1e-12 * scale);
        // vᵀKv ≥ 0 for a pseudo-random v.
        let v: Vec<f64> = (0..ops.unknowns.len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let kv = ops.stiffness.mul_vec(&v);
        prop_assert!(v.iter().zip(&kv).map(|(a, b)| a * b).sum::<f64>() >= -1e-10 * scale);
    }

    #[test]
    fn decay_rule_accepts_halving(e0 in 1e-3f64..0.9, q in 0.0f64..0.5) {
        let d = SigmaDiagnostics { windows: vec![1.0, 3.0], laplacian: vec![e0, e0 * q], volume: vec![0.0, 0.0] };
        prop_assert!(d.decays());
        let d = SigmaDiagnostics { windows: vec![1.0, 3.0], laplacian: vec![e0, e0 * (0.51 + q)], volume: vec![0.0, 0.0] };
        prop_assert!(d.decays() == (e0 * (0.51 + q) < 1e-6));
    }
}
