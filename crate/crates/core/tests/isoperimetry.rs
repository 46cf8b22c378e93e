//! Isoperimetric ratios of candidate domains and the Cheeger-side chain.

use hypspec::hyperbolic::BallPoint;
use hypspec::isoperimetry::{
    check_theorem_tc, cheeger_to_lambda, domain_ratio, generate_candidates, AnnulusSpectrum, Candidate,
    CandidateFamily,
};
use hypspec::mesh::{dirichlet_bottom, EigenConfig, HyperbolicMesh};
use hypspec::radial::isoperimetric_profile;
use hypspec::submanifold::{epsilon_r, totally_geodesic_disk, EpsilonReport, ImmersedPatch, Sampler};
use hypspec::Error;
use proptest::prelude::*;

fn geodesic() -> ImmersedPatch {
    totally_geodesic_disk(2, 3).unwrap()
}

fn disk_mesh() -> HyperbolicMesh {
    HyperbolicMesh::polar(&geodesic(), None, 8.0, 160, 64).unwrap()
}

fn sub_disk(mesh: &HyperbolicMesh, rho: f64) -> Candidate {
    let radii = mesh.vertex_radii().unwrap();
    let ind = mesh.simplices().iter().map(|s| s.iter().all(|&v| radii[v] <= rho + 1e-9)).collect();
    Candidate::new(format!("disk {rho}"), ind)
}

fn annulus_mesh() -> HyperbolicMesh {
    HyperbolicMesh::polar(&geodesic(), Some(2.0), 8.0, 120, 64).unwrap()
}

#[test]
fn geodesic_disk_ratio_is_coth_half_radius() {
    let mesh = disk_mesh();
    let profile = isoperimetric_profile(2).unwrap();
    for rho in [0.5, 1.0, 3.0, 6.0] {
        let s = domain_ratio(&mesh, &sub_disk(&mesh, rho)).unwrap();
        let exact = 1.0 / profile.fprime(rho);
        assert!((s.ratio / exact - 1.0).abs() < 0.02, "rho = {rho}: {} vs {exact}", s.ratio);
        assert!((s.volume / (2.0 * std::f64::consts::PI * (rho.cosh() - 1.0)) - 1.0).abs() < 0.01);
    }
}

#[test]
fn large_disks_approach_ratio_one_from_above() {
    let mesh = disk_mesh();
    let r: Vec<f64> = [2.0, 4.0, 7.0].iter().map(|&rho| domain_ratio(&mesh, &sub_disk(&mesh, rho)).unwrap().ratio).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]) && r[2] > 1.0 && r[2] < 1.01, "{r:?}");
}

#[test]
fn disjoint_union_ratio_is_a_mediant() {
    let mesh = disk_mesh();
    let radii = mesh.vertex_radii().unwrap();
    // A central disk and an outer ring, separated by a gap.
    let inner = sub_disk(&mesh, 1.0);
    let ring: Vec<bool> = mesh.simplices().iter().map(|s| s.iter().all(|&v| radii[v] >= 3.0 - 1e-9 && radii[v] <= 4.0 + 1e-9)).collect();
    let ring = Candidate::new("ring", ring);
    let both = Candidate::new("both", inner.indicator.iter().zip(&ring.indicator).map(|(a, b)| *a || *b).collect());
    let (a, b, u) = (domain_ratio(&mesh, &inner).unwrap(), domain_ratio(&mesh, &ring).unwrap(), domain_ratio(&mesh, &both).unwrap());
    assert!((u.volume - a.volume - b.volume).abs() < 1e-9 * u.volume);
    assert!((u.perimeter - a.perimeter - b.perimeter).abs() < 1e-9 * u.perimeter);
    assert!(u.ratio > a.ratio.min(b.ratio) && u.ratio < a.ratio.max(b.ratio));
}

#[test]
fn touching_the_host_boundary_is_a_containment_error() {
    let mesh = annulus_mesh();
    let all = Candidate::new("all", vec![true; mesh.simplices().len()]);
    assert!(matches!(domain_ratio(&mesh, &all), Err(Error::Containment(_))));
    let none = Candidate::new("none", vec![false; mesh.simplices().len()]);
    assert!(matches!(domain_ratio(&mesh, &none), Err(Error::InvalidInput(_))));
    let short = Candidate::new("short", vec![true; 3]);
    assert!(matches!(domain_ratio(&mesh, &short), Err(Error::InvalidInput(_))));
}

#[test]
fn family_check_on_geodesic_annulus() {
    let patch = geodesic();
    let mesh = annulus_mesh();
    let family = CandidateFamily::default();
    let candidates = generate_candidates(&mesh, &family).unwrap();
    assert_eq!(candidates.len(), 200);
    let eps = epsilon_r(std::slice::from_ref(&patch), &BallPoint::origin(3), 2.0, &Sampler::default()).unwrap();
    let rep = check_theorem_tc(&mesh, &candidates, 2.0, 8.0, eps.value).unwrap();
    let coth4 = 1.0 / 4.0f64.tanh();
    assert!((rep.ball_ratio - coth4).abs() < 1e-10);
    assert!(rep.pass, "{:?}", rep.failures);
    assert!(rep.samples.iter().all(|s| s.ratio >= rep.bound - rep.slack));
    assert!(rep.min_ratio >= rep.bound - rep.slack && rep.min_ratio < 1.05);
}

#[test]
fn epsilon_lowers_the_bound_exactly() {
    let mesh = annulus_mesh();
    let candidates = generate_candidates(&mesh, &CandidateFamily { annuli: 5, disks: 5, random_unions: 5, level_sets: 5, seed: 3 }).unwrap();
    let a = check_theorem_tc(&mesh, &candidates, 2.0, 8.0, 0.0).unwrap();
    let b = check_theorem_tc(&mesh, &candidates, 2.0, 8.0, 0.05).unwrap();
    assert!((a.bound - b.bound - 0.05).abs() < 1e-15);
    assert_eq!(a.min_ratio, b.min_ratio);
    assert!(b.pass);
}

#[test]
fn small_disks_pass_trivially() {
    let mesh = annulus_mesh();
    let family = CandidateFamily { annuli: 0, disks: 20, random_unions: 0, level_sets: 0, seed: 11 };
    let rep = check_theorem_tc(&mesh, &generate_candidates(&mesh, &family).unwrap(), 2.0, 8.0, 0.0).unwrap();
    assert!(rep.pass && rep.min_ratio > rep.bound);
}

#[test]
fn family_errors() {
    let mesh = annulus_mesh();
    assert!(matches!(check_theorem_tc(&mesh, &[], 2.0, 8.0, 0.0), Err(Error::InvalidInput(_))));
    let empty = CandidateFamily { annuli: 0, disks: 0, random_unions: 0, level_sets: 0, seed: 1 };
    assert!(matches!(generate_candidates(&mesh, &empty), Err(Error::InvalidInput(_))));
    let c = generate_candidates(&mesh, &CandidateFamily { annuli: 1, disks: 0, random_unions: 0, level_sets: 0, seed: 1 }).unwrap();
    // The mesh reaches radius 8, outside the claimed annulus (2, 6).
    assert!(matches!(check_theorem_tc(&mesh, &c, 2.0, 6.0, 0.0), Err(Error::InvalidInput(_))));
}

#[test]
fn generation_is_deterministic() {
    let mesh = HyperbolicMesh::polar(&geodesic(), Some(2.0), 5.0, 20, 16).unwrap();
    let family = CandidateFamily { seed: 42, ..CandidateFamily::default() };
    assert_eq!(generate_candidates(&mesh, &family).unwrap(), generate_candidates(&mesh, &family).unwrap());
    let other = CandidateFamily { seed: 43, ..family };
    assert_ne!(generate_candidates(&mesh, &family).unwrap(), generate_candidates(&mesh, &other).unwrap());
}

fn eps_report(r: f64, value: f64) -> EpsilonReport {
    EpsilonReport { r, value, samples_used: 1, sampler: Sampler::default() }
}

#[test]
fn cheeger_chain_on_geodesic_annulus() {
    let patch = geodesic();
    let cfg = EigenConfig::hyperbolic(2);
    let coarse = dirichlet_bottom(&HyperbolicMesh::polar(&patch, Some(2.0), 8.0, 60, 32).unwrap(), 1, &cfg).unwrap();
    let fine = dirichlet_bottom(&annulus_mesh(), 1, &cfg).unwrap();
    let annulus = AnnulusSpectrum::from_reports(2, 2.0, 8.0, &coarse, &fine);
    let eps = epsilon_r(std::slice::from_ref(&patch), &BallPoint::origin(3), 2.0, &Sampler::default()).unwrap();
    let chain = cheeger_to_lambda(&[(annulus.clone(), eps)]).unwrap();
    assert!(chain.pass);
    assert!((chain.links[0].bound - 0.25).abs() < 1e-6);
    assert!(chain.links[0].ball_bound >= chain.links[0].bound);
    assert_eq!(chain.essential_bound, 0.25);

    // ε = m − 1 makes the bound degenerate.
    let chain = cheeger_to_lambda(&[(annulus.clone(), eps_report(2.0, 1.0))]).unwrap();
    assert_eq!(chain.links[0].bound, 0.0);
    assert!(chain.pass);

    assert!(matches!(cheeger_to_lambda(&[(annulus, eps_report(4.0, 0.0))]), Err(Error::InvalidInput(_))));
    assert!(matches!(cheeger_to_lambda(&[]), Err(Error::InvalidInput(_))));
}

#[test]
fn decaying_epsilon_raises_the_chain_toward_one_quarter() {
    let pairs: Vec<(AnnulusSpectrum, EpsilonReport)> = [(2.0, 0.3), (4.0, 0.1), (6.0, 0.02)]
        .iter()
        .map(|&(r, e)| (AnnulusSpectrum { m: 2, inner: r, outer: r + 6.0, lambda0: 0.5, slack: 0.0 }, eps_report(r, e)))
        .collect();
    let chain = cheeger_to_lambda(&pairs).unwrap();
    assert!(chain.bounds_increasing && chain.pass);
    assert!(chain.limit_bound < chain.essential_bound && chain.limit_bound > 0.24);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn candidates_stay_inside_and_have_ratio_above_bound(seed in 0u64..1000) {
        let mesh = HyperbolicMesh::polar(&geodesic(), Some(2.0), 6.0, 40, 24).unwrap();
        let family = CandidateFamily { annuli: 4, disks: 4, random_unions: 4, level_sets: 4, seed };
        let c = generate_candidates(&mesh, &family).unwrap();
        let rep = check_theorem_tc(&mesh, &c, 2.0, 6.0, 0.0).unwrap();
        prop_assert!(rep.pass);
        prop_assert!(rep.samples.iter().all(|s| s.volume > 0.0 && s.perimeter > 0.0));
    }

    #[test]
    fn mediant_property(a in 1.0f64..3.0, gap in 0.5f64..2.0, w in 0.5f64..2.0) {
        let mesh = HyperbolicMesh::polar(&geodesic(), None, 8.0, 80, 32).unwrap();
        let radii = mesh.vertex_radii().unwrap();
        let band = |lo: f64, hi: f64| -> Vec<bool> {
            mesh.simplices().iter().map(|s| s.iter().all(|&v| radii[v] >= lo && radii[v] <= hi)).collect()
        };
        let x = band(0.0, a);
        let y = band(a + gap, a + gap + w);
        prop_assume!(x.iter().any(|b| *b) && y.iter().any(|b| *b));
        let u: Vec<bool> = x.iter().zip(&y).map(|(p, q)| *p || *q).collect();
        let rx = domain_ratio(&mesh, &Candidate::new("x", x)).unwrap().ratio;
        let ry = domain_ratio(&mesh, &Candidate::new("y", y)).unwrap().ratio;
        let ru = domain_ratio(&mesh, &Candidate::new("u", u)).unwrap().ratio;
        prop_assert!(ru >= rx.min(ry) - 1e-12 && ru <= rx.max(ry) + 1e-12);
    }
}
