//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the verdict lines are always printed; exits nonzero if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::time::Instant;

use hypspec::boundary::{delta_ratio_at, hemisphere, tangent_cone_estimate, tilted_strip, BoundaryCurve};
use hypspec::cone::{cone_weyl_residual, direct_cone_check, Cone};
use hypspec::hyperbolic::BallPoint;
use hypspec::isoperimetry::{check_theorem_tc, generate_candidates, CandidateFamily};
use hypspec::mesh::{band_vertices, dirichlet_bottom, discretization_slack, radial_laplacian_error, EigenConfig, HyperbolicMesh};
use hypspec::radial::{
    ball_cheeger, isoperimetric_profile, lemma_est_sweep, psi_residual, ClosureRadial, Kernel, QuadratureConfig,
};
use hypspec::submanifold::{
    builtin_graphs, epsilon_r, mean_curvature, orthogonal_cap, orthogonality_defect, tilted_cap, totally_geodesic_disk,
    ImmersedPatch, ParamDomain, Sampler,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn lemma_est_grid() -> Verdict {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for m in 2..=5usize {
        let a = (m as f64 - 1.0) / 2.0;
        for gap in [0.1, 1.0, 10.0] {
            let sweep = lemma_est_sweep(m, a * a + gap, &[20.0, 40.0, 80.0, 160.0], None, &cfg).map_err(fail)?;
            worst = sweep.rows.iter().map(|r| r.ratio).fold(worst, f64::max);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1.0 + 1e-6 && secs < 10.0, format!("max ratio {worst:.6}, {secs:.2} s"))
}

fn psi_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = rng.random_range(2..=5usize);
        let a = (m as f64 - 1.0) / 2.0;
        let lambda = a * a + rng.random_range(1e-3..20.0);
        // Near t = 0 the terms grow like |ψ|/t², so absolute round-off alone
        // exceeds 1e-10; the Weyl terms only use t >= R/2 >= 10.
        let t = rng.random_range(0.1..60.0);
        worst = worst.max(psi_residual(m, lambda, t).map_err(fail)?);
    }
    check(worst < 1e-10, format!("max residual {worst:.2e} over 1000 samples"))
}

fn isoperimetric_profile_checks() -> Verdict {
    let mut ode: f64 = 0.0;
    for m in 2..=5 {
        let p = isoperimetric_profile(m).map_err(fail)?;
        for t in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0] {
            ode = ode.max(p.ode_residual(t));
        }
    }
    let p2 = isoperimetric_profile(2).map_err(fail)?;
    let coth = [0.5, 2.0, 10.0, 30.0].iter().map(|&r: &f64| (1.0 / p2.fprime(r) - 1.0 / (r / 2.0).tanh()).abs()).fold(0.0, f64::max);
    let mut cheeger: f64 = 0.0;
    for m in 2..=5 {
        cheeger = cheeger.max((ball_cheeger(m, 30.0).map_err(fail)? - (m as f64 - 1.0)).abs());
    }
    check(
        ode < 1e-9 && coth < 1e-10 && cheeger < 1e-6,
        format!("ODE residual {ode:.1e}, |1/f'(R) - coth(R/2)| {coth:.1e}, |h(B_30) - (m-1)| {cheeger:.1e}"),
    )
}

fn random_params(patch: &ImmersedPatch, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<f64>> {
    let ParamDomain::Disk { center, radius } = patch.domain() else {
        unreachable!("built-in patches use disk domains")
    };
    (0..count)
        .map(|_| {
            let s = radius * 0.98 * rng.random::<f64>().sqrt();
            let a = rng.random_range(0.0..std::f64::consts::TAU);
            vec![center[0] + s * a.cos(), center[1] + s * a.sin()]
        })
        .collect()
}

fn conformal_curvature() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let geodesic = [totally_geodesic_disk(2, 3).map_err(fail)?, orthogonal_cap(2, 1.0).map_err(fail)?];
    let cap = tilted_cap(2, FRAC_PI_3).map_err(fail)?;
    let mut patches: Vec<ImmersedPatch> = geodesic.to_vec();
    patches.push(cap.clone());
    patches.extend(builtin_graphs());
    let (mut residual, mut geodesic_h, mut cap_lo, mut cap_hi) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for (i, patch) in patches.iter().enumerate() {
        for u in random_params(patch, &mut rng, 100) {
            let rep = mean_curvature(patch, &u).map_err(fail)?;
            residual = residual.max(rep.conformal_residual);
            if i < geodesic.len() {
                geodesic_h = geodesic_h.max(rep.norm_hyperbolic);
            }
            if patch.name() == "tilted-cap" {
                cap_lo = cap_lo.min(rep.norm_hyperbolic);
                cap_hi = cap_hi.max(rep.norm_hyperbolic);
            }
        }
    }
    let u = cap.param_at_norm(&[1.0, 0.0], 1.0 - 1e-6).map_err(fail)?;
    let defect = orthogonality_defect(&cap, &u).map_err(fail)?;
    check(
        residual < 1e-6 && geodesic_h < 1e-6 && cap_hi - cap_lo < 1e-4 && (defect / 0.5 - 1.0).abs() < 0.02,
        format!(
            "residual {residual:.1e}, geodesic |H| {geodesic_h:.1e}, tilted |H| spread {:.1e}, defect {defect:.4}",
            cap_hi - cap_lo
        ),
    )
}

fn epsilon_decay() -> Verdict {
    let origin = BallPoint::origin(3);
    let sampler = Sampler::default();
    let radii = [2.0, 4.0, 6.0, 8.0];
    let mut details = Vec::new();
    let mut ok = true;
    for g in builtin_graphs() {
        let eps = radii
            .iter()
            .map(|&r| epsilon_r(std::slice::from_ref(&g), &origin, r, &sampler).map(|e| e.value))
            .collect::<hypspec::Result<Vec<f64>>>()
            .map_err(fail)?;
        ok &= eps.windows(2).all(|w| w[1] < w[0]);
        details.push(format!("{} {:.1e}..{:.1e}", g.name(), eps[0], eps[3]));
    }
    let cap = tilted_cap(2, FRAC_PI_3).map_err(fail)?;
    let floor = radii
        .iter()
        .map(|&r| epsilon_r(std::slice::from_ref(&cap), &origin, r, &sampler).map(|e| e.value))
        .collect::<hypspec::Result<Vec<f64>>>()
        .map_err(fail)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    ok &= floor > 0.4 * 2.0 * FRAC_PI_3.cos();
    details.push(format!("tilted cap floor {floor:.3}"));
    check(ok, details.join(", "))
}

fn v(c: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(c)
}

fn tangent_cones() -> Verdict {
    let scales = [1.0, 1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let circle = BoundaryCurve::unit_circle(256);
    let cloud = hemisphere().graded_cloud(&[0.0, 0.0], 1e-5, 1.0, 8, 720).map_err(fail)?;
    let hemi = tangent_cone_estimate(&cloud, &circle, &v(&[1.0, 0.0]), &scales).map_err(fail)?;
    let line = BoundaryCurve::line(v(&[0.0, 0.0]), v(&[1.0, 0.0]), 1.0, 101).map_err(fail)?;
    let strip = tilted_strip(FRAC_PI_4, 1.0, 1.0).map_err(fail)?.graded_cloud(&[0.0, 0.0], 1e-5, 1.0, 8, 720).map_err(fail)?;
    let tilted = tangent_cone_estimate(&strip, &line, &v(&[0.0, 0.0]), &scales).map_err(fail)?;
    let curves = [
        BoundaryCurve::unit_circle(128),
        BoundaryCurve::three_halves_graph(1.0, 401).map_err(fail)?,
        BoundaryCurve::circle(v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[0.0, 0.6, 0.8]), 2.0, 128).map_err(fail)?,
    ];
    let mut delta = f64::INFINITY;
    for c in &curves {
        let (a, b) = c.interval();
        for t in [a + 0.3 * (b - a), 0.5 * (a + b)] {
            delta = delta.min(delta_ratio_at(c, t, 1e-4).map_err(fail)?.ratio);
        }
    }
    check(
        (hemi.opening_angle_deg - 90.0).abs() <= 1.0
            && (tilted.opening_angle_deg - 45.0).abs() <= 1.0
            && !tilted.matches_half_space()
            && delta > 0.99,
        format!(
            "hemisphere {:.2} deg, tilted strip {:.2} deg ({}), min delta ratio {delta:.6}",
            hemi.opening_angle_deg,
            tilted.opening_angle_deg,
            if tilted.matches_half_space() { "wrongly matches a half-space" } else { "rejected as a half-space" }
        ),
    )
}

fn cone_weyl() -> Verdict {
    let cfg = QuadratureConfig::default();
    let cone = Cone::latitude_circle(FRAC_PI_2, 256).map_err(fail)?;
    let smoothing = Some((Kernel::Bump, 0.1));
    let rep = cone_weyl_residual(&cone, 2.0, &[20.0, 41.0, 83.0], smoothing, &cfg).map_err(fail)?;
    let bounded = rep.rows.iter().all(|r| r.residual <= 4.0 * r.epsilon_window * r.norm);
    let ratios: Vec<f64> = rep.rows.iter().map(|r| r.ratio).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let direct = direct_cone_check(&cone, 2.0, 20.0, smoothing, &cfg).map_err(fail)?.relative_difference();
    check(
        bounded && decreasing && direct < 1e-6,
        format!("ratios {ratios:.4?}, direct quadrature at R = 20 differs by {direct:.1e}"),
    )
}

fn fem_bottom() -> Verdict {
    let start = Instant::now();
    let patch = totally_geodesic_disk(2, 3).map_err(fail)?;
    let cfg = EigenConfig::hyperbolic(2);
    let fine = HyperbolicMesh::polar(&patch, None, 8.0, 160, 64).map_err(fail)?;
    let coarse = HyperbolicMesh::polar(&patch, None, 8.0, 80, 32).map_err(fail)?;
    let mut values = Vec::new();
    let mut ok = true;
    let mut interior = 0;
    for r in [4.0, 6.0, 8.0] {
        let f = dirichlet_bottom(&fine.restrict_to_radius(r).map_err(fail)?, 1, &cfg).map_err(fail)?;
        let c = dirichlet_bottom(&coarse.restrict_to_radius(r).map_err(fail)?, 1, &cfg).map_err(fail)?;
        let slack = discretization_slack(c.lambda0(), f.lambda0());
        ok &= f.lambda0() >= 0.25 - slack;
        values.push(f.lambda0());
        interior = f.interior_vertices;
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= values.windows(2).all(|w| w[1] < w[0]) && values[2] <= 0.40 && interior >= 10_000 && secs < 120.0;
    check(ok, format!("lambda0 {values:.5?}, {interior} interior vertices at R = 8, {secs:.1} s"))
}

fn family_check() -> Verdict {
    let patch = totally_geodesic_disk(2, 3).map_err(fail)?;
    let mesh = HyperbolicMesh::polar(&patch, Some(2.0), 8.0, 120, 64).map_err(fail)?;
    let candidates = generate_candidates(&mesh, &CandidateFamily::default()).map_err(fail)?;
    let eps = epsilon_r(std::slice::from_ref(&patch), &BallPoint::origin(3), 2.0, &Sampler::default()).map_err(fail)?;
    let rep = check_theorem_tc(&mesh, &candidates, 2.0, 8.0, eps.value).map_err(fail)?;
    check(
        rep.pass && rep.samples.len() >= 200,
        format!(
            "{} candidates, min ratio {:.5} ({}) against {:.5} - {:.5}",
            rep.samples.len(),
            rep.min_ratio,
            rep.argmin,
            rep.bound,
            rep.slack
        ),
    )
}

fn sci(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn laplacian_trend() -> Verdict {
    let bands = [(3.0, 4.0), (5.0, 6.0), (7.0, 8.0)];
    let f = ClosureRadial::exponential(0.5);
    let run = |patch: &ImmersedPatch| -> hypspec::Result<(Vec<f64>, bool)> {
        let mesh = HyperbolicMesh::polar(patch, Some(2.5), 8.5, 120, 64)?;
        let vertices = band_vertices(&mesh, 3.0, 8.0)?;
        radial_laplacian_error(patch, &mesh, &f, &vertices, None)?.band_trend(&bands)
    };
    let graph = builtin_graphs().remove(0);
    let (g, g_dec) = run(&graph).map_err(fail)?;
    let (t, t_dec) = run(&tilted_cap(2, FRAC_PI_3).map_err(fail)?).map_err(fail)?;
    check(g_dec && !t_dec, format!("{} {}, tilted cap {t:.4?}", graph.name(), sci(&g)))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("window estimate grid", lemma_est_grid),
        ("psi exactness", psi_exactness),
        ("isoperimetric profile", isoperimetric_profile_checks),
        ("conformal curvature", conformal_curvature),
        ("asymptotic minimality decay", epsilon_decay),
        ("tangent cones and delta ratio", tangent_cones),
        ("cone Weyl sequence", cone_weyl),
        ("FEM spectrum bottom", fem_bottom),
        ("candidate family bound", family_check),
        ("radial Laplacian trend", laplacian_trend),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
