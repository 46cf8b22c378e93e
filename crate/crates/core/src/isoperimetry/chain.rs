//! The lower bound `h(Σ ∩ (B_R \ B_r)) ≥ h(B_R) − ε_r` tested on candidate
//! domains, and its chain to the bottom of the Dirichlet spectrum through
//! Cheeger's inequality `λ₀ ≥ h²/4`.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::isoperimetry::domain::{domain_ratio_with, Candidate, FacetTable, IsoperimetricSample};
use crate::mesh::{cheeger_side_bound, discretization_slack, HyperbolicMesh, SpectrumReport};
use crate::radial::ball_cheeger;
use crate::submanifold::EpsilonReport;

/// Relative mesh slack on the candidate-ratio bound.
pub const RATIO_SLACK: f64 = 0.02;
/// Vertices may sit this far (relatively) outside `[r, R]`.
const RADIUS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremTcReport {
    pub m: usize,
    pub inner: f64,
    pub outer: f64,
    pub epsilon: f64,
    /// `1/f′(R)`, the isoperimetric ratio of the ball `B_R`.
    pub ball_ratio: f64,
    /// `1/f′(R) − ε_r`, a lower bound for every candidate ratio.
    pub bound: f64,
    /// `RATIO_SLACK · |bound|`.
    pub slack: f64,
    /// In candidate order.
    pub samples: Vec<IsoperimetricSample>,
    /// Smallest observed ratio, an upper bound for the Cheeger constant of
    /// the annulus.
    pub min_ratio: f64,
    pub argmin: String,
    /// Candidates below `bound − slack`.
    pub failures: Vec<String>,
    /// No candidate contradicts the bound. Candidates only bound the
    /// Cheeger constant from above, so this never certifies the infimum.
    pub pass: bool,
}

/// Checks `Area(∂Ω)/Vol(Ω) ≥ 1/f′(R) − ε_r − slack` for every candidate.
/// The mesh must cover `Σ ∩ (B_R \ B_r)` for `(r, R) = (inner, outer)`.
pub fn check_theorem_tc(
    mesh: &HyperbolicMesh,
    candidates: &[Candidate],
    inner: f64,
    outer: f64,
    epsilon: f64,
) -> Result<TheoremTcReport> {
    if candidates.is_empty() {
        return Err(invalid("candidate family is empty"));
    }
    if !(inner >= 0.0 && outer > inner) {
        return Err(invalid(format!("annulus radii must satisfy 0 <= r < R, got ({inner}, {outer})")));
    }
    if !(epsilon >= 0.0) {
        return Err(invalid(format!("epsilon must be a nonnegative number, got {epsilon}")));
    }
    let radii = mesh.vertex_radii()?;
    if let Some(v) = (0..radii.len())
        .find(|&v| radii[v] < inner * (1.0 - RADIUS_TOL) || radii[v] > outer * (1.0 + RADIUS_TOL))
    {
        return Err(invalid(format!(
            "vertex {v} at distance {} lies outside the annulus ({inner}, {outer})",
            radii[v]
        )));
    }
    let m = mesh.dim();
    let ball_ratio = ball_cheeger(m, outer)?;
    let bound = ball_ratio - epsilon;
    let slack = RATIO_SLACK * bound.abs();
    let facets = FacetTable::new(mesh);
    let samples = candidates
        .par_iter()
        .map(|c| domain_ratio_with(mesh, &facets, c))
        .collect::<Result<Vec<_>>>()?;
    // Deterministic min-reduction in candidate order.
    let (mut min_ratio, mut argmin) = (f64::INFINITY, String::new());
    for s in &samples {
        if s.ratio < min_ratio {
            min_ratio = s.ratio;
            argmin = s.label.clone();
        }
    }
    let failures: Vec<String> = samples.iter().filter(|s| s.ratio < bound - slack).map(|s| s.label.clone()).collect();
    Ok(TheoremTcReport {
        m,
        inner,
        outer,
        epsilon,
        ball_ratio,
        bound,
        slack,
        pass: failures.is_empty(),
        samples,
        min_ratio,
        argmin,
        failures,
    })
}

/// `λ₀` of a meshed annulus `Σ ∩ (B_R \ B_r)` with its discretization slack.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusSpectrum {
    pub m: usize,
    pub inner: f64,
    pub outer: f64,
    pub lambda0: f64,
    pub slack: f64,
}

impl AnnulusSpectrum {
    /// From reports on a mesh and its refinement; `λ₀` is the fine value.
    pub fn from_reports(m: usize, inner: f64, outer: f64, coarse: &SpectrumReport, fine: &SpectrumReport) -> Self {
        Self {
            m,
            inner,
            outer,
            lambda0: fine.lambda0(),
            slack: discretization_slack(coarse.lambda0(), fine.lambda0()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerLink {
    pub inner: f64,
    pub outer: f64,
    pub lambda0: f64,
    pub slack: f64,
    pub epsilon: f64,
    /// `¼ max(1/f′(R) − ε_r, 0)²`.
    pub ball_bound: f64,
    /// `¼ max(m − 1 − ε_r, 0)²`.
    pub bound: f64,
    /// `λ₀ ≥ max(ball_bound, bound) − slack`.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerChain {
    pub m: usize,
    /// In the input order, which must have increasing `r`.
    pub links: Vec<CheegerLink>,
    /// `¼(m − 1)²`.
    pub essential_bound: f64,
    /// `bound` at the largest `r`.
    pub limit_bound: f64,
    /// Bounds do not decrease as `r` grows.
    pub bounds_increasing: bool,
    pub pass: bool,
}

/// Chains `λ₀(annulus) ≥ ¼h² ≥ ¼(h(B_R) − ε_r)² ≥ ¼(m − 1 − ε_r)²` for each
/// annulus against the `ε_r` measured at its inner radius.
pub fn cheeger_to_lambda(pairs: &[(AnnulusSpectrum, EpsilonReport)]) -> Result<CheegerChain> {
    let first = pairs.first().ok_or_else(|| invalid("no annulus spectra given"))?;
    let m = first.0.m;
    let mut links = Vec::with_capacity(pairs.len());
    for (annulus, eps) in pairs {
        if annulus.m != m {
            return Err(invalid("annulus spectra have different dimensions"));
        }
        if (eps.r - annulus.inner).abs() > 1e-12 * annulus.inner.max(1.0) {
            return Err(invalid(format!(
                "epsilon was measured at r = {} but the annulus starts at r = {}",
                eps.r, annulus.inner
            )));
        }
        if !eps.value.is_finite() {
            return Err(invalid(format!("epsilon at r = {} has no samples", eps.r)));
        }
        let h = (ball_cheeger(m, annulus.outer)? - eps.value).max(0.0);
        let ball_bound = 0.25 * h * h;
        let bound = cheeger_side_bound(m, eps.value);
        links.push(CheegerLink {
            inner: annulus.inner,
            outer: annulus.outer,
            lambda0: annulus.lambda0,
            slack: annulus.slack,
            epsilon: eps.value,
            ball_bound,
            bound,
            pass: annulus.lambda0 >= ball_bound.max(bound) - annulus.slack,
        });
    }
    if links.windows(2).any(|w| !(w[1].inner > w[0].inner)) {
        return Err(invalid("annuli must be ordered by increasing inner radius"));
    }
    let bounds_increasing = links.windows(2).all(|w| w[1].bound >= w[0].bound);
    let a = (m as f64 - 1.0) / 2.0;
    Ok(CheegerChain {
        m,
        essential_bound: a * a,
        limit_bound: links.last().expect("nonempty").bound,
        bounds_increasing,
        pass: links.iter().all(|l| l.pass),
        links,
    })
}
