//! The normal-offset distance ratio `δ(p, r)/r`, with
//! `δ(p, r) = inf_ν dist(p + rν, Γ)` over unit normals `ν` at `p`.

use nalgebra::DVector;

use crate::boundary::curve::BoundaryCurve;
use crate::error::{invalid, Result};

/// Normal directions sampled around a curve in `ℝ³` and beyond.
pub const NORMAL_GRID: usize = 72;

/// Largest distance from `p` to the curve still accepted as "on the curve".
const ON_CURVE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaReport {
    pub r: f64,
    /// `δ(p, r)/r`, in `(0, 1]`.
    pub ratio: f64,
    /// The minimizing normal.
    pub normal: DVector<f64>,
    /// Set when the curve has no analytic chart and its sample spacing
    /// exceeds `r/2`, so the distance oracle may overestimate.
    pub resolution_warning: Option<String>,
}

/// `δ(p, r)/r` at the curve point with chart parameter `t`.
pub fn delta_ratio_at(gamma: &BoundaryCurve, t: f64, r: f64) -> Result<DeltaReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("offset radius r must be positive, got {r}")));
    }
    let p = gamma.point_at(t);
    let mut best: Option<(f64, DVector<f64>)> = None;
    for nu in gamma.normals_at(t, NORMAL_GRID) {
        let q = &p + &nu * r;
        // p itself is a point of Γ, so the distance never exceeds r.
        let d = gamma.distance(&q).min(r);
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, nu));
        }
    }
    let (delta, normal) = best.ok_or_else(|| invalid("curve has no normal directions"))?;
    let resolution = gamma.resolution();
    let resolution_warning = (!gamma.has_chart() && resolution > 0.5 * r).then(|| {
        format!("sample spacing {resolution:.3e} exceeds r/2 = {:.3e}; distances may be overestimated", 0.5 * r)
    });
    Ok(DeltaReport {
        r,
        ratio: delta / r,
        normal,
        resolution_warning,
    })
}

/// `δ(p, r)/r` for a point `p` on the curve.
pub fn delta_ratio(gamma: &BoundaryCurve, p: &DVector<f64>, r: f64) -> Result<DeltaReport> {
    if p.len() != gamma.ambient() {
        return Err(invalid("point and curve live in different dimensions"));
    }
    let (d, t) = gamma.nearest(p);
    if d > ON_CURVE_TOL {
        return Err(invalid(format!("point is at distance {d:.3e} from the curve")));
    }
    delta_ratio_at(gamma, t, r)
}

/// Required margin above 1/2 when selecting `ρ_Γ`.
pub const RHO_MARGIN: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct RhoGamma {
    /// Largest tested `r` with `min_p δ(p, r)/r ≥ (1 + margin)/2`.
    pub critical_r: f64,
    /// `ρ_Γ = critical_r / 2`, so the ratio exceeds 1/2 for all `r < 2ρ_Γ`.
    pub rho: f64,
    /// Sampled minimum ratio at `critical_r`.
    pub min_ratio: f64,
}

/// Minimum of `δ(p, r)/r` over (a subsample of) the curve samples.
fn min_ratio(gamma: &BoundaryCurve, r: f64, stride: usize) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for &t in gamma.params().iter().step_by(stride) {
        worst = worst.min(delta_ratio_at(gamma, t, r)?.ratio);
    }
    Ok(worst)
}

/// Selects `ρ_Γ` by bisection on `r` until the sampled minimum of
/// `δ(p, r)/r` over the curve exceeds 1/2 with a 10 % margin.
pub fn rho_gamma(gamma: &BoundaryCurve) -> Result<RhoGamma> {
    let samples = gamma.samples();
    let stride = (samples.len() / 64).max(1);
    let diameter = samples
        .iter()
        .flat_map(|a| samples.iter().step_by(stride).map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let target = 0.5 * (1.0 + RHO_MARGIN);
    let mut hi = diameter.max(gamma.resolution());
    if min_ratio(gamma, hi, stride)? >= target {
        return Ok(RhoGamma {
            critical_r: hi,
            rho: 0.5 * hi,
            min_ratio: min_ratio(gamma, hi, stride)?,
        });
    }
    // Halve until the ratio recovers; fails for curves with corners.
    let floor = 1e-9 * hi;
    let mut lo = hi;
    while min_ratio(gamma, lo, stride)? < target {
        hi = lo;
        lo *= 0.5;
        if lo < floor {
            return Err(invalid("no radius gives delta ratio above 1/2 (curve is not C1)"));
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if min_ratio(gamma, mid, stride)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RhoGamma {
        critical_r: lo,
        rho: 0.5 * lo,
        min_ratio: min_ratio(gamma, lo, stride)?,
    })
}
