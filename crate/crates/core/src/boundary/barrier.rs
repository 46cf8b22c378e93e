//! Emptiness of `Σ ∩ B_r(x, 0)` for boundary points `x` away from `Γ`.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::boundary::curve::BoundaryCurve;
use crate::boundary::surface::PointCloud;
use crate::error::{invalid, Result};

/// Relative margin below `dist(x, Γ)` for the emptiness claim to apply.
pub const BARRIER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BarrierReport {
    /// True when no sample lies in the open half-ball.
    pub empty: bool,
    /// Whether `r < dist(x, Γ) − tol`, the regime where minimal
    /// submanifolds must miss the ball.
    pub claim_applies: bool,
    pub dist_to_gamma: f64,
    pub r: f64,
    pub samples_checked: usize,
    /// Samples inside the half-ball.
    pub violations: Vec<DVector<f64>>,
}

/// Tests every sample of `cloud` against the Euclidean half-ball of radius
/// `r` centred at the boundary point `(x, 0)`.
pub fn barrier_check(cloud: &PointCloud, gamma: &BoundaryCurve, x: &DVector<f64>, r: f64) -> Result<BarrierReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("barrier radius must be positive, got {r}")));
    }
    let n = x.len();
    if n != gamma.ambient() || (!cloud.is_empty() && cloud.horizontal_dim() != n) {
        return Err(invalid("cloud, curve and centre must share the boundary dimension"));
    }
    let dist = gamma.distance(x);
    let violations: Vec<DVector<f64>> = cloud
        .points()
        .par_iter()
        .filter(|p| {
            let h = p.rows(0, n) - x;
            p[n] > 0.0 && h.norm_squared() + p[n] * p[n] < r * r
        })
        .cloned()
        .collect();
    Ok(BarrierReport {
        empty: violations.is_empty(),
        claim_applies: r < dist - BARRIER_TOL * dist.max(1.0),
        dist_to_gamma: dist,
        r,
        samples_checked: cloud.len(),
        violations,
    })
}
