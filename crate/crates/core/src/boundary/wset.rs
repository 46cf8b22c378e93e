//! The exclusion set `W`: the slab `ℝⁿ × (0, ρ_Γ)` minus the half-balls
//! `B_{min(2ρ_Γ, d(x))}(x, 0)` centred on the boundary plane, and the
//! height-ratio profile `d(x_i)/y_i` along sequences inside it.

use nalgebra::DVector;

use crate::boundary::curve::BoundaryCurve;
use crate::error::{invalid, Error, Result};
use crate::hyperbolic::HalfSpacePoint;

/// Grid spacing of candidate ball centres, as a fraction of `ρ_Γ`.
const GRID_FRACTION: f64 = 1.0 / 20.0;
/// Coarser grid used in `ℝⁿ` for `n ≥ 3`.
const GRID_FRACTION_3D: f64 = 1.0 / 8.0;
/// Candidate centres along the line through the nearest point of `Γ`.
const LINE_CENTRES: usize = 161;

/// Relative margin by which `q` must be inside an open excluded ball; points
/// on a ball's boundary sphere (such as totally geodesic hemispheres, which
/// are envelopes of these balls) count as outside.
const BALL_MARGIN: f64 = 1e-12;

/// Whether the ball centred at `(x, 0)` excludes `q`.
fn excludes(gamma: &BoundaryCurve, x: &DVector<f64>, q: &HalfSpacePoint, rho: f64) -> bool {
    let radius = gamma.distance(x).min(2.0 * rho);
    (x - &q.x).norm_squared() + q.y * q.y < radius * radius * (1.0 - BALL_MARGIN)
}

/// Whether `q ∈ W`. Centres are scanned along the line from the nearest
/// point of `Γ` through `x(q)`, then on a grid around `x(q)`; centres that
/// cannot exclude `q` even with the Lipschitz bound `d(x′) ≤ d(x) + |x − x′|`
/// are skipped.
pub fn membership_w(gamma: &BoundaryCurve, q: &HalfSpacePoint, rho_gamma: f64) -> bool {
    let rho = rho_gamma;
    if !(q.y > 0.0) || q.y >= rho || q.x.len() != gamma.ambient() {
        return false;
    }
    let (d0, t0) = gamma.nearest(&q.x);
    if d0 * d0 > q.y * q.y && d0.min(2.0 * rho) > q.y {
        // The centre x(q) itself already excludes q when its ball is big enough.
        if excludes(gamma, &q.x, q, rho) {
            return false;
        }
    }
    let foot = gamma.point_at(t0);
    let away = &q.x - &foot;
    if away.norm() > 0.0 {
        let dir = &away / away.norm();
        for k in 0..LINE_CENTRES {
            let s = -2.0 * rho + 4.0 * rho * k as f64 / (LINE_CENTRES - 1) as f64;
            if excludes(gamma, &(&q.x + &dir * s), q, rho) {
                return false;
            }
        }
    }
    let n = q.x.len();
    let h = rho * if n >= 3 { GRID_FRACTION_3D } else { GRID_FRACTION };
    let steps = (2.0 * rho / h).ceil() as i64;
    let mut index = vec![-steps; n];
    loop {
        let offset = DVector::from_iterator(n, index.iter().map(|&i| i as f64 * h));
        let dist = offset.norm();
        if dist < 2.0 * rho {
            let bound = (d0 + dist).min(2.0 * rho);
            if bound * bound > dist * dist + q.y * q.y && excludes(gamma, &(&q.x + &offset), q, rho) {
                return false;
            }
        }
        let mut axis = 0;
        loop {
            if axis == n {
                return true;
            }
            index[axis] += 1;
            if index[axis] <= steps {
                break;
            }
            index[axis] = -steps;
            axis += 1;
        }
    }
}

/// The ratio sequence `(y_i, d(x_i)/y_i)` with a decay verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioProfile {
    pub rows: Vec<(f64, f64)>,
    /// Median ratio over the first quarter of the sequence.
    pub first_quartile_median: f64,
    /// Median ratio over the last quarter of the sequence.
    pub last_quartile_median: f64,
}

impl RatioProfile {
    /// True when the last-quarter median is below the first-quarter median,
    /// or both vanish.
    pub fn decays(&self) -> bool {
        self.last_quartile_median < self.first_quartile_median
            || (self.last_quartile_median == 0.0 && self.first_quartile_median == 0.0)
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ratios `d(x_i)/y_i` for points sorted by decreasing height. When
/// `rho_gamma` is given, every point must lie in `W`.
pub fn c01_ratio_profile(
    points: &[HalfSpacePoint],
    gamma: &BoundaryCurve,
    rho_gamma: Option<f64>,
) -> Result<RatioProfile> {
    if points.len() < 4 {
        return Err(invalid("ratio profile needs at least 4 points"));
    }
    if points.windows(2).any(|w| w[1].y > w[0].y) {
        return Err(invalid("points must be sorted by decreasing height"));
    }
    let mut rows = Vec::with_capacity(points.len());
    for (i, q) in points.iter().enumerate() {
        if q.x.len() != gamma.ambient() {
            return Err(invalid("point and curve live in different dimensions"));
        }
        if let Some(rho) = rho_gamma {
            if !membership_w(gamma, q, rho) {
                return Err(Error::Precondition(format!(
                    "point {i} (x = {:?}, y = {:e}) lies outside W",
                    q.x.as_slice(),
                    q.y
                )));
            }
        }
        rows.push((q.y, gamma.distance(&q.x) / q.y));
    }
    let quarter = (rows.len() / 4).max(1);
    let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(RatioProfile {
        first_quartile_median: median(&ratios[..quarter]),
        last_quartile_median: median(&ratios[ratios.len() - quarter..]),
        rows,
    })
}
