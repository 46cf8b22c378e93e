//! Multi-scale estimation of the tangent cone `Tan(Σ, (x, 0))` at a
//! boundary point and comparison with the half-space `T_xΓ × [0, ∞)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::boundary::curve::BoundaryCurve;
use crate::boundary::surface::PointCloud;
use crate::error::{invalid, Error, Result};

/// Angular tolerance for clustering and matching directions, in degrees.
pub const CLUSTER_TOL_DEG: f64 = 1.0;
/// A direction must appear at this many consecutive scales.
pub const VOTING_WINDOW: usize = 3;
/// Minimum number of samples in the smallest-scale shell.
pub const MIN_SHELL_SAMPLES: usize = 16;
/// Model directions sampled over the half-plane `T_xΓ × [0, ∞)`.
const MODEL_DIRECTIONS: usize = 181;

/// Angle between unit vectors, in degrees.
fn angle_deg(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let cross = (a - b * a.dot(b)).norm();
    cross.atan2(a.dot(b)).to_degrees()
}

/// A limiting direction with the samples that generate it.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeDirection {
    pub direction: DVector<f64>,
    /// `(scale, sample)` pairs, one per supporting scale; each sample lies
    /// within `scale` of the base point and its direction within 1° of
    /// `direction`.
    pub witnesses: Vec<(f64, DVector<f64>)>,
}

/// Measurements on one shell `s/2 ≤ |p − base| ≤ s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRecord {
    pub scale: f64,
    pub samples: usize,
    pub clusters: usize,
    /// Largest angle from a cluster direction to `T_xΓ × [0, ∞)`.
    pub containment_defect_deg: f64,
    /// Largest angle from a model direction to the nearest sample direction.
    pub coverage_defect_deg: f64,
    pub opening_angle_deg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentConeEstimate {
    /// Base point `(x, 0)` in `ℝ^{n+1}`.
    pub base: DVector<f64>,
    /// Directions surviving the scale-consistency vote at the smallest scale.
    pub directions: Vec<ConeDirection>,
    pub scales: Vec<ScaleRecord>,
    /// Fitted tangent direction of the edge of the cone.
    pub fitted_tangent: DVector<f64>,
    /// Fitted inward ray `ℓ⁺` orthogonal to the fitted tangent.
    pub inward_ray: DVector<f64>,
    /// Angle between the inward ray and `{y = 0}`, in degrees.
    pub opening_angle_deg: f64,
    /// Unit tangent of `Γ` at the base point.
    pub model_tangent: DVector<f64>,
    pub containment_defect_deg: f64,
    pub coverage_defect_deg: f64,
}

impl TangentConeEstimate {
    /// Whether the estimate equals `T_xΓ × [0, ∞)` within 1° both ways.
    pub fn matches_half_space(&self) -> bool {
        self.containment_defect_deg < CLUSTER_TOL_DEG && self.coverage_defect_deg < CLUSTER_TOL_DEG
    }
}

/// Cone model `T_xΓ × [0, ∞)` for a curve tangent `t` in `ℝ^{n+1}`.
struct HalfPlaneModel {
    tangent: DVector<f64>,
    up: DVector<f64>,
}

impl HalfPlaneModel {
    fn new(t: &DVector<f64>) -> Self {
        let n = t.len();
        let tangent = DVector::from_fn(n + 1, |i, _| if i < n { t[i] } else { 0.0 });
        let mut up = DVector::zeros(n + 1);
        up[n] = 1.0;
        Self { tangent, up }
    }

    /// Angle from `d` to the closed convex cone `span(t) + [0, ∞)·e_y`.
    fn distance_deg(&self, d: &DVector<f64>) -> f64 {
        let proj = &self.tangent * self.tangent.dot(d) + &self.up * self.up.dot(d).max(0.0);
        let norm = proj.norm();
        if norm == 0.0 {
            return 90.0;
        }
        (d - &proj).norm().atan2(norm).to_degrees()
    }

    fn directions(&self) -> Vec<DVector<f64>> {
        (0..MODEL_DIRECTIONS)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / (MODEL_DIRECTIONS - 1) as f64;
                &self.tangent * a.cos() + &self.up * a.sin()
            })
            .collect()
    }

    fn coverage_deg(&self, dirs: &[DVector<f64>]) -> f64 {
        self.directions()
            .iter()
            .map(|m| dirs.iter().map(|d| angle_deg(m, d)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
}

/// Greedy clustering: each unassigned direction seeds a cluster that takes
/// every remaining direction within the tolerance.
fn cluster(dirs: &[DVector<f64>]) -> Vec<usize> {
    let cos_tol = CLUSTER_TOL_DEG.to_radians().cos();
    let mut assigned = vec![false; dirs.len()];
    let mut seeds = Vec::new();
    for i in 0..dirs.len() {
        if assigned[i] {
            continue;
        }
        seeds.push(i);
        for j in i..dirs.len() {
            if !assigned[j] && dirs[i].dot(&dirs[j]) >= cos_tol {
                assigned[j] = true;
            }
        }
    }
    seeds
}

/// Fitted edge tangent and inward ray of a set of cone directions in
/// `ℝ^{n+1}`: the edge is the principal axis of the directions lying within
/// 1° of `{y = 0}` (or the lowest 5 % if there are none), and the inward
/// ray is the mean of the components orthogonal to it.
fn fit_half_plane(dirs: &[DVector<f64>]) -> (DVector<f64>, DVector<f64>, f64) {
    let dim = dirs[0].len();
    let n = dim - 1;
    let elevation = |d: &DVector<f64>| d[n].clamp(-1.0, 1.0).asin().to_degrees();
    let mut edge: Vec<&DVector<f64>> = dirs.iter().filter(|d| elevation(d).abs() < CLUSTER_TOL_DEG).collect();
    if edge.is_empty() {
        let mut sorted: Vec<&DVector<f64>> = dirs.iter().collect();
        sorted.sort_by(|a, b| elevation(a).abs().total_cmp(&elevation(b).abs()));
        edge = sorted[..(sorted.len() / 20).max(1)].to_vec();
    }
    let mut scatter = DMatrix::zeros(dim, dim);
    for d in &edge {
        scatter += *d * d.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let top = eig.eigenvalues.imax();
    let tangent = eig.eigenvectors.column(top).into_owned();
    let mut mean = DVector::zeros(dim);
    for d in dirs {
        mean += d - &tangent * tangent.dot(d);
    }
    let norm = mean.norm();
    let inward = if norm > 0.0 { mean / norm } else { mean };
    let opening = inward[n].clamp(-1.0, 1.0).asin().to_degrees();
    (tangent, inward, opening)
}

struct Shell {
    points: Vec<DVector<f64>>,
    dirs: Vec<DVector<f64>>,
    seeds: Vec<usize>,
}

/// Estimates the tangent cone of the sampled surface at the boundary point
/// `(base, 0)` from shells `s/2 ≤ |p − base| ≤ s`, one per scale.
pub fn tangent_cone_estimate(
    cloud: &PointCloud,
    gamma: &BoundaryCurve,
    base: &DVector<f64>,
    scales: &[f64],
) -> Result<TangentConeEstimate> {
    let n = base.len();
    if n != gamma.ambient() || cloud.horizontal_dim() != n {
        return Err(invalid("cloud, curve and base point must share the boundary dimension"));
    }
    if scales.len() < VOTING_WINDOW {
        return Err(invalid(format!("need at least {VOTING_WINDOW} scales")));
    }
    if scales.iter().any(|s| !(*s > 0.0)) || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("scales must be positive and strictly decreasing"));
    }
    if scales[0] / scales[scales.len() - 1] < 1e3 * (1.0 - 1e-12) {
        return Err(invalid("scales must span at least three decades"));
    }
    let (dist, t) = gamma.nearest(base);
    if dist > 1e-8 {
        return Err(invalid(format!("base point is at distance {dist:.3e} from the curve")));
    }
    let model = HalfPlaneModel::new(&gamma.tangent_at(t));
    let base_full = DVector::from_fn(n + 1, |i, _| if i < n { base[i] } else { 0.0 });

    let shells: Vec<Shell> = scales
        .par_iter()
        .map(|&s| {
            let points: Vec<DVector<f64>> = cloud
                .points()
                .iter()
                .filter(|p| {
                    let r = (*p - &base_full).norm();
                    r >= 0.5 * s && r <= s
                })
                .cloned()
                .collect();
            let dirs: Vec<DVector<f64>> = points.iter().map(|p| (p - &base_full).normalize()).collect();
            let seeds = cluster(&dirs);
            Shell { points, dirs, seeds }
        })
        .collect();
    let smallest = shells.last().expect("at least three scales");
    if smallest.points.len() < MIN_SHELL_SAMPLES {
        return Err(Error::Resolution(format!(
            "only {} samples within the smallest scale {:e} (need {MIN_SHELL_SAMPLES})",
            smallest.points.len(),
            scales[scales.len() - 1]
        )));
    }

    let records: Vec<ScaleRecord> = shells
        .iter()
        .zip(scales)
        .map(|(shell, &scale)| {
            if shell.dirs.is_empty() {
                return ScaleRecord {
                    scale,
                    samples: 0,
                    clusters: 0,
                    containment_defect_deg: f64::NAN,
                    coverage_defect_deg: f64::NAN,
                    opening_angle_deg: f64::NAN,
                };
            }
            let centres: Vec<DVector<f64>> = shell.seeds.iter().map(|&i| shell.dirs[i].clone()).collect();
            ScaleRecord {
                scale,
                samples: shell.points.len(),
                clusters: centres.len(),
                containment_defect_deg: centres.iter().map(|d| model.distance_deg(d)).fold(0.0, f64::max),
                coverage_defect_deg: model.coverage_deg(&shell.dirs),
                opening_angle_deg: fit_half_plane(&centres).2,
            }
        })
        .collect();

    // Vote: keep smallest-scale clusters seen at the previous two scales too.
    let cos_tol = CLUSTER_TOL_DEG.to_radians().cos();
    let last = shells.len() - 1;
    let window = &shells[last + 1 - VOTING_WINDOW..];
    let mut directions = Vec::new();
    let mut members = Vec::new();
    for &seed in &smallest.seeds {
        let d = &smallest.dirs[seed];
        let mut witnesses = Vec::with_capacity(VOTING_WINDOW);
        for (shell, &scale) in window.iter().zip(&scales[last + 1 - VOTING_WINDOW..]) {
            let best = shell
                .dirs
                .iter()
                .enumerate()
                .map(|(i, e)| (i, d.dot(e)))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, c)) if c >= cos_tol => witnesses.push((scale, shell.points[i].clone())),
                _ => break,
            }
        }
        if witnesses.len() == VOTING_WINDOW {
            members.extend(
                smallest
                    .dirs
                    .iter()
                    .filter(|e| d.dot(e) >= cos_tol)
                    .cloned(),
            );
            directions.push(ConeDirection {
                direction: d.clone(),
                witnesses,
            });
        }
    }
    if directions.is_empty() {
        return Err(Error::Resolution(
            "no direction is consistent across three consecutive scales".into(),
        ));
    }
    let voted: Vec<DVector<f64>> = directions.iter().map(|d| d.direction.clone()).collect();
    let (fitted_tangent, inward_ray, opening_angle_deg) = fit_half_plane(&voted);
    Ok(TangentConeEstimate {
        base: base_full,
        containment_defect_deg: voted.iter().map(|d| model.distance_deg(d)).fold(0.0, f64::max),
        coverage_defect_deg: model.coverage_deg(&members),
        directions,
        scales: records,
        fitted_tangent,
        inward_ray,
        opening_angle_deg,
        model_tangent: model.tangent,
    })
}
