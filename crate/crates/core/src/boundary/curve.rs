//! Sampled curves `Γ ⊂ ℝⁿ ≅ {y = 0}` with a distance oracle.

use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::radial::quadrature::{gauss_legendre, pairwise_sum};

/// Chart `t ↦ (γ(t), γ′(t))`.
pub type CurveChart = Arc<dyn Fn(f64) -> (DVector<f64>, DVector<f64>) + Send + Sync>;

const GOLDEN_ITERS: usize = 160;

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search; returns
/// `(argmin, min)`.
pub fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if (b - a).abs() <= 1e-16 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let mut best = (c, fc);
    for cand in [(d, fd), (a, f(a)), (b, f(b))] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// A one-dimensional boundary submanifold, densely sampled, optionally with
/// an analytic chart.
#[derive(Clone)]
pub struct BoundaryCurve {
    ambient: usize,
    interval: (f64, f64),
    params: Vec<f64>,
    samples: Vec<DVector<f64>>,
    tangents: Vec<DVector<f64>>,
    chart: Option<CurveChart>,
    closed: bool,
}

impl std::fmt::Debug for BoundaryCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryCurve")
            .field("ambient", &self.ambient)
            .field("interval", &self.interval)
            .field("samples", &self.samples.len())
            .field("closed", &self.closed)
            .field("analytic", &self.chart.is_some())
            .finish()
    }
}

impl BoundaryCurve {
    /// Samples `count` equally spaced parameters of `chart` on `[a, b]`
    /// (the endpoint `b` is omitted for closed curves, where it repeats `a`).
    pub fn from_chart(
        ambient: usize,
        interval: (f64, f64),
        closed: bool,
        count: usize,
        chart: impl Fn(f64) -> (DVector<f64>, DVector<f64>) + Send + Sync + 'static,
    ) -> Result<Self> {
        let (a, b) = interval;
        if !(b > a) || count < 3 {
            return Err(invalid("curve needs a nonempty interval and at least 3 samples"));
        }
        let chart: CurveChart = Arc::new(chart);
        let denom = if closed { count } else { count - 1 } as f64;
        let params: Vec<f64> = (0..count).map(|i| a + (b - a) * i as f64 / denom).collect();
        let mut samples = Vec::with_capacity(count);
        let mut tangents = Vec::with_capacity(count);
        for &t in &params {
            let (p, d) = chart(t);
            if p.len() != ambient {
                return Err(invalid("curve chart returns points of the wrong dimension"));
            }
            let n = d.norm();
            if !(n > 0.0) {
                return Err(invalid(format!("curve chart has zero velocity at t = {t}")));
            }
            samples.push(p);
            tangents.push(d / n);
        }
        Ok(Self {
            ambient,
            interval,
            params,
            samples,
            tangents,
            chart: Some(chart),
            closed,
        })
    }

    /// A polyline through `points`, parametrized by arclength; tangents by
    /// central differences.
    pub fn from_samples(points: Vec<DVector<f64>>, closed: bool) -> Result<Self> {
        if points.len() < 3 {
            return Err(invalid("curve needs at least 3 samples"));
        }
        let ambient = points[0].len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(invalid("curve samples have inconsistent dimensions"));
        }
        let n = points.len();
        let mut params = vec![0.0; n];
        for i in 1..n {
            let step = (&points[i] - &points[i - 1]).norm();
            if step == 0.0 {
                return Err(invalid(format!("repeated curve sample at index {i}")));
            }
            params[i] = params[i - 1] + step;
        }
        let end = if closed { params[n - 1] + (&points[0] - &points[n - 1]).norm() } else { params[n - 1] };
        let tangents = (0..n)
            .map(|i| {
                let (prev, next) = if closed {
                    ((i + n - 1) % n, (i + 1) % n)
                } else {
                    (i.saturating_sub(1), (i + 1).min(n - 1))
                };
                let d = &points[next] - &points[prev];
                &d / d.norm()
            })
            .collect();
        Ok(Self {
            ambient,
            interval: (0.0, end),
            params,
            samples: points,
            tangents,
            chart: None,
            closed,
        })
    }

    /// Segment `point + s·direction`, `|s| ≤ half_length`.
    pub fn line(point: DVector<f64>, direction: DVector<f64>, half_length: f64, count: usize) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) || point.len() != direction.len() {
            return Err(invalid("line needs a nonzero direction of matching dimension"));
        }
        let dir = direction / n;
        let ambient = point.len();
        Self::from_chart(ambient, (-half_length, half_length), false, count, move |s| {
            (&point + &dir * s, dir.clone())
        })
    }

    /// Circle of the given radius in the plane spanned by the orthonormal
    /// pair `(u, v)` through `center`.
    pub fn circle(center: DVector<f64>, u: DVector<f64>, v: DVector<f64>, radius: f64, count: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(invalid("circle radius must be positive"));
        }
        if (u.norm() - 1.0).abs() > 1e-12 || (v.norm() - 1.0).abs() > 1e-12 || u.dot(&v).abs() > 1e-12 {
            return Err(invalid("circle plane vectors must be orthonormal"));
        }
        let ambient = center.len();
        Self::from_chart(ambient, (0.0, 2.0 * std::f64::consts::PI), true, count, move |t| {
            let (s, c) = t.sin_cos();
            (&center + (&u * c + &v * s) * radius, (&u * (-s) + &v * c) * radius)
        })
    }

    /// Unit circle in `ℝ²`.
    pub fn unit_circle(count: usize) -> Self {
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        Self::circle(DVector::zeros(2), e1, e2, 1.0, count).expect("valid circle")
    }

    /// The `C¹` (not `C²`) graph `t ↦ (t, |t|^{3/2})`, `|t| ≤ half_width`.
    pub fn three_halves_graph(half_width: f64, count: usize) -> Result<Self> {
        Self::from_chart(2, (-half_width, half_width), false, count, |t| {
            let a = t.abs();
            (
                DVector::from_vec(vec![t, a.powf(1.5)]),
                DVector::from_vec(vec![1.0, 1.5 * a.sqrt() * t.signum()]),
            )
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Dimension of the curve (always 1).
    pub fn dim(&self) -> usize {
        1
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn has_chart(&self) -> bool {
        self.chart.is_some()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn tangents(&self) -> &[DVector<f64>] {
        &self.tangents
    }

    /// Largest distance between consecutive samples.
    pub fn resolution(&self) -> f64 {
        let n = self.samples.len();
        let mut worst: f64 = 0.0;
        let last = if self.closed { n } else { n - 1 };
        for i in 0..last {
            worst = worst.max((&self.samples[(i + 1) % n] - &self.samples[i]).norm());
        }
        worst
    }

    fn wrap(&self, t: f64) -> f64 {
        let (a, b) = self.interval;
        if self.closed {
            a + (t - a).rem_euclid(b - a)
        } else {
            t.clamp(a, b)
        }
    }

    /// Point at parameter `t` (chart or polyline interpolation).
    pub fn point_at(&self, t: f64) -> DVector<f64> {
        let t = self.wrap(t);
        if let Some(chart) = &self.chart {
            return chart(t).0;
        }
        let n = self.samples.len();
        let i = self.params.partition_point(|p| *p <= t).saturating_sub(1).min(n - 1);
        let (t0, p0) = (self.params[i], &self.samples[i]);
        let (t1, p1) = if i + 1 < n {
            (self.params[i + 1], &self.samples[i + 1])
        } else if self.closed {
            (self.interval.1, &self.samples[0])
        } else {
            return p0.clone();
        };
        let w = (t - t0) / (t1 - t0);
        p0 * (1.0 - w) + p1 * w
    }

    /// Unit tangent at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> DVector<f64> {
        let t = self.wrap(t);
        if let Some(chart) = &self.chart {
            let d = chart(t).1;
            return &d / d.norm();
        }
        let n = self.samples.len();
        let i = self.params.partition_point(|p| *p <= t).saturating_sub(1).min(n - 1);
        self.tangents[i].clone()
    }

    /// Velocity `γ′(t)` (the unit tangent for polylines, which are
    /// parametrized by arclength).
    pub fn velocity_at(&self, t: f64) -> DVector<f64> {
        match &self.chart {
            Some(chart) => chart(self.wrap(t)).1,
            None => self.tangent_at(t),
        }
    }

    /// Total length: composite Gauss–Legendre on the chart with panels of
    /// arclength about `resolution`, or the polyline length.
    pub fn length(&self, resolution: f64) -> f64 {
        let (a, b) = self.interval;
        match &self.chart {
            Some(chart) => {
                let rough: f64 = self.params.windows(2).map(|w| (chart(w[1]).0 - chart(w[0]).0).norm()).sum::<f64>()
                    + if self.closed { (&self.samples[0] - &self.samples[self.samples.len() - 1]).norm() } else { 0.0 };
                let panels = (rough / resolution).ceil().max(1.0) as usize;
                let h = (b - a) / panels as f64;
                let (x, w) = gauss_legendre(4);
                let sums: Vec<f64> = (0..panels)
                    .map(|p| {
                        let lo = a + h * p as f64;
                        x.iter().zip(&w).map(|(xi, wi)| 0.5 * h * wi * chart(lo + 0.5 * h * (xi + 1.0)).1.norm()).sum()
                    })
                    .collect();
                pairwise_sum(&sums)
            }
            None => b - a,
        }
    }

    /// Parameter interval between the neighbours of sample `i`.
    fn neighbourhood(&self, i: usize) -> (f64, f64) {
        let n = self.samples.len();
        let (a, b) = self.interval;
        let lo = if i > 0 {
            self.params[i - 1]
        } else if self.closed {
            self.params[n - 1] - (b - a)
        } else {
            a
        };
        let hi = if i + 1 < n {
            self.params[i + 1]
        } else if self.closed {
            b
        } else {
            b
        };
        (lo, hi)
    }

    /// Brute-force nearest sample: `(index, distance)`.
    pub fn nearest_sample(&self, q: &DVector<f64>) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, s) in self.samples.iter().enumerate() {
            let d2 = (s - q).norm_squared();
            if d2 < best.1 {
                best = (i, d2);
            }
        }
        (best.0, best.1.sqrt())
    }

    /// Euclidean distance from `q` to the curve: nearest sample, refined by
    /// golden-section search on both neighbouring parameter intervals.
    /// Returns `(distance, parameter of the closest point)`.
    pub fn nearest(&self, q: &DVector<f64>) -> (f64, f64) {
        let (i, d0) = self.nearest_sample(q);
        let mut best = (d0, self.params[i]);
        let ti = self.params[i];
        let (lo, hi) = self.neighbourhood(i);
        let dist2 = |t: f64| (self.point_at(t) - q).norm_squared();
        for (a, b) in [(lo, ti), (ti, hi)] {
            if b > a {
                let (t, d2) = golden_min(dist2, a, b);
                let d = d2.max(0.0).sqrt();
                if d < best.0 {
                    best = (d, self.wrap(t));
                }
            }
        }
        best
    }

    /// Euclidean distance from `q` to the curve.
    pub fn distance(&self, q: &DVector<f64>) -> f64 {
        self.nearest(q).0
    }

    /// Unit normals at parameter `t`: both normals in `ℝ²`, `count` equally
    /// spaced normals around the tangent in `ℝ³`, and `count` seeded random
    /// normals plus the coordinate-derived ones in higher dimensions.
    pub fn normals_at(&self, t: f64, count: usize) -> Vec<DVector<f64>> {
        let tan = self.tangent_at(t);
        match self.ambient {
            1 => Vec::new(),
            2 => {
                let nu = DVector::from_vec(vec![-tan[1], tan[0]]);
                vec![nu.clone(), -nu]
            }
            n => {
                let basis = normal_basis(&tan);
                if n == 3 {
                    let (u, v) = (&basis[0], &basis[1]);
                    (0..count.max(4))
                        .map(|k| {
                            let a = 2.0 * std::f64::consts::PI * k as f64 / count.max(4) as f64;
                            u * a.cos() + v * a.sin()
                        })
                        .collect()
                } else {
                    let mut out: Vec<DVector<f64>> = basis.iter().flat_map(|b| [b.clone(), -b.clone()]).collect();
                    let mut rng = ChaCha8Rng::seed_from_u64(11);
                    for _ in 0..count {
                        let mut v = DVector::zeros(n);
                        for b in &basis {
                            v += b * rng.sample::<f64, _>(StandardNormal);
                        }
                        let norm = v.norm();
                        if norm > 0.0 {
                            out.push(v / norm);
                        }
                    }
                    out
                }
            }
        }
    }
}

/// Orthonormal basis of the orthogonal complement of a unit vector.
fn normal_basis(tan: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = tan.len();
    let mut basis: Vec<DVector<f64>> = vec![tan.clone()];
    let mut out = Vec::new();
    for k in 0..n {
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 && out.len() < n - 1 {
            let v = v / norm;
            basis.push(v.clone());
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_oracle() {
        let c = BoundaryCurve::unit_circle(64);
        for q in [[2.0, 0.3], [0.2, -0.1], [-0.7, 0.7]] {
            let q = DVector::from_vec(q.to_vec());
            assert!((c.distance(&q) - (q.norm() - 1.0).abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn polyline_interpolates() {
        let pts = (0..5).map(|i| DVector::from_vec(vec![i as f64, 0.0])).collect();
        let c = BoundaryCurve::from_samples(pts, false).unwrap();
        assert_eq!(c.point_at(2.5), DVector::from_vec(vec![2.5, 0.0]));
        assert!((c.distance(&DVector::from_vec(vec![1.3, 0.4])) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn tangents_are_unit() {
        let c = BoundaryCurve::three_halves_graph(1.0, 101).unwrap();
        for t in c.tangents() {
            assert!((t.norm() - 1.0).abs() < 1e-12);
        }
    }
}
