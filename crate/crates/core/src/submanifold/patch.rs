//! Parametrized pieces of submanifolds of the ball, with derivatives up to
//! order two, and the built-in patch library.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::hyperbolic::BallPoint;

/// Chart value and parameter derivatives at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartJet {
    pub point: DVector<f64>,
    /// `(n+1) × m`, column `i` is `∂X/∂u_i`.
    pub first: DMatrix<f64>,
    /// `∂²X/∂u_i∂u_j` stored at index `i·m + j`.
    pub second: Vec<DVector<f64>>,
}

impl ChartJet {
    pub fn second_at(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.second[i * self.first.ncols() + j]
    }
}

pub type ChartFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
pub type JetFn = Arc<dyn Fn(&[f64]) -> ChartJet + Send + Sync>;

/// Source of chart derivatives.
#[derive(Clone)]
pub enum DerivativeProvider {
    Analytic(JetFn),
    /// Central differences with the given first-derivative step; second
    /// derivatives use ten times the step. Richardson extrapolation is applied
    /// when the `h` and `2h` first differences disagree.
    FiniteDifference { step: f64 },
}

impl std::fmt::Debug for DerivativeProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DerivativeProvider::Analytic(_) => write!(f, "Analytic"),
            DerivativeProvider::FiniteDifference { step } => write!(f, "FiniteDifference({step})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    C1,
    C2,
}

/// Parameter domain of a chart.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamDomain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Open disk (ball) in parameter space.
    Disk { center: Vec<f64>, radius: f64 },
}

impl ParamDomain {
    pub fn dim(&self) -> usize {
        match self {
            ParamDomain::Box { lo, .. } => lo.len(),
            ParamDomain::Disk { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        match self {
            ParamDomain::Box { lo, hi } => u.iter().zip(lo.iter().zip(hi)).all(|(x, (a, b))| x >= a && x <= b),
            ParamDomain::Disk { center, radius } => {
                let d2: f64 = u.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
                d2 < radius * radius
            }
        }
    }
}

/// Default first-derivative step for numerically differentiated charts.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// An immersed patch `X: U ⊂ ℝ^m → 𝔹^{n+1}`.
#[derive(Clone)]
pub struct ImmersedPatch {
    name: String,
    dim: usize,
    ambient_dim: usize,
    domain: ParamDomain,
    chart: ChartFn,
    derivatives: DerivativeProvider,
    smoothness: Smoothness,
}

impl std::fmt::Debug for ImmersedPatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImmersedPatch")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("domain", &self.domain)
            .field("derivatives", &self.derivatives)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl ImmersedPatch {
    /// A patch differentiated numerically with the default step.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        ambient_dim: usize,
        domain: ParamDomain,
        chart: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim < 1 || ambient_dim <= dim {
            return Err(invalid(format!(
                "patch dimensions must satisfy 1 <= m < n+1, got m = {dim}, n+1 = {ambient_dim}"
            )));
        }
        if domain.dim() != dim {
            return Err(invalid("parameter domain dimension differs from patch dimension"));
        }
        Ok(Self {
            name: name.into(),
            dim,
            ambient_dim,
            domain,
            chart: Arc::new(chart),
            derivatives: DerivativeProvider::FiniteDifference { step: DEFAULT_FD_STEP },
            smoothness: Smoothness::C2,
        })
    }

    pub fn with_analytic(mut self, jet: impl Fn(&[f64]) -> ChartJet + Send + Sync + 'static) -> Self {
        self.derivatives = DerivativeProvider::Analytic(Arc::new(jet));
        self
    }

    /// Drops analytic derivatives in favour of finite differences with `step`.
    pub fn with_finite_differences(mut self, step: f64) -> Self {
        self.derivatives = DerivativeProvider::FiniteDifference { step };
        self
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        matches!(self.derivatives, DerivativeProvider::Analytic(_))
    }

    /// Chart value (raw coordinates).
    pub fn point(&self, u: &[f64]) -> DVector<f64> {
        (self.chart)(u)
    }

    pub fn ball_point(&self, u: &[f64]) -> Result<BallPoint> {
        BallPoint::new(self.point(u))
    }

    fn check_param(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(invalid(format!("parameter has length {}, expected {}", u.len(), self.dim)));
        }
        Ok(())
    }

    /// Chart value with first and second derivatives.
    pub fn jet(&self, u: &[f64]) -> Result<ChartJet> {
        self.check_param(u)?;
        match &self.derivatives {
            DerivativeProvider::Analytic(f) => Ok(f(u)),
            DerivativeProvider::FiniteDifference { step } => Ok(self.fd_jet(u, *step)),
        }
    }

    fn shifted(&self, u: &[f64], moves: &[(usize, f64)]) -> DVector<f64> {
        let mut v = u.to_vec();
        for &(i, h) in moves {
            v[i] += h;
        }
        (self.chart)(&v)
    }

    fn fd_jet(&self, u: &[f64], step: f64) -> ChartJet {
        let m = self.dim;
        let point = (self.chart)(u);
        let mut first = DMatrix::zeros(self.ambient_dim, m);
        for i in 0..m {
            let d_h = (self.shifted(u, &[(i, step)]) - self.shifted(u, &[(i, -step)])) / (2.0 * step);
            let d_2h = (self.shifted(u, &[(i, 2.0 * step)]) - self.shifted(u, &[(i, -2.0 * step)])) / (4.0 * step);
            let scale = d_h.norm().max(1.0);
            let col = if (&d_h - &d_2h).norm() > 1e-6 * scale {
                (&d_h * 4.0 - &d_2h) / 3.0
            } else {
                d_h
            };
            first.set_column(i, &col);
        }
        let h = 10.0 * step;
        let mut second = vec![DVector::zeros(self.ambient_dim); m * m];
        for i in 0..m {
            for j in i..m {
                let d = if i == j {
                    (self.shifted(u, &[(i, h)]) - &point * 2.0 + self.shifted(u, &[(i, -h)])) / (h * h)
                } else {
                    (self.shifted(u, &[(i, h), (j, h)]) - self.shifted(u, &[(i, h), (j, -h)])
                        - self.shifted(u, &[(i, -h), (j, h)])
                        + self.shifted(u, &[(i, -h), (j, -h)]))
                        / (4.0 * h * h)
                };
                second[i * m + j] = d.clone();
                second[j * m + i] = d;
            }
        }
        ChartJet { point, first, second }
    }

    /// Parameter on the ray `center + s·direction` (disk domains) where the
    /// chart point has Euclidean norm `target`, found by bisection. Assumes
    /// the norm increases along the ray.
    pub fn param_at_norm(&self, direction: &[f64], target: f64) -> Result<Vec<f64>> {
        let (center, radius) = match &self.domain {
            ParamDomain::Disk { center, radius } => (center.clone(), *radius),
            ParamDomain::Box { .. } => return Err(invalid("ray search needs a disk parameter domain")),
        };
        let dn: f64 = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        if dn == 0.0 || direction.len() != self.dim {
            return Err(invalid("ray direction must be a nonzero parameter vector"));
        }
        let at = |s: f64| -> Vec<f64> { center.iter().zip(direction).map(|(c, d)| c + s * d / dn).collect() };
        let norm_at = |s: f64| self.point(&at(s)).norm();
        let (mut lo, mut hi) = (0.0, radius);
        if norm_at(lo) > target {
            return Err(invalid(format!("chart norm at the domain center already exceeds {target}")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if norm_at(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(at(lo))
    }
}

fn unit_disk(m: usize, radius: f64) -> ParamDomain {
    ParamDomain::Disk { center: vec![0.0; m], radius }
}

/// Height data `h(z)` of a graph over a flat disk: values, gradients
/// (`codim × m`) and Hessians (one `m × m` matrix per component).
#[derive(Clone, Debug, PartialEq)]
pub struct HeightJet {
    pub value: DVector<f64>,
    pub grad: DMatrix<f64>,
    pub hess: Vec<DMatrix<f64>>,
}

pub type HeightFn = Arc<dyn Fn(&[f64]) -> HeightJet + Send + Sync>;

/// The graph `z ↦ (z, h(z))` over the disk `|z| < radius` of `ℝ^m`, placed in
/// the first `m` coordinates with heights in the remaining ones.
pub fn graph_patch(
    name: impl Into<String>,
    m: usize,
    ambient_dim: usize,
    radius: f64,
    height: HeightFn,
) -> Result<ImmersedPatch> {
    let codim = ambient_dim.checked_sub(m).filter(|c| *c >= 1).ok_or_else(|| invalid("graph needs codimension >= 1"))?;
    let h_chart = height.clone();
    let chart = move |u: &[f64]| {
        let h = h_chart(u);
        DVector::from_fn(m + codim, |i, _| if i < m { u[i] } else { h.value[i - m] })
    };
    let jet = move |u: &[f64]| {
        let h = height(u);
        let point = DVector::from_fn(m + codim, |i, _| if i < m { u[i] } else { h.value[i - m] });
        let first = DMatrix::from_fn(m + codim, m, |r, c| {
            if r < m {
                if r == c {
                    1.0
                } else {
                    0.0
                }
            } else {
                h.grad[(r - m, c)]
            }
        });
        let mut second = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                second.push(DVector::from_fn(m + codim, |r, _| if r < m { 0.0 } else { h.hess[r - m][(i, j)] }));
            }
        }
        ChartJet { point, first, second }
    };
    Ok(ImmersedPatch::new(name, m, ambient_dim, unit_disk(m, radius), chart)?.with_analytic(jet))
}

/// The totally geodesic `H^m` through the origin: the flat unit disk in the
/// first `m` coordinates.
pub fn totally_geodesic_disk(m: usize, ambient_dim: usize) -> Result<ImmersedPatch> {
    let codim = ambient_dim.saturating_sub(m);
    let height: HeightFn = Arc::new(move |_z: &[f64]| HeightJet {
        value: DVector::zeros(codim),
        grad: DMatrix::zeros(codim, m),
        hess: vec![DMatrix::zeros(m, m); codim],
    });
    graph_patch("geodesic-disk", m, ambient_dim, 1.0, height)
}

/// Radial spherical height `s·(c − √(ρ² − |z|²))` and its derivatives.
fn sphere_height(m: usize, c: f64, rho: f64, sign: f64) -> HeightFn {
    Arc::new(move |z: &[f64]| {
        let s2: f64 = z.iter().map(|x| x * x).sum();
        let q = (rho * rho - s2).max(0.0).sqrt();
        let value = DVector::from_element(1, sign * (c - q));
        let grad = DMatrix::from_fn(1, m, |_, i| sign * z[i] / q);
        let hess = DMatrix::from_fn(m, m, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            sign * (delta / q + z[i] * z[j] / (q * q * q))
        });
        HeightJet { value, grad, hess: vec![hess] }
    })
}

/// Euclidean sphere cap meeting the ideal boundary at angle `θ ∈ (0, π/2]`
/// along the equator `{x_{m+1} = 0} ∩ ∂𝔹`: the sphere with centre
/// `−tan θ · e_{m+1}` and radius `sec θ`, as a graph over the unit disk.
/// Its hyperbolic mean curvature has constant norm `m cos θ`.
pub fn tilted_cap(m: usize, theta: f64) -> Result<ImmersedPatch> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(invalid(format!("cap angle must lie in (0, pi/2], got {theta}")));
    }
    if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15 {
        return totally_geodesic_disk(m, m + 1);
    }
    let rho = 1.0 / theta.cos();
    // h = √(ρ² − |z|²) − tan θ = −(tan θ − √(ρ² − |z|²)).
    let height = sphere_height(m, theta.tan(), rho, -1.0);
    graph_patch("tilted-cap", m, m + 1, 1.0, height)
}

/// Euclidean sphere cap orthogonal to the ideal boundary: centre
/// `d·e_{m+1}` with `d = √(1 + ρ²)` and radius `ρ`. Totally geodesic.
pub fn orthogonal_cap(m: usize, rho: f64) -> Result<ImmersedPatch> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(invalid(format!("cap radius must be positive, got {rho}")));
    }
    let d = (1.0 + rho * rho).sqrt();
    let height = sphere_height(m, d, rho, 1.0);
    graph_patch("orthogonal-cap", m, m + 1, rho / d, height)
}

/// Factor multiplying the boundary-flat envelope in [`BumpHeight`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BumpShape {
    /// `g = 1`.
    Radial,
    /// `g = z_k`.
    Linear(usize),
    /// `g = cos(ω z_k)`.
    Cosine(usize, f64),
}

impl BumpShape {
    fn eval(self, z: &[f64]) -> (f64, DVector<f64>, DMatrix<f64>) {
        let m = z.len();
        match self {
            BumpShape::Radial => (1.0, DVector::zeros(m), DMatrix::zeros(m, m)),
            BumpShape::Linear(k) => {
                let mut g = DVector::zeros(m);
                g[k] = 1.0;
                (z[k], g, DMatrix::zeros(m, m))
            }
            BumpShape::Cosine(k, w) => {
                let mut g = DVector::zeros(m);
                g[k] = -w * (w * z[k]).sin();
                let mut h = DMatrix::zeros(m, m);
                h[(k, k)] = -w * w * (w * z[k]).cos();
                ((w * z[k]).cos(), g, h)
            }
        }
    }
}

/// Heights `h_α(z) = a_α (1 − |z|²)² g_α(z)`. They vanish with their
/// gradients on the unit circle, so the graph closes up in `C²` and meets
/// the ideal boundary orthogonally.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpHeight {
    pub components: Vec<(f64, BumpShape)>,
}

impl BumpHeight {
    pub fn height_fn(&self, m: usize) -> HeightFn {
        let comps = self.components.clone();
        Arc::new(move |z: &[f64]| {
            let s: f64 = z.iter().map(|x| x * x).sum();
            let one = 1.0 - s;
            let env = one * one;
            let env_grad = DVector::from_fn(m, |i, _| -4.0 * z[i] * one);
            let env_hess = DMatrix::from_fn(m, m, |i, j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                8.0 * z[i] * z[j] - 4.0 * delta * one
            });
            let codim = comps.len();
            let mut value = DVector::zeros(codim);
            let mut grad = DMatrix::zeros(codim, m);
            let mut hess = Vec::with_capacity(codim);
            for (a, (amp, shape)) in comps.iter().enumerate() {
                let (g, gg, gh) = shape.eval(z);
                value[a] = amp * env * g;
                let gr = (&env_grad * g + &gg * env) * *amp;
                grad.set_row(a, &gr.transpose());
                let h = (&env_hess * g + &env_grad * gg.transpose() + &gg * env_grad.transpose() + &gh * env) * *amp;
                hess.push(h);
            }
            HeightJet { value, grad, hess }
        })
    }
}

/// Graph of a [`BumpHeight`] over the unit disk of `ℝ^m` in `𝔹^{m+codim}`.
pub fn bump_graph(name: impl Into<String>, m: usize, height: &BumpHeight) -> Result<ImmersedPatch> {
    if height.components.is_empty() {
        return Err(invalid("bump graph needs at least one height component"));
    }
    for (_, shape) in &height.components {
        match shape {
            BumpShape::Linear(k) | BumpShape::Cosine(k, _) if *k >= m => {
                return Err(invalid("bump shape refers to a coordinate beyond the patch dimension"))
            }
            _ => {}
        }
    }
    graph_patch(name, m, m + height.components.len(), 1.0, height.height_fn(m))
}

/// The three built-in `C²` graph perturbations of `H² ⊂ H³` used for the
/// decay checks.
pub fn builtin_graphs() -> Vec<ImmersedPatch> {
    let specs = [
        ("graph-radial", vec![(0.3, BumpShape::Radial)]),
        ("graph-linear", vec![(0.4, BumpShape::Linear(0))]),
        ("graph-wave", vec![(0.25, BumpShape::Cosine(1, std::f64::consts::PI))]),
    ];
    specs
        .into_iter()
        .map(|(name, comps)| bump_graph(name, 2, &BumpHeight { components: comps }).expect("valid built-in"))
        .collect()
}

/// Cone over the circle `{|z| = 1, z₃ = cos α}` in `𝔹³`:
/// `u ↦ (u sin α, |u| cos α)` on the punctured unit disk. Only `C¹` at the
/// apex.
pub fn cone_patch(alpha: f64) -> Result<ImmersedPatch> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_2) {
        return Err(invalid(format!("cone half-angle must lie in (0, pi/2], got {alpha}")));
    }
    let (sa, ca) = alpha.sin_cos();
    let chart = move |u: &[f64]| {
        let r = (u[0] * u[0] + u[1] * u[1]).sqrt();
        DVector::from_vec(vec![u[0] * sa, u[1] * sa, r * ca])
    };
    let jet = move |u: &[f64]| {
        let r = (u[0] * u[0] + u[1] * u[1]).sqrt();
        let point = DVector::from_vec(vec![u[0] * sa, u[1] * sa, r * ca]);
        let first = DMatrix::from_row_slice(3, 2, &[sa, 0.0, 0.0, sa, ca * u[0] / r, ca * u[1] / r]);
        let mut second = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                second.push(DVector::from_vec(vec![0.0, 0.0, ca * (delta - u[i] * u[j] / (r * r)) / r]));
            }
        }
        ChartJet { point, first, second }
    };
    Ok(ImmersedPatch::new("cone", 2, 3, unit_disk(2, 1.0), chart)?
        .with_analytic(jet)
        .with_smoothness(Smoothness::C1))
}

/// Looks up a built-in patch by identifier.
///
/// Identifiers: `geodesic-h2`, `tilted-cap` (θ = π/3), `orthogonal-cap`
/// (ρ = 1), `graph-radial`, `graph-linear`, `graph-wave`.
pub fn builtin_patch(id: &str) -> Result<ImmersedPatch> {
    match id {
        "geodesic-h2" | "geodesic-disk" => totally_geodesic_disk(2, 3),
        "tilted-cap" => tilted_cap(2, std::f64::consts::FRAC_PI_3),
        "orthogonal-cap" => orthogonal_cap(2, 1.0),
        "graph-radial" | "graph-linear" | "graph-wave" => Ok(builtin_graphs()
            .into_iter()
            .find(|p| p.name() == id)
            .expect("built-in graph present")),
        other => Err(invalid(format!(
            "unknown geometry '{other}' (expected geodesic-h2, tilted-cap, orthogonal-cap, graph-radial, graph-linear, graph-wave)"
        ))),
    }
}
