//! Surfaces given in half-space coordinates and the point clouds sampled
//! from them.

use std::path::Path;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{invalid, Error, Result};
use crate::hyperbolic::HalfSpaceChart;
use crate::submanifold::{ImmersedPatch, ParamDomain, Sampler};

/// Points of `ℝⁿ × [0, ∞)` stored as vectors with the height last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointCloud {
    points: Vec<DVector<f64>>,
}

impl PointCloud {
    /// Builds a cloud, checking dimensions and that heights are nonnegative.
    pub fn new(points: Vec<DVector<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            let len = first.len();
            if len < 2 {
                return Err(invalid("cloud points need at least one horizontal coordinate and a height"));
            }
            for (i, p) in points.iter().enumerate() {
                if p.len() != len {
                    return Err(invalid(format!("cloud point {i} has {} coordinates, expected {len}", p.len())));
                }
                if p.iter().any(|c| !c.is_finite()) || p[len - 1] < 0.0 {
                    return Err(invalid(format!("cloud point {i} is not finite with nonnegative height")));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[DVector<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Horizontal dimension `n` (0 for an empty cloud).
    pub fn horizontal_dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.len() - 1)
    }

    /// Appends another cloud of the same dimension.
    pub fn extend(&mut self, other: PointCloud) -> Result<()> {
        if !self.is_empty() && !other.is_empty() && other.horizontal_dim() != self.horizontal_dim() {
            return Err(invalid("cannot merge clouds of different dimensions"));
        }
        self.points.extend(other.points);
        Ok(())
    }

    /// Parses whitespace-separated coordinates, one point per line, height
    /// last; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut points = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let coords: std::result::Result<Vec<f64>, _> = body.split_whitespace().map(str::parse).collect();
            let coords = coords.map_err(|e| format!("line {}: {e}", line_no + 1))?;
            points.push(DVector::from_vec(coords));
        }
        Self::new(points).map_err(|e| e.to_string())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file_err = |message: String| Error::File {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        Self::parse(&text).map_err(file_err)
    }

    /// Writes the cloud in the format accepted by [`PointCloud::read`].
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = String::from("# half-space coordinates, height last\n");
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|c| format!("{c:.17e}")).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        std::fs::write(path, text).map_err(|e| Error::File {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

type SurfaceChart = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;

/// A parametrized surface in half-space coordinates `(x, y)`, `y ≥ 0`.
#[derive(Clone)]
pub struct HalfSpaceSurface {
    name: String,
    horizontal: usize,
    domain: ParamDomain,
    chart: SurfaceChart,
}

impl std::fmt::Debug for HalfSpaceSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HalfSpaceSurface")
            .field("name", &self.name)
            .field("horizontal", &self.horizontal)
            .field("domain", &self.domain)
            .finish()
    }
}

impl HalfSpaceSurface {
    pub fn new(
        name: impl Into<String>,
        horizontal: usize,
        domain: ParamDomain,
        chart: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            horizontal,
            domain,
            chart: Arc::new(chart),
        }
    }

    /// The image of a ball-model patch under a half-space chart.
    pub fn from_ball_patch(patch: &ImmersedPatch, chart: HalfSpaceChart) -> Result<Self> {
        if chart.anchor().len() != patch.ambient_dim() {
            return Err(invalid("chart and patch live in different dimensions"));
        }
        let patch = patch.clone();
        let n = patch.ambient_dim() - 1;
        Ok(Self::new(patch.name().to_string(), n, patch.domain().clone(), move |u| {
            let x = patch.point(u);
            match chart.map_coords(&x) {
                Ok((h, y)) => DVector::from_fn(n + 1, |i, _| if i < n { h[i] } else { y }),
                Err(_) => DVector::from_element(n + 1, f64::NAN),
            }
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn horizontal_dim(&self) -> usize {
        self.horizontal
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn point(&self, u: &[f64]) -> DVector<f64> {
        (self.chart)(u)
    }

    fn push_if_valid(&self, u: &[f64], out: &mut Vec<DVector<f64>>) {
        if !self.domain.contains(u) {
            return;
        }
        let p = self.point(u);
        if p.iter().all(|c| c.is_finite()) && p[self.horizontal] > 0.0 {
            out.push(p);
        }
    }

    /// Samples on rings around `base` in parameter space with radii
    /// geometric in `[r_min, r_max]` (`per_decade` rings per decade) and
    /// `angles` equally spaced directions per ring; points outside the
    /// domain or at height `≤ 0` are skipped. Two-dimensional surfaces only.
    pub fn graded_cloud(&self, base: &[f64], r_min: f64, r_max: f64, per_decade: usize, angles: usize) -> Result<PointCloud> {
        if self.dim() != 2 || base.len() != 2 {
            return Err(invalid("graded clouds are built on two-dimensional surfaces"));
        }
        if !(r_min > 0.0 && r_max > r_min) || per_decade == 0 || angles == 0 {
            return Err(invalid("graded cloud needs 0 < r_min < r_max and positive counts"));
        }
        let rings = ((r_max / r_min).log10() * per_decade as f64).ceil() as usize;
        let mut out = Vec::with_capacity((rings + 1) * angles);
        for i in 0..=rings {
            let rho = r_min * (r_max / r_min).powf(i as f64 / rings as f64);
            for j in 0..angles {
                let a = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / angles as f64;
                let u = [base[0] + rho * a.cos(), base[1] + rho * a.sin()];
                self.push_if_valid(&u, &mut out);
            }
        }
        PointCloud::new(out)
    }

    /// Samples on the parameter grid of `sampler` (rays for disks, a tensor
    /// grid for boxes).
    pub fn cloud(&self, sampler: &Sampler) -> Result<PointCloud> {
        let mut out = Vec::new();
        for u in sampler.parameters(&self.domain) {
            self.push_if_valid(&u, &mut out);
        }
        PointCloud::new(out)
    }
}

/// Portion in `{y > 0}` of the Euclidean sphere through the circle of
/// radius `a` about `center ∈ ℝ²` with centre height `h`. The parameters
/// are the azimuth `θ ∈ [−π, π]` and the elevation `ψ` above the boundary
/// circle; `(0, 0)` is the boundary point `center + (a, 0)`. `h = 0` gives
/// the totally geodesic hemisphere.
pub fn spherical_cap(center: [f64; 2], a: f64, h: f64) -> Result<HalfSpaceSurface> {
    if !(a > 0.0) || !h.is_finite() {
        return Err(invalid("spherical cap needs a positive boundary radius"));
    }
    let radius = a.hypot(h);
    let psi0 = (-h / radius).asin();
    let top = std::f64::consts::FRAC_PI_2 - psi0;
    let name = if h == 0.0 { "hemisphere" } else { "spherical-cap" };
    let domain = ParamDomain::Box {
        lo: vec![-std::f64::consts::PI, 0.0],
        hi: vec![std::f64::consts::PI, top],
    };
    Ok(HalfSpaceSurface::new(name, 2, domain, move |u| {
        let (st, ct) = u[0].sin_cos();
        let (se, ce) = (psi0 + u[1]).sin_cos();
        DVector::from_vec(vec![center[0] + radius * ce * ct, center[1] + radius * ce * st, h + radius * se])
    }))
}

/// The totally geodesic hemisphere over the unit circle.
pub fn hemisphere() -> HalfSpaceSurface {
    spherical_cap([0.0, 0.0], 1.0, 0.0).expect("valid cap")
}

/// Plane through the `x₁`-axis meeting `{y = 0}` at angle `θ`, parametrized
/// by `(s, y) ↦ (s, y cot θ, y)` on `[−half_length, half_length] × [0, height]`.
pub fn tilted_strip(theta: f64, half_length: f64, height: f64) -> Result<HalfSpaceSurface> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(invalid(format!("strip angle must lie in (0, π), got {theta}")));
    }
    let vertical = (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15;
    let cot = if vertical { 0.0 } else { theta.cos() / theta.sin() };
    let domain = ParamDomain::Box {
        lo: vec![-half_length, 0.0],
        hi: vec![half_length, height],
    };
    let name = if vertical { "vertical-strip" } else { "tilted-strip" };
    Ok(HalfSpaceSurface::new(name, 2, domain, move |u| {
        DVector::from_vec(vec![u[0], u[1] * cot, u[1]])
    }))
}

/// The vertical strip `Γ × (0, height]` over the `x₁`-axis.
pub fn vertical_strip(half_length: f64, height: f64) -> HalfSpaceSurface {
    tilted_strip(std::f64::consts::FRAC_PI_2, half_length, height).expect("valid strip")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_meets_plane_on_circle() {
        let cap = spherical_cap([0.5, -0.2], 2.0, 1.3).unwrap();
        for t in [-2.0, 0.0, 1.0] {
            let p = cap.point(&[t, 0.0]);
            assert!(p[2].abs() < 1e-12);
            assert!(((p[0] - 0.5).hypot(p[1] + 0.2) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cloud_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cloud.txt");
        let cloud = hemisphere().graded_cloud(&[0.0, 0.0], 1e-3, 1e-1, 2, 12).unwrap();
        cloud.write(&path).unwrap();
        assert_eq!(PointCloud::read(&path).unwrap(), cloud);
        assert!(PointCloud::parse("1 2\n3").is_err());
        assert!(PointCloud::parse("1 -2").is_err());
    }
}
