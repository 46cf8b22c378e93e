//! Simplicial meshes of truncated submanifolds with a constant induced
//! metric per simplex, their generators, and the text file format.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::hyperbolic::{phi, radius_from_origin};
use crate::submanifold::{ImmersedPatch, ParamDomain};

/// Smallest accepted determinant of a simplex's local metric.
pub const MIN_METRIC_DET: f64 = 1e-14;

/// Metric of the ambient space a mesh is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshMetric {
    /// `φ⁻²` times the Euclidean metric of the ball.
    Hyperbolic,
    /// The Euclidean metric of the coordinates.
    Euclidean,
}

/// Constant metric of one simplex in its edge coordinates, with the
/// determinant and inverse kept alongside. Strongly anisotropic elements far
/// out in the ball have Gram matrices whose determinant cancels to zero in
/// floating point; for those both are computed from a factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMetric {
    pub gram: DMatrix<f64>,
    pub det: f64,
    pub inverse: DMatrix<f64>,
}

impl LocalMetric {
    /// Checks `det > MIN_METRIC_DET` and inverts `gram` directly.
    pub fn new(index: usize, gram: DMatrix<f64>) -> Result<Self> {
        let det = gram.determinant();
        Self::checked(index, det)?;
        let inverse = gram.clone().try_inverse().ok_or_else(|| Error::Assembly {
            simplex: index,
            reason: "local metric is singular".into(),
        })?;
        Ok(Self { gram, det, inverse })
    }

    /// `Aᵀ G A` for an edge matrix `A` in coordinates with metric `G`.
    pub fn pulled_back(index: usize, a: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<Self> {
        let det_a = a.determinant();
        let det = det_a * det_a * g.determinant();
        Self::checked(index, det)?;
        let singular = || Error::Assembly {
            simplex: index,
            reason: "local metric is singular".into(),
        };
        let a_inv = a.clone().try_inverse().ok_or_else(singular)?;
        let g_inv = g.clone().try_inverse().ok_or_else(singular)?;
        let inverse = &a_inv * g_inv * a_inv.transpose();
        let gram = a.transpose() * g * a;
        Ok(Self {
            gram,
            det,
            inverse: 0.5 * (&inverse + inverse.transpose()),
        })
    }

    fn checked(index: usize, det: f64) -> Result<()> {
        if !(det > MIN_METRIC_DET) {
            return Err(Error::Assembly {
                simplex: index,
                reason: format!("induced metric determinant {det:.3e} is below {MIN_METRIC_DET:e}"),
            });
        }
        Ok(())
    }
}

/// A mesh of `m`-simplices with vertices in ball coordinates.
///
/// Each simplex stores the Gram matrix `G_ab = ⟨e_a, e_b⟩` of its edge
/// vectors `e_a = v_a − v_0` in the induced metric, evaluated once at the
/// barycenter. Boundary markers are the vertices of facets that belong to a
/// single simplex.
#[derive(Clone, Debug)]
pub struct HyperbolicMesh {
    dim: usize,
    ambient: usize,
    metric: MeshMetric,
    vertices: Vec<DVector<f64>>,
    params: Option<Vec<Vec<f64>>>,
    simplices: Vec<Vec<usize>>,
    gram: Vec<LocalMetric>,
    boundary: Vec<bool>,
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// Vertices on facets that belong to exactly one simplex.
pub fn topological_boundary(vertex_count: usize, simplices: &[Vec<usize>]) -> Vec<bool> {
    let mut facets: HashMap<Vec<usize>, usize> = HashMap::new();
    for s in simplices {
        for skip in 0..s.len() {
            let mut f: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
            f.sort_unstable();
            *facets.entry(f).or_default() += 1;
        }
    }
    let mut boundary = vec![false; vertex_count];
    for (f, count) in facets {
        if count == 1 {
            for v in f {
                boundary[v] = true;
            }
        }
    }
    boundary
}

/// `Aᵀ (φ⁻² JᵀJ) A` at the parameter barycenter of a simplex.
fn cartesian_gram(patch: &ImmersedPatch, params: &[Vec<f64>], s: &[usize]) -> Result<DMatrix<f64>> {
    let dim = patch.dim();
    let center: Vec<f64> = (0..dim).map(|c| s.iter().map(|&v| params[v][c]).sum::<f64>() / (dim + 1) as f64).collect();
    let jet = patch.jet(&center)?;
    let f = phi(&jet.point);
    let a = DMatrix::from_fn(dim, dim, |r, c| params[s[c + 1]][r] - params[s[0]][r]);
    let ja = &jet.first * a;
    Ok(ja.transpose() * ja / (f * f))
}

/// Parameter point at hyperbolic distance `r` from the origin on the ray of
/// angle `theta` from the domain center.
fn ray_point(patch: &ImmersedPatch, r: f64, theta: f64) -> Result<Vec<f64>> {
    patch.param_at_norm(&[theta.cos(), theta.sin()], (0.5 * r).tanh())
}

/// Induced hyperbolic metric in the polar coordinates `(r, θ)` of a
/// surface patch, where `u(r, θ) = c + s(r, θ)(cos θ, sin θ)` solves
/// `|X(u)| = tanh(r/2)`. The derivatives of `s` follow by implicit
/// differentiation of `N(s, θ) = |X(c + s e_θ)|`.
fn polar_metric(patch: &ImmersedPatch, r: f64, theta: f64) -> Result<DMatrix<f64>> {
    let u = ray_point(patch, r, theta)?;
    let center = match patch.domain() {
        ParamDomain::Disk { center, .. } => center,
        ParamDomain::Box { .. } => return Err(invalid("polar coordinates need a disk parameter domain")),
    };
    let jet = patch.jet(&u)?;
    let x = &jet.point;
    let (sin, cos) = theta.sin_cos();
    let s = ((u[0] - center[0]).powi(2) + (u[1] - center[1]).powi(2)).sqrt();
    let radial = &jet.first * DVector::from_vec(vec![cos, sin]);
    let angular = &jet.first * DVector::from_vec(vec![-sin * s, cos * s]);
    let xn = x.norm();
    let n_s = x.dot(&radial) / xn;
    if !(n_s > 0.0) {
        return Err(Error::DegenerateImmersion {
            param: u.clone(),
            reason: "chart norm does not increase along the ray".into(),
        });
    }
    let n_theta = x.dot(&angular) / xn;
    let c = (0.5 * r).cosh();
    let s_r = 0.5 / (c * c) / n_s;
    let s_theta = -n_theta / n_s;
    let d_r = &radial * s_r;
    let d_theta = &radial * s_theta + angular;
    let f = phi(x);
    let j = DMatrix::from_columns(&[d_r, d_theta]);
    Ok(j.transpose() * j / (f * f))
}

impl HyperbolicMesh {
    fn validate_topology(dim: usize, vertex_count: usize, simplices: &[Vec<usize>]) -> Result<()> {
        for (i, s) in simplices.iter().enumerate() {
            if s.len() != dim + 1 {
                return Err(Error::Assembly {
                    simplex: i,
                    reason: format!("has {} vertices, expected {}", s.len(), dim + 1),
                });
            }
            if let Some(v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::Assembly {
                    simplex: i,
                    reason: format!("refers to vertex {v} of {vertex_count}"),
                });
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Assembly {
                    simplex: i,
                    reason: "repeats a vertex".into(),
                });
            }
        }
        Ok(())
    }

    /// A mesh whose simplices are the flat simplices spanned by their
    /// vertices, with the metric frozen at the vertex barycenter. Boundary
    /// markers, when given, must equal the topological boundary.
    pub fn from_embedding(
        dim: usize,
        vertices: Vec<DVector<f64>>,
        simplices: Vec<Vec<usize>>,
        boundary: Option<Vec<bool>>,
        metric: MeshMetric,
    ) -> Result<Self> {
        let ambient = vertices.first().map(|v| v.len()).ok_or_else(|| invalid("mesh has no vertices"))?;
        if dim < 1 || dim > ambient {
            return Err(invalid(format!("simplex dimension {dim} does not fit in {ambient} coordinates")));
        }
        if vertices.iter().any(|v| v.len() != ambient) {
            return Err(invalid("vertices have different numbers of coordinates"));
        }
        if metric == MeshMetric::Hyperbolic {
            if let Some(i) = vertices.iter().position(|v| !(v.norm() < 1.0)) {
                return Err(invalid(format!("vertex {i} lies outside the open unit ball")));
            }
        }
        Self::validate_topology(dim, vertices.len(), &simplices)?;
        let mut gram = Vec::with_capacity(simplices.len());
        for (i, s) in simplices.iter().enumerate() {
            let edges = DMatrix::from_fn(ambient, dim, |r, c| vertices[s[c + 1]][r] - vertices[s[0]][r]);
            let mut g = edges.transpose() * &edges;
            if metric == MeshMetric::Hyperbolic {
                let center = s.iter().fold(DVector::zeros(ambient), |acc, &v| acc + &vertices[v]) / (dim + 1) as f64;
                let f = phi(&center);
                g /= f * f;
            }
            gram.push(LocalMetric::new(i, g)?);
        }
        let topo = topological_boundary(vertices.len(), &simplices);
        if let Some(marks) = boundary {
            if marks.len() != vertices.len() {
                return Err(invalid("boundary marker count differs from vertex count"));
            }
            if let Some(v) = (0..marks.len()).find(|&v| marks[v] != topo[v]) {
                return Err(invalid(format!(
                    "boundary marker of vertex {v} is {} but the topological boundary says {}",
                    marks[v] as u8, topo[v] as u8
                )));
            }
        }
        Ok(Self {
            dim,
            ambient,
            metric,
            vertices,
            params: None,
            simplices,
            gram,
            boundary: topo,
        })
    }

    /// A mesh of the patch over a triangulation of its parameter domain. The
    /// local metric is `Aᵀ (φ⁻² JᵀJ) A` with `J` the chart Jacobian at the
    /// parameter barycenter and `A` the parameter edge matrix.
    pub fn from_patch(patch: &ImmersedPatch, params: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let dim = patch.dim();
        if params.iter().any(|u| u.len() != dim) {
            return Err(invalid("parameter points must have the patch dimension"));
        }
        Self::validate_topology(dim, params.len(), &simplices)?;
        let vertices: Vec<DVector<f64>> = params.iter().map(|u| patch.point(u)).collect();
        if let Some(i) = vertices.iter().position(|v| !(v.norm() < 1.0)) {
            return Err(invalid(format!("vertex {i} lies outside the open unit ball")));
        }
        let gram = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let g = cartesian_gram(patch, &params, s).map_err(|e| Error::Assembly {
                    simplex: i,
                    reason: e.to_string(),
                })?;
                LocalMetric::new(i, g)
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary = topological_boundary(vertices.len(), &simplices);
        Ok(Self {
            dim,
            ambient: patch.ambient_dim(),
            metric: MeshMetric::Hyperbolic,
            vertices,
            params: Some(params),
            simplices,
            gram,
            boundary,
        })
    }

    /// Structured triangulation of the flat unit square `[0, 1]²` with `n`
    /// cells per side, each cell cut along its rising diagonal.
    pub fn unit_square(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("unit square needs at least 2 cells per side"));
        }
        let h = 1.0 / n as f64;
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let vertices = (0..=n)
            .flat_map(|j| (0..=n).map(move |i| DVector::from_vec(vec![i as f64 * h, j as f64 * h])))
            .collect();
        let mut simplices = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                simplices.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                simplices.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Self::from_embedding(2, vertices, simplices, None, MeshMetric::Euclidean)
    }

    /// Polar mesh of the surface patch between hyperbolic distances `inner`
    /// and `outer` from the origin of the ball. Rings are uniform in the
    /// distance and each ring vertex is found on a parameter ray by
    /// bisection, so vertex distances are exact. Ring elements are linear in
    /// the polar coordinates `(r, θ)`, with the metric pulled back through
    /// the ray map; straight chords in the parameter plane would cut deep
    /// into the ball between far-apart vertices near the ideal boundary.
    /// Without `inner` the mesh is a disk around the image of the
    /// parameter-domain center, closed by a fan of flat triangles.
    pub fn polar(patch: &ImmersedPatch, inner: Option<f64>, outer: f64, rings: usize, sectors: usize) -> Result<Self> {
        if patch.dim() != 2 {
            return Err(invalid("polar meshes are built for surfaces (m = 2)"));
        }
        let center = match patch.domain() {
            ParamDomain::Disk { center, .. } => center.clone(),
            ParamDomain::Box { .. } => return Err(invalid("polar meshes need a disk parameter domain")),
        };
        if rings < 1 || sectors < 3 {
            return Err(invalid("polar mesh needs at least 1 ring and 3 sectors"));
        }
        let r_center = radius_from_origin(patch.point(&center).norm());
        let r0 = inner.unwrap_or(r_center);
        if !(outer > r0) || (inner.is_some() && !(r0 > r_center)) {
            return Err(invalid(format!(
                "radii must satisfy {r_center:.6} < inner < outer, got inner = {r0}, outer = {outer}"
            )));
        }
        let first_ring = usize::from(inner.is_none());
        let radii: Vec<f64> = (first_ring..=rings).map(|i| r0 + (outer - r0) * i as f64 / rings as f64).collect();
        let dtheta = 2.0 * std::f64::consts::PI / sectors as f64;
        let mut params = Vec::with_capacity(radii.len() * sectors + 1);
        if inner.is_none() {
            params.push(center.clone());
        }
        let offset = params.len();
        for &r in &radii {
            for j in 0..sectors {
                params.push(ray_point(patch, r, j as f64 * dtheta)?);
            }
        }
        let id = |ring: usize, j: usize| offset + ring * sectors + (j % sectors);
        let mut simplices = Vec::new();
        // Local polar coordinates of each simplex, or None for fan triangles.
        let mut polar_coords: Vec<Option<[(f64, f64); 3]>> = Vec::new();
        if inner.is_none() {
            for j in 0..sectors {
                simplices.push(vec![0, id(0, j), id(0, j + 1)]);
                polar_coords.push(None);
            }
        }
        for ring in 0..radii.len() - 1 {
            let (ra, rb) = (radii[ring], radii[ring + 1]);
            for j in 0..sectors {
                let (ta, tb) = (j as f64 * dtheta, (j + 1) as f64 * dtheta);
                simplices.push(vec![id(ring, j), id(ring + 1, j), id(ring + 1, j + 1)]);
                polar_coords.push(Some([(ra, ta), (rb, ta), (rb, tb)]));
                simplices.push(vec![id(ring, j), id(ring + 1, j + 1), id(ring, j + 1)]);
                polar_coords.push(Some([(ra, ta), (rb, tb), (ra, tb)]));
            }
        }
        let vertices: Vec<DVector<f64>> = params.iter().map(|u| patch.point(u)).collect();
        let gram = simplices
            .iter()
            .zip(&polar_coords)
            .enumerate()
            .map(|(i, (s, pc))| {
                match pc {
                    None => LocalMetric::new(
                        i,
                        cartesian_gram(patch, &params, s).map_err(|e| Error::Assembly {
                            simplex: i,
                            reason: e.to_string(),
                        })?,
                    ),
                    Some(c) => {
                        let r = (c[0].0 + c[1].0 + c[2].0) / 3.0;
                        let t = (c[0].1 + c[1].1 + c[2].1) / 3.0;
                        let gp = polar_metric(patch, r, t).map_err(|e| Error::Assembly {
                            simplex: i,
                            reason: e.to_string(),
                        })?;
                        let a = DMatrix::from_fn(2, 2, |row, col| {
                            let (p, q) = (c[col + 1], c[0]);
                            if row == 0 {
                                p.0 - q.0
                            } else {
                                p.1 - q.1
                            }
                        });
                        LocalMetric::pulled_back(i, &a, &gp)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary = topological_boundary(vertices.len(), &simplices);
        Ok(Self {
            dim: 2,
            ambient: patch.ambient_dim(),
            metric: MeshMetric::Hyperbolic,
            vertices,
            params: Some(params),
            simplices,
            gram,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn metric(&self) -> MeshMetric {
        self.metric
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// Patch parameters of the vertices, for meshes built from a patch.
    pub fn params(&self) -> Option<&[Vec<f64>]> {
        self.params.as_deref()
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Local metric of each simplex.
    pub fn local_metrics(&self) -> &[LocalMetric] {
        &self.gram
    }

    pub fn boundary(&self) -> &[bool] {
        &self.boundary
    }

    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    /// Measure of simplex `i` in the mesh metric.
    pub fn simplex_volume(&self, i: usize) -> f64 {
        self.gram[i].det.sqrt() / factorial(self.dim)
    }

    pub fn volume(&self) -> f64 {
        (0..self.simplices.len()).map(|i| self.simplex_volume(i)).sum()
    }

    /// Longest edge in the mesh metric.
    pub fn resolution(&self) -> f64 {
        let mut h2: f64 = 0.0;
        for g in self.gram.iter().map(|l| &l.gram) {
            for a in 0..self.dim {
                h2 = h2.max(g[(a, a)]);
                for b in 0..a {
                    h2 = h2.max(g[(a, a)] + g[(b, b)] - 2.0 * g[(a, b)]);
                }
            }
        }
        h2.sqrt()
    }

    /// Hyperbolic distance of each vertex from the origin of the ball.
    pub fn vertex_radii(&self) -> Result<Vec<f64>> {
        if self.metric != MeshMetric::Hyperbolic {
            return Err(invalid("vertex radii need a hyperbolic mesh"));
        }
        Ok(self.vertices.iter().map(|v| radius_from_origin(v.norm())).collect())
    }

    /// The submesh of simplices whose vertices all lie within hyperbolic
    /// distance `radius` of the origin; its boundary is recomputed.
    pub fn restrict_to_radius(&self, radius: f64) -> Result<Self> {
        let radii = self.vertex_radii()?;
        let inside = |v: usize| radii[v] <= radius * (1.0 + 1e-12);
        let keep: Vec<usize> = (0..self.simplices.len()).filter(|&i| self.simplices[i].iter().all(|&v| inside(v))).collect();
        if keep.is_empty() {
            return Err(invalid(format!("no simplex lies within radius {radius}")));
        }
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut params = self.params.as_ref().map(|_| Vec::new());
        for &i in &keep {
            for &v in &self.simplices[i] {
                if map[v] == usize::MAX {
                    map[v] = vertices.len();
                    vertices.push(self.vertices[v].clone());
                    if let (Some(out), Some(src)) = (params.as_mut(), self.params.as_ref()) {
                        out.push(src[v].clone());
                    }
                }
            }
        }
        let simplices: Vec<Vec<usize>> = keep.iter().map(|&i| self.simplices[i].iter().map(|&v| map[v]).collect()).collect();
        let boundary = topological_boundary(vertices.len(), &simplices);
        Ok(Self {
            dim: self.dim,
            ambient: self.ambient,
            metric: self.metric,
            vertices,
            params,
            gram: keep.iter().map(|&i| self.gram[i].clone()).collect(),
            simplices,
            boundary,
        })
    }

    /// Text form: header `m n+1 V S`, `V` coordinate lines, `S` simplex
    /// lines (0-based), then one line of `V` boundary flags (0 or 1).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {}", self.dim, self.ambient, self.vertices.len(), self.simplices.len());
        for v in &self.vertices {
            let coords: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", coords.join(" "));
        }
        for s in &self.simplices {
            let ids: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        let flags: Vec<&str> = self.boundary.iter().map(|b| if *b { "1" } else { "0" }).collect();
        let _ = writeln!(out, "{}", flags.join(" "));
        out
    }

    /// Parses the text form. Metrics are taken from the flat simplices and
    /// the hyperbolic metric at their barycenters.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| lines.next().ok_or_else(|| format!("unexpected end of file while reading {what}"));
        let (ln, header) = next("the header")?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| format!("line {}: header entry '{t}' is not an integer", ln + 1)))
            .collect::<std::result::Result<_, _>>()?;
        let [dim, ambient, nv, ns] = head[..] else {
            return Err(format!("line {}: header must be 'm n+1 V S'", ln + 1));
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, line) = next("vertices")?;
            let coords: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| format!("line {}: '{t}' is not a number", ln + 1)))
                .collect::<std::result::Result<_, _>>()?;
            if coords.len() != ambient {
                return Err(format!("line {}: expected {ambient} coordinates, found {}", ln + 1, coords.len()));
            }
            vertices.push(DVector::from_vec(coords));
        }
        let mut simplices = Vec::with_capacity(ns);
        for _ in 0..ns {
            let (ln, line) = next("simplices")?;
            let ids: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| format!("line {}: '{t}' is not a vertex index", ln + 1)))
                .collect::<std::result::Result<_, _>>()?;
            simplices.push(ids);
        }
        let (ln, line) = next("boundary markers")?;
        let marks: Vec<bool> = line
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(format!("line {}: boundary marker '{t}' must be 0 or 1", ln + 1)),
            })
            .collect::<std::result::Result<_, _>>()?;
        if let Some((ln, _)) = lines.next() {
            return Err(format!("line {}: trailing content after the boundary markers", ln + 1));
        }
        Self::from_embedding(dim, vertices, simplices, Some(marks), MeshMetric::Hyperbolic).map_err(|e| e.to_string())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file_err = |message: String| Error::File {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        Self::parse(&text).map_err(file_err)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::File {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::totally_geodesic_disk;

    #[test]
    fn square_boundary_is_the_perimeter() {
        let mesh = HyperbolicMesh::unit_square(4).unwrap();
        assert_eq!(mesh.vertices().len(), 25);
        assert_eq!(mesh.interior_count(), 9);
        assert!((mesh.volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polar_disk_counts() {
        let patch = totally_geodesic_disk(2, 3).unwrap();
        let mesh = HyperbolicMesh::polar(&patch, None, 3.0, 10, 16).unwrap();
        assert_eq!(mesh.vertices().len(), 1 + 10 * 16);
        assert_eq!(mesh.interior_count(), 1 + 9 * 16);
        let radii = mesh.vertex_radii().unwrap();
        assert!((radii[mesh.vertices().len() - 1] - 3.0).abs() < 1e-12);
    }
}
