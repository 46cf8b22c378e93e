//! The error term `E = Δ_Σ(f∘r) − (f″ + (m−1)coth(r) f′)` of the radial
//! model for functions of the distance from the origin.
//!
//! `E` is measured with a fourth-order finite-difference Laplace–Beltrami
//! operator in patch coordinates and compared with the closed form
//! `E = (1 − |∇^Σ r|²)(f′coth r − f″) + f′⟨∇̄r, H⟩`, in which
//! `1 − |∇^Σ r|² = Σ_α ⟨x, ē_α⟩²/|x|²` and `⟨∇̄r, H⟩ = Σ_α H^α ⟨x, ē_α⟩/|x|`.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::hyperbolic::{phi, radius_from_origin};
use crate::mesh::triangulation::HyperbolicMesh;
use crate::radial::RadialFunction;
use crate::submanifold::curvature::{curvature_from_geometry, LocalGeometry};
use crate::submanifold::ImmersedPatch;

/// Finite-difference step in hyperbolic length.
pub const FD_STEP: f64 = 0.02;
/// A measurement is rejected when the two evaluations of `E` differ by more
/// than this fraction of `|E|` ...
pub const CONSISTENCY_FRACTION: f64 = 0.25;
/// ... and by more than this multiple of `|f″| + |f′|`, the level below
/// which `E` counts as numerically zero.
pub const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianErrorSample {
    pub vertex: usize,
    pub r: f64,
    /// `|E|` from the finite-difference Laplacian.
    pub discrete: f64,
    /// `|E|` from the closed form.
    pub analytic: f64,
    /// `|E_discrete − E_analytic|`.
    pub consistency: f64,
    /// `|f″(r)| + |f′(r)|`.
    pub scale: f64,
    /// `discrete / scale`.
    pub ratio: f64,
    /// `ε (|f″| + |f′|)` when `ε` was supplied.
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianErrorReport {
    pub samples: Vec<LaplacianErrorSample>,
}

impl LaplacianErrorReport {
    /// Largest ratio over samples with `r ∈ [lo, hi]`.
    pub fn sup_ratio(&self, lo: f64, hi: f64) -> Option<f64> {
        self.samples
            .iter()
            .filter(|s| s.r >= lo && s.r <= hi)
            .map(|s| s.ratio)
            .reduce(f64::max)
    }

    /// Band suprema in the given order and whether they strictly decrease.
    pub fn band_trend(&self, bands: &[(f64, f64)]) -> Result<(Vec<f64>, bool)> {
        let sups = bands
            .iter()
            .map(|&(a, b)| {
                self.sup_ratio(a, b)
                    .ok_or_else(|| Error::Resolution(format!("no sample in the band [{a}, {b}]")))
            })
            .collect::<Result<Vec<_>>>()?;
        let decreasing = sups.windows(2).all(|w| w[1] < w[0]);
        Ok((sups, decreasing))
    }

    /// Samples with `|E|` above `ε(|f″| + |f′|)`.
    pub fn bound_violations(&self) -> usize {
        self.samples.iter().filter(|s| s.bound.is_some_and(|b| s.discrete > b)).count()
    }
}

/// Vertices of `mesh` with distance from the origin in `[lo, hi]`.
pub fn band_vertices(mesh: &HyperbolicMesh, lo: f64, hi: f64) -> Result<Vec<usize>> {
    let radii = mesh.vertex_radii()?;
    Ok((0..radii.len()).filter(|&v| radii[v] >= lo && radii[v] <= hi).collect())
}

/// `f∘r` gradient flux `√G G⁻¹ ∇_u(f∘r)` at parameter `u`.
fn flux(patch: &ImmersedPatch, f: &dyn RadialFunction, u: &[f64]) -> Result<Vec<Complex64>> {
    let jet = patch.jet(u)?;
    let x = &jet.point;
    let p = phi(x);
    let j = &jet.first;
    let g = j.transpose() * j / (p * p);
    let sqrt_det = g.determinant().sqrt();
    let g_inv = g
        .try_inverse()
        .ok_or_else(|| Error::DegenerateImmersion {
            param: u.to_vec(),
            reason: "induced metric is singular".into(),
        })?;
    let grad_r: DVector<f64> = j.transpose() * x / (p * x.norm());
    let d1 = f.jet(radius_from_origin(x.norm())).d1;
    let w = g_inv * grad_r * sqrt_det;
    Ok(w.iter().map(|c| d1 * c).collect())
}

/// `Δ_Σ(f∘r)` at `u` by fourth-order central differences of the flux.
fn discrete_laplacian(patch: &ImmersedPatch, f: &dyn RadialFunction, u: &[f64]) -> Result<Complex64> {
    let jet = patch.jet(u)?;
    let p = phi(&jet.point);
    let g = jet.first.transpose() * &jet.first / (p * p);
    let sqrt_det = g.determinant().sqrt();
    let stretch = jet.first.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let h = FD_STEP * p / stretch;
    let m = patch.dim();
    let mut div = Complex64::new(0.0, 0.0);
    for a in 0..m {
        let at = |s: f64| -> Result<Complex64> {
            let mut v = u.to_vec();
            v[a] += s * h;
            if !patch.domain().contains(&v) {
                return Err(Error::Resolution(format!(
                    "finite-difference stencil at {u:?} leaves the parameter domain"
                )));
            }
            Ok(flux(patch, f, &v)?[a])
        };
        div += (-at(2.0)? + at(1.0)? * 8.0 - at(-1.0)? * 8.0 + at(-2.0)?) / (12.0 * h);
    }
    Ok(div / sqrt_det)
}

/// Closed-form `E` at `u`.
fn analytic_error(patch: &ImmersedPatch, f: &dyn RadialFunction, u: &[f64]) -> Result<(f64, Complex64)> {
    let geo = LocalGeometry::new(patch, u)?;
    let curv = curvature_from_geometry(&geo, None, f64::INFINITY)?;
    let x = geo.x();
    let xn = x.norm();
    let n: DVector<f64> = geo.normals.transpose() * x / xn;
    let r = radius_from_origin(xn);
    let jet = f.jet(r);
    let tangential_defect = n.norm_squared();
    let mean = curv.h_hyperbolic.dot(&n);
    let e = (jet.d1 / r.tanh() - jet.d2) * tangential_defect + jet.d1 * mean;
    Ok((r, e))
}

/// `E` at the given mesh vertices, with the finite-difference value checked
/// against the closed form. `epsilon`, when given, adds the bound
/// `ε(|f″| + |f′|)` to each sample.
pub fn radial_laplacian_error(
    patch: &ImmersedPatch,
    mesh: &HyperbolicMesh,
    f: &dyn RadialFunction,
    vertices: &[usize],
    epsilon: Option<f64>,
) -> Result<LaplacianErrorReport> {
    let params = mesh
        .params()
        .ok_or_else(|| invalid("the radial Laplacian error needs a mesh generated from the patch"))?;
    if mesh.ambient() != patch.ambient_dim() || mesh.dim() != patch.dim() {
        return Err(invalid("mesh and patch dimensions differ"));
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= params.len()) {
        return Err(invalid(format!("vertex {v} is not in the mesh")));
    }
    let m = patch.dim() as f64;
    let samples = vertices
        .par_iter()
        .map(|&v| {
            let u = &params[v];
            let (r, analytic) = analytic_error(patch, f, u)?;
            if !(r > 0.0) {
                return Err(invalid(format!("vertex {v} sits at the origin, where r is not smooth")));
            }
            let jet = f.jet(r);
            let model = jet.d2 + jet.d1 * ((m - 1.0) / r.tanh());
            let discrete = discrete_laplacian(patch, f, u)? - model;
            let scale = jet.d2.norm() + jet.d1.norm();
            let consistency = (discrete - analytic).norm();
            if consistency > (CONSISTENCY_FRACTION * discrete.norm()).max(RELATIVE_FLOOR * scale) {
                return Err(Error::Resolution(format!(
                    "at vertex {v} (r = {r:.4}) the discrete and closed-form errors differ by {consistency:.3e} \
                     against |E| = {:.3e}",
                    discrete.norm()
                )));
            }
            Ok(LaplacianErrorSample {
                vertex: v,
                r,
                discrete: discrete.norm(),
                analytic: analytic.norm(),
                consistency,
                scale,
                ratio: if scale > 0.0 { discrete.norm() / scale } else { 0.0 },
                bound: epsilon.map(|e| e * scale),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaplacianErrorReport { samples })
}

/// Closed-form `E` at one patch parameter (no mesh needed).
pub fn radial_laplacian_error_at(patch: &ImmersedPatch, f: &dyn RadialFunction, u: &[f64]) -> Result<(f64, f64)> {
    let (r, e) = analytic_error(patch, f, u)?;
    Ok((r, e.norm()))
}
