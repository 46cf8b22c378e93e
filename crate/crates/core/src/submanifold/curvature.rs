//! Frames, second fundamental forms and mean curvature of immersed patches
//! in the Euclidean and the hyperbolic metric of the ball.
//!
//! Both metrics are conformally flat, `g = λ²δ` with `λ = 1` or `λ = 1/φ`,
//! so the ambient connection is `∇_V W = DW + (V·w)W + (W·w)V − (V·W)w`
//! with `w = ∇ln λ` (`w = x/φ` for the hyperbolic metric). Each second
//! fundamental form is computed from this connection in an orthonormal frame
//! of its own metric; the two results are then compared through the
//! conformal relation `H_g^α = φ H_ḡ^ᾱ − m ⟨x, ē_α⟩` (mean curvature is the
//! unnormalized trace).

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::hyperbolic::{phi, BallPoint};
use crate::submanifold::patch::{ChartJet, ImmersedPatch};

/// Upper bound on the condition number of the induced Euclidean Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricTag {
    Euclidean,
    Hyperbolic,
}

/// Orthonormal tangent and normal frames at a chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameData {
    pub point: BallPoint,
    /// `m` vectors, orthonormal in the tagged metric.
    pub tangent: Vec<DVector<f64>>,
    /// `n + 1 − m` vectors, orthonormal in the tagged metric.
    pub normal: Vec<DVector<f64>>,
    pub tag: MetricTag,
}

/// Everything needed for curvature at one parameter value.
#[derive(Clone, Debug)]
pub(crate) struct LocalGeometry {
    pub jet: ChartJet,
    pub phi: f64,
    /// `Ā` with `Āᵀ Ḡ Ā = I`, where `Ḡ = JᵀJ`.
    pub abar: DMatrix<f64>,
    /// Euclidean orthonormal normal frame, one column per normal direction.
    pub normals: DMatrix<f64>,
}

impl LocalGeometry {
    pub fn new(patch: &ImmersedPatch, u: &[f64]) -> Result<Self> {
        let jet = patch.jet(u)?;
        Self::from_jet(jet, u)
    }

    pub fn from_jet(jet: ChartJet, u: &[f64]) -> Result<Self> {
        let degenerate = |reason: String| Error::DegenerateImmersion { param: u.to_vec(), reason };
        let x = &jet.point;
        if x.norm() >= 1.0 {
            return Err(invalid(format!("chart point at parameter {u:?} leaves the ball")));
        }
        let j = &jet.first;
        let gram = j.transpose() * j;
        let eig = SymmetricEigen::new(gram.clone());
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        if !(min > 0.0) || max / min > MAX_GRAM_CONDITION {
            return Err(degenerate(format!("Gram matrix condition number {:.3e}", max / min)));
        }
        let chol = gram
            .clone()
            .cholesky()
            .ok_or_else(|| degenerate("Gram matrix is not positive definite".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| degenerate("Cholesky factor is singular".into()))?;
        let abar = l_inv.transpose();
        let tangent = j * &abar;
        let normals = complete_basis(&tangent);
        Ok(Self {
            phi: phi(x),
            jet,
            abar,
            normals,
        })
    }

    pub fn dim(&self) -> usize {
        self.abar.ncols()
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.jet.point
    }

    /// Euclidean orthonormal tangent frame as columns.
    pub fn tangent(&self) -> DMatrix<f64> {
        &self.jet.first * &self.abar
    }

    /// Covariant second derivative `∇_{∂_k}∂_l X` for the given metric.
    fn covariant_second(&self, tag: MetricTag, k: usize, l: usize) -> DVector<f64> {
        let d = self.jet.second_at(k, l).clone();
        match tag {
            MetricTag::Euclidean => d,
            MetricTag::Hyperbolic => {
                let w = self.x() / self.phi;
                let v = self.jet.first.column(k);
                let u = self.jet.first.column(l);
                d + u * v.dot(&w) + v * u.dot(&w) - &w * v.dot(&u)
            }
        }
    }

    /// Second fundamental form in the tagged orthonormal frames, one
    /// `m × m` matrix per normal. Normals are `ē_α` (Euclidean) or
    /// `e_α = φē_α` (hyperbolic), each optionally rotated by `rotation`.
    pub fn second_fundamental_form(&self, tag: MetricTag, rotation: Option<&DMatrix<f64>>) -> Vec<DMatrix<f64>> {
        let m = self.dim();
        let normals = match rotation {
            Some(q) => &self.normals * q,
            None => self.normals.clone(),
        };
        // Metric scale λ, frame scale 1/λ: tangent frame A = Ā/λ, normal ē/λ.
        let lambda = match tag {
            MetricTag::Euclidean => 1.0,
            MetricTag::Hyperbolic => 1.0 / self.phi,
        };
        let a = &self.abar / lambda;
        let mut cov = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                cov.push(self.covariant_second(tag, k, l));
            }
        }
        (0..normals.ncols())
            .map(|alpha| {
                let nu = normals.column(alpha) / lambda;
                // g(V, e_α) = λ² V·e_α
                let d = DMatrix::from_fn(m, m, |k, l| lambda * lambda * cov[k * m + l].dot(&nu));
                a.transpose() * d * &a
            })
            .collect()
    }
}

/// Orthonormal basis of the Euclidean orthogonal complement of the columns
/// of `tangent` (assumed orthonormal), completed greedily from the standard
/// basis in a deterministic order.
fn complete_basis(tangent: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = tangent.nrows();
    let m = tangent.ncols();
    let mut basis: Vec<DVector<f64>> = (0..m).map(|i| tangent.column(i).into_owned()).collect();
    let mut normals = Vec::with_capacity(dim - m);
    while normals.len() < dim - m {
        let mut best: Option<DVector<f64>> = None;
        let mut best_norm = 0.0;
        for k in 0..dim {
            let mut v = DVector::zeros(dim);
            v[k] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&v);
                    v -= b * c;
                }
            }
            let n = v.norm();
            if n > best_norm + 1e-12 {
                best_norm = n;
                best = Some(v / n);
            }
        }
        let v = best.expect("complement is nonempty while normals are missing");
        basis.push(v.clone());
        normals.push(v);
    }
    DMatrix::from_columns(&normals)
}

/// Orthonormal frames of the tagged metric at parameter `u`.
pub fn frame_data(patch: &ImmersedPatch, u: &[f64], tag: MetricTag) -> Result<FrameData> {
    let geo = LocalGeometry::new(patch, u)?;
    let scale = match tag {
        MetricTag::Euclidean => 1.0,
        MetricTag::Hyperbolic => geo.phi,
    };
    let t = geo.tangent() * scale;
    let n = &geo.normals * scale;
    Ok(FrameData {
        point: BallPoint::new(geo.x().clone())?,
        tangent: (0..t.ncols()).map(|i| t.column(i).into_owned()).collect(),
        normal: (0..n.ncols()).map(|i| n.column(i).into_owned()).collect(),
        tag,
    })
}

/// Second fundamental form at `u` in the orthonormal frames of `tag`.
pub fn second_fundamental_form(patch: &ImmersedPatch, u: &[f64], tag: MetricTag) -> Result<Vec<DMatrix<f64>>> {
    Ok(LocalGeometry::new(patch, u)?.second_fundamental_form(tag, None))
}

/// Mean curvature in both metrics and the conformal consistency residual.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub point: BallPoint,
    /// Components `H_ḡ^ᾱ` in the Euclidean normal frame.
    pub h_euclidean: DVector<f64>,
    /// Components `H_g^α` in the hyperbolic normal frame `e_α = φē_α`.
    pub h_hyperbolic: DVector<f64>,
    pub norm_euclidean: f64,
    pub norm_hyperbolic: f64,
    /// `max_α |H_ḡ^ᾱ − φ⁻¹(H_g^α − m ē_α(φ))|`.
    pub conformal_residual: f64,
    pub tolerance: f64,
    pub violation: bool,
}

/// Residual tolerance for analytic and numerically differentiated patches.
pub fn conformal_tolerance(patch: &ImmersedPatch) -> f64 {
    if patch.has_analytic_derivatives() {
        1e-6
    } else {
        1e-3
    }
}

pub(crate) fn curvature_from_geometry(
    geo: &LocalGeometry,
    rotation: Option<&DMatrix<f64>>,
    tolerance: f64,
) -> Result<CurvatureReport> {
    let m = geo.dim() as f64;
    let trace = |forms: Vec<DMatrix<f64>>| DVector::from_iterator(forms.len(), forms.iter().map(|f| f.trace()));
    let he = trace(geo.second_fundamental_form(MetricTag::Euclidean, rotation));
    let hh = trace(geo.second_fundamental_form(MetricTag::Hyperbolic, rotation));
    let normals = match rotation {
        Some(q) => &geo.normals * q,
        None => geo.normals.clone(),
    };
    let mut residual: f64 = 0.0;
    for alpha in 0..he.len() {
        // ē_α(φ) = ⟨grad φ, ē_α⟩ = −⟨x, ē_α⟩
        let dphi = -geo.x().dot(&normals.column(alpha));
        let predicted = (hh[alpha] - m * dphi) / geo.phi;
        residual = residual.max((he[alpha] - predicted).abs());
    }
    Ok(CurvatureReport {
        point: BallPoint::new(geo.x().clone())?,
        norm_euclidean: he.norm(),
        norm_hyperbolic: hh.norm(),
        h_euclidean: he,
        h_hyperbolic: hh,
        conformal_residual: residual,
        tolerance,
        violation: residual > tolerance,
    })
}

pub fn mean_curvature(patch: &ImmersedPatch, u: &[f64]) -> Result<CurvatureReport> {
    let geo = LocalGeometry::new(patch, u)?;
    curvature_from_geometry(&geo, None, conformal_tolerance(patch))
}

/// [`mean_curvature`] with the normal frame rotated by the orthogonal
/// `codim × codim` matrix `rotation`.
pub fn mean_curvature_in_frame(patch: &ImmersedPatch, u: &[f64], rotation: &DMatrix<f64>) -> Result<CurvatureReport> {
    let geo = LocalGeometry::new(patch, u)?;
    let codim = geo.normals.ncols();
    if rotation.nrows() != codim || rotation.ncols() != codim {
        return Err(invalid(format!("normal rotation must be {codim} x {codim}")));
    }
    let defect = (rotation.transpose() * rotation - DMatrix::identity(codim, codim)).norm();
    if defect > 1e-10 {
        return Err(invalid("normal rotation is not orthogonal"));
    }
    curvature_from_geometry(&geo, Some(rotation), conformal_tolerance(patch))
}

/// Norm of the Euclidean normal component of `grad φ = −x`; zero exactly
/// when the patch contains the radial direction, and tends to zero at the
/// ideal boundary exactly when the patch meets it orthogonally.
pub fn orthogonality_defect(patch: &ImmersedPatch, u: &[f64]) -> Result<f64> {
    let geo = LocalGeometry::new(patch, u)?;
    let norm = geo.x().norm();
    if norm <= 0.9 {
        return Err(invalid(format!(
            "orthogonality defect is evaluated near the ideal boundary (|x| > 0.9), got |x| = {norm}"
        )));
    }
    let proj = geo.normals.transpose() * geo.x();
    Ok(proj.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::patch::{orthogonal_cap, tilted_cap, totally_geodesic_disk, ParamDomain};

    #[test]
    fn flat_disk_is_totally_geodesic() {
        let p = totally_geodesic_disk(2, 3).unwrap();
        for u in [[0.1, 0.2], [0.5, -0.3], [0.0, 0.99]] {
            let r = mean_curvature(&p, &u).unwrap();
            assert!(r.norm_hyperbolic < 1e-12 && r.norm_euclidean < 1e-12);
        }
    }

    #[test]
    fn orthogonal_cap_is_minimal() {
        let p = orthogonal_cap(2, 0.7).unwrap();
        let r = mean_curvature(&p, &[0.2, 0.1]).unwrap();
        assert!(r.norm_hyperbolic < 1e-12, "{}", r.norm_hyperbolic);
        assert!((r.norm_euclidean - 2.0 / 0.7).abs() < 1e-10);
        assert!(r.conformal_residual < 1e-12);
    }

    #[test]
    fn tilted_cap_constant_curvature() {
        let theta = std::f64::consts::FRAC_PI_3;
        let p = tilted_cap(2, theta).unwrap();
        for u in [[0.0, 0.0], [0.4, 0.3], [0.9, -0.1]] {
            let r = mean_curvature(&p, &u).unwrap();
            assert!((r.norm_hyperbolic - 2.0 * theta.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_form_is_scaled_identity() {
        let rho: f64 = 0.5;
        let patch = ImmersedPatch::new(
            "sphere",
            2,
            3,
            ParamDomain::Box { lo: vec![0.3, 0.0], hi: vec![2.8, 6.2] },
            move |u: &[f64]| {
                let (s, c) = u[0].sin_cos();
                DVector::from_vec(vec![rho * s * u[1].cos(), rho * s * u[1].sin(), rho * c])
            },
        )
        .unwrap();
        let u = [1.1, 0.7];
        let geo = LocalGeometry::new(&patch, &u).unwrap();
        let inward = -geo.x().clone();
        let sign = geo.normals.column(0).dot(&inward).signum();
        let form = geo.second_fundamental_form(MetricTag::Euclidean, None);
        let expected = DMatrix::identity(2, 2) / rho;
        assert!((&form[0] * sign - expected).norm() < 1e-5);
    }
}
