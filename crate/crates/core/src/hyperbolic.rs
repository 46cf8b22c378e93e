//! Poincaré ball and upper half-space models of hyperbolic space.
//!
//! The ball carries the metric `g = φ⁻² δ` with `φ(x) = (1 − |x|²)/2`; the
//! half-space carries `y⁻² δ`. The isometry between them sends a chosen
//! anchor point of the unit sphere to infinity and the origin to height 1.

use nalgebra::DVector;

use crate::error::{invalid, Error, Result};

/// Points whose norm is within this distance of 1 are flagged as near the boundary.
pub const NEAR_BOUNDARY_TOL: f64 = 1e-14;

/// Evaluations of conformal quantities are restricted to `|x| ≤ BOUNDARY_CUTOFF`.
pub const BOUNDARY_CUTOFF: f64 = 1.0 - 1e-9;

/// A point of the open unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    coords: DVector<f64>,
    near_boundary: bool,
}

impl BallPoint {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("ball point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("ball point has non-finite coordinates"));
        }
        let norm = coords.norm();
        if norm >= 1.0 {
            return Err(invalid(format!("ball point has norm {norm} >= 1")));
        }
        Ok(Self {
            near_boundary: norm >= 1.0 - NEAR_BOUNDARY_TOL,
            coords,
        })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn origin(ambient_dim: usize) -> Self {
        Self {
            coords: DVector::zeros(ambient_dim),
            near_boundary: false,
        }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Ambient dimension n + 1.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn is_near_boundary(&self) -> bool {
        self.near_boundary
    }
}

/// A point `(x, y)` of the upper half-space, `y > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpacePoint {
    pub x: DVector<f64>,
    pub y: f64,
}

impl HalfSpacePoint {
    pub fn new(x: DVector<f64>, y: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(invalid(format!("half-space height must be positive, got {y}")));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(invalid("half-space point has non-finite coordinates"));
        }
        Ok(Self { x, y })
    }

    /// Horizontal dimension n.
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The point as a vector of ℝ^{n+1} with the height last.
    pub fn to_vector(&self) -> DVector<f64> {
        let n = self.x.len();
        DVector::from_fn(n + 1, |i, _| if i < n { self.x[i] } else { self.y })
    }
}

/// Value and Euclidean gradient of `φ(x) = (1 − |x|²)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalFactor {
    pub value: f64,
    pub gradient: DVector<f64>,
}

pub fn conformal_factor(p: &BallPoint) -> ConformalFactor {
    ConformalFactor {
        value: phi(p.coords()),
        gradient: -p.coords(),
    }
}

/// `φ(x) = (1 − |x|²)/2`, evaluated as `(1 − |x|)(1 + |x|)/2` to keep relative
/// accuracy near the sphere.
pub fn phi(x: &DVector<f64>) -> f64 {
    let n = x.norm();
    0.5 * (1.0 - n) * (1.0 + n)
}

/// Hyperbolic distance in the ball model.
pub fn hyperbolic_distance(p: &BallPoint, q: &BallPoint) -> f64 {
    ball_distance(p.coords(), q.coords())
}

/// Ball-model distance on raw coordinate vectors (no validation).
pub fn ball_distance(p: &DVector<f64>, q: &DVector<f64>) -> f64 {
    let diff = (p - q).norm();
    if diff == 0.0 {
        return 0.0;
    }
    let denom = (2.0 * phi(p) * 2.0 * phi(q)).sqrt();
    2.0 * (diff / denom).asinh()
}

/// Hyperbolic distance from the origin to a point at Euclidean norm `s < 1`.
pub fn radius_from_origin(s: f64) -> f64 {
    2.0 * s.atanh()
}

/// Hyperbolic distance in the half-space model.
pub fn halfspace_distance(p: &HalfSpacePoint, q: &HalfSpacePoint) -> f64 {
    let dx2 = (&p.x - &q.x).norm_squared();
    let dy = p.y - q.y;
    let diff = (dx2 + dy * dy).sqrt();
    if diff == 0.0 {
        return 0.0;
    }
    2.0 * (diff / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Isometry between the ball and the half-space sending `anchor` to infinity.
///
/// The anchor is first rotated onto `e_{n+1}` by a Householder reflection;
/// the inversion `x ↦ e + 2(x − e)/|x − e|²` then maps the ball onto
/// `{x_{n+1} < 0}`, and the height is `y = −x_{n+1}`. The origin lands at
/// `(0, 1)`.
#[derive(Clone, Debug)]
pub struct HalfSpaceChart {
    anchor: DVector<f64>,
    householder: Option<DVector<f64>>,
}

impl HalfSpaceChart {
    pub fn new(anchor: DVector<f64>) -> Result<Self> {
        let len = anchor.len();
        if len < 2 {
            return Err(invalid("anchor needs ambient dimension at least 2"));
        }
        let norm = anchor.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("anchor must be a unit vector, norm is {norm}")));
        }
        let mut v = anchor.clone();
        v[len - 1] -= 1.0;
        let householder = if v.norm() < 1e-15 { None } else { Some(&v / v.norm()) };
        Ok(Self { anchor, householder })
    }

    /// Chart anchored at the north pole `e_{n+1}`.
    pub fn north(ambient_dim: usize) -> Self {
        let mut e = DVector::zeros(ambient_dim);
        e[ambient_dim - 1] = 1.0;
        Self { anchor: e, householder: None }
    }

    pub fn anchor(&self) -> &DVector<f64> {
        &self.anchor
    }

    fn reflect(&self, x: &DVector<f64>) -> DVector<f64> {
        match &self.householder {
            None => x.clone(),
            Some(v) => x - v * (2.0 * v.dot(x)),
        }
    }

    fn invert(x: &DVector<f64>) -> Option<DVector<f64>> {
        let n = x.len();
        let mut d = x.clone();
        d[n - 1] -= 1.0;
        let d2 = d.norm_squared();
        if d2 == 0.0 {
            return None;
        }
        let mut out = d * (2.0 / d2);
        out[n - 1] += 1.0;
        Some(out)
    }

    /// Maps a ball point (or a point of the closed ball other than the anchor)
    /// given as raw coordinates; the height may be zero for boundary points.
    pub fn map_coords(&self, p: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        if (p - &self.anchor).norm() < NEAR_BOUNDARY_TOL {
            return Err(Error::NearSingularTransform(
                "point within 1e-14 of the anchor maps to infinity".into(),
            ));
        }
        let rotated = self.reflect(p);
        let img = Self::invert(&rotated)
            .ok_or_else(|| Error::NearSingularTransform("point coincides with the anchor".into()))?;
        let n = img.len() - 1;
        Ok((img.rows(0, n).into_owned(), -img[n]))
    }

    pub fn to_halfspace(&self, p: &BallPoint) -> Result<HalfSpacePoint> {
        let (x, y) = self.map_coords(p.coords())?;
        if !(y > 0.0) {
            return Err(Error::NearSingularTransform(format!(
                "image height {y} is not positive"
            )));
        }
        Ok(HalfSpacePoint { x, y })
    }

    pub fn to_ball(&self, q: &HalfSpacePoint) -> Result<BallPoint> {
        let n = q.x.len();
        let mut img = DVector::zeros(n + 1);
        img.rows_mut(0, n).copy_from(&q.x);
        img[n] = -q.y;
        let rotated = Self::invert(&img)
            .ok_or_else(|| Error::NearSingularTransform("point at infinity".into()))?;
        BallPoint::new(self.reflect(&rotated))
    }
}

/// Ball-to-half-space conversion with the given anchor.
pub fn ball_to_halfspace(p: &BallPoint, anchor: &DVector<f64>) -> Result<HalfSpacePoint> {
    if anchor.len() != p.dim() {
        return Err(invalid("anchor and point have different dimensions"));
    }
    HalfSpaceChart::new(anchor.clone())?.to_halfspace(p)
}

/// Inverse of [`ball_to_halfspace`].
pub fn halfspace_to_ball(q: &HalfSpacePoint, anchor: &DVector<f64>) -> Result<BallPoint> {
    if anchor.len() != q.dim() + 1 {
        return Err(invalid("anchor and point have incompatible dimensions"));
    }
    HalfSpaceChart::new(anchor.clone())?.to_ball(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(c: &[f64]) -> BallPoint {
        BallPoint::from_slice(c).unwrap()
    }

    #[test]
    fn conformal_factor_closed_form() {
        let f = conformal_factor(&bp(&[0.6, 0.0, 0.0]));
        assert!((f.value - 0.32).abs() < 1e-15);
        assert_eq!(f.gradient.as_slice(), &[-0.6, 0.0, 0.0]);
        let o = conformal_factor(&BallPoint::origin(3));
        assert_eq!(o.value, 0.5);
    }

    #[test]
    fn near_boundary_flag() {
        assert!(bp(&[1.0 - 1e-15, 0.0]).is_near_boundary());
        assert!(!bp(&[0.999, 0.0]).is_near_boundary());
        assert!(BallPoint::from_slice(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn radial_distance() {
        for t in [0.5, 1.0, 2.0] {
            let d = hyperbolic_distance(&BallPoint::origin(3), &bp(&[(t / 2.0f64).tanh(), 0.0, 0.0]));
            assert!((d - t).abs() < 1e-14, "{d} vs {t}");
        }
    }

    #[test]
    fn origin_maps_to_unit_height() {
        let q = ball_to_halfspace(&BallPoint::origin(3), &DVector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        assert!(q.x.norm() < 1e-15);
        assert!((q.y - 1.0).abs() < 1e-15);
        let anchor = DVector::from_vec(vec![0.6, 0.0, 0.8]);
        let q = ball_to_halfspace(&BallPoint::origin(3), &anchor).unwrap();
        assert!(q.x.norm() < 1e-15 && (q.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn anchor_is_singular() {
        let anchor = DVector::from_vec(vec![0.0, 1.0]);
        let p = bp(&[0.0, 1.0 - 1e-15]);
        assert!(matches!(
            ball_to_halfspace(&p, &anchor),
            Err(Error::NearSingularTransform(_))
        ));
    }

    #[test]
    fn boundary_circle_through_anchor_goes_to_floor() {
        let chart = HalfSpaceChart::north(3);
        for k in 1..20 {
            let t = k as f64 * 0.3;
            let p = DVector::from_vec(vec![t.sin(), 0.0, t.cos()]);
            let (_, y) = chart.map_coords(&p).unwrap();
            assert!(y.abs() < 1e-10);
        }
    }
}
