//! Cones `C = {τz : z ∈ Γ, τ ∈ (0, 1]}` over links on the ideal sphere:
//! the radial Laplacian, Weyl-sequence residuals, and volume comparison
//! with submanifolds asymptotic to the same link.
//!
//! For a radial function `f(r)` with `r = 2 artanh|x|` the cone volume
//! element is `sinh^{m−1}(r) dr dω`, so every cone integral factorizes as
//! `ω(Γ) × ∫ … sinh^{m−1}(t) dt`. The direct two-dimensional path
//! ([`direct_cone_check`]) recomputes the same integrals from the induced
//! metric of the chart `(r, t) ↦ tanh(r/2) γ(t)` without that reduction.

use std::f64::consts::PI;

use nalgebra::{DVector, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary::BoundaryCurve;
use crate::error::{invalid, Error, Result};
use crate::hyperbolic::{phi, BOUNDARY_CUTOFF};
use crate::radial::quadrature::{sinh_pow, QuadratureRule};
use crate::radial::{
    epsilon_window, mollify, profile_pieces, window_integrals, Kernel, MollificationReport, QuadratureConfig,
    RadialFunction, RadialProfile, SpectralParams,
};
use crate::submanifold::{ImmersedPatch, ParamDomain};

/// Arclength resolution used for the link length.
pub const LINK_RESOLUTION: f64 = 1e-4;
/// Samples must lie on the unit sphere within this tolerance.
const SPHERE_TOL: f64 = 1e-9;

/// The link `Γ^{m−1}` of a cone.
#[derive(Clone, Debug)]
pub enum Link {
    /// A curve on the unit sphere (`m = 2`).
    Curve(BoundaryCurve),
    /// The round sphere `∂𝔹 ∩ span(e₁, …, e_m)` of dimension `m − 1`.
    EquatorialSphere { dim: usize, ambient: usize },
}

#[derive(Clone, Debug)]
pub struct Cone {
    link: Link,
    m: usize,
    omega: f64,
}

/// Volume of the unit `k`-sphere, `2π^{(k+1)/2}/Γ((k+1)/2)`, by the
/// recursion `|S^k| = 2π/(k−1) |S^{k−2}|`.
fn sphere_volume(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k - 1) as f64 * sphere_volume(k - 2),
    }
}

impl Cone {
    /// Cone over a curve lying on the unit sphere of `ℝ^{n+1}`, `n + 1 ≥ 3`.
    pub fn over_curve(curve: BoundaryCurve) -> Result<Self> {
        if curve.ambient() < 3 {
            return Err(invalid("cone links live on the unit sphere of R^{n+1} with n + 1 >= 3"));
        }
        for (i, z) in curve.samples().iter().enumerate() {
            if (z.norm() - 1.0).abs() > SPHERE_TOL {
                return Err(invalid(format!("link sample {i} is off the unit sphere (|z| = {})", z.norm())));
            }
        }
        let omega = curve.length(LINK_RESOLUTION);
        if !(omega > 0.0) {
            return Err(invalid("link has zero length"));
        }
        Ok(Self {
            link: Link::Curve(curve),
            m: 2,
            omega,
        })
    }

    /// Cone over the circle `{|z| = 1, z₃ = cos α}` in `𝔹³`; `α = π/2` is
    /// the equator, whose cone is the totally geodesic disk.
    pub fn latitude_circle(alpha: f64, count: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= PI / 2.0) {
            return Err(invalid(format!("latitude angle must lie in (0, pi/2], got {alpha}")));
        }
        let (sa, ca) = alpha.sin_cos();
        let curve = BoundaryCurve::circle(
            DVector::from_vec(vec![0.0, 0.0, ca]),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
            sa,
            count,
        )?;
        Self::over_curve(curve)
    }

    /// Cone over the round sphere of dimension `m − 1` in the first `m`
    /// coordinates of `ℝ^{ambient}`, with closed-form `ω`.
    pub fn equatorial_sphere(m: usize, ambient: usize) -> Result<Self> {
        if m < 2 || ambient <= m {
            return Err(invalid(format!("need 2 <= m < ambient, got m = {m}, ambient = {ambient}")));
        }
        Ok(Self {
            link: Link::EquatorialSphere { dim: m - 1, ambient },
            m,
            omega: sphere_volume(m - 1),
        })
    }

    /// Dimension `m` of the cone.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Link volume `ω(Γ)`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    /// The generator point `τ z` for a link point `z`.
    pub fn generator(&self, tau: f64, z: &DVector<f64>) -> Result<DVector<f64>> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid(format!("cone parameter must lie in (0, 1], got {tau}")));
        }
        Ok(z * tau)
    }
}

/// Radial part `f″(r) + (m−1) coth(r) f′(r)` of the cone Laplacian applied to
/// `f ∘ r`.
pub fn cone_radial_laplacian(f: &dyn RadialFunction, m: usize, r: f64) -> Result<Complex64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("cone Laplacian needs r > 0, got {r}")));
    }
    let j = f.jet(r);
    Ok(j.d2 + j.d1 * ((m - 1) as f64 / r.tanh()))
}

/// One Weyl-sequence term `φ_k = υ_{R_k}` on the cone.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylRow {
    pub k: usize,
    pub window: f64,
    /// `∫_C |Δφ_k + λφ_k|²`.
    pub residual: f64,
    /// `∫_C |φ_k|²`.
    pub norm: f64,
    pub ratio: f64,
    /// `ε_{R_k}` from the window estimate.
    pub epsilon_window: f64,
    /// `4ε_{R_k}`.
    pub epsilon_k: f64,
    /// `residual ≤ ε_k · norm`.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeWeylReport {
    pub m: usize,
    pub lambda: f64,
    pub omega: f64,
    pub smoothing: Option<(Kernel, f64)>,
    pub rows: Vec<WeylRow>,
    /// Budgets of each mollified term (empty without smoothing).
    pub mollification: Vec<MollificationReport>,
    /// Whether `residual/norm` strictly decreases along the sequence.
    pub ratios_decreasing: bool,
}

impl ConeWeylReport {
    pub fn all_pass(&self) -> bool {
        self.ratios_decreasing && self.rows.iter().all(|r| r.pass)
    }
}

pub(crate) fn term_profile(
    m: usize,
    lambda: f64,
    window: f64,
    smoothing: Option<(Kernel, f64)>,
    cfg: &QuadratureConfig,
) -> Result<(RadialProfile, Option<MollificationReport>)> {
    let raw = RadialProfile::windowed(m, lambda, window)?;
    match smoothing {
        None => Ok((raw, None)),
        Some((kernel, sigma)) => {
            let (smooth, report) = mollify(&raw, kernel, sigma, None, cfg)?;
            Ok((smooth, Some(report)))
        }
    }
}

/// Residuals of the Weyl sequence `υ_{R_k}` on the cone, computed by the
/// factorized quadrature `ω(Γ) ∫ … sinh^{m−1}`. The windows must satisfy
/// `R_{k+1} > 2R_k`; with `smoothing` each term is mollified and its
/// budgets enforced.
pub fn cone_weyl_residual(
    cone: &Cone,
    lambda: f64,
    windows: &[f64],
    smoothing: Option<(Kernel, f64)>,
    cfg: &QuadratureConfig,
) -> Result<ConeWeylReport> {
    let m = cone.dim();
    SpectralParams::new(m, lambda)?;
    if windows.is_empty() {
        return Err(invalid("window sequence is empty"));
    }
    if let Some(w) = windows.windows(2).find(|w| !(w[1] > 2.0 * w[0])) {
        return Err(invalid(format!("windows must satisfy R_(k+1) > 2 R_k, got {} after {}", w[1], w[0])));
    }
    let omega = cone.omega();
    let terms: Vec<Result<(WeylRow, Option<MollificationReport>)>> = windows
        .par_iter()
        .enumerate()
        .map(|(k, &window)| {
            let (profile, report) = term_profile(m, lambda, window, smoothing, cfg)?;
            let ints = window_integrals(&profile, cfg)?;
            let residual = omega * ints.residual;
            let norm = omega * ints.norm;
            let eps = epsilon_window(m, lambda, window)?;
            Ok((
                WeylRow {
                    k,
                    window,
                    residual,
                    norm,
                    ratio: residual / norm,
                    epsilon_window: eps,
                    epsilon_k: 4.0 * eps,
                    pass: residual <= 4.0 * eps * norm,
                },
                report,
            ))
        })
        .collect();
    let mut rows = Vec::with_capacity(terms.len());
    let mut mollification = Vec::new();
    for term in terms {
        let (row, report) = term?;
        rows.push(row);
        mollification.extend(report);
    }
    let ratios_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    Ok(ConeWeylReport {
        m,
        lambda,
        omega,
        smoothing,
        rows,
        mollification,
        ratios_decreasing,
    })
}

/// Factorized and direct two-dimensional values of the residual and norm
/// integrals for one Weyl term on a curve-link cone.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectCheck {
    pub window: f64,
    pub factorized_residual: f64,
    pub factorized_norm: f64,
    pub direct_residual: f64,
    pub direct_norm: f64,
}

impl DirectCheck {
    /// Largest relative disagreement of the two paths.
    pub fn relative_difference(&self) -> f64 {
        let r = (self.direct_residual - self.factorized_residual).abs() / self.factorized_residual.abs();
        let n = (self.direct_norm - self.factorized_norm).abs() / self.factorized_norm.abs();
        r.max(n)
    }
}

/// Panels over the link parameter for the direct check.
const LINK_PANELS: usize = 48;
/// Step of the fourth-order differences of the metric coefficients.
const METRIC_STEP: f64 = 1e-3;

/// Recomputes the Weyl term integrals on a curve-link cone by tensor
/// Gauss–Legendre quadrature over `(r, t)`, applying the Laplace–Beltrami
/// operator of the induced hyperbolic metric of `(r, t) ↦ tanh(r/2) γ(t)`
/// in ball coordinates. The support must stay below the ball cutoff.
pub fn direct_cone_check(
    cone: &Cone,
    lambda: f64,
    window: f64,
    smoothing: Option<(Kernel, f64)>,
    cfg: &QuadratureConfig,
) -> Result<DirectCheck> {
    let curve = match cone.link() {
        Link::Curve(c) => c,
        Link::EquatorialSphere { .. } => {
            return Err(invalid("the direct check integrates over curve links (m = 2) only"));
        }
    };
    let (profile, _) = term_profile(2, lambda, window, smoothing, cfg)?;
    let (_, hi) = profile.support();
    if (hi / 2.0).tanh() > BOUNDARY_CUTOFF {
        return Err(Error::Precondition(format!(
            "support reaches r = {hi}, beyond the resolvable radius {:.2}",
            crate::hyperbolic::radius_from_origin(BOUNDARY_CUTOFF)
        )));
    }
    let ints = window_integrals(&profile, cfg)?;
    let omega = cone.omega();

    let r_rule = QuadratureRule::from_pieces(&profile_pieces(&profile, cfg), cfg.order)?.refined();
    let (a, b) = curve.interval();
    let t_rule = QuadratureRule::with_order(a, b, LINK_PANELS, cfg.order)?;

    // Euclidean chart Jacobian at (r, t): columns ∂_r x, ∂_t x.
    let jacobian = |r: f64, t: f64| -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let tau = (0.5 * r).tanh();
        let c = (0.5 * r).cosh();
        let dtau = 0.5 / (c * c);
        let z = curve.point_at(t);
        let v = curve.velocity_at(t);
        (&z * tau, &z * dtau, &v * tau)
    };
    // √ḡ ḡ^{rr} and √ḡ ḡ^{rt} of the Euclidean induced metric.
    let flux = |r: f64, t: f64| -> (f64, f64, f64) {
        let (_, xr, xt) = jacobian(r, t);
        let g = Matrix2::new(xr.dot(&xr), xr.dot(&xt), xt.dot(&xr), xt.dot(&xt));
        let det = g.determinant();
        let sq = det.sqrt();
        (sq * g[(1, 1)] / det, -sq * g[(0, 1)] / det, sq)
    };
    let d4 = |f: &dyn Fn(f64) -> f64, x: f64| -> f64 {
        let h = METRIC_STEP;
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    };

    let nodes: Vec<(f64, f64)> = r_rule.nodes().iter().copied().zip(r_rule.weights().iter().copied()).collect();
    let sums: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(r, wr)| {
            let jet = profile.jet(r);
            let mut res = 0.0;
            let mut nrm = 0.0;
            for (&t, &wt) in t_rule.nodes().iter().zip(t_rule.weights()) {
                let (x, _, _) = jacobian(r, t);
                let ph = phi(&x);
                let (a_rr, _, sq) = flux(r, t);
                let da_r = d4(&|s| flux(s, t).0, r);
                let db_t = d4(&|s| flux(r, s).1, t);
                // Δ_g u = φ² Δ_ḡ u in two dimensions.
                let lap_bar = (jet.d2 * a_rr + jet.d1 * (da_r + db_t)) / sq;
                let lap = lap_bar * (ph * ph);
                let dvol = sq / (ph * ph);
                res += wr * wt * (lap + jet.value * lambda).norm_sqr() * dvol;
                nrm += wr * wt * jet.value.norm_sqr() * dvol;
            }
            (res, nrm)
        })
        .collect();
    let direct_residual = sums.iter().map(|s| s.0).sum();
    let direct_norm = sums.iter().map(|s| s.1).sum();
    Ok(DirectCheck {
        window,
        factorized_residual: omega * ints.residual,
        factorized_norm: omega * ints.norm,
        direct_residual,
        direct_norm,
    })
}

/// Resolution of the Σ-side ray quadrature in [`volume_comparison`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeQuadrature {
    /// Equally spaced ray directions in the parameter disk.
    pub rays: usize,
    /// Gauss–Legendre panels in `r` over the support.
    pub panels: usize,
    pub order: usize,
}

impl Default for VolumeQuadrature {
    fn default() -> Self {
        Self {
            rays: 256,
            panels: 16,
            order: 10,
        }
    }
}

/// `∫_Σ f`, `∫_C f` and the relative deviation `ε̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeComparison {
    pub sigma_integral: f64,
    pub cone_integral: f64,
    pub eps_hat: f64,
}

/// Compares `∫_Σ f(r)` with `∫_C f(r)`, `r` the distance from the origin,
/// for `f` supported outside the ball of radius `R`.
///
/// The Σ side integrates over each patch's parameter disk along rays from
/// its centre, using `r` itself as the ray variable (the parameter where
/// `|x| = tanh(r/2)` is found by bisection), so the quadrature resolves the
/// exponential growth of the hyperbolic area element. Two-dimensional
/// patches with disk domains and `|x|` increasing along rays only.
pub fn volume_comparison(
    patches: &[ImmersedPatch],
    cone: &Cone,
    f: &dyn RadialFunction,
    radius: f64,
    quad: &VolumeQuadrature,
) -> Result<VolumeComparison> {
    let (lo, hi) = f.support();
    if !(hi > lo) {
        return Ok(VolumeComparison {
            sigma_integral: 0.0,
            cone_integral: 0.0,
            eps_hat: 0.0,
        });
    }
    if lo < radius {
        return Err(Error::Precondition(format!(
            "profile support starts at {lo}, inside the excluded ball of radius {radius}"
        )));
    }
    if !hi.is_finite() || (hi / 2.0).tanh() > BOUNDARY_CUTOFF {
        return Err(Error::Precondition(format!("profile support must end below the resolvable radius, got {hi}")));
    }
    let rule = QuadratureRule::with_order(lo, hi, quad.panels, quad.order)?;
    let m = cone.dim();
    let cone_integral = cone.omega()
        * rule.integrate(|t| f.jet(t).value.re * sinh_pow(t, (m - 1) as f64));

    let mut sigma_integral = 0.0;
    for patch in patches {
        if patch.dim() != 2 {
            return Err(invalid("volume comparison integrates two-dimensional patches"));
        }
        let center = match patch.domain() {
            ParamDomain::Disk { center, .. } => center.clone(),
            ParamDomain::Box { .. } => return Err(invalid("volume comparison needs disk parameter domains")),
        };
        let dtheta = 2.0 * PI / quad.rays as f64;
        let per_ray: Vec<Result<f64>> = (0..quad.rays)
            .into_par_iter()
            .map(|j| {
                let a = dtheta * (j as f64 + 0.5);
                let dir = [a.cos(), a.sin()];
                let mut acc = 0.0;
                for (&r, &w) in rule.nodes().iter().zip(rule.weights()) {
                    let value = f.jet(r).value.re;
                    if value == 0.0 {
                        continue;
                    }
                    let u = patch.param_at_norm(&dir, (0.5 * r).tanh())?;
                    let s = (u[0] - center[0]).hypot(u[1] - center[1]);
                    let jet = patch.jet(&u)?;
                    let x = &jet.point;
                    let (c0, c1) = (jet.first.column(0), jet.first.column(1));
                    let gram = Matrix2::new(c0.dot(&c0), c0.dot(&c1), c1.dot(&c0), c1.dot(&c1));
                    let area = gram.determinant().max(0.0).sqrt();
                    let radial = c0 * dir[0] + c1 * dir[1];
                    let ph = phi(x);
                    // dr/ds = (x · ∂_s x)/(|x| φ).
                    let dr_ds = x.dot(&radial) / (x.norm() * ph);
                    if !(dr_ds > 0.0) {
                        return Err(Error::Precondition(format!(
                            "|x| is not increasing along the parameter ray at angle {a:.3}"
                        )));
                    }
                    acc += w * value * area / (ph * ph) * s / dr_ds;
                }
                Ok(acc * dtheta)
            })
            .collect();
        for v in per_ray {
            sigma_integral += v?;
        }
    }
    let eps_hat = if cone_integral == 0.0 && sigma_integral == 0.0 {
        0.0
    } else {
        (sigma_integral - cone_integral).abs() / cone_integral.abs()
    };
    Ok(VolumeComparison {
        sigma_integral,
        cone_integral,
        eps_hat,
    })
}
