//! The comparison function `f` with `f′(t) = ∫₀^t sinh^{m−1} / sinh^{m−1}(t)`,
//! whose reciprocal derivative `1/f′(R)` is the isoperimetric ratio of a
//! hyperbolic `m`-ball of radius `R`.
//!
//! `f′` and `f″` are computed by separate quadratures after the substitution
//! `s = t − u`:
//!
//! `f′(t) = ∫₀^t q^{m−1} du`, `f″(t) = (m−1) ∫₀^t q^{m−2} sinh(u)/sinh²(t) du`,
//! with `q = sinh(t − u)/sinh(t)`. Both integrands are bounded for all `t`.

use crate::error::{invalid, Result};
use crate::radial::quadrature::{gauss_legendre, pairwise_sum};

const ORDER: usize = 12;
const PANEL_WIDTH: f64 = 0.5;
const KNOT_SPACING: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileValue {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Cached evaluation of `f`, `f′`, `f″` for a fixed dimension.
#[derive(Clone, Debug)]
pub struct IsoperimetricProfile {
    m: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `f` at `k·KNOT_SPACING`.
    knots: Vec<f64>,
}

/// `sinh(t − u)/sinh(t)` without overflow.
fn ratio_q(t: f64, u: f64) -> f64 {
    if t < 1e-3 {
        return (t - u).sinh() / t.sinh();
    }
    (-u).exp() * (-(-2.0 * (t - u)).exp_m1()) / (-(-2.0 * t).exp_m1())
}

/// `sinh(u)/sinh²(t)` without overflow, for `0 ≤ u ≤ t`.
fn ratio_s(t: f64, u: f64) -> f64 {
    if t < 1e-3 {
        let s = t.sinh();
        return u.sinh() / (s * s);
    }
    let d = -(-2.0 * t).exp_m1();
    2.0 * (u - 2.0 * t).exp() * (-(-2.0 * u).exp_m1()) / (d * d)
}

impl IsoperimetricProfile {
    /// Profile for dimension `m ≥ 2` with `f` cached up to `t_max`.
    pub fn new(m: usize, t_max: f64) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("isoperimetric profile needs m >= 2, got {m}")));
        }
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(invalid("cache range must be positive"));
        }
        let (nodes, weights) = gauss_legendre(ORDER);
        let mut profile = Self { m, nodes, weights, knots: vec![0.0] };
        let count = (t_max / KNOT_SPACING).ceil() as usize;
        for k in 1..=count {
            let a = (k - 1) as f64 * KNOT_SPACING;
            let step = profile.integrate(a, a + KNOT_SPACING, |s| profile.fprime(s));
            let prev = profile.knots[k - 1];
            profile.knots.push(prev + step);
        }
        Ok(profile)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let panels = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let sums: Vec<f64> = (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                self.nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(x, w)| 0.5 * h * w * f(lo + 0.5 * h * (x + 1.0)))
                    .sum()
            })
            .collect();
        pairwise_sum(&sums)
    }

    /// `f′(t)`.
    pub fn fprime(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let k = (self.m - 1) as i32;
        self.integrate(0.0, t, |u| ratio_q(t, u).powi(k))
    }

    /// `f″(t)`, by differentiation under the integral sign.
    pub fn fsecond(&self, t: f64) -> f64 {
        let m1 = (self.m - 1) as f64;
        if t <= 0.0 {
            return 1.0 / self.m as f64;
        }
        let k = (self.m - 2) as i32;
        m1 * self.integrate(0.0, t, |u| ratio_q(t, u).powi(k) * ratio_s(t, u))
    }

    /// `f(t) = ∫₀^t f′`, starting from the nearest cached knot.
    pub fn f(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let k = ((t / KNOT_SPACING).floor() as usize).min(self.knots.len() - 1);
        let a = k as f64 * KNOT_SPACING;
        self.knots[k] + self.integrate(a, t, |s| self.fprime(s))
    }

    pub fn eval(&self, t: f64) -> ProfileValue {
        ProfileValue {
            f: self.f(t),
            d1: self.fprime(t),
            d2: self.fsecond(t),
        }
    }

    /// `|f″ + (m−1)coth(t) f′ − 1|`.
    pub fn ode_residual(&self, t: f64) -> f64 {
        let v = self.eval(t);
        (v.d2 + (self.m - 1) as f64 / t.tanh() * v.d1 - 1.0).abs()
    }

    /// `m coth(t) f′(t) − 1`, nonnegative for every `t > 0`.
    pub fn mean_convexity(&self, t: f64) -> f64 {
        self.m as f64 / t.tanh() * self.fprime(t) - 1.0
    }
}

/// `isoperimetric_profile(m)` with the default cache range.
pub fn isoperimetric_profile(m: usize) -> Result<IsoperimetricProfile> {
    IsoperimetricProfile::new(m, 32.0)
}

/// Isoperimetric ratio `1/f′(R)` of the hyperbolic `m`-ball of radius `R`.
pub fn ball_cheeger(m: usize, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(invalid(format!("ball radius must be positive, got {radius}")));
    }
    let profile = IsoperimetricProfile::new(m, KNOT_SPACING)?;
    Ok(1.0 / profile.fprime(radius))
}
