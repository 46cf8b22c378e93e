//! Radial test functions: the generalized eigenfunction `ψ`, the windowed
//! profile `υ_R`, and their mollified versions.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::radial::quadrature::{gauss_legendre, ln_sinh, QuadratureRule};

/// Value and first two derivatives of a (possibly complex) radial function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialJet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl RadialJet {
    pub const ZERO: Self = Self {
        value: Complex64::new(0.0, 0.0),
        d1: Complex64::new(0.0, 0.0),
        d2: Complex64::new(0.0, 0.0),
    };

    pub fn real(value: f64, d1: f64, d2: f64) -> Self {
        Self {
            value: value.into(),
            d1: d1.into(),
            d2: d2.into(),
        }
    }

    /// `f″ + (m−1)coth(t) f′ + λ f`.
    pub fn helmholtz(&self, m: usize, lambda: f64, t: f64) -> Complex64 {
        self.d2 + self.d1 * ((m - 1) as f64 / t.tanh()) + self.value * lambda
    }
}

/// A function of the geodesic distance with derivatives up to order two.
pub trait RadialFunction: Send + Sync {
    fn jet(&self, t: f64) -> RadialJet;

    /// Closed interval outside which the function vanishes identically.
    fn support(&self) -> (f64, f64);
}

/// A real radial function given by a closure returning `(f, f′, f″)`.
#[derive(Clone)]
pub struct ClosureRadial {
    support: (f64, f64),
    f: Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>,
}

impl ClosureRadial {
    pub fn new(support: (f64, f64), f: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static) -> Self {
        Self { support, f: Arc::new(f) }
    }

    /// `t ↦ t²/2` on the whole half-line.
    pub fn half_square() -> Self {
        Self::new((0.0, f64::INFINITY), |t| (0.5 * t * t, t, 1.0))
    }

    /// `sin²(π(t − start)/width)` on `[start, start + width]`, zero elsewhere.
    pub fn sine_bump(start: f64, width: f64) -> Self {
        let k = PI / width;
        Self::new((start, start + width), move |t| {
            if t < start || t > start + width {
                return (0.0, 0.0, 0.0);
            }
            let x = k * (t - start);
            let (s, c) = x.sin_cos();
            (s * s, 2.0 * k * s * c, 2.0 * k * k * (c * c - s * s))
        })
    }

    /// `e^{−κt}` on the whole half-line; `f″/f′ = −κ` is constant.
    pub fn exponential(rate: f64) -> Self {
        Self::new((0.0, f64::INFINITY), move |t| {
            let v = (-rate * t).exp();
            (v, -rate * v, rate * rate * v)
        })
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self::new((0.0, 0.0), |_| (0.0, 0.0, 0.0))
    }
}

impl RadialFunction for ClosureRadial {
    fn jet(&self, t: f64) -> RadialJet {
        let (v, d1, d2) = (self.f)(t);
        RadialJet::real(v, d1, d2)
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }
}

/// Dimension and spectral parameter with `β = √(λ − (m−1)²/4) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParams {
    pub m: usize,
    pub lambda: f64,
    pub beta: f64,
    /// `(m − 1)/2`, the decay exponent of `ψ`.
    pub decay: f64,
}

impl SpectralParams {
    pub fn new(m: usize, lambda: f64) -> Result<Self> {
        if m < 1 {
            return Err(invalid("dimension m must be at least 1"));
        }
        let decay = (m - 1) as f64 / 2.0;
        let beta2 = lambda - decay * decay;
        if !(beta2 > 0.0) || !lambda.is_finite() {
            return Err(invalid(format!(
                "lambda = {lambda} must exceed (m-1)^2/4 = {}",
                decay * decay
            )));
        }
        Ok(Self { m, lambda, beta: beta2.sqrt(), decay })
    }

    /// `α(t) = ¼(m−1)(m−3) sinh^{−2}(t)`.
    pub fn alpha(&self, t: f64) -> f64 {
        let c = 0.25 * (self.m as f64 - 1.0) * (self.m as f64 - 3.0);
        if c == 0.0 {
            return 0.0;
        }
        let s = t.sinh();
        c / (s * s)
    }
}

/// `ψ(t) = sinh^{−(m−1)/2}(t) e^{iβt}` with analytic derivatives.
pub fn psi(params: &SpectralParams, t: f64) -> RadialJet {
    let a = params.decay;
    let modulus = (-a * ln_sinh(t)).exp();
    let value = Complex64::from_polar(modulus, params.beta * t);
    let coth = 1.0 / t.tanh();
    let log_deriv = Complex64::new(-a * coth, params.beta);
    let csch2 = 1.0 / (t.sinh() * t.sinh());
    RadialJet {
        value,
        d1: value * log_deriv,
        d2: value * (log_deriv * log_deriv + a * csch2),
    }
}

/// `|ψ″ + (m−1)coth(t)ψ′ + (λ + α(t))ψ|`.
pub fn psi_residual(m: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("psi is defined for t > 0, got {t}")));
    }
    let params = SpectralParams::new(m, lambda)?;
    let jet = psi(&params, t);
    let alpha = params.alpha(t);
    Ok((jet.helmholtz(m, lambda, t) + jet.value * alpha).norm())
}

/// `ε_R = 2 max{α²(R/2), 16β²(2π/R)², 16(2π/R)⁴}`.
pub fn epsilon_window(m: usize, lambda: f64, window: f64) -> Result<f64> {
    if !(window > 0.0) {
        return Err(invalid(format!("window R must be positive, got {window}")));
    }
    let params = SpectralParams::new(m, lambda)?;
    let k = 2.0 * PI / window;
    let alpha = params.alpha(window / 2.0);
    let beta2 = params.beta * params.beta;
    Ok(2.0 * (alpha * alpha).max(16.0 * beta2 * k * k).max(16.0 * k.powi(4)))
}

/// Which term of [`epsilon_window`] attains the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsilonTerm {
    Potential,
    Oscillation,
    Window,
}

pub fn epsilon_dominant_term(m: usize, lambda: f64, window: f64) -> Result<EpsilonTerm> {
    let params = SpectralParams::new(m, lambda)?;
    let k = 2.0 * PI / window;
    let alpha = params.alpha(window / 2.0);
    let terms = [alpha * alpha, 16.0 * params.beta * params.beta * k * k, 16.0 * k.powi(4)];
    let which = if terms[0] >= terms[1] && terms[0] >= terms[2] {
        EpsilonTerm::Potential
    } else if terms[1] >= terms[2] {
        EpsilonTerm::Oscillation
    } else {
        EpsilonTerm::Window
    };
    Ok(which)
}

/// Smallest window from which the `β²` term dominates `ε_R`; beyond it
/// `ε_{2R}/ε_R = 1/4` exactly.
pub fn epsilon_crossover(m: usize, lambda: f64) -> Result<f64> {
    let params = SpectralParams::new(m, lambda)?;
    let mut lo = 2.0 * PI / params.beta;
    let mut hi = lo.max(1.0);
    while epsilon_dominant_term(m, lambda, hi)? != EpsilonTerm::Oscillation {
        hi *= 2.0;
    }
    if epsilon_dominant_term(m, lambda, lo)? == EpsilonTerm::Oscillation {
        return Ok(lo);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if epsilon_dominant_term(m, lambda, mid)? == EpsilonTerm::Oscillation {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `sin²(k(t − R/2))` and derivatives on `[R/2, R]`, with `k = 2π/R`.
pub fn window_jet(window: f64, t: f64) -> (f64, f64, f64) {
    if t < window / 2.0 || t > window {
        return (0.0, 0.0, 0.0);
    }
    let k = 2.0 * PI / window;
    let (s, c) = (k * (t - window / 2.0)).sin_cos();
    (s * s, 2.0 * k * s * c, 2.0 * k * k * (c * c - s * s))
}

/// Mollifier shape on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `exp(−1/(1 − x²))`.
    Bump,
    /// Gaussian with standard deviation 1/4, truncated at ±1.
    Gaussian,
}

impl Kernel {
    fn shape(self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Bump => (-1.0 / (1.0 - x * x)).exp(),
            Kernel::Gaussian => (-8.0 * x * x).exp(),
        }
    }

    fn normalization(self) -> f64 {
        static BUMP: OnceLock<f64> = OnceLock::new();
        static GAUSS: OnceLock<f64> = OnceLock::new();
        let cell = match self {
            Kernel::Bump => &BUMP,
            Kernel::Gaussian => &GAUSS,
        };
        *cell.get_or_init(|| {
            QuadratureRule::with_order(-1.0, 1.0, 400, 16)
                .expect("valid rule")
                .integrate(|x| self.shape(x))
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Bump => "bump",
            Kernel::Gaussian => "gaussian",
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bump" => Ok(Kernel::Bump),
            "gaussian" => Ok(Kernel::Gaussian),
            other => Err(invalid(format!("unknown kernel '{other}' (expected bump or gaussian)"))),
        }
    }
}

const CONV_PANELS: usize = 4;
const CONV_ORDER: usize = 16;

fn conv_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(CONV_ORDER))
}

/// The windowed profile `υ_R = ψ · sin²((2π/R)(t − R/2))` on `[R/2, R]`,
/// optionally convolved with a mollifier of half-width `σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    params: SpectralParams,
    window: f64,
    smoothing: Option<(Kernel, f64)>,
}

impl RadialProfile {
    pub fn windowed(m: usize, lambda: f64, window: f64) -> Result<Self> {
        if !(window > 0.0) || !window.is_finite() {
            return Err(invalid(format!("window R must be positive, got {window}")));
        }
        Ok(Self {
            params: SpectralParams::new(m, lambda)?,
            window,
            smoothing: None,
        })
    }

    /// The same profile convolved with `kernel` of half-width `sigma`
    /// (no budget checks; see `mollify`).
    pub fn smoothed(&self, kernel: Kernel, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(invalid(format!("mollification width must be positive, got {sigma}")));
        }
        if sigma >= self.window / 2.0 {
            return Err(invalid("mollification width must be below R/2"));
        }
        Ok(Self {
            params: self.params,
            window: self.window,
            smoothing: Some((kernel, sigma)),
        })
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    /// Mollification half-width, 0 when unmollified.
    pub fn sigma(&self) -> f64 {
        self.smoothing.map_or(0.0, |(_, s)| s)
    }

    pub fn kernel(&self) -> Option<Kernel> {
        self.smoothing.map(|(k, _)| k)
    }

    /// Points where the second derivative may be discontinuous or the
    /// function leaves its support.
    pub fn breakpoints(&self) -> Vec<f64> {
        let s = self.sigma();
        let (a, b) = (self.window / 2.0, self.window);
        if s == 0.0 {
            vec![a, b]
        } else {
            vec![a - s, a + s, b - s, b + s]
        }
    }

    fn raw_jet(&self, t: f64) -> RadialJet {
        let (w, w1, w2) = window_jet(self.window, t);
        if w == 0.0 && w1 == 0.0 && w2 == 0.0 {
            return RadialJet::ZERO;
        }
        let p = psi(&self.params, t);
        RadialJet {
            value: p.value * w,
            d1: p.d1 * w + p.value * w1,
            d2: p.d2 * w + p.d1 * (2.0 * w1) + p.value * w2,
        }
    }

    fn smooth_jet(&self, kernel: Kernel, sigma: f64, t: f64) -> RadialJet {
        let (a, b) = (self.window / 2.0, self.window);
        if t <= a - sigma || t >= b + sigma {
            return RadialJet::ZERO;
        }
        // Integrate over s ∈ [−σ, σ] with breaks where t − s hits a kink.
        let mut cuts = vec![-sigma, sigma];
        for kink in [t - a, t - b] {
            if kink > -sigma && kink < sigma {
                cuts.push(kink);
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (x, w) = conv_rule();
        let scale = 1.0 / (sigma * kernel.normalization());
        let mut acc = RadialJet::ZERO;
        for seg in cuts.windows(2) {
            let h = (seg[1] - seg[0]) / CONV_PANELS as f64;
            for p in 0..CONV_PANELS {
                let lo = seg[0] + h * p as f64;
                for (xi, wi) in x.iter().zip(w) {
                    let s = lo + 0.5 * h * (xi + 1.0);
                    let weight = 0.5 * h * wi * kernel.shape(s / sigma) * scale;
                    if weight == 0.0 {
                        continue;
                    }
                    let j = self.raw_jet(t - s);
                    acc.value += j.value * weight;
                    acc.d1 += j.d1 * weight;
                    acc.d2 += j.d2 * weight;
                }
            }
        }
        acc
    }
}

impl RadialFunction for RadialProfile {
    fn jet(&self, t: f64) -> RadialJet {
        match self.smoothing {
            None => self.raw_jet(t),
            Some((kernel, sigma)) => self.smooth_jet(kernel, sigma, t),
        }
    }

    fn support(&self) -> (f64, f64) {
        let s = self.sigma();
        (self.window / 2.0 - s, self.window + s)
    }
}

/// The unwindowed `ψ` as a radial function on `(0, ∞)`.
#[derive(Clone, Debug)]
pub struct Psi(pub SpectralParams);

impl RadialFunction for Psi {
    fn jet(&self, t: f64) -> RadialJet {
        psi(&self.0, t)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}
