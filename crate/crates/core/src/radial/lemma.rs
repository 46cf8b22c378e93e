//! Quadrature checks of the window estimate for `υ_R` and of the
//! mollification budgets.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::radial::profile::{epsilon_window, Kernel, RadialFunction, RadialProfile};
use crate::radial::quadrature::QuadratureRule;

/// Resolution of the period-locked composite rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Panels per oscillation period `2π/β` and per window quarter `R/4`.
    pub panels_per_period: usize,
    /// Gauss–Legendre order per panel.
    pub order: usize,
    /// Panels on each mollification transition `[a − σ, a + σ]`.
    pub edge_panels: usize,
    /// Relative change under panel doubling above which the result is rejected.
    pub max_refinement_change: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels_per_period: 20,
            order: 10,
            edge_panels: 8,
            max_refinement_change: 1e-2,
        }
    }
}

/// The four weighted integrals of a profile over its support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowIntegrals {
    /// `∫ |f″ + (m−1)coth f′ + λf|² sinh^{m−1}`.
    pub residual: f64,
    /// `∫ |f|² sinh^{m−1}`.
    pub norm: f64,
    /// `∫ |f′|² sinh^{m−1}`.
    pub d1: f64,
    /// `∫ |f″|² sinh^{m−1}`.
    pub d2: f64,
    /// Largest relative change of the four integrals under panel doubling.
    pub refinement_change: f64,
}

fn panels_for(length: f64, scale: f64, per: usize) -> usize {
    ((per as f64) * length / scale).ceil().max(1.0) as usize
}

/// Pieces `(a, b, panels)` of the composite rule for a profile: one piece
/// per smooth stretch, with panels locked to the oscillation period.
pub fn profile_pieces(profile: &RadialProfile, cfg: &QuadratureConfig) -> Vec<(f64, f64, usize)> {
    let p = profile.params();
    let period = (2.0 * PI / p.beta).min(profile.window() / 4.0);
    let (lo, hi) = profile.support();
    let sigma = profile.sigma();
    if sigma == 0.0 {
        vec![(lo, hi, panels_for(hi - lo, period, cfg.panels_per_period))]
    } else {
        let (a, b) = (profile.window() / 2.0, profile.window());
        vec![
            (a - sigma, a + sigma, cfg.edge_panels),
            (a + sigma, b - sigma, panels_for(b - a - 2.0 * sigma, period, cfg.panels_per_period)),
            (b - sigma, b + sigma, cfg.edge_panels),
        ]
    }
}

/// Builds the sinh-weighted rule used for a profile.
pub fn profile_rule(profile: &RadialProfile, cfg: &QuadratureConfig) -> Result<QuadratureRule> {
    QuadratureRule::from_pieces(&profile_pieces(profile, cfg), cfg.order)?.with_sinh_weight(profile.params().m)
}

fn integrals_with(profile: &RadialProfile, rule: &QuadratureRule) -> [f64; 4] {
    let p = *profile.params();
    rule.integrate_many(|t| {
        let j = profile.jet(t);
        [
            j.helmholtz(p.m, p.lambda, t).norm_sqr(),
            j.value.norm_sqr(),
            j.d1.norm_sqr(),
            j.d2.norm_sqr(),
        ]
    })
}

/// Weighted integrals of `profile`, cross-checked against a rule with twice
/// as many panels.
pub fn window_integrals(profile: &RadialProfile, cfg: &QuadratureConfig) -> Result<WindowIntegrals> {
    let rule = profile_rule(profile, cfg)?;
    let coarse = integrals_with(profile, &rule);
    let fine = integrals_with(profile, &rule.refined());
    let mut change: f64 = 0.0;
    for (c, f) in coarse.iter().zip(&fine) {
        let scale = f.abs().max(1e-300);
        change = change.max((c - f).abs() / scale);
    }
    let lhs_change = (coarse[0] - fine[0]).abs() / fine[0].abs().max(1e-300);
    if lhs_change > cfg.max_refinement_change {
        return Err(Error::Resolution(format!(
            "quadrature changes the residual integral by {:.3}% under panel doubling",
            100.0 * lhs_change
        )));
    }
    Ok(WindowIntegrals {
        residual: fine[0],
        norm: fine[1],
        d1: fine[2],
        d2: fine[3],
        refinement_change: change,
    })
}

/// One row of the window-estimate check.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaEstReport {
    pub m: usize,
    pub lambda: f64,
    pub window: f64,
    pub sigma: f64,
    /// `∫ |υ″ + (m−1)coth υ′ + λυ|² sinh^{m−1}`.
    pub lhs: f64,
    /// `ε_R ∫ |υ|² sinh^{m−1}`.
    pub rhs: f64,
    pub ratio: f64,
    pub epsilon: f64,
    pub norm: f64,
    /// `∫|υ′|²/∫|υ|²`.
    pub c1: f64,
    /// `∫|υ″|²/∫|υ|²`.
    pub c2: f64,
    pub refinement_change: f64,
}

impl LemmaEstReport {
    /// The inequality holds up to `1e−6` relative.
    pub fn inequality_holds(&self) -> bool {
        self.ratio <= 1.0 + 1e-6
    }
}

pub fn verify_lemma_est(m: usize, lambda: f64, window: f64, cfg: &QuadratureConfig) -> Result<LemmaEstReport> {
    let profile = RadialProfile::windowed(m, lambda, window)?;
    let ints = window_integrals(&profile, cfg)?;
    let epsilon = epsilon_window(m, lambda, window)?;
    let rhs = epsilon * ints.norm;
    Ok(LemmaEstReport {
        m,
        lambda,
        window,
        sigma: 0.0,
        lhs: ints.residual,
        rhs,
        ratio: ints.residual / rhs,
        epsilon,
        norm: ints.norm,
        c1: ints.d1 / ints.norm,
        c2: ints.d2 / ints.norm,
        refinement_change: ints.refinement_change,
    })
}

/// A sweep over windows sharing one constant `C*`.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaEstSweep {
    pub rows: Vec<LemmaEstReport>,
    pub c_star: f64,
    /// Whether `C*` was supplied or measured as twice the sweep maximum.
    pub c_star_measured: bool,
}

impl LemmaEstSweep {
    pub fn row_passes(&self, row: &LemmaEstReport) -> bool {
        row.inequality_holds() && row.c1 <= self.c_star && row.c2 <= self.c_star
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| self.row_passes(r))
    }
}

/// Runs [`verify_lemma_est`] for every window and attaches `C*`
/// (`2·max(C₁, C₂)` over the sweep unless given).
pub fn lemma_est_sweep(
    m: usize,
    lambda: f64,
    windows: &[f64],
    c_star: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<LemmaEstSweep> {
    if windows.is_empty() {
        return Err(invalid("window list is empty"));
    }
    let rows = windows
        .iter()
        .map(|&r| verify_lemma_est(m, lambda, r, cfg))
        .collect::<Result<Vec<_>>>()?;
    let measured = 2.0 * rows.iter().map(|r| r.c1.max(r.c2)).fold(0.0, f64::max);
    Ok(LemmaEstSweep {
        c_star: c_star.unwrap_or(measured),
        c_star_measured: c_star.is_none(),
        rows,
    })
}

/// Empirical `C* = 2·max(C₁, C₂)` over a window sweep.
pub fn empirical_c_star(m: usize, lambda: f64, windows: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    Ok(lemma_est_sweep(m, lambda, windows, None, cfg)?.c_star)
}

/// One mollification inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MollificationReport {
    pub sigma: f64,
    pub kernel: Kernel,
    pub c_star: f64,
    pub raw: WindowIntegrals,
    pub smoothed: WindowIntegrals,
    /// Residual budget, norm budget, first- and second-derivative budgets.
    pub checks: [BudgetCheck; 4],
}

impl MollificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates the four mollification budgets without failing on them.
/// `c_star` defaults to `2·max(C₁, C₂)` of the unmollified profile.
pub fn mollification_budgets(
    profile: &RadialProfile,
    kernel: Kernel,
    sigma: f64,
    c_star: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<MollificationReport> {
    if profile.sigma() != 0.0 {
        return Err(invalid("profile is already mollified"));
    }
    if !(sigma > 0.0) || sigma >= profile.window() / 100.0 {
        return Err(invalid(format!(
            "mollification width {sigma} must lie in (0, R/100) = (0, {})",
            profile.window() / 100.0
        )));
    }
    let raw = window_integrals(profile, cfg)?;
    let smooth_profile = profile.smoothed(kernel, sigma)?;
    let smoothed = window_integrals(&smooth_profile, cfg)?;
    let c_star = c_star.unwrap_or(2.0 * (raw.d1 / raw.norm).max(raw.d2 / raw.norm));
    let check = |name, lhs: f64, rhs: f64| BudgetCheck { name, lhs, rhs, pass: lhs <= rhs };
    Ok(MollificationReport {
        sigma,
        kernel,
        c_star,
        checks: [
            check("residual", smoothed.residual, 2.0 * raw.residual),
            check("norm", raw.norm, 2.0 * smoothed.norm),
            check("first-derivative", smoothed.d1, 4.0 * c_star * smoothed.norm),
            check("second-derivative", smoothed.d2, 4.0 * c_star * smoothed.norm),
        ],
        raw,
        smoothed,
    })
}

/// Mollifies `profile` and verifies the budgets; fails with a suggestion to
/// shrink `σ` when any budget is exceeded.
pub fn mollify(
    profile: &RadialProfile,
    kernel: Kernel,
    sigma: f64,
    c_star: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<(RadialProfile, MollificationReport)> {
    let report = mollification_budgets(profile, kernel, sigma, c_star, cfg)?;
    if !report.all_pass() {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        return Err(Error::Mollification {
            sigma,
            failed: failed.join(", "),
        });
    }
    Ok((profile.smoothed(kernel, sigma)?, report))
}
