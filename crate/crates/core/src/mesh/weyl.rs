//! Weyl residuals `∫_Σ |Δφ_k + λφ_k|² / ∫_Σ |φ_k|²` of the radial test
//! functions `φ_k = υ_{R_k} ∘ r` on a meshed submanifold, checked against
//! the cone-side bound inflated by the measured deviation of Σ from its
//! asymptotic cone.

use num_complex::Complex64;

use crate::cone::{term_profile, volume_comparison, Cone, VolumeQuadrature};
use crate::error::{invalid, Error, Result};
use crate::mesh::assembly::assemble;
use crate::mesh::laplacian::{band_vertices, radial_laplacian_error};
use crate::mesh::triangulation::HyperbolicMesh;
use crate::radial::{
    empirical_c_star, epsilon_window, ClosureRadial, Kernel, QuadratureConfig, RadialFunction, SpectralParams,
};
use crate::submanifold::ImmersedPatch;

/// Meshes extend this fraction beyond the support of each test function.
pub const TRUNCATION_GUARD: f64 = 0.1;
/// Deviations below this level count as zero when judging decay.
pub const DEVIATION_FLOOR: f64 = 1e-6;
/// Each deviation must fall at least by this factor from one window to the
/// next (windows at least double, and the deviation of an asymptotically
/// minimal submanifold decays exponentially in the distance).
pub const DEVIATION_DECAY: f64 = 0.5;

/// Resolution of the annular meshes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaMesh {
    /// Largest ring spacing in hyperbolic distance.
    pub ring_spacing: f64,
    pub sectors: usize,
}

impl Default for SigmaMesh {
    fn default() -> Self {
        Self {
            ring_spacing: 0.05,
            sectors: 64,
        }
    }
}

impl SigmaMesh {
    /// Polar annulus covering `[lo, hi]` with the truncation guard.
    pub fn annulus(&self, patch: &ImmersedPatch, lo: f64, hi: f64) -> Result<HyperbolicMesh> {
        let inner = lo * (1.0 - TRUNCATION_GUARD);
        let outer = hi * (1.0 + TRUNCATION_GUARD);
        let rings = ((outer - inner) / self.ring_spacing).ceil() as usize;
        HyperbolicMesh::polar(patch, Some(inner), outer, rings, self.sectors)
    }
}

/// Measured deviation `ε̂_k` of Σ from its cone on each window.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaDiagnostics {
    pub windows: Vec<f64>,
    /// `sup |E|/(|f″| + |f′|)` over mesh vertices in `[R_k/2, R_k]`.
    pub laplacian: Vec<f64>,
    /// Relative volume deviation from the cone on `[R_k/2, R_k]`.
    pub volume: Vec<f64>,
}

impl SigmaDiagnostics {
    /// `ε̂_k = max(laplacian, volume)`.
    pub fn eps_hat(&self) -> Vec<f64> {
        self.laplacian.iter().zip(&self.volume).map(|(a, b)| a.max(*b)).collect()
    }

    /// Whether every `ε̂_k < 1` and the sequence decays: each term is below
    /// [`DEVIATION_FLOOR`] or at most [`DEVIATION_DECAY`] times its
    /// predecessor.
    pub fn decays(&self) -> bool {
        let e = self.eps_hat();
        e.iter().all(|v| *v < 1.0) && e.windows(2).all(|w| w[1] < DEVIATION_FLOOR || w[1] <= DEVIATION_DECAY * w[0])
    }
}

/// Measures `ε̂_k` on each window: the radial Laplacian error ratio for
/// `f = e^{−r/2}` at the vertices of the window's mesh, and the volume
/// deviation from `cone` for a sine bump on the window.
pub fn measure_sigma_diagnostics(
    patch: &ImmersedPatch,
    cone: &Cone,
    windows: &[f64],
    mesh: &SigmaMesh,
    quad: &VolumeQuadrature,
) -> Result<SigmaDiagnostics> {
    let probe = ClosureRadial::exponential(0.5);
    let mut laplacian = Vec::with_capacity(windows.len());
    let mut volume = Vec::with_capacity(windows.len());
    for &w in windows {
        let (lo, hi) = (0.5 * w, w);
        let m = mesh.annulus(patch, lo, hi)?;
        let vertices = band_vertices(&m, lo, hi)?;
        let rep = radial_laplacian_error(patch, &m, &probe, &vertices, None)?;
        laplacian.push(rep.sup_ratio(lo, hi).ok_or_else(|| Error::Resolution(format!("no vertex in [{lo}, {hi}]")))?);
        let bump = ClosureRadial::sine_bump(lo, hi - lo);
        volume.push(volume_comparison(std::slice::from_ref(patch), cone, &bump, lo, quad)?.eps_hat);
    }
    Ok(SigmaDiagnostics {
        windows: windows.to_vec(),
        laplacian,
        volume,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaWeylRow {
    pub k: usize,
    pub window: f64,
    /// `Σ_i |(Kv − λ M_L v)_i|² / M_L,i`.
    pub residual: f64,
    /// `Σ_i M_L,i |v_i|²`.
    pub norm: f64,
    pub ratio: f64,
    /// `ε_{R_k}`.
    pub epsilon_window: f64,
    /// `ε̂_k`.
    pub eps_hat: f64,
    /// Cone-side bound `4 ε_{R_k}`.
    pub cone_bound: f64,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaWeylReport {
    pub m: usize,
    pub lambda: f64,
    pub smoothing: Option<(Kernel, f64)>,
    pub rows: Vec<SigmaWeylRow>,
    pub c_star: f64,
    /// `(3ε_K + 24 C* ε̂²)(1 + ε̂)/(1 − ε̂)` for the last window.
    pub final_bound: f64,
    pub ratios_decreasing: bool,
    /// The deviation diagnostics decay (asymptotic minimality and
    /// regularity at infinity, as measured).
    pub hypotheses_hold: bool,
    pub pass: bool,
}

/// Discrete Weyl residual of `υ_{R_k} ∘ r` on annular meshes of `patch`.
/// The discrete Laplacian is `M_L⁻¹K` with the lumped mass `M_L`.
/// Diagnostics must cover the same windows; when they do not decay the
/// report records a failure with `hypotheses_hold = false`.
pub fn sigma_weyl_residual(
    patch: &ImmersedPatch,
    lambda: f64,
    windows: &[f64],
    smoothing: Option<(Kernel, f64)>,
    diagnostics: Option<&SigmaDiagnostics>,
    mesh: &SigmaMesh,
    cfg: &QuadratureConfig,
) -> Result<SigmaWeylReport> {
    let m = patch.dim();
    SpectralParams::new(m, lambda)?;
    let diag = diagnostics.ok_or_else(|| {
        Error::Precondition("deviation diagnostics are required (the bound is conditional on them)".into())
    })?;
    if windows.is_empty() {
        return Err(invalid("window sequence is empty"));
    }
    if let Some(w) = windows.windows(2).find(|w| !(w[1] > 2.0 * w[0])) {
        return Err(invalid(format!("windows must satisfy R_(k+1) > 2 R_k, got {} after {}", w[1], w[0])));
    }
    if diag.windows != windows || diag.laplacian.len() != windows.len() || diag.volume.len() != windows.len() {
        return Err(Error::Precondition("diagnostics were measured on different windows".into()));
    }
    let eps_hat = diag.eps_hat();
    let mut rows = Vec::with_capacity(windows.len());
    for (k, &window) in windows.iter().enumerate() {
        let (profile, _) = term_profile(m, lambda, window, smoothing, cfg)?;
        let (lo, hi) = profile.support();
        let mesh_k = mesh.annulus(patch, lo, hi)?;
        let ops = assemble(&mesh_k)?;
        let radii = mesh_k.vertex_radii()?;
        let values: Vec<Complex64> = ops.unknowns.iter().map(|&v| profile.jet(radii[v]).value).collect();
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        let (k_re, k_im) = (ops.stiffness.mul_vec(&re), ops.stiffness.mul_vec(&im));
        let mut residual = 0.0;
        let mut norm = 0.0;
        for i in 0..values.len() {
            let ml = ops.lumped_mass[i];
            let rho = Complex64::new(k_re[i], k_im[i]) - values[i] * (lambda * ml);
            residual += rho.norm_sqr() / ml;
            norm += ml * values[i].norm_sqr();
        }
        if !(norm > 0.0) {
            return Err(Error::Resolution(format!("window {window} has no mesh vertex in its support")));
        }
        let eps = epsilon_window(m, lambda, window)?;
        rows.push(SigmaWeylRow {
            k,
            window,
            residual,
            norm,
            ratio: residual / norm,
            epsilon_window: eps,
            eps_hat: eps_hat[k],
            cone_bound: 4.0 * eps,
            vertices: mesh_k.vertices().len(),
        });
    }
    let c_star = empirical_c_star(m, lambda, windows, cfg)?;
    let last = rows.last().expect("nonempty");
    let e = last.eps_hat;
    let hypotheses_hold = diag.decays();
    let final_bound = if e < 1.0 {
        (3.0 * last.epsilon_window + 24.0 * c_star * e * e) * (1.0 + e) / (1.0 - e)
    } else {
        f64::INFINITY
    };
    let ratios_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let pass = hypotheses_hold && ratios_decreasing && last.ratio <= final_bound;
    Ok(SigmaWeylReport {
        m,
        lambda,
        smoothing,
        rows,
        c_star,
        final_bound,
        ratios_decreasing,
        hypotheses_hold,
        pass,
    })
}
