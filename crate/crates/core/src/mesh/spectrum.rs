//! Bottom of the Dirichlet spectrum of meshed domains and its comparison
//! with Cheeger-type lower bounds.

use crate::error::{invalid, Error, Result};
use crate::mesh::assembly::assemble;
use crate::mesh::eigen::{smallest_eigenpairs, EigenConfig};
use crate::mesh::triangulation::HyperbolicMesh;

/// A computed value checked against a lower bound with a slack.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundComparison {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    /// `value ≥ bound − slack`.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `‖(K − λM)v‖ / ‖Mv‖`.
    pub residuals: Vec<f64>,
    /// `vᵀKv / vᵀMv`.
    pub rayleigh_quotients: Vec<f64>,
    /// Longest edge in the mesh metric.
    pub h: f64,
    pub interior_vertices: usize,
    pub shift: f64,
    pub iterations: usize,
    pub comparisons: Vec<BoundComparison>,
}

impl SpectrumReport {
    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Records `λ₀ ≥ bound − slack`.
    pub fn compare(&mut self, label: impl Into<String>, bound: f64, slack: f64) -> &BoundComparison {
        let value = self.lambda0();
        self.comparisons.push(BoundComparison {
            label: label.into(),
            value,
            bound,
            slack,
            pass: value >= bound - slack,
        });
        self.comparisons.last().expect("just pushed")
    }

    pub fn all_comparisons_pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

/// The `count` smallest Dirichlet eigenvalues of the mesh.
pub fn dirichlet_bottom(mesh: &HyperbolicMesh, count: usize, cfg: &EigenConfig) -> Result<SpectrumReport> {
    if mesh.interior_count() == mesh.vertices().len() {
        return Err(Error::Precondition("mesh has no Dirichlet boundary".into()));
    }
    let ops = assemble(mesh)?;
    let sol = smallest_eigenpairs(&ops.stiffness, &ops.mass, count, cfg)?;
    Ok(SpectrumReport {
        eigenvalues: sol.values,
        residuals: sol.residuals,
        rayleigh_quotients: sol.rayleigh,
        h: mesh.resolution(),
        interior_vertices: ops.unknowns.len(),
        shift: sol.shift,
        iterations: sol.iterations,
        comparisons: Vec::new(),
    })
}

/// `¼(m − 1 − ε)²`, or 0 once `ε ≥ m − 1`.
pub fn cheeger_side_bound(m: usize, epsilon: f64) -> f64 {
    let h = (m as f64 - 1.0 - epsilon).max(0.0);
    0.25 * h * h
}

/// `3 |λ₀(h) − λ₀(h/2)|`.
pub fn discretization_slack(coarse: f64, fine: f64) -> f64 {
    3.0 * (coarse - fine).abs()
}

/// `λ₀` on the fine mesh compared with `¼(m − 1 − ε)²`, where the slack
/// comes from the coarse/fine pair. `epsilon` is the asymptotic-minimality
/// diagnostic `ε_r` at the inner radius of the domain.
pub fn dirichlet_bottom_with_bound(
    coarse: &HyperbolicMesh,
    fine: &HyperbolicMesh,
    epsilon: f64,
    count: usize,
    cfg: &EigenConfig,
) -> Result<(SpectrumReport, SpectrumReport)> {
    if coarse.dim() != fine.dim() {
        return Err(invalid("coarse and fine meshes have different dimensions"));
    }
    if !(epsilon >= 0.0) {
        return Err(invalid(format!("epsilon must be a nonnegative number, got {epsilon}")));
    }
    let c = dirichlet_bottom(coarse, count, cfg)?;
    let mut f = dirichlet_bottom(fine, count, cfg)?;
    let slack = discretization_slack(c.lambda0(), f.lambda0());
    f.compare("cheeger-side", cheeger_side_bound(fine.dim(), epsilon), slack);
    Ok((c, f))
}
