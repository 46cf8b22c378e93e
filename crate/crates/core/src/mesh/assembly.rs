//! Linear finite-element stiffness and mass matrices of the Laplace–Beltrami
//! operator in the per-simplex metric of a mesh.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::sparse::CsrMatrix;
use crate::mesh::triangulation::HyperbolicMesh;

/// Whether boundary vertices are eliminated (homogeneous Dirichlet
/// condition) or kept (natural Neumann condition).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Free,
}

/// Stiffness and mass matrices over the unknowns of a mesh.
#[derive(Clone, Debug)]
pub struct DiscreteOperatorPair {
    pub stiffness: CsrMatrix,
    /// Consistent mass matrix.
    pub mass: CsrMatrix,
    /// Row sums of the consistent mass matrix over all vertices, restricted
    /// to the unknowns.
    pub lumped_mass: Vec<f64>,
    /// Mesh vertex of each unknown.
    pub unknowns: Vec<usize>,
    /// Total measure of the mesh.
    pub volume: f64,
}

impl DiscreteOperatorPair {
    /// Nodal vector over the unknowns from values at every mesh vertex.
    pub fn restrict(&self, values: &[f64]) -> Vec<f64> {
        self.unknowns.iter().map(|&v| values[v]).collect()
    }
}

/// Local stiffness and mass of one simplex with Gram matrix `g`.
fn local_matrices(g_inv: &DMatrix<f64>, volume: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = g_inv.nrows();
    // Barycentric gradients in edge coordinates: λ_a = c_a, λ_0 = 1 − Σ c_a.
    let grads = DMatrix::from_fn(m, m + 1, |r, c| match c {
        0 => -1.0,
        c if c == r + 1 => 1.0,
        _ => 0.0,
    });
    let mut stiff = grads.transpose() * g_inv * &grads * volume;
    stiff = 0.5 * (&stiff + stiff.transpose());
    let denom = ((m + 1) * (m + 2)) as f64;
    let mass = DMatrix::from_fn(m + 1, m + 1, |i, j| volume * if i == j { 2.0 } else { 1.0 } / denom);
    (stiff, mass)
}

/// Assembles the stiffness `∫⟨∇φ_i, ∇φ_j⟩` and mass `∫φ_iφ_j` matrices of
/// the hat functions. Local matrices are computed in parallel and summed in
/// simplex order.
pub fn assemble_with(mesh: &HyperbolicMesh, bc: BoundaryCondition) -> Result<DiscreteOperatorPair> {
    let n = mesh.vertices().len();
    let unknowns: Vec<usize> = match bc {
        BoundaryCondition::Dirichlet => (0..n).filter(|&v| !mesh.boundary()[v]).collect(),
        BoundaryCondition::Free => (0..n).collect(),
    };
    if unknowns.is_empty() {
        return Err(Error::Precondition("mesh has no interior vertices".into()));
    }
    let mut index = vec![usize::MAX; n];
    for (k, &v) in unknowns.iter().enumerate() {
        index[v] = k;
    }
    let locals: Vec<(DMatrix<f64>, DMatrix<f64>, f64)> = (0..mesh.simplices().len())
        .into_par_iter()
        .map(|i| {
            let vol = mesh.simplex_volume(i);
            let (s, m) = local_matrices(&mesh.local_metrics()[i].inverse, vol);
            (s, m, vol)
        })
        .collect();
    let mut k_trip = Vec::new();
    let mut m_trip = Vec::new();
    let mut lumped_all = vec![0.0; n];
    let mut volume = 0.0;
    for (simplex, (s, m, vol)) in mesh.simplices().iter().zip(&locals) {
        volume += vol;
        for (a, &va) in simplex.iter().enumerate() {
            lumped_all[va] += m.row(a).sum();
            let ia = index[va];
            if ia == usize::MAX {
                continue;
            }
            for (b, &vb) in simplex.iter().enumerate() {
                let ib = index[vb];
                if ib != usize::MAX {
                    k_trip.push((ia, ib, s[(a, b)]));
                    m_trip.push((ia, ib, m[(a, b)]));
                }
            }
        }
    }
    let nu = unknowns.len();
    Ok(DiscreteOperatorPair {
        stiffness: CsrMatrix::from_triplets(nu, k_trip)?,
        mass: CsrMatrix::from_triplets(nu, m_trip)?,
        lumped_mass: unknowns.iter().map(|&v| lumped_all[v]).collect(),
        unknowns,
        volume,
    })
}

/// Dirichlet assembly over the interior vertices.
pub fn assemble(mesh: &HyperbolicMesh) -> Result<DiscreteOperatorPair> {
    assemble_with(mesh, BoundaryCondition::Dirichlet)
}
