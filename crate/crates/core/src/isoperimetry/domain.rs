//! Volume, boundary area and isoperimetric ratio of element unions.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::mesh::HyperbolicMesh;

/// A candidate domain: the union of the simplices marked `true`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub indicator: Vec<bool>,
}

impl Candidate {
    pub fn new(label: impl Into<String>, indicator: Vec<bool>) -> Self {
        Self {
            label: label.into(),
            indicator,
        }
    }

    pub fn element_count(&self) -> usize {
        self.indicator.iter().filter(|b| **b).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoperimetricSample {
    pub label: String,
    pub elements: usize,
    /// Hyperbolic `m`-volume.
    pub volume: f64,
    /// Hyperbolic `(m−1)`-area of the relative boundary.
    pub perimeter: f64,
    /// `perimeter / volume`.
    pub ratio: f64,
}

/// Facets of a mesh with their adjacent simplices and local measures.
#[derive(Clone, Debug)]
pub struct FacetTable {
    /// Per facet: adjacent simplices (one or two).
    adjacent: Vec<Vec<usize>>,
    /// Per facet: mean of the measures seen from the adjacent simplices.
    measure: Vec<f64>,
    /// Per simplex: its facets.
    facets_of: Vec<Vec<usize>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Measure of the facet opposite local vertex `skip` in a simplex with edge
/// Gram matrix `g`.
fn facet_measure(g: &DMatrix<f64>, skip: usize) -> f64 {
    let m = g.nrows();
    // Local vertex j sits at 0 (j = 0) or at the unit vector e_j.
    let coord = |j: usize| -> Vec<f64> { (0..m).map(|r| if j > 0 && r + 1 == j { 1.0 } else { 0.0 }).collect() };
    let kept: Vec<usize> = (0..=m).filter(|&j| j != skip).collect();
    let base = coord(kept[0]);
    let b = DMatrix::from_fn(m, m - 1, |r, c| coord(kept[c + 1])[r] - base[r]);
    let fg = b.transpose() * g * b;
    fg.determinant().max(0.0).sqrt() / factorial(m - 1)
}

impl FacetTable {
    /// Facet measures are averaged over the adjacent simplices, which makes
    /// them second-order accurate when the metric is frozen at barycenters
    /// on either side of the facet.
    pub fn new(mesh: &HyperbolicMesh) -> Self {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut adjacent: Vec<Vec<usize>> = Vec::new();
        let mut sums: Vec<f64> = Vec::new();
        let mut facets_of = Vec::with_capacity(mesh.simplices().len());
        for (i, s) in mesh.simplices().iter().enumerate() {
            let g = &mesh.local_metrics()[i].gram;
            let mut own = Vec::with_capacity(s.len());
            for skip in 0..s.len() {
                let mut key: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| *v).collect();
                key.sort_unstable();
                let id = *index.entry(key).or_insert_with(|| {
                    adjacent.push(Vec::new());
                    sums.push(0.0);
                    adjacent.len() - 1
                });
                adjacent[id].push(i);
                sums[id] += facet_measure(g, skip);
                own.push(id);
            }
            facets_of.push(own);
        }
        let measure = sums.iter().zip(&adjacent).map(|(s, a)| s / a.len() as f64).collect();
        Self {
            adjacent,
            measure,
            facets_of,
        }
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    /// Simplices sharing a facet with simplex `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.facets_of[i]
            .iter()
            .flat_map(move |&f| self.adjacent[f].iter().copied().filter(move |&j| j != i))
    }
}

/// Isoperimetric sample of a candidate. The candidate must be nonempty and
/// its closure must stay off the host boundary.
pub fn domain_ratio(mesh: &HyperbolicMesh, candidate: &Candidate) -> Result<IsoperimetricSample> {
    domain_ratio_with(mesh, &FacetTable::new(mesh), candidate)
}

/// [`domain_ratio`] with a precomputed facet table.
pub fn domain_ratio_with(
    mesh: &HyperbolicMesh,
    facets: &FacetTable,
    candidate: &Candidate,
) -> Result<IsoperimetricSample> {
    let ind = &candidate.indicator;
    if ind.len() != mesh.simplices().len() {
        return Err(invalid(format!(
            "candidate {} marks {} simplices but the mesh has {}",
            candidate.label,
            ind.len(),
            mesh.simplices().len()
        )));
    }
    let boundary = mesh.boundary();
    let mut volume = 0.0;
    let mut elements = 0;
    for (i, s) in mesh.simplices().iter().enumerate().filter(|(i, _)| ind[*i]) {
        if let Some(v) = s.iter().find(|&&v| boundary[v]) {
            return Err(Error::Containment(format!(
                "candidate {} touches the host boundary at vertex {v} (simplex {i})",
                candidate.label
            )));
        }
        volume += mesh.simplex_volume(i);
        elements += 1;
    }
    if elements == 0 {
        return Err(invalid(format!("candidate {} is empty", candidate.label)));
    }
    let perimeter: f64 = (0..facets.len())
        .filter(|&f| facets.adjacent[f].iter().filter(|&&s| ind[s]).count() == 1)
        .map(|f| facets.measure[f])
        .sum();
    Ok(IsoperimetricSample {
        label: candidate.label.clone(),
        elements,
        volume,
        perimeter,
        ratio: perimeter / volume,
    })
}
