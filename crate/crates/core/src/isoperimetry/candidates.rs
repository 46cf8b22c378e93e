//! Seeded families of candidate domains inside a meshed host region.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::hyperbolic::ball_distance;
use crate::isoperimetry::domain::{Candidate, FacetTable};
use crate::mesh::HyperbolicMesh;
use crate::radial::IsoperimetricProfile;

/// How many candidates of each kind to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateFamily {
    /// Radial sub-annuli `{a ≤ r ≤ b}` with random `a < b`.
    pub annuli: usize,
    /// Sub-disks in ambient hyperbolic distance around random interior
    /// vertices.
    pub disks: usize,
    /// Connected unions of elements grown from a random seed simplex.
    pub random_unions: usize,
    /// Sublevel sets `{f∘r ≤ c}` at evenly spaced values of `f`.
    pub level_sets: usize,
    pub seed: u64,
}

impl Default for CandidateFamily {
    fn default() -> Self {
        Self {
            annuli: 50,
            disks: 50,
            random_unions: 50,
            level_sets: 50,
            seed: 7,
        }
    }
}

impl CandidateFamily {
    pub fn total(&self) -> usize {
        self.annuli + self.disks + self.random_unions + self.level_sets
    }
}

/// Random annuli can miss every element; a bounded number of redraws
/// replaces empty picks.
const REDRAWS: usize = 64;

struct Host<'a> {
    mesh: &'a HyperbolicMesh,
    radii: Vec<f64>,
    /// Simplices with no vertex on the host boundary.
    inner: Vec<bool>,
    lo: f64,
    hi: f64,
}

impl Host<'_> {
    fn radial_band(&self, a: f64, b: f64) -> Vec<bool> {
        self.mesh
            .simplices()
            .iter()
            .enumerate()
            .map(|(i, s)| self.inner[i] && s.iter().all(|&v| self.radii[v] >= a && self.radii[v] <= b))
            .collect()
    }
}

fn nonempty(ind: &[bool]) -> bool {
    ind.iter().any(|b| *b)
}

/// Candidate domains compactly contained in the mesh. Every kind is drawn
/// from its own seeded stream, so changing one count leaves the others
/// unchanged.
pub fn generate_candidates(mesh: &HyperbolicMesh, family: &CandidateFamily) -> Result<Vec<Candidate>> {
    if family.total() == 0 {
        return Err(invalid("candidate family is empty"));
    }
    let radii = mesh.vertex_radii()?;
    let boundary = mesh.boundary();
    let inner: Vec<bool> = mesh.simplices().iter().map(|s| s.iter().all(|&v| !boundary[v])).collect();
    let interior_radii = || (0..radii.len()).filter(|&v| !boundary[v]).map(|v| radii[v]);
    let lo = interior_radii().fold(f64::INFINITY, f64::min);
    let hi = interior_radii().fold(f64::NEG_INFINITY, f64::max);
    if !nonempty(&inner) || !(hi > lo) {
        return Err(invalid("host mesh has no simplex clear of its boundary"));
    }
    let host = Host {
        mesh,
        radii,
        inner,
        lo,
        hi,
    };
    let mut out = Vec::with_capacity(family.total());
    annuli(&host, family, &mut out)?;
    disks(&host, family, &mut out)?;
    unions(&host, family, &mut out)?;
    level_sets(&host, family, &mut out)?;
    Ok(out)
}

fn stream(family: &CandidateFamily, kind: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(family.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(kind))
}

fn exhausted(kind: &str) -> crate::error::Error {
    invalid(format!("could not draw a nonempty {kind} candidate in {REDRAWS} attempts"))
}

fn annuli(host: &Host, family: &CandidateFamily, out: &mut Vec<Candidate>) -> Result<()> {
    let mut rng = stream(family, 1);
    for k in 0..family.annuli {
        let ind = (0..REDRAWS)
            .map(|_| {
                let (x, y): (f64, f64) = (rng.random(), rng.random());
                let a = host.lo + (host.hi - host.lo) * x.min(y);
                let b = host.lo + (host.hi - host.lo) * x.max(y);
                host.radial_band(a, b)
            })
            .find(|ind| nonempty(ind))
            .ok_or_else(|| exhausted("annulus"))?;
        out.push(Candidate::new(format!("annulus-{k}"), ind));
    }
    Ok(())
}

fn disks(host: &Host, family: &CandidateFamily, out: &mut Vec<Candidate>) -> Result<()> {
    if family.disks == 0 {
        return Ok(());
    }
    let mut rng = stream(family, 2);
    let mesh = host.mesh;
    let dist = |a: usize, b: usize| ball_distance(&mesh.vertices()[a], &mesh.vertices()[b]);
    // Per vertex: the smallest radius whose ball around it covers an inner
    // simplex containing it. Far out, elements are long in the angular
    // direction, so smaller disks would be empty.
    let mut reach = vec![f64::INFINITY; mesh.vertices().len()];
    for s in mesh.simplices().iter().zip(&host.inner).filter(|(_, inner)| **inner).map(|(s, _)| s) {
        for &c in s {
            let d = s.iter().map(|&v| dist(c, v)).fold(0.0, f64::max);
            reach[c] = reach[c].min(d);
        }
    }
    let centers: Vec<usize> = (0..reach.len()).filter(|&v| reach[v].is_finite()).collect();
    for k in 0..family.disks {
        let c = centers[rng.random_range(0..centers.len())];
        let room = (host.radii[c] - host.lo).min(host.hi - host.radii[c]).max(reach[c]);
        let rho = reach[c] + (room - reach[c]) * rng.random::<f64>();
        let ind: Vec<bool> = mesh
            .simplices()
            .iter()
            .enumerate()
            .map(|(i, s)| host.inner[i] && s.iter().all(|&v| dist(c, v) <= rho))
            .collect();
        debug_assert!(nonempty(&ind));
        out.push(Candidate::new(format!("disk-{k}"), ind));
    }
    Ok(())
}

fn unions(host: &Host, family: &CandidateFamily, out: &mut Vec<Candidate>) -> Result<()> {
    if family.random_unions == 0 {
        return Ok(());
    }
    let mut rng = stream(family, 3);
    let mesh = host.mesh;
    let facets = FacetTable::new(mesh);
    let seeds: Vec<usize> = (0..mesh.simplices().len()).filter(|&i| host.inner[i]).collect();
    for k in 0..family.random_unions {
        let target = rng.random_range(1..=seeds.len());
        let mut ind = vec![false; mesh.simplices().len()];
        let start = seeds[rng.random_range(0..seeds.len())];
        ind[start] = true;
        let mut size = 1;
        // Randomized breadth-first growth: each frontier pop picks a random
        // queued simplex.
        let mut frontier: VecDeque<usize> = facets.neighbors(start).collect();
        while size < target && !frontier.is_empty() {
            let pick = rng.random_range(0..frontier.len());
            let s = frontier.swap_remove_back(pick).expect("index in range");
            if ind[s] || !host.inner[s] {
                continue;
            }
            ind[s] = true;
            size += 1;
            frontier.extend(facets.neighbors(s).filter(|&n| !ind[n] && host.inner[n]));
        }
        out.push(Candidate::new(format!("union-{k}"), ind));
    }
    Ok(())
}

fn level_sets(host: &Host, family: &CandidateFamily, out: &mut Vec<Candidate>) -> Result<()> {
    if family.level_sets == 0 {
        return Ok(());
    }
    let mesh = host.mesh;
    // Smallest outer radius at which a sublevel set contains an element.
    let first = mesh
        .simplices()
        .iter()
        .enumerate()
        .filter(|(i, _)| host.inner[*i])
        .map(|(_, s)| s.iter().map(|&v| host.radii[v]).fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::INFINITY, f64::min);
    let profile = IsoperimetricProfile::new(mesh.dim().max(2), host.hi)?;
    let (f_lo, f_hi) = (profile.f(first), profile.f(host.hi));
    let n = family.level_sets;
    for k in 0..n {
        let c = if n == 1 { f_hi } else { f_lo + (f_hi - f_lo) * k as f64 / (n - 1) as f64 };
        // f is increasing, so {f∘r ≤ c} = {r ≤ f⁻¹(c)}.
        let (mut a, mut b) = (first, host.hi);
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            if profile.f(mid) < c {
                a = mid;
            } else {
                b = mid;
            }
        }
        let ind = host.radial_band(host.lo, b.max(first));
        if !nonempty(&ind) {
            return Err(exhausted("level-set"));
        }
        out.push(Candidate::new(format!("level-{k}"), ind));
    }
    Ok(())
}
