//! The sampled asymptotic-minimality diagnostic
//! `ε_r(p) = sup{|H_x| : x ∈ Σ, dist(x, p) ≥ r}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::hyperbolic::{ball_distance, radius_from_origin, BallPoint, BOUNDARY_CUTOFF};
use crate::submanifold::curvature::mean_curvature;
use crate::submanifold::patch::{ImmersedPatch, ParamDomain};

/// Sampling density for sup estimates over a patch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampler {
    /// Samples along each parameter ray (disk domains) or per axis (boxes).
    pub radial: usize,
    /// Number of ray directions for disk domains.
    pub angular: usize,
    /// Points with `|x|` above this are skipped.
    pub cutoff: f64,
    /// Seed for ray directions when `m ≥ 3`.
    pub seed: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            radial: 400,
            angular: 48,
            cutoff: BOUNDARY_CUTOFF,
            seed: 7,
        }
    }
}

impl Sampler {
    /// Unit directions in `ℝ^m`: `±1` for `m = 1`, equally spaced angles for
    /// `m = 2`, seeded Gaussian directions otherwise.
    pub fn directions(&self, m: usize) -> Vec<Vec<f64>> {
        match m {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => (0..self.angular)
                .map(|j| {
                    let a = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / self.angular as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.angular)
                    .map(|_| {
                        let v: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        v.into_iter().map(|x| x / n).collect()
                    })
                    .collect()
            }
        }
    }

    /// Parameter points covering the domain. Along disk rays the parameter
    /// radius is `R_D · tanh(ρ/2)/tanh(ρ_max/2)` with `ρ` uniform, which
    /// spaces samples evenly in hyperbolic distance for charts close to the
    /// identity.
    pub fn parameters(&self, domain: &ParamDomain) -> Vec<Vec<f64>> {
        match domain {
            ParamDomain::Disk { center, radius } => {
                let rho_max = radius_from_origin(self.cutoff);
                let denom = (rho_max / 2.0).tanh();
                let mut out = Vec::with_capacity(self.radial * self.angular);
                for dir in self.directions(center.len()) {
                    for k in 1..=self.radial {
                        let rho = rho_max * k as f64 / self.radial as f64;
                        let s = radius * (rho / 2.0).tanh() / denom;
                        out.push(center.iter().zip(&dir).map(|(c, d)| c + s * d).collect());
                    }
                }
                out
            }
            ParamDomain::Box { lo, hi } => {
                let m = lo.len();
                let n = self.radial.max(2);
                let total = n.pow(m as u32);
                (0..total)
                    .map(|mut idx| {
                        (0..m)
                            .map(|i| {
                                let k = idx % n;
                                idx /= n;
                                lo[i] + (hi[i] - lo[i]) * (k as f64 + 0.5) / n as f64
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

/// Sampled values `(dist(x, p), |H_x|)` sorted by distance, with suffix
/// maxima for fast `ε_r` queries.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonProfile {
    distances: Vec<f64>,
    curvatures: Vec<f64>,
    suffix_max: Vec<f64>,
    pub sampler: Sampler,
    pub skipped: usize,
}

/// One `ε_r` evaluation with its sampling record.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonReport {
    pub r: f64,
    /// Sampled supremum; `+∞` when no sample lies outside `B_r(p)`.
    pub value: f64,
    pub samples_used: usize,
    pub sampler: Sampler,
}

impl EpsilonProfile {
    pub fn sample(patches: &[ImmersedPatch], p: &BallPoint, sampler: &Sampler) -> Result<Self> {
        if patches.is_empty() {
            return Err(invalid("epsilon_r needs at least one patch"));
        }
        let mut records: Vec<(f64, f64)> = Vec::new();
        let mut skipped = 0;
        for patch in patches {
            if patch.ambient_dim() != p.dim() {
                return Err(invalid("patch and base point live in different dimensions"));
            }
            let params = sampler.parameters(patch.domain());
            let results: Vec<Option<Result<(f64, f64)>>> = params
                .par_iter()
                .map(|u| {
                    let x = patch.point(u);
                    if x.norm() > sampler.cutoff {
                        return None;
                    }
                    Some(mean_curvature(patch, u).map(|rep| (ball_distance(&x, p.coords()), rep.norm_hyperbolic)))
                })
                .collect();
            for r in results {
                match r {
                    None => skipped += 1,
                    Some(v) => records.push(v?),
                }
            }
        }
        records.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let distances: Vec<f64> = records.iter().map(|r| r.0).collect();
        let curvatures: Vec<f64> = records.iter().map(|r| r.1).collect();
        let mut suffix_max = vec![0.0; curvatures.len()];
        let mut running: f64 = 0.0;
        for i in (0..curvatures.len()).rev() {
            running = running.max(curvatures[i]);
            suffix_max[i] = running;
        }
        Ok(Self {
            distances,
            curvatures,
            suffix_max,
            sampler: *sampler,
            skipped,
        })
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Largest sampled distance from the base point.
    pub fn max_distance(&self) -> f64 {
        self.distances.last().copied().unwrap_or(0.0)
    }

    pub fn epsilon(&self, r: f64) -> EpsilonReport {
        let start = self.distances.partition_point(|d| *d < r);
        let used = self.distances.len() - start;
        EpsilonReport {
            r,
            value: if used == 0 { f64::INFINITY } else { self.suffix_max[start] },
            samples_used: used,
            sampler: self.sampler,
        }
    }

    /// Samples as `(distance, |H|)` pairs in increasing distance.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.distances.iter().copied().zip(self.curvatures.iter().copied())
    }
}

/// `ε_r(p)` over a patch set.
pub fn epsilon_r(patches: &[ImmersedPatch], p: &BallPoint, r: f64, sampler: &Sampler) -> Result<EpsilonReport> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius r must be positive, got {r}")));
    }
    Ok(EpsilonProfile::sample(patches, p, sampler)?.epsilon(r))
}
