//! Smallest eigenpairs of a symmetric pencil `K v = λ M v` by shift-invert
//! subspace iteration with Rayleigh–Ritz projection.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::mesh::sparse::{CsrMatrix, SkylineLdl};

#[derive(Clone, Debug, PartialEq)]
pub struct EigenConfig {
    /// Target shift; the iteration converges to the eigenvalues nearest to
    /// it from above. Falls back to 0 and then −1 when the shifted matrix is
    /// indefinite.
    pub shift: f64,
    /// Convergence threshold on `‖(K − λM)v‖ / ‖Mv‖`, relative to `max(1, λ)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Each restart enlarges the block by `count` vectors.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            shift: 0.0,
            tol: 1e-10,
            max_iter: 400,
            restarts: 2,
            seed: 7,
        }
    }
}

impl EigenConfig {
    /// Default settings with the shift `0.9 (m−1)²/4` just below the bottom
    /// of the essential spectrum of `H^m`.
    pub fn hyperbolic(m: usize) -> Self {
        let a = (m as f64 - 1.0) / 2.0;
        Self {
            shift: 0.9 * a * a,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSolution {
    /// Ascending.
    pub values: Vec<f64>,
    /// `M`-orthonormal eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    /// `‖(K − λM)v‖ / ‖Mv‖` per pair.
    pub residuals: Vec<f64>,
    /// `vᵀKv / vᵀMv` per pair.
    pub rayleigh: Vec<f64>,
    /// Shift actually used.
    pub shift: f64,
    pub iterations: usize,
    /// Largest residual over the wanted pairs, per iteration.
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Factorizes `K − σM` for the first shift in `[σ, 0, −1]` that gives a
/// positive definite matrix.
fn positive_shift(k: &CsrMatrix, m: &CsrMatrix, shift: f64) -> Result<(f64, SkylineLdl)> {
    let mut last_err = None;
    for sigma in [shift, 0.0, -1.0] {
        if sigma > shift {
            continue;
        }
        match k.add_scaled(-sigma, m).and_then(|a| SkylineLdl::factor(&a)) {
            Ok(f) if f.negative_pivots() == 0 => return Ok((sigma, f)),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Solver {
        message: "no shift makes K − σM positive definite".into(),
        history: Vec::new(),
    }))
}

/// `M`-orthonormal Ritz pairs of the pencil restricted to span(`y`).
fn rayleigh_ritz(k: &CsrMatrix, m: &CsrMatrix, y: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let p = y.len();
    let ky: Vec<Vec<f64>> = y.iter().map(|v| k.mul_vec(v)).collect();
    let my: Vec<Vec<f64>> = y.iter().map(|v| m.mul_vec(v)).collect();
    let kp = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i])));
    let mp = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&y[i], &my[j]) + dot(&y[j], &my[i])));
    // Whiten M on the subspace, dropping numerically dependent directions.
    let me = SymmetricEigen::new(mp);
    let top = me.eigenvalues.max();
    let keep: Vec<usize> = (0..p).filter(|&i| me.eigenvalues[i] > 1e-13 * top).collect();
    let b = DMatrix::from_fn(p, keep.len(), |r, c| {
        me.eigenvectors[(r, keep[c])] / me.eigenvalues[keep[c]].sqrt()
    });
    let c = b.transpose() * kp * &b;
    let ce = SymmetricEigen::new(0.5 * (&c + c.transpose()));
    let mut order: Vec<usize> = (0..keep.len()).collect();
    order.sort_by(|&i, &j| ce.eigenvalues[i].total_cmp(&ce.eigenvalues[j]));
    let coeffs = b * ce.eigenvectors;
    let n = y[0].len();
    let values = order.iter().map(|&i| ce.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let col: DVector<f64> = coeffs.column(i).into_owned();
            let mut v = vec![0.0; n];
            for (yj, cj) in y.iter().zip(col.iter()) {
                for (vi, yi) in v.iter_mut().zip(yj) {
                    *vi += cj * yi;
                }
            }
            v
        })
        .collect();
    (values, vectors)
}

fn residual(k: &CsrMatrix, m: &CsrMatrix, lambda: f64, v: &[f64]) -> f64 {
    let kv = k.mul_vec(v);
    let mv = m.mul_vec(v);
    let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - lambda * b).collect();
    norm(&r) / norm(&mv)
}

/// The `count` smallest eigenpairs of `K v = λ M v` for symmetric `K` and
/// positive definite `M`. After convergence, the inertia of `K − τM` just
/// below the largest returned eigenvalue certifies that none was skipped.
pub fn smallest_eigenpairs(k: &CsrMatrix, m: &CsrMatrix, count: usize, cfg: &EigenConfig) -> Result<EigenSolution> {
    let n = k.dim();
    if m.dim() != n {
        return Err(invalid("stiffness and mass matrices differ in size"));
    }
    if count == 0 || count > n {
        return Err(invalid(format!("cannot compute {count} eigenpairs of a {n}-dimensional pencil")));
    }
    let (shift, factor) = positive_shift(k, m, cfg.shift)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut block = (count + 8).max(2 * count).min(n);
    let mut x: Vec<Vec<f64>> = (0..block).map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
    let mut history = Vec::new();
    let mut iterations = 0;
    for _attempt in 0..=cfg.restarts {
        for _ in 0..cfg.max_iter {
            iterations += 1;
            let y: Vec<Vec<f64>> = x
                .iter()
                .map(|v| {
                    let mut w = factor.solve(&m.mul_vec(v));
                    let s = norm(&w);
                    w.iter_mut().for_each(|e| *e /= s);
                    w
                })
                .collect();
            let (values, vectors) = rayleigh_ritz(k, m, &y);
            if vectors.len() < count {
                return Err(Error::Solver {
                    message: "iteration subspace collapsed".into(),
                    history,
                });
            }
            let residuals: Vec<f64> = (0..count).map(|i| residual(k, m, values[i], &vectors[i])).collect();
            let worst = (0..count)
                .map(|i| residuals[i] / values[i].abs().max(1.0))
                .fold(0.0, f64::max);
            history.push(worst);
            x = vectors;
            if worst < cfg.tol {
                let values: Vec<f64> = values[..count].to_vec();
                let vectors: Vec<Vec<f64>> = x[..count].to_vec();
                let rayleigh = vectors
                    .iter()
                    .map(|v| dot(v, &k.mul_vec(v)) / dot(v, &m.mul_vec(v)))
                    .collect();
                certify(k, m, &values)?;
                return Ok(EigenSolution {
                    values,
                    vectors,
                    residuals,
                    rayleigh,
                    shift,
                    iterations,
                    history,
                });
            }
        }
        block = (block + count).min(n);
        while x.len() < block {
            x.push((0..n).map(|_| rng.random::<f64>() - 0.5).collect());
        }
    }
    Err(Error::Solver {
        message: format!("no convergence to tolerance {:e} after {iterations} iterations", cfg.tol),
        history,
    })
}

/// Fails when the pencil has more eigenvalues below the largest computed one
/// than were returned.
fn certify(k: &CsrMatrix, m: &CsrMatrix, values: &[f64]) -> Result<()> {
    let top = *values.last().expect("nonempty");
    let tau = top - 1e-8 * top.abs().max(1e-3);
    let below_computed = values.iter().filter(|&&v| v < tau).count();
    let f = SkylineLdl::factor(&k.add_scaled(-tau, m)?)?;
    if f.negative_pivots() > below_computed {
        return Err(Error::Solver {
            message: format!(
                "{} eigenvalues lie below {tau:.6e} but only {below_computed} were found",
                f.negative_pivots()
            ),
            history: Vec::new(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_laplacian_spectrum() {
        // K = tridiag(−1, 2, −1), M = I: λ_k = 2 − 2cos(kπ/(n+1)).
        let n = 60;
        let mut kt = Vec::new();
        let mut mt = Vec::new();
        for i in 0..n {
            kt.push((i, i, 2.0));
            mt.push((i, i, 1.0));
            if i + 1 < n {
                kt.push((i, i + 1, -1.0));
                kt.push((i + 1, i, -1.0));
            }
        }
        let k = CsrMatrix::from_triplets(n, kt).unwrap();
        let m = CsrMatrix::from_triplets(n, mt).unwrap();
        let sol = smallest_eigenpairs(&k, &m, 4, &EigenConfig::default()).unwrap();
        for (i, v) in sol.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((i + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
        }
        assert!(sol.residuals.iter().all(|r| *r < 1e-10));
    }
}
