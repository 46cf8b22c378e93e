//! Symmetric sparse matrices in compressed-row form, reverse Cuthill–McKee
//! ordering, and a skyline `LDLᵀ` factorization.

use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};

/// Square sparse matrix in compressed-row storage (both triangles stored).
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds the matrix from `(row, col, value)` triplets. Duplicates are
    /// summed in input order after a stable sort, so the result does not
    /// depend on how the triplets were produced in parallel.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= n || *c >= n) {
            return Err(invalid(format!("triplet ({r}, {c}) outside a {n} x {n} matrix")));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { n, row_ptr, col_idx, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, a)| a * x[j]).sum()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, a)| a).sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest `|a_ij − a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, a)| (i, j, a)))
            .map(|(i, j, a)| (a - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &CsrMatrix) -> Result<CsrMatrix> {
        if other.n != self.n {
            return Err(invalid("matrix dimensions differ"));
        }
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            triplets.extend(self.row(i).map(|(j, a)| (i, j, a)));
            triplets.extend(other.row(i).map(|(j, a)| (i, j, s * a)));
        }
        CsrMatrix::from_triplets(self.n, triplets)
    }

    /// Principal submatrix on `keep` (in the given order).
    pub fn submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut triplets = Vec::new();
        for (new, &old) in keep.iter().enumerate() {
            for (j, a) in self.row(old) {
                if map[j] != usize::MAX {
                    triplets.push((new, map[j], a));
                }
            }
        }
        CsrMatrix::from_triplets(keep.len(), triplets).expect("indices in range")
    }

    /// Bandwidth `max |i − j|` over stored entries, after relabelling rows
    /// and columns by `inverse[old] = new`.
    pub fn bandwidth(&self, inverse: &[usize]) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, _)| inverse[i].abs_diff(inverse[j])))
            .max()
            .unwrap_or(0)
    }
}

fn bfs_levels(a: &CsrMatrix, start: usize, seen: &mut [bool]) -> Vec<Vec<usize>> {
    let mut levels = vec![vec![start]];
    seen[start] = true;
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("nonempty") {
            for (w, _) in a.row(v) {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

/// Reverse Cuthill–McKee ordering of the sparsity graph. Returns `perm`
/// with `perm[new] = old`. Each connected component starts from a
/// pseudo-peripheral vertex.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.dim();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for seed in 0..n {
        if placed[seed] {
            continue;
        }
        // Pseudo-peripheral start: repeat BFS from a minimum-degree vertex of
        // the last level while the eccentricity grows.
        let mut start = seed;
        let mut depth = 0;
        loop {
            let mut seen = placed.clone();
            let levels = bfs_levels(a, start, &mut seen);
            let last = levels.last().expect("nonempty");
            let candidate = *last.iter().min_by_key(|&&v| (degree[v], v)).expect("nonempty");
            if levels.len() <= depth || candidate == start {
                break;
            }
            depth = levels.len();
            start = candidate;
        }
        let mut queue = VecDeque::from([start]);
        placed[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = a.row(v).map(|(w, _)| w).filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// `A = LDLᵀ` of a symmetric matrix with variable-band (skyline) storage of
/// `L` in a fill-reducing order. No pivoting: the matrix must be
/// nonsingular in every leading block, which holds for positive definite
/// and for shifted pencils away from their eigenvalues.
#[derive(Clone, Debug)]
pub struct SkylineLdl {
    perm: Vec<usize>,
    /// First stored column of each row of `L`.
    first: Vec<usize>,
    /// Offset of each row's profile in `lower`.
    start: Vec<usize>,
    /// Strictly lower profile entries, row by row.
    lower: Vec<f64>,
    diag: Vec<f64>,
}

/// Relative pivot size below which the factorization is declared singular.
const PIVOT_TOL: f64 = 1e-13;

impl SkylineLdl {
    /// Factorizes `a` in reverse Cuthill–McKee order.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        Self::factor_with(a, reverse_cuthill_mckee(a))
    }

    /// Factorizes `a` in the given order (`perm[new] = old`).
    pub fn factor_with(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.dim();
        if perm.len() != n {
            return Err(invalid("permutation length differs from matrix dimension"));
        }
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        if inverse.contains(&usize::MAX) {
            return Err(invalid("ordering is not a permutation"));
        }
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(perm[i]).map(|(j, _)| inverse[j]).filter(|&j| j <= i).min().unwrap_or(i))
            .collect();
        let mut start = vec![0; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i]);
        }
        let mut lower = vec![0.0; start[n]];
        let mut diag = vec![0.0; n];
        for i in 0..n {
            let scale = a.row(perm[i]).map(|(_, v)| v.abs()).fold(0.0, f64::max);
            for (j, v) in a.row(perm[i]) {
                let jj = inverse[j];
                if jj < i {
                    lower[start[i] + jj - first[i]] = v;
                } else if jj == i {
                    diag[i] = v;
                }
            }
            // Row i: w_j = a_ij − Σ_k w_k L_jk, L_ij = w_j / d_j, with the
            // unscaled w_j kept in place until the row is finished.
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let mut s = 0.0;
                for k in k0..j {
                    s += lower[start[i] + k - fi] * lower[start[j] + k - fj];
                }
                lower[start[i] + j - fi] -= s;
            }
            let mut d = diag[i];
            for j in fi..i {
                let w = lower[start[i] + j - fi];
                let l = w / diag[j];
                d -= w * l;
                lower[start[i] + j - fi] = l;
            }
            if !(d.abs() > PIVOT_TOL * scale) {
                return Err(Error::Solver {
                    message: format!("zero pivot {d:.3e} in row {i} of the factorization"),
                    history: Vec::new(),
                });
            }
            diag[i] = d;
        }
        Ok(Self { perm, first, start, lower, diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of stored off-diagonal entries of `L`.
    pub fn profile_size(&self) -> usize {
        self.lower.len()
    }

    /// Number of negative pivots, which by Sylvester's law of inertia equals
    /// the number of negative eigenvalues of the factorized matrix.
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|d| **d < 0.0).count()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            let s: f64 = row.iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] -= s;
        }
        for (v, d) in y.iter_mut().zip(&self.diag) {
            *v /= d;
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i];
            let row = &self.lower[self.start[i]..self.start[i + 1]];
            for (k, l) in row.iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, shift: f64) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 - shift));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t).unwrap()
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 1, 1.0), (0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.asymmetry(), 0.0);
    }

    #[test]
    fn solve_tridiagonal() {
        let a = laplacian_1d(50, 0.0);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.mul_vec(&x);
        let f = SkylineLdl::factor(&a).unwrap();
        let y = f.solve(&b);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-11, "{err}");
        assert_eq!(f.negative_pivots(), 0);
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        // Eigenvalues 2 − 2cos(kπ/(n+1)); three lie below 0.1 for n = 40.
        let n = 40;
        let below = (1..=n)
            .filter(|k| 2.0 - 2.0 * (*k as f64 * std::f64::consts::PI / (n + 1) as f64).cos() < 0.1)
            .count();
        let f = SkylineLdl::factor(&laplacian_1d(n, 0.1)).unwrap();
        assert_eq!(f.negative_pivots(), below);
    }

    #[test]
    fn rcm_keeps_path_banded() {
        // A path graph labelled in scrambled order has bandwidth 1 after RCM.
        let n = 30;
        let label = |i: usize| (i * 7) % n;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((label(i), label(i), 2.0));
            if i + 1 < n {
                t.push((label(i), label(i + 1), -1.0));
                t.push((label(i + 1), label(i), -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, t).unwrap();
        let perm = reverse_cuthill_mckee(&a);
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        assert_eq!(a.bandwidth(&inverse), 1);
    }
}
