//! Composite Gauss–Legendre quadrature with an optional `sinh^{m−1}` weight.

use rayon::prelude::*;

use crate::error::{invalid, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `sinh^{k}(t)` evaluated through logarithms so large `t` does not overflow
/// before the caller multiplies by a decaying factor.
pub fn sinh_pow(t: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    (k * ln_sinh(t)).exp()
}

/// `ln sinh t` for `t > 0`, accurate for small and large `t`.
pub fn ln_sinh(t: f64) -> f64 {
    if t < 1.0 {
        t.sinh().ln()
    } else {
        t + (-(-2.0 * t).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// Sum of a slice by pairwise reduction; the grouping depends only on the
/// length, so results are bitwise reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// A fixed composite Gauss–Legendre rule made of consecutive pieces, each
/// split into equal panels.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pieces: Vec<(f64, f64, usize)>,
    order: usize,
    weight_power: Option<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Equal panels on `[a, b]`, order 10.
    pub fn new(a: f64, b: f64, panels: usize) -> Result<Self> {
        Self::with_order(a, b, panels, 10)
    }

    pub fn with_order(a: f64, b: f64, panels: usize, order: usize) -> Result<Self> {
        Self::from_pieces(&[(a, b, panels)], order)
    }

    /// Consecutive pieces `(a_i, b_i, panels_i)` with `b_i = a_{i+1}`.
    pub fn from_pieces(pieces: &[(f64, f64, usize)], order: usize) -> Result<Self> {
        if pieces.is_empty() || order == 0 {
            return Err(invalid("quadrature needs at least one piece and one node"));
        }
        for (i, &(a, b, panels)) in pieces.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(invalid(format!("quadrature interval [{a}, {b}] is empty or infinite")));
            }
            if panels == 0 {
                return Err(invalid("quadrature piece needs at least one panel"));
            }
            if i > 0 && pieces[i - 1].1 != a {
                return Err(invalid("quadrature pieces must be contiguous"));
            }
        }
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for &(a, b, panels) in pieces {
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + h * p as f64;
                for (xi, wi) in x.iter().zip(&w) {
                    nodes.push(lo + 0.5 * h * (xi + 1.0));
                    weights.push(0.5 * h * wi);
                }
            }
        }
        Ok(Self {
            pieces: pieces.to_vec(),
            order,
            weight_power: None,
            nodes,
            weights,
        })
    }

    /// Attaches the weight `sinh^{m−1}(t)`; requires a nonnegative interval.
    pub fn with_sinh_weight(mut self, m: usize) -> Result<Self> {
        if self.pieces[0].0 < 0.0 {
            return Err(invalid("sinh weight needs a nonnegative interval"));
        }
        if m < 1 {
            return Err(invalid("dimension must be at least 1"));
        }
        let k = (m - 1) as f64;
        for (t, w) in self.nodes.iter().zip(self.weights.iter_mut()) {
            *w *= sinh_pow(*t, k);
        }
        self.weight_power = Some(k);
        Ok(self)
    }

    /// Same pieces and weight with twice as many panels in each piece.
    pub fn refined(&self) -> Self {
        let pieces: Vec<_> = self.pieces.iter().map(|&(a, b, p)| (a, b, 2 * p)).collect();
        let mut r = Self::from_pieces(&pieces, self.order).expect("refinement of a valid rule is valid");
        if let Some(k) = self.weight_power {
            for (t, w) in r.nodes.iter().zip(r.weights.iter_mut()) {
                *w *= sinh_pow(*t, k);
            }
            r.weight_power = Some(k);
        }
        r
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.pieces[0].0, self.pieces[self.pieces.len() - 1].1)
    }

    pub fn panels(&self) -> usize {
        self.pieces.iter().map(|p| p.2).sum()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` (times the weight if attached). Panels are evaluated in
    /// parallel and combined by pairwise summation in panel order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64) -> f64 + Sync,
    {
        self.integrate_many(|t| [f(t)])[0]
    }

    /// Integrates several functions sharing one evaluation per node.
    pub fn integrate_many<F, const K: usize>(&self, f: F) -> [f64; K]
    where
        F: Fn(f64) -> [f64; K] + Sync,
    {
        let order = self.order;
        let panel_sums: Vec<[f64; K]> = (0..self.panels())
            .into_par_iter()
            .map(|p| {
                let mut acc = [0.0; K];
                for i in p * order..(p + 1) * order {
                    let v = f(self.nodes[i]);
                    for k in 0..K {
                        acc[k] += self.weights[i] * v[k];
                    }
                }
                acc
            })
            .collect();
        let mut out = [0.0; K];
        let mut column = vec![0.0; panel_sums.len()];
        for (k, o) in out.iter_mut().enumerate() {
            for (c, s) in column.iter_mut().zip(&panel_sums) {
                *c = s[k];
            }
            *o = pairwise_sum(&column);
        }
        out
    }
}
