//! Gauss–Legendre quadrature.

use crate::error::{Error, Result};

/// Nodes and weights on the reference interval [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Nodes mapped to [a, b] together with the scaled weights.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let c = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|&x| mid + c * x).collect(),
            self.weights.iter().map(|&w| c * w).collect(),
        )
    }

    /// ∫_a^b f(x) dx with this rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let c = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + c * x);
        }
        c * acc
    }
}

/// Gauss–Legendre rule of the given order (exact for polynomials of degree
/// ≤ 2·order − 1). Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> QuadratureRule {
    assert!(order >= 2, "gauss_legendre needs order ≥ 2");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    QuadratureRule { nodes, weights }
}

/// ∫_a^b f dx by Gauss–Legendre with order doubling until two successive
/// levels agree to `rel_tol` (relative, with a small absolute floor).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    start_order: usize,
    rel_tol: f64,
    max_doublings: usize,
) -> Result<f64> {
    let mut order = start_order.max(2);
    let mut prev = gauss_legendre(order).integrate(a, b, &f);
    for _ in 0..max_doublings {
        order *= 2;
        let next = gauss_legendre(order).integrate(a, b, &f);
        let change = (next - prev).abs();
        if change <= rel_tol * next.abs().max(1e-300) + 1e-15 * (b - a).abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure {
        context: format!("interval [{a}, {b}], final order {order}"),
        residual: f64::NAN,
        target: rel_tol,
    })
}
