//! Adaptive Gauss–Legendre quadrature.

use num_complex::Complex64;
use std::sync::OnceLock;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 30;

/// Nodes and weights of the `ORDER`-point rule on [−1, 1], from Newton iteration
/// on the Legendre polynomial.
fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // P_n(x) and P_n'(x) by the three-term recurrence.
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

fn fixed<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> Complex64 {
    let (nodes, weights) = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| f(mid + half * x) * w)
        .sum::<Complex64>()
        * half
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64, whole: Complex64, tol: f64, depth: u32) -> Complex64 {
    let mid = 0.5 * (lo + hi);
    let left = fixed(f, lo, mid);
    let right = fixed(f, mid, hi);
    let split = left + right;
    // Below a few ulps of the partial sums the difference is rounding noise and
    // further splitting cannot reduce it.
    let noise = 64.0 * f64::EPSILON * (left.norm() + right.norm());
    if (split - whole).norm() <= tol.max(noise) || depth >= MAX_DEPTH {
        return split;
    }
    adapt(f, lo, mid, left, 0.5 * tol, depth + 1) + adapt(f, mid, hi, right, 0.5 * tol, depth + 1)
}

/// ∫_lo^hi f for a complex-valued integrand, to absolute tolerance `tol`.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64, tol: f64) -> Complex64 {
    if lo == hi {
        return Complex64::new(0.0, 0.0);
    }
    let whole = fixed(&f, lo, hi);
    adapt(&f, lo, hi, whole, tol, 0)
}

/// ∫_lo^hi f to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    integrate_complex(|x| Complex64::new(f(x), 0.0), lo, hi, tol).re
}
