//! Adaptive composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{BouncerError, Result};

/// Nodes and weights of an n-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// The shared 32-point rule.
    pub fn rule32() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(32))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// `(∫f, ∫|f|)` with one set of evaluations.
    fn integrate_with_abs<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (mut s, mut sa) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let y = f(mid + half * x);
            s += w * y;
            sa += w * y.abs();
        }
        (s * half, sa * half.abs())
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Absolute tolerance on the total.
    pub abs_tol: f64,
    /// Width of the initial uniform panels.
    pub panel_width: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            panel_width: 1.0,
            max_depth: 24,
        }
    }
}

/// Integrate `f` over `[a, b]` with adaptive bisection of 32-point panels.
///
/// Each panel is accepted when the panel estimate and the sum over its two
/// halves agree within the panel's share of `abs_tol`; the reported error is
/// the sum of those differences.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<Estimate> {
    let rule = GaussLegendre::rule32();
    if b <= a {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let panels = ((b - a) / opts.panel_width).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let density = opts.abs_tol / (b - a);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut magnitude = 0.0;
    let mut failed = false;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        let (whole, whole_abs) = rule.integrate_with_abs(&f, lo, hi);
        magnitude += whole_abs;
        let (v, e, ok) = refine(rule, &f, lo, hi, whole, density, opts.max_depth);
        value += v;
        error += e;
        failed |= !ok;
    }
    if failed || error > opts.abs_tol.max(1e-13 * magnitude) {
        return Err(BouncerError::Quadrature {
            tol: opts.abs_tol,
            estimate: error,
        });
    }
    Ok(Estimate { value, error })
}

fn refine<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    lo: f64,
    hi: f64,
    whole: f64,
    density: f64,
    depth: u32,
) -> (f64, f64, bool) {
    let mid = 0.5 * (lo + hi);
    let (left, left_abs) = rule.integrate_with_abs(f, lo, mid);
    let (right, right_abs) = rule.integrate_with_abs(f, mid, hi);
    let halves = left + right;
    let diff = (halves - whole).abs();
    // Floor at rounding level of the integrand's magnitude so cancelling
    // panels do not chase noise.
    let allowed = (density * (hi - lo)).max(1e-14 * (left_abs + right_abs));
    if diff <= allowed {
        return (halves, diff, true);
    }
    if depth == 0 {
        return (halves, diff, false);
    }
    let (lv, le, lok) = refine(rule, f, lo, mid, left, density, depth - 1);
    let (rv, re, rok) = refine(rule, f, mid, hi, right, density, depth - 1);
    (lv + rv, le + re, lok && rok)
}
