//! Summation of the second-order series over intermediate levels.

use serde::Serialize;

use crate::error::{BouncerError, Result};

/// Terms whose last decade must fall below this fraction of the running sum
/// before the adaptive rule may stop early.
const STOP_REL: f64 = 1e-12;
const DECADE: usize = 10;
/// Decay exponents at or below this are treated as divergent.
const DIVERGENT_EXPONENT: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "value")]
pub enum Truncation {
    /// Sum outward until the stop rule fires or `cap` levels are used; fail
    /// unless the extrapolated tail is below `tail_tol` of the sum.
    Adaptive { tail_tol: f64, cap: usize },
    /// Sum exactly over levels `1..=N` (excluding `n`), no convergence check.
    Fixed(usize),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive {
            tail_tol: 1e-3,
            cap: 400,
        }
    }
}

impl Truncation {
    /// Largest level label the sum may touch.
    pub fn max_level(&self) -> usize {
        match *self {
            Truncation::Adaptive { cap, .. } => cap,
            Truncation::Fixed(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumOutcome {
    pub sum: f64,
    pub terms_used: usize,
    /// Power-law extrapolation of the neglected terms; infinite when the
    /// terms decay too slowly to be summable.
    pub tail: f64,
    /// Fitted decay exponent `p` in `|t_k| ~ k^-p`, when enough terms exist.
    pub exponent: Option<f64>,
}

/// Visiting order `n-1, n+1, n-2, n+2, ...` within `1..=max`.
fn outward(n: usize, max: usize) -> impl Iterator<Item = usize> {
    (1..max).flat_map(move |d| {
        let below = (d < n).then(|| n - d);
        let above = (n + d <= max).then_some(n + d);
        below.into_iter().chain(above)
    })
}

/// Tail `sum_{j > K} C j^-p` from the last decade of upper terms, fitted to
/// `|t_k| = C k^-p`.
fn power_law_tail(upper: &[(usize, f64)]) -> (f64, Option<f64>) {
    if upper.len() < DECADE {
        return (0.0, None);
    }
    let (k1, t1) = upper[upper.len() - 1];
    let (k0, t0) = upper[upper.len() - DECADE];
    if t1 == 0.0 {
        return (0.0, None);
    }
    if t0 == 0.0 {
        return (f64::INFINITY, None);
    }
    let p = (t0.abs() / t1.abs()).ln() / (k1 as f64 / k0 as f64).ln();
    if p <= DIVERGENT_EXPONENT {
        return (f64::INFINITY.copysign(t1), Some(p));
    }
    (t1 * k1 as f64 / (p - 1.0), Some(p))
}

/// Sum `term(k)` over `k != n` under the truncation rule.
pub fn sum_terms(
    n: usize,
    term: impl Fn(usize) -> f64,
    truncation: &Truncation,
) -> Result<SumOutcome> {
    let max = truncation.max_level();
    if n == 0 || n > max {
        return Err(BouncerError::Config(format!(
            "level {n} outside the truncation range 1..={max}"
        )));
    }
    let mut sum = 0.0;
    let mut used = 0;
    let mut upper: Vec<(usize, f64)> = Vec::new();
    let mut recent: Vec<f64> = Vec::new();
    for k in outward(n, max) {
        let t = term(k);
        sum += t;
        used += 1;
        recent.push(t);
        if k > n {
            upper.push((k, t));
        }
        if let Truncation::Adaptive { .. } = truncation {
            let last: f64 = recent.iter().rev().take(DECADE).sum();
            if recent.len() >= DECADE && k >= 4 * n && last.abs() < STOP_REL * sum.abs() {
                break;
            }
        }
    }
    let (tail, exponent) = power_law_tail(&upper);
    let outcome = SumOutcome {
        sum,
        terms_used: used,
        tail,
        exponent,
    };
    if let Truncation::Adaptive { tail_tol, .. } = *truncation {
        let floor = 1e-15;
        if !tail.is_finite() {
            return Err(BouncerError::Truncation {
                level: n,
                reason: format!(
                    "terms decay like k^-{:.3}: the series diverges",
                    exponent.unwrap_or(f64::NAN)
                ),
            });
        }
        if tail.abs() > (tail_tol * sum.abs()).max(floor) {
            return Err(BouncerError::Truncation {
                level: n,
                reason: format!(
                    "tail estimate {tail:e} exceeds {tail_tol:e} of the sum {sum:e} after {used} terms"
                ),
            });
        }
    }
    Ok(outcome)
}
