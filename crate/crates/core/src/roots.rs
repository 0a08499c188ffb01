//! Bracketed Newton iteration with bisection fallback.

use crate::error::{BouncerError, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Find a root of `f` in `[lo, hi]`, where `f` returns `(value, derivative)`.
///
/// The bracket must straddle a sign change. A Newton step that leaves the
/// current bracket (or a vanishing derivative) is replaced by bisection.
pub fn bracketed_newton<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    initial: Option<f64>,
    opts: &RootOptions,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(BouncerError::NoRoot(format!(
            "no sign change on [{lo}, {hi}] (f = {flo:e}, {fhi:e})"
        )));
    }
    let lo_negative = flo < 0.0;

    let mut x = match initial {
        Some(x0) if x0 > lo && x0 < hi => x0,
        _ => 0.5 * (lo + hi),
    };
    for _ in 0..opts.max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= opts.rel_tol * x.abs() || hi - lo <= opts.rel_tol * x.abs() {
            return Ok(x);
        }
    }
    Err(BouncerError::Convergence {
        what: "bracketed Newton".into(),
        iterations: opts.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_newton(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, None, &Default::default())
            .unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn falls_back_to_bisection_on_flat_derivative() {
        // Zero derivative everywhere forces pure bisection.
        let r = bracketed_newton(|x| (x - 0.3, 0.0), 0.0, 1.0, None, &Default::default()).unwrap();
        assert!((r - 0.3).abs() < 1e-11);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let err = bracketed_newton(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, None, &Default::default());
        assert!(matches!(err, Err(BouncerError::NoRoot(_))));
    }
}
