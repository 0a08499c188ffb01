use std::f64::consts::PI;

use super::eval::airy_pair_unchecked;
use crate::error::{BouncerError, Result};
use crate::roots::{bracketed_newton, RootOptions};

/// Leading asymptotic estimate `(3 pi (4n - 1) / 8)^(2/3)` of the n-th zero.
pub fn zero_seed(n: usize) -> f64 {
    (3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0).powf(2.0 / 3.0)
}

/// Seed with the first correction terms of the asymptotic series.
fn refined_seed(n: usize) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    t.powf(2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77125.0 / 82944.0)))
}

/// `z_n > 0` with `Ai(-z_n) = 0`, `n = 1, 2, ...`.
pub fn zero(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(BouncerError::Domain("Airy zeros are labelled from n = 1".into()));
    }
    let seed = refined_seed(n);
    // Half the local spacing pi / sqrt(z) on either side isolates one zero.
    let half = 0.5 * PI / seed.sqrt();
    let (lo, hi) = (seed - half, seed + half);
    let f = |z: f64| {
        let (a, ap) = airy_pair_unchecked(-z);
        (a, -ap)
    };
    let opts = RootOptions {
        rel_tol: 1e-15,
        max_iter: 200,
    };
    bracketed_newton(f, lo, hi, Some(seed), &opts).map_err(|e| match e {
        BouncerError::Convergence { iterations, .. } => BouncerError::Convergence {
            what: format!("Airy zero {n}"),
            iterations,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::eval::ai;

    /// Plain bisection on `Ai(-z)`; independent of the Newton path.
    fn bisect(mut lo: f64, mut hi: f64) -> f64 {
        let f = |z: f64| ai(-z).unwrap();
        let mut flo = f(lo);
        assert!(flo * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn first_zeros_match_bisection() {
        let z1 = bisect(2.0, 2.7);
        let z2 = bisect(3.8, 4.3);
        assert!((z1 - 2.338_107_410_459_767).abs() < 1e-13);
        assert!((z2 - 4.087_949_444_130_971).abs() < 1e-13);
        assert!((zero(1).unwrap() - z1).abs() < 1e-13);
        assert!((zero(2).unwrap() - z2).abs() < 1e-13);
    }

    #[test]
    fn zeros_are_roots_and_ordered() {
        let mut prev = 0.0;
        let mut prev_gap = f64::INFINITY;
        for n in 1..=60 {
            let z = zero(n).unwrap();
            assert!(ai(-z).unwrap().abs() <= 1e-12, "n = {n}");
            assert!(z > prev);
            if n > 1 {
                let gap = z - prev;
                assert!(gap < prev_gap, "spacing must shrink at n = {n}");
                prev_gap = gap;
            }
            prev = z;
        }
        assert!(zero(10).unwrap() > zero(9).unwrap());
    }

    #[test]
    fn seed_is_close_and_within_one_spacing() {
        for n in 5..=200 {
            let z = zero(n).unwrap();
            let seed = zero_seed(n);
            assert!(((z - seed) / z).abs() < 1e-3, "n = {n}");
            let spacing = zero(n + 1).unwrap() - z;
            assert!((z - seed).abs() < spacing);
        }
    }

    #[test]
    fn zero_index_rejected() {
        assert!(zero(0).is_err());
    }
}
