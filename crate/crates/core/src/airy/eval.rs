//! Real-argument Airy function `Ai` and its derivative.
//!
//! Three regimes:
//! - `|x| <= 1`: Maclaurin series (the Taylor recurrence of `y'' = x y` about 0).
//! - `|x| >= 9`: asymptotic expansions, exponential on the right and the
//!   oscillatory sine/cosine pair on the left.
//! - in between: one short Taylor step from a precomputed anchor grid. The
//!   left grid is built by stepping forward from 0 (both solutions oscillate,
//!   so errors stay bounded). The right grid is built backward from the
//!   asymptotic value at `x = 9`; `Ai` is the growing solution in that direction.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{BouncerError, Result};

/// `Ai(0) = 3^(-2/3) / Gamma(2/3)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_24;
/// `Ai'(0) = -3^(-1/3) / Gamma(1/3)`.
pub const AIP_ZERO: f64 = -0.258_819_403_792_806_8;

const MACLAURIN_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 9.0;
const GRID_STEP: f64 = 0.25;
const GRID_POINTS: usize = 36; // ASYMPTOTIC_LIMIT / GRID_STEP

/// `Ai(x)`.
pub fn ai(x: f64) -> Result<f64> {
    airy_pair(x).map(|(a, _)| a)
}

/// `Ai'(x)`.
pub fn aip(x: f64) -> Result<f64> {
    airy_pair(x).map(|(_, d)| d)
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(BouncerError::Domain(format!(
            "Airy function argument must be finite, got {x}"
        )));
    }
    Ok(airy_pair_unchecked(x))
}

pub(crate) fn airy_pair_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= MACLAURIN_LIMIT {
        taylor_step(0.0, AI_ZERO, AIP_ZERO, x)
    } else if x >= ASYMPTOTIC_LIMIT {
        asymptotic_right(x)
    } else if x <= -ASYMPTOTIC_LIMIT {
        asymptotic_left(-x)
    } else {
        let grid = anchors();
        let (table, sign) = if x > 0.0 {
            (&grid.right, 1.0)
        } else {
            (&grid.left, -1.0)
        };
        let i = ((x.abs() / GRID_STEP).round() as usize).min(GRID_POINTS);
        let centre = sign * i as f64 * GRID_STEP;
        let (y, yp) = table[i];
        taylor_step(centre, y, yp, x - centre)
    }
}

struct Anchors {
    /// `(Ai, Ai')` at `x = -i * GRID_STEP`.
    left: Vec<(f64, f64)>,
    /// `(Ai, Ai')` at `x = +i * GRID_STEP`.
    right: Vec<(f64, f64)>,
}

fn anchors() -> &'static Anchors {
    static GRID: OnceLock<Anchors> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut left = Vec::with_capacity(GRID_POINTS + 1);
        let (mut y, mut yp) = (AI_ZERO, AIP_ZERO);
        left.push((y, yp));
        for i in 0..GRID_POINTS {
            let c = -(i as f64) * GRID_STEP;
            (y, yp) = taylor_step(c, y, yp, -GRID_STEP);
            left.push((y, yp));
        }

        let mut right = vec![(0.0, 0.0); GRID_POINTS + 1];
        let (mut y, mut yp) = asymptotic_right(ASYMPTOTIC_LIMIT);
        right[GRID_POINTS] = (y, yp);
        for i in (0..GRID_POINTS).rev() {
            let c = (i + 1) as f64 * GRID_STEP;
            (y, yp) = taylor_step(c, y, yp, -GRID_STEP);
            right[i] = (y, yp);
        }
        Anchors { left, right }
    })
}

/// Advance a solution of `y'' = x y` from `centre` by `h` using its power
/// series about `centre`: `a_{j+2} = (centre a_j + a_{j-1}) / ((j+2)(j+1))`.
pub(crate) fn taylor_step(centre: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (y, yp);
    }
    let mut a_prev = 0.0; // a_{j-1}
    let mut a_cur = y; // a_j
    let mut a_next = yp; // a_{j+1}
    let mut hp = 1.0; // h^j
    let mut val = 0.0;
    let mut der = 0.0;
    let mut quiet = 0;
    for j in 0..200usize {
        let term = a_cur * hp;
        val += term;
        if j > 0 {
            der += j as f64 * a_cur * hp / h;
        }
        let a_new = (centre * a_cur + a_prev) / ((j + 2) as f64 * (j + 1) as f64);
        a_prev = a_cur;
        a_cur = a_next;
        a_next = a_new;
        hp *= h;
        let scale = val.abs().max(der.abs()).max(1e-300);
        if term.abs() <= 1e-18 * scale && j > 4 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn u_coefficients() -> &'static [f64] {
    static U: OnceLock<Vec<f64>> = OnceLock::new();
    U.get_or_init(|| {
        let mut u = vec![1.0];
        for k in 1..40usize {
            let kf = k as f64;
            let prev = u[k - 1];
            u.push(
                prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                    / ((2.0 * kf - 1.0) * 216.0 * kf),
            );
        }
        u
    })
}

fn v_coefficient(k: usize, u: f64) -> f64 {
    let kf = k as f64;
    if k == 0 {
        1.0
    } else {
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
    }
}

/// Sum `sum_k (-1)^k c_k zeta^-k` stopping at the smallest term.
fn alternating_series(zeta: f64, coef: impl Fn(usize) -> f64, start: usize, stride: usize) -> f64 {
    let u = u_coefficients();
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < u.len() {
        let term = coef(k) * zeta.powi(-(k as i32));
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        sign = -sign;
        k += stride;
    }
    sum
}

fn asymptotic_right(x: f64) -> (f64, f64) {
    let u = u_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let su = alternating_series(zeta, |k| u[k], 0, 1);
    let sv = alternating_series(zeta, |k| v_coefficient(k, u[k]), 0, 1);
    (pref / q * su, -pref * q * sv)
}

/// `(Ai(-x), Ai'(-x))` for large positive `x`.
fn asymptotic_left(x: f64) -> (f64, f64) {
    let u = u_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let (s, c) = (zeta - PI / 4.0).sin_cos();
    let u_even = alternating_series(zeta, |k| u[k], 0, 2);
    let u_odd = alternating_series(zeta, |k| u[k], 1, 2);
    let v_even = alternating_series(zeta, |k| v_coefficient(k, u[k]), 0, 2);
    let v_odd = alternating_series(zeta, |k| v_coefficient(k, u[k]), 1, 2);
    let rp = PI.sqrt();
    let ai = (c * u_even + s * u_odd) / (rp * q);
    let aip = q / rp * (s * v_even - c * v_odd);
    (ai, aip)
}
