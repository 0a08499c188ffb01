//! Analytic bounce cycle for quadratic drag, and the (x, p) crossing of two
//! up-legs with different drag.

use serde::Serialize;

use super::forms::{ln1p_ratio, p_quadratic};
use crate::error::{BouncerError, Result};
use crate::kinds::Branch;
use crate::roots::{bracketed_newton, RootOptions};
use crate::units::PhysicalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BounceStep {
    /// Launch speed of this cycle.
    pub v0: f64,
    pub x_max: f64,
    /// Speed when the particle returns to the wall.
    pub v1: f64,
    /// `K_+` on the way up, `m v0^2 / 2`.
    pub k_up: f64,
    /// `K_-` on the way down, `m v1^2 / 2`.
    pub k_down: f64,
}

/// One up-down cycle: `K_+ = m v0^2/2` fixes `x_max`, where `K_-` takes over
/// and fixes the return speed.
pub fn bounce_map_quadratic(v0: f64, gamma: f64, sys: &PhysicalSystem) -> Result<BounceStep> {
    if !(v0.is_finite() && v0 > 0.0) {
        return Err(BouncerError::Domain(format!("launch speed must be > 0, got {v0}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(BouncerError::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    let (m, g) = (sys.m(), sys.g());
    let r = gamma * v0 * v0 / (m * g);
    // (m / 2 gamma) ln(1 + r) = (v0^2 / 2g) ln(1 + r) / r
    let x_max = v0 * v0 / (2.0 * g) * ln1p_ratio(r);
    let v1 = v0 / (1.0 + r).sqrt();
    Ok(BounceStep {
        v0,
        x_max,
        v1,
        k_up: 0.5 * m * v0 * v0,
        k_down: 0.5 * m * v1 * v1,
    })
}

/// `cycles` successive applications of [`bounce_map_quadratic`].
pub fn bounce_sequence(v0: f64, gamma: f64, cycles: usize, sys: &PhysicalSystem) -> Result<Vec<BounceStep>> {
    let mut out = Vec::with_capacity(cycles);
    let mut v = v0;
    for _ in 0..cycles {
        let step = bounce_map_quadratic(v, gamma, sys)?;
        v = step.v1;
        out.push(step);
    }
    Ok(out)
}

/// Velocity on the up-leg at height `x` from `K_+ = m v0^2 / 2`.
pub fn up_leg_velocity(x: f64, v0: f64, gamma: f64, sys: &PhysicalSystem) -> f64 {
    let (m, g) = (sys.m(), sys.g());
    let s = 2.0 * gamma * x / m;
    let v2 = (v0 * v0 - 2.0 * g * x * super::forms::expm1_ratio(s)) * (-s).exp();
    v2.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub x: f64,
    pub p: f64,
}

/// First height where the up-leg momenta `p(x)` of two drag values cross.
///
/// Launch speed is shared. The velocities stay ordered (stronger drag is
/// always slower), but the momentum `m v e^{2 gamma x / m}` carries a growing
/// factor that can overturn the ordering.
pub fn xp_crossing(
    v0: f64,
    gamma_a: f64,
    gamma_b: f64,
    sys: &PhysicalSystem,
) -> Result<Option<Crossing>> {
    let a = bounce_map_quadratic(v0, gamma_a, sys)?;
    let b = bounce_map_quadratic(v0, gamma_b, sys)?;
    let top = a.x_max.min(b.x_max);
    let diff = |x: f64| -> f64 {
        let pa = p_quadratic(x, up_leg_velocity(x, v0, gamma_a, sys), gamma_a, Branch::Up, sys);
        let pb = p_quadratic(x, up_leg_velocity(x, v0, gamma_b, sys), gamma_b, Branch::Up, sys);
        pb.unwrap_or(f64::NAN) - pa.unwrap_or(f64::NAN)
    };
    const SCAN: usize = 4000;
    let mut prev_x = top / SCAN as f64;
    let mut prev = diff(prev_x);
    for i in 2..SCAN {
        let x = top * i as f64 / SCAN as f64;
        let d = diff(x);
        if d == 0.0 || (d > 0.0) != (prev > 0.0) {
            let h = 1e-7 * top;
            let root = bracketed_newton(
                |x| (diff(x), (diff(x + h) - diff(x - h)) / (2.0 * h)),
                prev_x,
                x,
                None,
                &RootOptions::default(),
            )?;
            let p = p_quadratic(root, up_leg_velocity(root, v0, gamma_a, sys), gamma_a, Branch::Up, sys)?;
            return Ok(Some(Crossing { x: root, p }));
        }
        prev_x = x;
        prev = d;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounce_map_reference() {
        let sys = PhysicalSystem::normalized();
        let step = bounce_map_quadratic(1.0, 0.1, &sys).unwrap();
        // ln(1.1) / 0.2
        assert!((step.x_max - 0.476_550_899_021_624_3).abs() < 1e-15);
        assert!((step.v1 - 1.0 / 1.1f64.sqrt()).abs() < 1e-15);
        let free = bounce_map_quadratic(1.0, 0.0, &sys).unwrap();
        assert_eq!(free.x_max, 0.5);
        assert_eq!(free.v1, 1.0);
    }

    #[test]
    fn k_minus_matches_return_speed() {
        let sys = PhysicalSystem::normalized();
        let (gamma, v0) = (0.3, 1.7);
        let step = bounce_map_quadratic(v0, gamma, &sys).unwrap();
        let s = 2.0 * gamma * step.x_max;
        let k_minus = -(-s).exp_m1() / (2.0 * gamma);
        assert!((k_minus - step.k_down).abs() < 1e-14);
        let k_plus = s.exp_m1() / (2.0 * gamma);
        assert!((k_plus - step.k_up).abs() < 1e-14);
    }

    #[test]
    fn sequence_strictly_decreasing() {
        let sys = PhysicalSystem::normalized();
        let seq = bounce_sequence(1.0, 0.2, 20, &sys).unwrap();
        assert!(seq.windows(2).all(|w| w[1].v0 < w[0].v0 && w[1].x_max < w[0].x_max));
    }

    #[test]
    fn momentum_paths_cross_while_velocities_do_not() {
        let sys = PhysicalSystem::normalized();
        let (v0, ga, gb) = (2.0, 0.1, 0.3);
        let c = xp_crossing(v0, ga, gb, &sys).unwrap().expect("crossing");
        assert!(c.x > 0.0);
        for i in 1..100 {
            let x = c.x * 1.5 * i as f64 / 100.0;
            assert!(up_leg_velocity(x, v0, gb, &sys) <= up_leg_velocity(x, v0, ga, &sys));
        }
        // d(p^2)/dx at the wall grows with gamma, so the stronger-drag
        // momentum starts above and must cross before its earlier apex.
        assert!(xp_crossing(0.5, ga, gb, &sys).unwrap().is_some());
    }
}
