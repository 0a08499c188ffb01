//! Recover the drag parameter from a launch speed and the observed apex.

use serde::Serialize;

use super::forms::{expm1_ratio, expm1_ratio_prime, log_remainder, log_remainder_prime};
use crate::error::{BouncerError, Result};
use crate::roots::{bracketed_newton, RootOptions};
use crate::units::PhysicalSystem;

#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    /// Largest admissible value of the dimensionless drag strength
    /// (`alpha v0 / (m g)` or `gamma v0^2 / (m g)`).
    pub max_strength: f64,
    pub root: RootOptions,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            max_strength: 1e8,
            root: RootOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterEstimate {
    pub value: f64,
    /// `K(launch) - K(apex)` at the returned value.
    pub residual: f64,
}

fn check_observation(v0: f64, x_max: f64, sys: &PhysicalSystem) -> Result<()> {
    if !(v0.is_finite() && v0 > 0.0) {
        return Err(BouncerError::Domain(format!("v0 must be > 0, got {v0}")));
    }
    let ceiling = v0 * v0 / (2.0 * sys.g());
    if !(x_max > 0.0 && x_max < ceiling) {
        return Err(BouncerError::NoRoot(format!(
            "apex {x_max} outside (0, v0^2/2g = {ceiling}): no dissipation value fits"
        )));
    }
    Ok(())
}

/// Double `hi` until `f(hi) < 0`, starting from `guess`.
fn expand_bracket(
    f: impl Fn(f64) -> f64,
    guess: f64,
    limit: f64,
    name: &str,
) -> Result<f64> {
    let mut hi = guess.max(limit * 1e-300).min(limit);
    loop {
        if f(hi) < 0.0 {
            return Ok(hi);
        }
        if hi >= limit {
            return Err(BouncerError::NoRoot(format!(
                "{name} exceeds the configured maximum {limit:e} (apex too low)"
            )));
        }
        hi = (2.0 * hi).min(limit);
    }
}

/// Solve `K_alpha(0, v0) = m g x_max` for `alpha`.
pub fn estimate_alpha(
    v0: f64,
    x_max: f64,
    sys: &PhysicalSystem,
    opts: &EstimateOptions,
) -> Result<ParameterEstimate> {
    check_observation(v0, x_max, sys)?;
    let (m, g) = (sys.m(), sys.g());
    let scale = m * g / v0; // alpha per unit strength
    // In the strength u = alpha v0 / (m g): m v0^2 R(u) - m g x_max.
    let f = |u: f64| m * v0 * v0 * log_remainder(u) - m * g * x_max;
    let df = |u: f64| m * v0 * v0 * log_remainder_prime(u);
    // From the expansion x_max = v0^2/2g - u v0^2/(3g) + O(u^2).
    let guess = 1.5 * (1.0 - 2.0 * g * x_max / (v0 * v0));
    let hi = expand_bracket(f, guess, opts.max_strength, "alpha")?;
    let u = bracketed_newton(|u| (f(u), df(u)), 0.0, hi, Some(guess.min(hi)), &opts.root)?;
    Ok(ParameterEstimate {
        value: u * scale,
        residual: f(u),
    })
}

/// Solve `m v0^2 / 2 = (m^2 g / 2 gamma)(e^{2 gamma x_max / m} - 1)` for `gamma`.
pub fn estimate_gamma(
    v0: f64,
    x_max: f64,
    sys: &PhysicalSystem,
    opts: &EstimateOptions,
) -> Result<ParameterEstimate> {
    check_observation(v0, x_max, sys)?;
    let (m, g) = (sys.m(), sys.g());
    let scale = m * g / (v0 * v0);
    // Strength r = gamma v0^2 / (m g); exponent s = 2 gamma x_max / m = c r.
    let c = 2.0 * g * x_max / (v0 * v0);
    let f = |r: f64| 0.5 * m * v0 * v0 - m * g * x_max * expm1_ratio(c * r);
    let df = |r: f64| -m * g * x_max * c * expm1_ratio_prime(c * r);
    let guess = 1.0 / c - 1.0;
    // Keep the exponent representable.
    let limit = opts.max_strength.min(700.0 / c);
    let hi = expand_bracket(f, guess, limit, "gamma")?;
    let r = bracketed_newton(|r| (f(r), df(r)), 0.0, hi, Some(guess.min(hi)), &opts.root)?;
    Ok(ParameterEstimate {
        value: r * scale,
        residual: f(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::bounce_map_quadratic;

    #[test]
    fn gamma_inverts_bounce_map() {
        let sys = PhysicalSystem::normalized();
        let est = estimate_gamma(1.0, 0.476_550_899_0, &sys, &Default::default()).unwrap();
        assert!((est.value - 0.1).abs() < 1e-8, "{}", est.value);
        for gamma in [1e-4, 0.05, 0.7, 3.0] {
            let x = bounce_map_quadratic(1.3, gamma, &sys).unwrap().x_max;
            let est = estimate_gamma(1.3, x, &sys, &Default::default()).unwrap();
            assert!((est.value / gamma - 1.0).abs() < 1e-9, "{gamma}: {}", est.value);
        }
    }

    #[test]
    fn alpha_inverts_constant_of_motion() {
        let sys = PhysicalSystem::new(2.0, 9.81, 1.0).unwrap();
        for alpha in [1e-3, 0.05, 0.4, 2.0] {
            // Apex from K(0, v0) = m g x_max.
            let v0 = 3.0;
            let x = crate::classical::k_linear(0.0, v0, alpha, &sys).unwrap() / (sys.m() * sys.g());
            let est = estimate_alpha(v0, x, &sys, &Default::default()).unwrap();
            assert!((est.value / alpha - 1.0).abs() < 1e-9, "{alpha}: {}", est.value);
        }
    }

    #[test]
    fn inconsistent_apex_has_no_root() {
        let sys = PhysicalSystem::normalized();
        let opts = EstimateOptions::default();
        for est in [estimate_alpha, estimate_gamma] {
            assert!(matches!(est(1.0, 0.5, &sys, &opts), Err(BouncerError::NoRoot(_))));
            assert!(matches!(est(1.0, 0.6, &sys, &opts), Err(BouncerError::NoRoot(_))));
            assert!(matches!(est(1.0, 0.0, &sys, &opts), Err(BouncerError::NoRoot(_))));
        }
    }

    #[test]
    fn vanishing_apex_exceeds_bracket() {
        let sys = PhysicalSystem::normalized();
        let err = estimate_alpha(1.0, 1e-12, &sys, &Default::default()).unwrap_err();
        assert!(err.to_string().contains("maximum"), "{err}");
    }
}
