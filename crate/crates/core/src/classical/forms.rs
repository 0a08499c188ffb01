//! Constants of motion, Lagrangians, generalized momenta and Hamiltonians for
//! both drag laws, exact and to second order in the drag parameter.
//!
//! The exact linear-drag forms are written through `u = alpha v / (m g)` and
//! the regular functions below, so `alpha -> 0` needs no special casing and
//! no `1/alpha` cancellation occurs.

use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Formulation};
use crate::units::PhysicalSystem;

const SERIES_SWITCH: f64 = 0.1;

/// `(u - ln(1 + u)) / u^2`, equal to `1/2` at `u = 0`.
pub(crate) fn log_remainder(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        // sum_{j>=2} (-1)^j u^(j-2) / j
        let mut sum = 0.0;
        let mut pow = 1.0;
        for j in 2..40 {
            let term = pow / j as f64;
            sum += if j % 2 == 0 { term } else { -term };
            pow *= u;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (u - u.ln_1p()) / (u * u)
    }
}

/// Derivative of [`log_remainder`].
pub(crate) fn log_remainder_prime(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        // sum_{j>=3} (-1)^j (j-2) u^(j-3) / j
        let mut sum = 0.0;
        let mut pow = 1.0;
        for j in 3..40 {
            let term = (j - 2) as f64 * pow / j as f64;
            sum += if j % 2 == 0 { term } else { -term };
            pow *= u;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        1.0 / (u * (1.0 + u)) - 2.0 * (u - u.ln_1p()) / (u * u * u)
    }
}

/// `((1 + u) ln(1 + u) - u) / u^2`, equal to `1/2` at `u = 0`.
fn entropy_remainder(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        // sum_{j>=2} (-1)^j u^(j-2) / (j (j-1))
        let mut sum = 0.0;
        let mut pow = 1.0;
        for j in 2..40 {
            let term = pow / (j * (j - 1)) as f64;
            sum += if j % 2 == 0 { term } else { -term };
            pow *= u;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        ((1.0 + u) * u.ln_1p() - u) / (u * u)
    }
}

/// `ln(1 + u) / u`, equal to `1` at `u = 0`.
pub(crate) fn ln1p_ratio(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.ln_1p() / u
    }
}

/// `(e^w - 1 - w) / w^2`, equal to `1/2` at `w = 0`.
fn exp_remainder(w: f64) -> f64 {
    if w.abs() < SERIES_SWITCH {
        let mut sum = 0.0;
        let mut term = 0.5;
        for j in 2..40 {
            sum += term;
            term *= w / (j + 1) as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (w.exp_m1() - w) / (w * w)
    }
}

/// `(e^s - 1) / s`, equal to `1` at `s = 0`.
pub(crate) fn expm1_ratio(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.exp_m1() / s
    }
}

/// Derivative of [`expm1_ratio`].
pub(crate) fn expm1_ratio_prime(s: f64) -> f64 {
    if s.abs() < SERIES_SWITCH {
        // sum_{j>=1} j s^(j-1) / (j+1)!
        let mut sum = 0.0;
        let mut fact = 2.0; // (j+1)!
        let mut pow = 1.0;
        for j in 1..30 {
            let term = j as f64 * pow / fact;
            sum += term;
            pow *= s;
            fact *= (j + 2) as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (s * s.exp() - s.exp_m1()) / (s * s)
    }
}

fn check_drag(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(BouncerError::Domain(format!(
            "{name} must be finite and non-negative, got {value}"
        )))
    }
}

fn warn_series(smallness: f64, what: &str) {
    if smallness >= 1.0 {
        log::warn!("{what}: second-order series used outside its range (smallness {smallness:.3} >= 1)");
    }
}

// ---------------------------------------------------------------- linear drag

fn linear_u(v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    let u = alpha * v / (sys.m() * sys.g());
    if 1.0 + u <= 0.0 {
        return Err(BouncerError::Domain(format!(
            "1 + alpha v / (m g) = {} <= 0: velocity at or beyond terminal speed",
            1.0 + u
        )));
    }
    Ok(u)
}

/// Dimensionless smallness `|alpha v / (m g)|` of the linear-drag series.
pub fn linear_smallness(v: f64, alpha: f64, sys: &PhysicalSystem) -> f64 {
    (alpha * v / (sys.m() * sys.g())).abs()
}

/// Constant of motion of `m x'' = -m g - alpha v`, reducing to `m v^2/2 + m g x`.
pub fn k_linear(x: f64, v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    let u = linear_u(v, alpha, sys)?;
    Ok(sys.m() * v * v * log_remainder(u) + sys.m() * sys.g() * x)
}

pub fn l_linear(x: f64, v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    let u = linear_u(v, alpha, sys)?;
    Ok(sys.m() * v * v * entropy_remainder(u) - sys.m() * sys.g() * x)
}

/// Generalized momentum `(m^2 g / alpha) ln(1 + alpha v / (m g))`.
pub fn p_linear(v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    let u = linear_u(v, alpha, sys)?;
    Ok(sys.m() * v * ln1p_ratio(u))
}

pub fn h_linear(x: f64, p: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    let (m, g) = (sys.m(), sys.g());
    let w = alpha * p / (m * m * g);
    let h = p * p / m * exp_remainder(w) + m * g * x;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(BouncerError::Domain(format!("H overflows at alpha p / (m^2 g) = {w}")))
    }
}

pub fn k_linear_series(x: f64, v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    warn_series(linear_smallness(v, alpha, sys), "K (linear)");
    let (m, g) = (sys.m(), sys.g());
    Ok(0.5 * m * v * v + m * g * x - alpha * v.powi(3) / (3.0 * g)
        + alpha * alpha * v.powi(4) / (4.0 * m * g * g))
}

pub fn l_linear_series(x: f64, v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    warn_series(linear_smallness(v, alpha, sys), "L (linear)");
    let (m, g) = (sys.m(), sys.g());
    Ok(0.5 * m * v * v - m * g * x - alpha * v.powi(3) / (6.0 * g)
        + alpha * alpha * v.powi(4) / (12.0 * m * g * g))
}

pub fn p_linear_series(v: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    warn_series(linear_smallness(v, alpha, sys), "p (linear)");
    let (m, g) = (sys.m(), sys.g());
    Ok(m * v - alpha * v * v / (2.0 * g) + alpha * alpha * v.powi(3) / (3.0 * m * g))
}

pub fn h_linear_series(x: f64, p: f64, alpha: f64, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(alpha, "alpha")?;
    let (m, g) = (sys.m(), sys.g());
    warn_series((alpha * p / (m * m * g)).abs(), "H (linear)");
    // The cubic term carries m^3: it is the third-order term of the exact
    // exponential Hamiltonian.
    Ok(p * p / (2.0 * m) + m * g * x + alpha * p.powi(3) / (6.0 * m.powi(3) * g)
        + alpha * alpha * p.powi(4) / (24.0 * m.powi(5) * g * g))
}

// ------------------------------------------------------------- quadratic drag

fn check_branch(value: f64, branch: Branch, name: &str) -> Result<()> {
    if Branch::for_velocity(value) == branch {
        Ok(())
    } else {
        Err(BouncerError::Domain(format!(
            "branch {branch} inconsistent with {name} = {value} (up requires {name} >= 0)"
        )))
    }
}

/// Dimensionless smallness `max(gamma x / m, gamma v^2 / (m g))`.
pub fn quadratic_smallness(x: f64, v: f64, gamma: f64, sys: &PhysicalSystem) -> f64 {
    (gamma * x / sys.m())
        .abs()
        .max((gamma * v * v / (sys.m() * sys.g())).abs())
}

/// `sigma * 2 gamma x / m`.
fn quadratic_exponent(x: f64, gamma: f64, branch: Branch, sys: &PhysicalSystem) -> f64 {
    branch.sign() * 2.0 * gamma * x / sys.m()
}

/// Constant of motion `K_±` of `m x'' = -m g - gamma v |v|`.
pub fn k_quadratic(x: f64, v: f64, gamma: f64, branch: Branch, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    let s = quadratic_exponent(x, gamma, branch, sys);
    let (m, g) = (sys.m(), sys.g());
    Ok(0.5 * m * v * v * s.exp() + m * g * x * expm1_ratio(s))
}

pub fn l_quadratic(x: f64, v: f64, gamma: f64, branch: Branch, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    let s = quadratic_exponent(x, gamma, branch, sys);
    let (m, g) = (sys.m(), sys.g());
    Ok(0.5 * m * v * v * s.exp() - m * g * x * expm1_ratio(s))
}

pub fn p_quadratic(x: f64, v: f64, gamma: f64, branch: Branch, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    let s = quadratic_exponent(x, gamma, branch, sys);
    Ok(sys.m() * v * s.exp())
}

pub fn h_quadratic(x: f64, p: f64, gamma: f64, branch: Branch, sys: &PhysicalSystem) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(p, branch, "p")?;
    let s = quadratic_exponent(x, gamma, branch, sys);
    let (m, g) = (sys.m(), sys.g());
    Ok(p * p / (2.0 * m) * (-s).exp() + m * g * x * expm1_ratio(s))
}

pub fn k_quadratic_series(
    x: f64,
    v: f64,
    gamma: f64,
    branch: Branch,
    sys: &PhysicalSystem,
) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    warn_series(quadratic_smallness(x, v, gamma, sys), "K (quadratic)");
    let (m, g, sg) = (sys.m(), sys.g(), branch.sign());
    Ok(0.5 * m * v * v + m * g * x + sg * gamma * (v * v * x + g * x * x)
        + gamma * gamma * (v * v * x * x / m + 2.0 * g * x.powi(3) / (3.0 * m)))
}

pub fn l_quadratic_series(
    x: f64,
    v: f64,
    gamma: f64,
    branch: Branch,
    sys: &PhysicalSystem,
) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    warn_series(quadratic_smallness(x, v, gamma, sys), "L (quadratic)");
    let (m, g, sg) = (sys.m(), sys.g(), branch.sign());
    Ok(0.5 * m * v * v - m * g * x + sg * gamma * (v * v * x - g * x * x)
        + gamma * gamma * (v * v * x * x / m - 2.0 * g * x.powi(3) / (3.0 * m)))
}

pub fn p_quadratic_series(
    x: f64,
    v: f64,
    gamma: f64,
    branch: Branch,
    sys: &PhysicalSystem,
) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(v, branch, "v")?;
    warn_series(quadratic_smallness(x, v, gamma, sys), "p (quadratic)");
    let (m, sg) = (sys.m(), branch.sign());
    Ok(m * v + sg * gamma * 2.0 * v * x + gamma * gamma * 2.0 * v * x * x / m)
}

pub fn h_quadratic_series(
    x: f64,
    p: f64,
    gamma: f64,
    branch: Branch,
    sys: &PhysicalSystem,
) -> Result<f64> {
    check_drag(gamma, "gamma")?;
    check_branch(p, branch, "p")?;
    let (m, g, sg) = (sys.m(), sys.g(), branch.sign());
    warn_series(quadratic_smallness(x, p / m, gamma, sys), "H (quadratic)");
    Ok(p * p / (2.0 * m) + m * g * x - sg * gamma * (p * p * x / (m * m) - g * x * x)
        + gamma * gamma * (p * p * x * x / m.powi(3) + 2.0 * g * x.powi(3) / (3.0 * m)))
}

// ----------------------------------------------------------------- dispatch

/// Drag law together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase", tag = "law", content = "value")]
pub enum Drag {
    Linear(f64),
    Quadratic(f64),
}

impl Drag {
    pub fn parameter(&self) -> f64 {
        match *self {
            Drag::Linear(a) | Drag::Quadratic(a) => a,
        }
    }

    pub fn law(&self) -> crate::Law {
        match self {
            Drag::Linear(_) => crate::Law::Linear,
            Drag::Quadratic(_) => crate::Law::Quadratic,
        }
    }
}

/// Drag law, formulation and (for the quadratic law) an explicit branch.
///
/// With `branch: None` the quadratic branch follows the sign of the velocity
/// (or momentum) argument.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DissipationSpec {
    pub drag: Drag,
    pub formulation: Formulation,
    pub branch: Option<Branch>,
}

impl DissipationSpec {
    pub fn new(drag: Drag, formulation: Formulation) -> Result<Self> {
        check_drag(drag.parameter(), "drag parameter")?;
        Ok(Self {
            drag,
            formulation,
            branch: None,
        })
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = Some(branch);
        self
    }

    fn branch_for(&self, value: f64) -> Branch {
        self.branch.unwrap_or_else(|| Branch::for_velocity(value))
    }

    /// Acceleration `x''` at velocity `v`.
    pub fn acceleration(&self, v: f64, sys: &PhysicalSystem) -> f64 {
        match self.drag {
            Drag::Linear(alpha) => -sys.g() - alpha / sys.m() * v,
            Drag::Quadratic(gamma) => -sys.g() - gamma / sys.m() * v * v.abs(),
        }
    }

    pub fn constant_of_motion(&self, x: f64, v: f64, sys: &PhysicalSystem) -> Result<f64> {
        match (self.drag, self.formulation) {
            (Drag::Linear(a), Formulation::Exact) => k_linear(x, v, a, sys),
            (Drag::Linear(a), Formulation::Series2) => k_linear_series(x, v, a, sys),
            (Drag::Quadratic(c), Formulation::Exact) => k_quadratic(x, v, c, self.branch_for(v), sys),
            (Drag::Quadratic(c), Formulation::Series2) => {
                k_quadratic_series(x, v, c, self.branch_for(v), sys)
            }
        }
    }

    pub fn lagrangian(&self, x: f64, v: f64, sys: &PhysicalSystem) -> Result<f64> {
        match (self.drag, self.formulation) {
            (Drag::Linear(a), Formulation::Exact) => l_linear(x, v, a, sys),
            (Drag::Linear(a), Formulation::Series2) => l_linear_series(x, v, a, sys),
            (Drag::Quadratic(c), Formulation::Exact) => l_quadratic(x, v, c, self.branch_for(v), sys),
            (Drag::Quadratic(c), Formulation::Series2) => {
                l_quadratic_series(x, v, c, self.branch_for(v), sys)
            }
        }
    }

    pub fn momentum(&self, x: f64, v: f64, sys: &PhysicalSystem) -> Result<f64> {
        match (self.drag, self.formulation) {
            (Drag::Linear(a), Formulation::Exact) => p_linear(v, a, sys),
            (Drag::Linear(a), Formulation::Series2) => p_linear_series(v, a, sys),
            (Drag::Quadratic(c), Formulation::Exact) => p_quadratic(x, v, c, self.branch_for(v), sys),
            (Drag::Quadratic(c), Formulation::Series2) => {
                p_quadratic_series(x, v, c, self.branch_for(v), sys)
            }
        }
    }

    pub fn hamiltonian(&self, x: f64, p: f64, sys: &PhysicalSystem) -> Result<f64> {
        match (self.drag, self.formulation) {
            (Drag::Linear(a), Formulation::Exact) => h_linear(x, p, a, sys),
            (Drag::Linear(a), Formulation::Series2) => h_linear_series(x, p, a, sys),
            (Drag::Quadratic(c), Formulation::Exact) => h_quadratic(x, p, c, self.branch_for(p), sys),
            (Drag::Quadratic(c), Formulation::Series2) => {
                h_quadratic_series(x, p, c, self.branch_for(p), sys)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalSystem {
        PhysicalSystem::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn linear_examples() {
        let sys = unit();
        assert!((k_linear(0.5, 0.0, 1e-9, &sys).unwrap() - 0.5).abs() < 1e-15);
        assert!((k_linear(0.0, 1.0, 0.0, &sys).unwrap() - 0.5).abs() < 1e-15);
        assert!((k_linear(0.0, 1.0, 1e-12, &sys).unwrap() - 0.5).abs() < 1e-12);
        // 10 - 100 ln(1.1)
        assert!((k_linear(0.0, 1.0, 0.1, &sys).unwrap() - 0.468_982_019_567_513_99).abs() < 1e-15);
        // 10 ln(1.1)
        assert!((p_linear(1.0, 0.1, &sys).unwrap() - 0.953_101_798_043_248_6).abs() < 1e-15);
        assert_eq!(p_linear(0.7, 0.0, &sys).unwrap(), 0.7);
    }

    #[test]
    fn linear_domain_error_at_terminal_speed() {
        let sys = unit();
        // Terminal speed m g / alpha = 10.
        assert!(k_linear(0.0, -10.0, 0.1, &sys).is_err());
        assert!(k_linear(0.0, -12.0, 0.1, &sys).is_err());
        assert!(p_linear(-9.99, 0.1, &sys).is_ok());
        assert!(k_linear(0.0, 1.0, -0.1, &sys).is_err());
    }

    #[test]
    fn linear_exact_agrees_with_textbook_form() {
        // m^2 g v / alpha - m (m g / alpha)^2 ln(1 + alpha v / m g) + m g x,
        // evaluated directly where it is well conditioned.
        let sys = PhysicalSystem::new(2.0, 3.0, 1.0).unwrap();
        let (m, g) = (sys.m(), sys.g());
        for &(x, v, a) in &[(0.3, 1.2, 0.7), (1.0, -0.8, 0.9), (0.0, 2.0, 1.5)] {
            let direct = m * m * g * v / a - m * (m * g / a).powi(2) * (a * v / (m * g)).ln_1p()
                + m * g * x;
            let k = k_linear(x, v, a, &sys).unwrap();
            assert!((k - direct).abs() < 1e-12 * direct.abs().max(1.0));
            let l_direct = (m * m * g * v / a) * (a * v / (m * g)).ln_1p()
                + m * (m * g / a).powi(2) * (a * v / (m * g)).ln_1p()
                - m * g * x
                - m * m * g * v / a;
            assert!((l_linear(x, v, a, &sys).unwrap() - l_direct).abs() < 1e-12 * l_direct.abs().max(1.0));
        }
    }

    #[test]
    fn quadratic_launch_value_and_branch_check() {
        let sys = unit();
        let k = k_quadratic(0.0, 1.3, 0.2, Branch::Up, &sys).unwrap();
        assert!((k - 0.5 * 1.3 * 1.3).abs() < 1e-15);
        assert!(k_quadratic(0.1, -1.0, 0.2, Branch::Up, &sys).is_err());
        assert!(k_quadratic(0.1, 1.0, 0.2, Branch::Down, &sys).is_err());
        assert!(k_quadratic(0.1, 0.0, 0.2, Branch::Up, &sys).is_ok());
    }

    #[test]
    fn quadratic_small_gamma_limit() {
        let sys = unit();
        let (x, v) = (0.4, 0.9);
        let e = 0.5 * v * v + x;
        for gamma in [1e-3, 1e-4, 1e-5] {
            let k = k_quadratic(x, v, gamma, Branch::Up, &sys).unwrap();
            assert!((k - e).abs() < 2.0 * gamma);
        }
    }

    #[test]
    fn remainder_helpers_are_continuous_at_switch() {
        for f in [log_remainder, entropy_remainder, exp_remainder, log_remainder_prime, expm1_ratio_prime] {
            let below = f(SERIES_SWITCH * (1.0 - 1e-12));
            let above = f(SERIES_SWITCH * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-13, "{below} vs {above}");
        }
    }
}
