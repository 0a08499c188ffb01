//! Physical parameters and the gravitational length/energy scales.
//!
//! Quantum computations run in normalized units where `m = g = l_g = 1`
//! (so `hbar = sqrt(2)`); [`PhysicalSystem`] converts in and out.

use serde::{Deserialize, Serialize};

use crate::error::{BouncerError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSystem {
    m: f64,
    g: f64,
    hbar: f64,
    l_g: f64,
    e_g: f64,
}

impl PhysicalSystem {
    pub fn new(m: f64, g: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("g", g), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(BouncerError::Config(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        let l_g = (hbar * hbar / (2.0 * m * m * g)).cbrt();
        Ok(Self {
            m,
            g,
            hbar,
            l_g,
            e_g: m * g * l_g,
        })
    }

    /// `m = g = l_g = 1`, `hbar = sqrt(2)`.
    pub fn normalized() -> Self {
        Self {
            m: 1.0,
            g: 1.0,
            hbar: std::f64::consts::SQRT_2,
            l_g: 1.0,
            e_g: 1.0,
        }
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Gravitational length `(hbar^2 / (2 m^2 g))^(1/3)`.
    pub fn l_g(&self) -> f64 {
        self.l_g
    }

    /// Energy scale `m g l_g`.
    pub fn e_g(&self) -> f64 {
        self.e_g
    }

    /// Time scale `sqrt(l_g / g)`.
    pub fn t_g(&self) -> f64 {
        (self.l_g / self.g).sqrt()
    }

    /// Linear drag coefficient (mass/time) in normalized units.
    pub fn alpha_to_normalized(&self, alpha: f64) -> f64 {
        alpha * self.t_g() / self.m
    }

    /// Quadratic drag coefficient (mass/length) in normalized units.
    pub fn gamma_to_normalized(&self, gamma: f64) -> f64 {
        gamma * self.l_g / self.m
    }

    pub fn energy_from_normalized(&self, e: f64) -> f64 {
        e * self.e_g
    }

    pub fn energy_to_normalized(&self, e: f64) -> f64 {
        e / self.e_g
    }
}

impl Default for PhysicalSystem {
    fn default() -> Self {
        Self::normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_is_self_consistent() {
        let n = PhysicalSystem::normalized();
        let rebuilt = PhysicalSystem::new(1.0, 1.0, std::f64::consts::SQRT_2).unwrap();
        assert!((rebuilt.l_g() - 1.0).abs() < 1e-15);
        assert!((rebuilt.e_g() - n.e_g()).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PhysicalSystem::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalSystem::new(1.0, -9.8, 1.0).is_err());
        assert!(PhysicalSystem::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn neutron_scales() {
        // Neutron in Earth gravity: l_g ~ 5.87 micrometres, e_g ~ 0.602 peV.
        let sys = PhysicalSystem::new(1.674_927_498e-27, 9.81, 1.054_571_817e-34).unwrap();
        assert!((sys.l_g() * 1e6 - 5.87).abs() < 0.01);
        let e_pev = sys.e_g() / 1.602_176_634e-19 * 1e12;
        assert!((e_pev - 0.602).abs() < 0.002);
    }
}
