//! Quantum bouncer with linear or quadratic velocity-dependent dissipation.
//!
//! Classical constants of motion and Hamiltonians, the Airy eigenbasis of
//! the unperturbed bouncer, closed-form matrix elements, second-order
//! spectra for the constant-of-motion (`K`) and Hamiltonian (`H`)
//! quantizations, and brute-force oracles that check all of them.

pub mod airy;
pub mod classical;
pub mod elements;
pub mod error;
pub mod io;
pub mod kinds;
pub mod oracle;
pub mod quadrature;
pub mod registry;
pub mod roots;
pub mod spectra;
pub mod units;

pub use error::{BouncerError, Result};
pub use kinds::{Branch, Formulation, Law, Route};
pub use units::PhysicalSystem;
