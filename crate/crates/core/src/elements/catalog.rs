//! Closed-form matrix elements `⟨n|z^s|k⟩` and `⟨n|d^s/dz^s|k⟩` in the
//! bouncer basis.
//!
//! Off-diagonal elements follow from the commutator identity with the wall
//! boundary term,
//!
//! ```text
//! (z_n - z_k) ⟨n|A|k⟩ = ⟨n|[H0, A]|k⟩ + ψ_n'(0) (A ψ_k)(0),   H0 = -d² + z,
//! ```
//!
//! where `ψ_n'(0) = (-1)^(n+1)`. For multiplication operators the boundary
//! term vanishes; for `d^s` it does not, which is why the derivative
//! families carry extra terms. Diagonals come from the virial-type
//! identities for Airy functions.

use super::{ElementCatalog, Family, Pair};

/// `(-1)^(n+k)` for 1-based labels.
fn parity(p: &Pair) -> f64 {
    if (p.n + p.k) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn diagonal(family: Family, z: f64) -> f64 {
    match family {
        Family::Identity => 1.0,
        Family::Z => 2.0 * z / 3.0,
        Family::Z2 => 8.0 * z * z / 15.0,
        Family::Z3 => 3.0 / 7.0 + 48.0 * z.powi(3) / 105.0,
        Family::D1 => 0.0,
        Family::D2 => -z / 3.0,
        Family::D3 => 0.5,
        Family::D4 => z * z / 5.0,
    }
}

/// The forms verified against quadrature.
#[derive(Debug, Default, Clone, Copy)]
pub struct DerivedCatalog;

impl ElementCatalog for DerivedCatalog {
    fn name(&self) -> &'static str {
        "derived"
    }

    fn description(&self) -> &'static str {
        "commutator-derived closed forms including wall boundary terms"
    }

    fn element(&self, family: Family, p: &Pair) -> f64 {
        if p.n == p.k {
            return diagonal(family, p.zn);
        }
        let s = parity(p);
        let d = p.zn - p.zk;
        let d2 = d * d;
        match family {
            Family::Identity => 0.0,
            Family::Z => -2.0 * s / d2,
            Family::Z2 => -24.0 * s / (d2 * d2),
            Family::Z3 => s * (24.0 * (p.zn + p.zk) / (d2 * d2) - 720.0 / (d2 * d2 * d2)),
            Family::D1 => s / d,
            Family::D2 => -2.0 * s / d2,
            Family::D3 => s * (6.0 - p.zk * d2) / (d2 * d),
            Family::D4 => s * (2.0 * d2 * d + 4.0 * p.zk * d2 - 24.0) / (d2 * d2),
        }
    }
}

/// The published list, kept verbatim so its
/// disagreements with quadrature can be reported.
#[derive(Debug, Default, Clone, Copy)]
pub struct PrintedCatalog;

impl ElementCatalog for PrintedCatalog {
    fn name(&self) -> &'static str {
        "printed"
    }

    fn description(&self) -> &'static str {
        "published closed forms, kept verbatim"
    }

    fn element(&self, family: Family, p: &Pair) -> f64 {
        if p.n == p.k {
            return diagonal(family, p.zn);
        }
        let s = parity(p);
        let d = p.zn - p.zk;
        let e = p.zk - p.zn;
        match family {
            Family::Identity => 0.0,
            Family::Z => -2.0 * s / d.powi(2),
            Family::Z2 => -24.0 * s / d.powi(4),
            Family::Z3 => -24.0 * (p.zn + p.zk) * s / d.powi(4),
            Family::D1 => s / d,
            Family::D2 => 2.0 * s / d.powi(2),
            Family::D3 => (0.5 + 1.0 / e) * s,
            Family::D4 => (-2.0 * e + 24.0 - 2.0 * p.zk * e * e) / e.powi(4) * s,
        }
    }
}
