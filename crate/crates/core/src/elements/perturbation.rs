//! Hermitized perturbation operators in the bouncer basis.
//!
//! Normalized units (`m = g = l_g = 1`, so `hbar = sqrt 2`) throughout: the
//! velocity and momentum operators are both `-i sqrt(2) d/dz`, and every
//! matrix is per unit power of the (normalized) drag parameter.
//!
//! Quadratic drag, with `D = d/dz` and `σ = +1` on the upper branch:
//!
//! ```text
//! sym(v² x)  = (v²z + v z v + z v²)/3          = -2 (z D² + D)
//! sym(v² x²) = (six orderings of v v z z)/6    = -2 z² D² - 4 z D - 1
//! K route:  V = -σ γ [sym(v²x) + z²] + γ² [sym(v²x²) + (2/3) z³]
//! H route:  W = -σ γ [sym(p²x) - z²] + γ² [sym(p²x²) + (2/3) z³]
//! ```
//!
//! The words reduce to the element families through
//! `D² ψ_k = (z - z_k) ψ_k`, so `⟨n|z D²|k⟩ = ⟨z²⟩ - z_k ⟨z⟩` and
//! `⟨n|z² D²|k⟩ = ⟨z³⟩ - z_k ⟨z²⟩`, and through
//! `⟨n|z D|k⟩ = -(z_n - z_k) ⟨n|z²|k⟩ / 4` off the diagonal (from
//! `[H0, z²] = -4 z D - 2`), `-1/2` on it.
//!
//! Linear drag: `v³ = (-i sqrt 2)³ D³ = 2 sqrt(2) i D³` and `v⁴ = 4 D⁴`, so
//! `V = -(2 sqrt(2)/3) i α D³ + α² D⁴` and `W = (sqrt(2)/3) i α D³ + α² D⁴ / 6`.
//! The first-order operator is `i` times a real, non-symmetric matrix.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{ElementCatalog, ElementTable, Family, Pair};
use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Law, Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Order {
    First,
    Second,
}

/// Whether an operator is its real matrix or `i` times it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Real,
    Imaginary,
}

/// Law, route and (quadratic law only) branch of a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PerturbationOperator {
    pub law: Law,
    pub route: Route,
    pub branch: Option<Branch>,
}

impl PerturbationOperator {
    pub fn new(law: Law, route: Route, branch: Option<Branch>) -> Result<Self> {
        match (law, branch) {
            (Law::Quadratic, None) => Err(BouncerError::Config(
                "quadratic-drag perturbation needs a branch (up or down)".into(),
            )),
            (Law::Linear, Some(_)) => Ok(Self { law, route, branch: None }),
            _ => Ok(Self { law, route, branch }),
        }
    }

    pub fn phase(&self, order: Order) -> Phase {
        match (self.law, order) {
            (Law::Linear, Order::First) => Phase::Imaginary,
            _ => Phase::Real,
        }
    }

    fn sign(&self) -> f64 {
        self.branch.map_or(1.0, Branch::sign)
    }

    /// Real coefficient of `⟨n|·|k⟩` given the element families at `pair`.
    fn combine(&self, order: Order, pair: &Pair, el: impl Fn(Family) -> f64) -> f64 {
        let diag = pair.n == pair.k;
        match (self.law, order) {
            (Law::Linear, Order::First) => {
                let c = match self.route {
                    Route::K => -2.0 * std::f64::consts::SQRT_2 / 3.0,
                    Route::H => std::f64::consts::SQRT_2 / 3.0,
                };
                c * el(Family::D3)
            }
            (Law::Linear, Order::Second) => {
                let c = match self.route {
                    Route::K => 1.0,
                    Route::H => 1.0 / 6.0,
                };
                c * el(Family::D4)
            }
            (Law::Quadratic, Order::First) => {
                let z_d2 = el(Family::Z2) - pair.zk * el(Family::Z);
                let sym = -2.0 * (z_d2 + el(Family::D1));
                let pot = match self.route {
                    Route::K => el(Family::Z2),
                    Route::H => -el(Family::Z2),
                };
                -self.sign() * (sym + pot)
            }
            (Law::Quadratic, Order::Second) => {
                let z2_d2 = el(Family::Z3) - pair.zk * el(Family::Z2);
                let z_d = if diag {
                    -0.5
                } else {
                    -(pair.zn - pair.zk) * el(Family::Z2) / 4.0
                };
                let one = if diag { 1.0 } else { 0.0 };
                -2.0 * z2_d2 - 4.0 * z_d - one + 2.0 / 3.0 * el(Family::Z3)
            }
        }
    }
}

/// One entry straight from a catalog, without building tables.
pub fn perturbation_entry(
    op: &PerturbationOperator,
    order: Order,
    catalog: &dyn ElementCatalog,
    pair: &Pair,
) -> f64 {
    op.combine(order, pair, |f| catalog.element(f, pair))
}

/// First- and second-order matrices of one perturbation.
#[derive(Debug, Clone)]
pub struct PerturbationMatrix {
    pub operator: PerturbationOperator,
    /// Real coefficient matrix; the operator is `i` times it when
    /// [`Self::order1_phase`] is imaginary.
    pub order1: DMatrix<f64>,
    pub order1_phase: Phase,
    pub order2: DMatrix<f64>,
}

impl PerturbationMatrix {
    pub fn build(op: PerturbationOperator, table: &ElementTable) -> Self {
        let n = table.size();
        let mut order1 = DMatrix::zeros(n, n);
        let mut order2 = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let pair = Pair {
                    n: i + 1,
                    k: j + 1,
                    zn: table.zeros()[i],
                    zk: table.zeros()[j],
                };
                let el = |f: Family| table.get(f, i + 1, j + 1);
                order1[(i, j)] = op.combine(Order::First, &pair, el);
                order2[(i, j)] = op.combine(Order::Second, &pair, el);
            }
        }
        Self {
            operator: op,
            order1,
            order1_phase: op.phase(Order::First),
            order2,
        }
    }

    /// `|⟨n|first-order operator|k⟩|²`, 1-based.
    pub fn abs_squared(&self, n: usize, k: usize) -> f64 {
        self.order1[(n - 1, k - 1)].powi(2)
    }

    /// `max |M - Mᵀ|` over both orders.
    pub fn asymmetry(&self) -> f64 {
        (&self.order1 - self.order1.transpose())
            .amax()
            .max((&self.order2 - self.order2.transpose()).amax())
    }

    /// `eps M1 + eps² M2` for real first-order operators.
    pub fn total(&self, eps: f64) -> Result<DMatrix<f64>> {
        if self.order1_phase == Phase::Imaginary {
            return Err(BouncerError::Config(
                "first-order operator is imaginary; no real total matrix".into(),
            ));
        }
        Ok(&self.order1 * eps + &self.order2 * (eps * eps))
    }
}
