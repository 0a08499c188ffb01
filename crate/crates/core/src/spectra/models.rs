//! The two second-order spectrum models.

use super::LevelParts;
use super::SpectrumRequest;
use crate::elements::{perturbation_entry, Order, Pair, Phase, PerturbationOperator};
use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Law, Route};

/// Per-level ingredients of the second-order energy for one model.
pub trait SpectrumModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn parts<'a>(&'a self, req: &'a SpectrumRequest<'a>, n: usize) -> Result<LevelParts<'a>>;
}

/// `a_nk = |12 - 2 z_k (z_n - z_k)² + (z_n - z_k)³|² / (z_k - z_n)⁹`.
pub fn a_nk(n: usize, k: usize, zn: f64, zk: f64) -> Result<f64> {
    if n == k {
        return Err(BouncerError::Domain(format!("a_nk needs n != k (got n = k = {n})")));
    }
    let d = zn - zk;
    let num = 12.0 - 2.0 * zk * d * d + d * d * d;
    Ok(num * num / (zk - zn).powi(9))
}

fn quadratic_sign(req: &SpectrumRequest) -> Result<f64> {
    req.branch
        .map(Branch::sign)
        .ok_or_else(|| BouncerError::Config("quadratic law needs a branch".into()))
}

/// The closed forms exactly as published: first-order `∓ 12/15 z_n²` (K) and
/// `± 4/15 z_n²` (H), the shared `γ²` bracket with `a_nk`, and the linear
/// sums over `|1/2 + 1/(z_k - z_n)|² / (z_k - z_n)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct PrintedModel;

impl SpectrumModel for PrintedModel {
    fn name(&self) -> &'static str {
        "printed"
    }

    fn description(&self) -> &'static str {
        "published closed-form second-order spectra, evaluated verbatim"
    }

    fn parts<'a>(&'a self, req: &'a SpectrumRequest<'a>, n: usize) -> Result<LevelParts<'a>> {
        let zeros = req.basis.zeros();
        let zn = zeros[n - 1];
        Ok(match req.law {
            Law::Quadratic => {
                let sg = quadratic_sign(req)?;
                let shift1 = match req.route {
                    Route::K => -sg * 12.0 / 15.0 * zn * zn,
                    Route::H => sg * 4.0 / 15.0 * zn * zn,
                };
                LevelParts {
                    shift1,
                    diag2: (-0.5 + 56.0 * zn.powi(3) / 105.0) * 2.0,
                    term: Box::new(move |k| 4.0 * a_nk(n, k, zn, zeros[k - 1]).unwrap_or(f64::NAN)),
                }
            }
            Law::Linear => {
                let (diag, c) = match req.route {
                    Route::K => (zn * zn / 5.0, 8.0 / 9.0),
                    Route::H => (zn * zn / 30.0, 4.0 / 9.0),
                };
                LevelParts {
                    shift1: 0.0,
                    diag2: diag,
                    term: Box::new(move |k| c * printed_linear_term(zn, zeros[k - 1])),
                }
            }
        })
    }
}

/// `|1/2 + 1/(z_k - z_n)|² / (z_k - z_n)`.
pub fn printed_linear_term(zn: f64, zk: f64) -> f64 {
    let e = zk - zn;
    (0.5 + 1.0 / e).powi(2) / e
}

/// Standard second-order perturbation theory,
/// `E_n = z_n + ⟨n|V|n⟩ + Σ_k |⟨n|V1|k⟩|² / (z_n - z_k)`, on the Hermitized
/// operators assembled from the request's element catalog.
#[derive(Debug, Default, Clone, Copy)]
pub struct DerivedModel;

impl SpectrumModel for DerivedModel {
    fn name(&self) -> &'static str {
        "derived"
    }

    fn description(&self) -> &'static str {
        "Rayleigh-Schroedinger second order from catalog matrix elements"
    }

    fn parts<'a>(&'a self, req: &'a SpectrumRequest<'a>, n: usize) -> Result<LevelParts<'a>> {
        let op = PerturbationOperator::new(req.law, req.route, req.branch)?;
        let diag = Pair::new(req.basis, n, n)?;
        let first = perturbation_entry(&op, Order::First, req.catalog, &diag);
        let shift1 = match op.phase(Order::First) {
            Phase::Real => first,
            // i times a real number: no real first-order shift.
            Phase::Imaginary => 0.0,
        };
        let diag2 = perturbation_entry(&op, Order::Second, req.catalog, &diag);
        let zeros = req.basis.zeros();
        let zn = zeros[n - 1];
        Ok(LevelParts {
            shift1,
            diag2,
            term: Box::new(move |k| {
                let pair = Pair {
                    n,
                    k,
                    zn,
                    zk: zeros[k - 1],
                };
                perturbation_entry(&op, Order::First, req.catalog, &pair).powi(2) / (zn - pair.zk)
            }),
        })
    }
}
