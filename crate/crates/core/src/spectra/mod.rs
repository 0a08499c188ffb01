//! Second-order spectra of the constant-of-motion (`K`) and Hamiltonian
//! (`H`) quantizations.
//!
//! Everything is computed in normalized units, where `E_n^(0) = z_n` and the
//! drag parameter is dimensionless; results convert on export.

mod models;
mod truncation;

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

pub use models::{a_nk, printed_linear_term, DerivedModel, PrintedModel, SpectrumModel};
pub use truncation::{sum_terms, SumOutcome, Truncation};

use crate::airy::AiryBasis;
use crate::elements::ElementCatalog;
use crate::error::{BouncerError, Result};
use crate::io::fmt17;
use crate::kinds::{Branch, Law, Route};
use crate::registry::Registry;
use crate::units::PhysicalSystem;

/// Default bound on `|shift| / E0`.
pub const VALIDITY_LIMIT: f64 = 0.2;

pub const DEFAULT_MODEL: &str = "printed";

/// Built-in models: `printed` (default) and `derived`.
pub fn models() -> Registry<dyn SpectrumModel> {
    let mut reg: Registry<dyn SpectrumModel> = Registry::new("spectrum model");
    reg.register("printed", || Box::new(PrintedModel))
        .register("derived", || Box::new(DerivedModel));
    reg
}

/// Everything a model needs, in normalized units.
pub struct SpectrumRequest<'a> {
    pub law: Law,
    pub route: Route,
    /// Normalized drag parameter.
    pub eps: f64,
    pub branch: Option<Branch>,
    pub basis: &'a AiryBasis,
    pub catalog: &'a dyn ElementCatalog,
    pub truncation: Truncation,
    pub validity_limit: f64,
}

impl<'a> SpectrumRequest<'a> {
    pub fn with_route(&self, route: Route) -> Self {
        Self {
            route,
            branch: self.branch,
            ..*self
        }
    }

    pub fn with_branch(&self, branch: Branch) -> Self {
        Self {
            branch: Some(branch),
            ..*self
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(BouncerError::Config(format!(
                "drag parameter must be finite and >= 0, got {}",
                self.eps
            )));
        }
        if self.law == Law::Quadratic && self.branch.is_none() {
            return Err(BouncerError::Config("quadratic law needs --branch up|down".into()));
        }
        if !(self.validity_limit > 0.0) {
            return Err(BouncerError::Config("validity limit must be > 0".into()));
        }
        Ok(())
    }
}

impl Clone for SpectrumRequest<'_> {
    fn clone(&self) -> Self {
        Self { ..*self }
    }
}

/// First-order coefficient, diagonal second-order coefficient, and the
/// second-order series term for each intermediate level `k`, all per unit
/// power of the drag parameter.
pub struct LevelParts<'a> {
    pub shift1: f64,
    pub diag2: f64,
    pub term: Box<dyn Fn(usize) -> f64 + Send + Sync + 'a>,
}

/// One level, normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRecord {
    pub n: usize,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub shift1: f64,
    pub shift2: f64,
    #[serde(rename = "E_total")]
    pub total: f64,
    pub tail_estimate: f64,
    pub terms_used: usize,
}

pub fn evaluate_level(model: &dyn SpectrumModel, req: &SpectrumRequest, n: usize) -> Result<LevelRecord> {
    req.validate()?;
    let max = req.truncation.max_level();
    req.basis.require(max.max(n))?;
    let e0 = req.basis.zero(n);
    if req.eps == 0.0 {
        return Ok(LevelRecord {
            n,
            e0,
            shift1: 0.0,
            shift2: 0.0,
            total: e0,
            tail_estimate: 0.0,
            terms_used: 0,
        });
    }
    let parts = model.parts(req, n)?;
    let sum = sum_terms(n, &parts.term, &req.truncation)?;
    let eps2 = req.eps * req.eps;
    let shift1 = req.eps * parts.shift1;
    let shift2 = eps2 * (parts.diag2 + sum.sum);
    let shift = shift1 + shift2;
    if shift.abs() > req.validity_limit * e0 {
        return Err(BouncerError::Validity {
            level: n,
            shift: shift.abs(),
            e0,
            limit: req.validity_limit,
        });
    }
    Ok(LevelRecord {
        n,
        e0,
        shift1,
        shift2,
        total: e0 + shift,
        tail_estimate: eps2 * sum.tail,
        terms_used: sum.terms_used,
    })
}

/// `E_n^K` for one level.
pub fn energy_k(model: &dyn SpectrumModel, req: &SpectrumRequest, n: usize) -> Result<LevelRecord> {
    evaluate_level(model, &req.with_route(Route::K), n)
}

/// `E_n^H` for one level.
pub fn energy_h(model: &dyn SpectrumModel, req: &SpectrumRequest, n: usize) -> Result<LevelRecord> {
    evaluate_level(model, &req.with_route(Route::H), n)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumHeader {
    pub model: String,
    pub catalog: String,
    pub law: Law,
    pub route: Route,
    pub branch: Option<Branch>,
    /// Drag parameter in the caller's units.
    pub parameter: f64,
    pub parameter_normalized: f64,
    pub m: f64,
    pub g: f64,
    pub hbar: f64,
    pub l_g: f64,
    pub e_g: f64,
    pub truncation: Truncation,
    pub validity_limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub header: SpectrumHeader,
    /// Normalized-unit records.
    pub levels: Vec<LevelRecord>,
}

/// Levels `range` in parallel; the first failing level (lowest `n`) wins.
pub fn spectrum(
    model: &dyn SpectrumModel,
    req: &SpectrumRequest,
    levels: RangeInclusive<usize>,
    sys: &PhysicalSystem,
    parameter: f64,
) -> Result<SpectrumResult> {
    if *levels.start() == 0 || levels.is_empty() {
        return Err(BouncerError::Config(format!(
            "level range {}..{} must be non-empty and start at 1 or above",
            levels.start(),
            levels.end()
        )));
    }
    let records: Vec<Result<LevelRecord>> = levels
        .into_par_iter()
        .map(|n| evaluate_level(model, req, n))
        .collect();
    let levels = records.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult {
        header: SpectrumHeader {
            model: model.name().to_string(),
            catalog: req.catalog.name().to_string(),
            law: req.law,
            route: req.route,
            branch: req.branch,
            parameter,
            parameter_normalized: req.eps,
            m: sys.m(),
            g: sys.g(),
            hbar: sys.hbar(),
            l_g: sys.l_g(),
            e_g: sys.e_g(),
            truncation: req.truncation,
            validity_limit: req.validity_limit,
        },
        levels,
    })
}

impl SpectrumResult {
    fn physical(&self) -> Vec<LevelRecord> {
        let e = self.header.e_g;
        self.levels
            .iter()
            .map(|r| LevelRecord {
                e0: r.e0 * e,
                shift1: r.shift1 * e,
                shift2: r.shift2 * e,
                total: r.total * e,
                tail_estimate: r.tail_estimate * e,
                ..*r
            })
            .collect()
    }

    /// `n,E0,shift1,shift2,E_total,tail_estimate,terms_used`, energies in
    /// the system's units.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = crate::io::csv_writer(out);
        w.write_record(["n", "E0", "shift1", "shift2", "E_total", "tail_estimate", "terms_used"])?;
        for r in self.physical() {
            w.write_record([
                r.n.to_string(),
                fmt17(r.e0),
                fmt17(r.shift1),
                fmt17(r.shift2),
                fmt17(r.total),
                fmt17(r.tail_estimate),
                r.terms_used.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "header": self.header,
            "levels": self.physical(),
        })
    }
}

/// Which way the published relative-difference formula reads against the
/// direct subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// `E^H - E^K = RHS`.
    Difference,
    /// `(E^H - E^K) / E0 = RHS`.
    Relative,
    /// `(E^H - E^K) / E0² = RHS`.
    DoubleRelative,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaE {
    pub n: usize,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E_K")]
    pub e_k: f64,
    #[serde(rename = "E_H")]
    pub e_h: f64,
    /// `(E^H - E^K) / E0`, authoritative.
    pub direct: f64,
    /// Right-hand side of the published formula, normalized units.
    pub printed_rhs: f64,
    pub reading: Reading,
}

/// Right-hand side of the published route-difference formula at level `n`.
pub fn printed_delta_rhs(req: &SpectrumRequest, n: usize) -> Result<f64> {
    req.validate()?;
    let zeros = req.basis.zeros();
    let zn = req.basis.zero(n);
    Ok(match req.law {
        Law::Quadratic => {
            let sg = req.branch.map(Branch::sign).unwrap_or(1.0);
            sg * req.eps * 16.0 / 15.0 * zn * zn
        }
        Law::Linear => {
            if req.eps == 0.0 {
                return Ok(0.0);
            }
            req.basis.require(req.truncation.max_level().max(n))?;
            let sum = sum_terms(n, |k| printed_linear_term(zn, zeros[k - 1]), &req.truncation)?;
            req.eps * req.eps * (-(1.0 / 6.0) * (zn / 6.0) - 4.0 / 9.0 / zn * sum.sum)
        }
    })
}

fn classify(direct: f64, e0: f64, rhs: f64) -> Reading {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
    if direct == 0.0 && rhs == 0.0 {
        Reading::Relative
    } else if close(direct * e0, rhs) {
        Reading::Difference
    } else if close(direct, rhs) {
        Reading::Relative
    } else if close(direct / e0, rhs) {
        Reading::DoubleRelative
    } else {
        Reading::None
    }
}

/// `E^K`, `E^H`, their direct relative difference, and the published form.
pub fn delta_e(model: &dyn SpectrumModel, req: &SpectrumRequest, n: usize) -> Result<DeltaE> {
    let k = energy_k(model, req, n)?;
    let h = energy_h(model, req, n)?;
    let direct = (h.total - k.total) / k.e0;
    let printed_rhs = printed_delta_rhs(req, n)?;
    Ok(DeltaE {
        n,
        e0: k.e0,
        e_k: k.total,
        e_h: h.total,
        direct,
        printed_rhs,
        reading: classify(direct, k.e0, printed_rhs),
    })
}

/// [`delta_e`] over a range of levels, in parallel.
pub fn compare_routes(
    model: &dyn SpectrumModel,
    req: &SpectrumRequest,
    levels: RangeInclusive<usize>,
) -> Result<Vec<DeltaE>> {
    levels
        .into_par_iter()
        .map(|n| delta_e(model, req, n))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// `n,E0,E_K,E_H,delta_direct,delta_printed_rhs,reading`, energies in the
/// system's units; the two deltas are dimensionless.
pub fn write_comparison_csv<W: std::io::Write>(rows: &[DeltaE], sys: &PhysicalSystem, out: W) -> Result<()> {
    let e = sys.e_g();
    let mut w = crate::io::csv_writer(out);
    w.write_record(["n", "E0", "E_K", "E_H", "delta_direct", "delta_printed_rhs", "reading"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt17(r.e0 * e),
            fmt17(r.e_k * e),
            fmt17(r.e_h * e),
            fmt17(r.direct),
            fmt17(r.printed_rhs),
            serde_json::to_value(r.reading)?.as_str().unwrap_or("none").to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
