//! The verification suite behind `bouncer verify`.

use rayon::prelude::*;
use serde::Serialize;

use super::diagonalize::diagonalize_quadratic;
use super::elements::{second_order_by_elements, verify_catalog};
use crate::airy::{ai, AiryBasis};
use crate::classical::{bounce_sequence, integrate, Drag, DissipationSpec, IntegrateOptions};
use crate::elements::{ElementCatalog, Family};
use crate::error::Result;
use crate::kinds::{Branch, Formulation, Law, Route};
use crate::spectra::{evaluate_level, SpectrumModel, SpectrumRequest, Truncation};
use crate::units::PhysicalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    /// Reduced sizes: `n, k <= 6` and fewer levels.
    pub quick: bool,
    /// Relative tolerance for closed form vs quadrature.
    pub rel_tol: f64,
    /// Absolute tolerance for near-zero entries.
    pub abs_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            quick: false,
            rel_tol: 1e-6,
            abs_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

impl SuiteCheck {
    fn below(name: impl Into<String>, value: f64, limit: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: value <= limit,
            value,
            limit,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub catalog: &'static str,
    pub model: &'static str,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Basis size for comparing closed-form and quadrature second-order sums.
const ORACLE_BASIS: usize = 40;

fn airy_checks(basis: &AiryBasis, quick: bool) -> Result<Vec<SuiteCheck>> {
    let zeros_n = if quick { 20 } else { 50 };
    let mut worst = (0.0f64, 0);
    for n in 1..=zeros_n {
        let r = ai(-basis.zero(n))?.abs();
        if r > worst.0 {
            worst = (r, n);
        }
    }
    let gram_n = if quick { 6 } else { 10 };
    let pairs: Vec<(usize, usize)> = (1..=gram_n).flat_map(|n| (n..=gram_n).map(move |k| (n, k))).collect();
    let gram = pairs
        .par_iter()
        .map(|&(n, k)| {
            let e = basis.overlap(n, k)?;
            let target = if n == k { 1.0 } else { 0.0 };
            Ok(((e.value - target).abs(), n, k))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = gram.iter().fold((0.0, 0, 0), |a, &b| if b.0 > a.0 { b } else { a });
    Ok(vec![
        SuiteCheck::below(
            "airy.zeros",
            worst.0,
            1e-12,
            format!("max |Ai(-z_n)| over n <= {zeros_n} at n = {}", worst.1),
        ),
        SuiteCheck::below(
            "airy.gram",
            g.0,
            1e-7,
            format!("max |G - I| over n, k <= {gram_n} at ({}, {})", g.1, g.2),
        ),
    ])
}

fn catalog_checks(
    catalog: &dyn ElementCatalog,
    basis: &AiryBasis,
    opts: &SuiteOptions,
) -> Result<Vec<SuiteCheck>> {
    let max_level = if opts.quick { 6 } else { 10 };
    let report = verify_catalog(catalog, basis, max_level, opts.rel_tol, opts.abs_tol)?;
    Ok(Family::ALL
        .iter()
        .map(|f| {
            let entries: Vec<_> = report.checks.iter().filter(|c| c.family == f.tag()).collect();
            let bad: Vec<_> = entries.iter().filter(|c| !c.passed).collect();
            let detail = match bad.first() {
                None => format!("{} entries, n, k <= {max_level}", entries.len()),
                Some(c) => format!(
                    "{} of {} entries disagree; first ({}, {}): closed form {:.12e}, quadrature {:.12e}",
                    bad.len(),
                    entries.len(),
                    c.n,
                    c.k,
                    c.closed_form,
                    c.quadrature
                ),
            };
            SuiteCheck {
                name: format!("elements.{}", f.tag()),
                passed: bad.is_empty(),
                value: bad.len() as f64,
                limit: 0.0,
                detail,
            }
        })
        .collect())
}

fn second_order_checks(
    model: &dyn SpectrumModel,
    catalog: &dyn ElementCatalog,
    basis: &AiryBasis,
    quick: bool,
) -> Result<Vec<SuiteCheck>> {
    let levels = if quick { 3 } else { 5 };
    let cases: Vec<(Law, Route, Option<Branch>, f64)> = vec![
        (Law::Quadratic, Route::K, Some(Branch::Up), 0.01),
        (Law::Quadratic, Route::K, Some(Branch::Down), 0.01),
        (Law::Quadratic, Route::H, Some(Branch::Up), 0.01),
        (Law::Quadratic, Route::H, Some(Branch::Down), 0.01),
        (Law::Linear, Route::K, None, 0.01),
        (Law::Linear, Route::H, None, 0.01),
    ];
    cases
        .into_iter()
        .map(|(law, route, branch, eps)| {
            let req = SpectrumRequest {
                law,
                route,
                eps,
                branch,
                basis,
                catalog,
                truncation: Truncation::Fixed(ORACLE_BASIS),
                validity_limit: f64::INFINITY,
            };
            let mut worst = (0.0f64, 0);
            for n in 1..=levels {
                let closed = evaluate_level(model, &req, n)?;
                let quad = second_order_by_elements(law, route, branch, n, eps, basis, ORACLE_BASIS)?;
                let shift_c = closed.shift1 + closed.shift2;
                let shift_q = quad.shift1 + quad.shift2;
                let rel = (shift_c - shift_q).abs() / shift_q.abs().max(f64::MIN_POSITIVE);
                if rel > worst.0 || worst.1 == 0 {
                    worst = (rel, n);
                }
            }
            let branch_txt = branch.map(|b| format!(" {b}")).unwrap_or_default();
            Ok(SuiteCheck::below(
                format!("second_order.{law}.{route}{branch_txt}"),
                worst.0,
                1e-8,
                format!(
                    "relative shift difference, model vs quadrature elements, N = {ORACLE_BASIS}, n <= {levels}, worst n = {}",
                    worst.1
                ),
            ))
        })
        .collect()
}

/// `|λ_n - E_n(pert)|` at `γ` and `γ/2` under the same basis truncation.
fn scaling_checks(
    model: &dyn SpectrumModel,
    catalog: &dyn ElementCatalog,
    basis: &AiryBasis,
    quick: bool,
) -> Result<Vec<SuiteCheck>> {
    let size = if quick { 60 } else { 120 };
    let levels = 5;
    let gamma = 0.002;
    let routes = [(Route::K, Branch::Up), (Route::K, Branch::Down), (Route::H, Branch::Up), (Route::H, Branch::Down)];
    routes
        .par_iter()
        .map(|&(route, branch)| {
            let req = SpectrumRequest {
                law: Law::Quadratic,
                route,
                eps: gamma,
                branch: Some(branch),
                basis,
                catalog,
                truncation: Truncation::Fixed(size),
                validity_limit: f64::INFINITY,
            };
            let mut a = diagonalize_quadratic(route, gamma, branch, size, basis, catalog)?;
            let mut b = diagonalize_quadratic(route, gamma / 2.0, branch, size, basis, catalog)?;
            a.compare(model, &req, levels)?;
            b.compare(model, &req, levels)?;
            let mut worst = (f64::NAN, 0);
            let mut bad = 0.0;
            for (ca, cb) in a.comparison.iter().zip(&b.comparison) {
                let ratio = ca.deviation / cb.deviation;
                if !(6.0..=10.0).contains(&ratio) {
                    bad += 1.0;
                }
                let off = (ratio - 8.0).abs();
                if worst.0.is_nan() || off > (worst.0 - 8.0f64).abs() {
                    worst = (ratio, ca.n);
                }
            }
            Ok(SuiteCheck {
                name: format!("diagonalization.{route} {branch}"),
                passed: bad == 0.0,
                value: worst.0,
                limit: 8.0,
                detail: format!(
                    "halving ratio of |eigenvalue - perturbative| at gamma = {gamma}, N = {size}, n <= {levels}; \
                     worst n = {} (band [6, 10]); max relative residual {:.1e}",
                    worst.1,
                    a.max_relative_residual.max(b.max_relative_residual)
                ),
            })
        })
        .collect()
}

fn classical_checks() -> Result<Vec<SuiteCheck>> {
    let sys = PhysicalSystem::normalized();
    let mut out = Vec::new();
    for (name, drag) in [("linear", Drag::Linear(0.05)), ("quadratic", Drag::Quadratic(0.05))] {
        let spec = DissipationSpec::new(drag, Formulation::Exact)?;
        let traj = integrate(
            0.0,
            1.0,
            &spec,
            &sys,
            &IntegrateOptions {
                t_end: 6.0,
                ..Default::default()
            },
        )?;
        out.push(SuiteCheck::below(
            format!("classical.conservation.{name}"),
            traj.max_relative_drift(),
            1e-8,
            "max relative drift of the constant of motion per arc".into(),
        ));
    }
    let gamma = 0.002;
    let spec = DissipationSpec::new(Drag::Quadratic(gamma), Formulation::Exact)?;
    let traj = integrate(
        0.0,
        1.0,
        &spec,
        &sys,
        &IntegrateOptions {
            t_end: 100.0,
            max_bounces: Some(10),
            ..Default::default()
        },
    )?;
    let map = bounce_sequence(1.0, gamma, 10, &sys)?;
    let worst = traj
        .apexes
        .iter()
        .zip(&map)
        .map(|(a, s)| (a.x - s.x_max).abs())
        .fold(0.0f64, f64::max);
    let count_ok = traj.apexes.len() >= map.len();
    out.push(SuiteCheck {
        name: "classical.bounce_map".into(),
        passed: count_ok && worst <= 1e-6,
        value: worst,
        limit: 1e-6,
        detail: format!("integrator vs bounce-map apexes over {} cycles", map.len().min(traj.apexes.len())),
    });
    Ok(out)
}

/// Run every oracle check against `catalog` and `model`.
pub fn run_suite(
    model: &dyn SpectrumModel,
    catalog: &dyn ElementCatalog,
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    let size = if opts.quick { 60 } else { 120 };
    let basis = AiryBasis::new(size.max(50))?;
    let mut checks = airy_checks(&basis, opts.quick)?;
    checks.extend(catalog_checks(catalog, &basis, opts)?);
    checks.extend(second_order_checks(model, catalog, &basis, opts.quick)?);
    checks.extend(scaling_checks(model, catalog, &basis, opts.quick)?);
    checks.extend(classical_checks()?);
    Ok(SuiteReport {
        options: *opts,
        catalog: catalog.name(),
        model: model.name(),
        checks,
    })
}
