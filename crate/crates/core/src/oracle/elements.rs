//! Matrix elements by direct quadrature, and checks of closed forms
//! against them.

use rayon::prelude::*;
use serde::Serialize;

use super::descriptor::{parse, Complex, Letter};
use crate::airy::{AiryBasis, AiryForm, Poly};
use crate::elements::{ElementCatalog, Family, Pair};
use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Law, Route};

/// Quadrature error estimates above this fail the element.
pub const ELEMENT_ERROR_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureElement {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl QuadratureElement {
    pub fn norm_sqr(&self) -> f64 {
        Complex {
            re: self.re,
            im: self.im,
        }
        .norm_sqr()
    }
}

fn add_forms(a: &AiryForm, b: &AiryForm) -> AiryForm {
    AiryForm {
        level: a.level,
        p: a.p.add(&b.p),
        q: a.q.add(&b.q),
    }
}

fn zero_form(level: usize) -> AiryForm {
    AiryForm {
        level,
        p: Poly::default(),
        q: Poly::default(),
    }
}

fn is_zero(form: &AiryForm) -> bool {
    form.p.0.iter().chain(&form.q.0).all(|&c| c == 0.0)
}

/// `⟨n|O|k⟩` for the operator described by `descriptor`, integrating
/// `ψ_n · (O ψ_k)` with `O ψ_k` carried exactly as polynomial combinations of
/// `Ai` and `Ai'`.
pub fn element_by_quadrature(
    descriptor: &str,
    n: usize,
    k: usize,
    basis: &AiryBasis,
) -> Result<QuadratureElement> {
    let words = parse(descriptor)?;
    basis.require(n.max(k))?;
    basis.require(n.min(k))?;
    let zk = basis.zero(k);
    let mut re_form = zero_form(k);
    let mut im_form = zero_form(k);
    for word in &words {
        let mut form = AiryForm::eigenfunction(k);
        for letter in word.letters.iter().rev() {
            form = match letter {
                Letter::Z => form.times_z(),
                Letter::D => form.differentiate(zk),
            };
        }
        if word.coefficient.re != 0.0 {
            re_form = add_forms(&re_form, &form.scale(word.coefficient.re));
        }
        if word.coefficient.im != 0.0 {
            im_form = add_forms(&im_form, &form.scale(word.coefficient.im));
        }
    }
    let integrate = |form: &AiryForm| -> Result<(f64, f64)> {
        if is_zero(form) {
            return Ok((0.0, 0.0));
        }
        let est = basis.inner_product(n.max(k), |z| {
            basis.eigenfunction(n, z).unwrap_or(0.0) * form.eval(basis, z)
        })?;
        Ok((est.value, est.error))
    };
    let (re, re_err) = integrate(&re_form)?;
    let (im, im_err) = integrate(&im_form)?;
    let error = re_err + im_err;
    if error > ELEMENT_ERROR_LIMIT {
        return Err(BouncerError::Quadrature {
            tol: ELEMENT_ERROR_LIMIT,
            estimate: error,
        });
    }
    Ok(QuadratureElement { re, im, error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementCheck {
    pub family: &'static str,
    pub n: usize,
    pub k: usize,
    pub closed_form: f64,
    pub quadrature: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub catalog: &'static str,
    pub max_level: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub checks: Vec<ElementCheck>,
}

impl CatalogReport {
    pub fn failures(&self) -> impl Iterator<Item = &ElementCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Families with at least one failing entry, in [`Family::ALL`] order.
    pub fn failing_families(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for c in self.failures() {
            if !out.contains(&c.family) {
                out.push(c.family);
            }
        }
        out.sort_by_key(|tag| Family::ALL.iter().position(|f| f.tag() == *tag));
        out
    }
}

/// Relative agreement, or absolute agreement for entries near zero.
pub fn agrees(closed: f64, quad: f64, rel_tol: f64, abs_tol: f64) -> bool {
    let diff = (closed - quad).abs();
    diff <= abs_tol || diff <= rel_tol * quad.abs()
}

/// Compare every family of `catalog` against quadrature for `n, k <= max_level`.
pub fn verify_catalog(
    catalog: &dyn ElementCatalog,
    basis: &AiryBasis,
    max_level: usize,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<CatalogReport> {
    basis.require(max_level)?;
    let jobs: Vec<(Family, usize, usize)> = Family::ALL
        .into_iter()
        .flat_map(|f| (1..=max_level).flat_map(move |n| (1..=max_level).map(move |k| (f, n, k))))
        .collect();
    let checks = jobs
        .par_iter()
        .map(|&(family, n, k)| {
            let pair = Pair::new(basis, n, k)?;
            let closed_form = catalog.element(family, &pair);
            let quadrature = element_by_quadrature(family.descriptor(), n, k, basis)?.re;
            Ok(ElementCheck {
                family: family.tag(),
                n,
                k,
                closed_form,
                quadrature,
                passed: agrees(closed_form, quadrature, rel_tol, abs_tol),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogReport {
        catalog: catalog.name(),
        max_level,
        rel_tol,
        abs_tol,
        checks,
    })
}

/// Descriptors of the first- and second-order perturbation, per unit power
/// of the drag parameter, and the overall sign of the first-order one.
pub fn perturbation_descriptors(law: Law, route: Route, branch: Option<Branch>) -> Result<(f64, &'static str, &'static str)> {
    Ok(match (law, route) {
        (Law::Linear, Route::K) => (1.0, "-1/3 v^3", "1/4 v^4"),
        (Law::Linear, Route::H) => (1.0, "1/6 p^3", "1/24 p^4"),
        (Law::Quadratic, route) => {
            let sign = -branch
                .ok_or_else(|| BouncerError::Config("quadratic law needs a branch".into()))?
                .sign();
            match route {
                Route::K => (sign, "sym(v^2 z) + z^2", "sym(v^2 z^2) + 2/3 z^3"),
                Route::H => (sign, "sym(p^2 z) - z^2", "sym(p^2 z^2) + 2/3 z^3"),
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLevel {
    pub n: usize,
    pub e0: f64,
    pub shift1: f64,
    pub shift2: f64,
    pub total: f64,
    pub basis_size: usize,
}

/// `E_n = z_n + Re⟨n|V|n⟩ + Σ_{k<=N, k != n} |⟨n|V1|k⟩|² / (z_n - z_k)` with
/// every element from quadrature.
pub fn second_order_by_elements(
    law: Law,
    route: Route,
    branch: Option<Branch>,
    n: usize,
    eps: f64,
    basis: &AiryBasis,
    size: usize,
) -> Result<OracleLevel> {
    if size < 40 {
        return Err(BouncerError::Config(format!("oracle basis needs N >= 40, got {size}")));
    }
    basis.require(size.max(n))?;
    let e0 = basis.zero(n);
    if eps == 0.0 {
        return Ok(OracleLevel {
            n,
            e0,
            shift1: 0.0,
            shift2: 0.0,
            total: e0,
            basis_size: size,
        });
    }
    let (sign, first, second) = perturbation_descriptors(law, route, branch)?;
    let diag1 = element_by_quadrature(first, n, n, basis)?;
    let diag2 = element_by_quadrature(second, n, n, basis)?;
    let sum = (1..=size)
        .into_par_iter()
        .filter(|&k| k != n)
        .map(|k| {
            let el = element_by_quadrature(first, n, k, basis)?;
            Ok(el.norm_sqr() / (e0 - basis.zero(k)))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum::<f64>();
    let shift1 = eps * sign * diag1.re;
    let shift2 = eps * eps * (diag2.re + sum);
    Ok(OracleLevel {
        n,
        e0,
        shift1,
        shift2,
        total: e0 + shift1 + shift2,
        basis_size: size,
    })
}
