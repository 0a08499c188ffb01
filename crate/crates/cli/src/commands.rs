use std::ops::RangeInclusive;

use bouncer_core::airy::AiryBasis;
use bouncer_core::classical::{
    estimate_alpha, estimate_gamma, integrate, DissipationSpec, Drag, EstimateOptions, IntegrateOptions,
};
use bouncer_core::elements::{catalogs, ElementTable, Family, DEFAULT_CATALOG};
use bouncer_core::io::{csv_writer, fmt17};
use bouncer_core::oracle::{run_suite, SuiteOptions};
use bouncer_core::spectra::{
    compare_routes, models, spectrum, write_comparison_csv, DeltaE, SpectrumRequest, Truncation, VALIDITY_LIMIT,
};
use bouncer_core::{BouncerError, Branch, Formulation, Law, PhysicalSystem, Result, Route};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{emit, json_bytes};

/// Exit status of a command that ran to completion.
pub enum Outcome {
    Ok,
    VerificationFailed,
}

fn units(u: &UnitArgs) -> Result<PhysicalSystem> {
    match (u.m, u.g, u.hbar) {
        (None, None, None) => Ok(PhysicalSystem::normalized()),
        (Some(m), Some(g), Some(hbar)) if !u.normalized => PhysicalSystem::new(m, g, hbar),
        _ if u.normalized => Err(BouncerError::Config(
            "--normalized cannot be combined with --m/--g/--hbar".into(),
        )),
        _ => Err(BouncerError::Config(
            "physical units need all three of --m, --g, --hbar".into(),
        )),
    }
}

fn drag(d: &DragArgs) -> Result<(Law, f64)> {
    let law = match (d.law, d.alpha, d.gamma) {
        (Some(LawArg::Linear), _, _) => Law::Linear,
        (Some(LawArg::Quadratic), _, _) => Law::Quadratic,
        (None, Some(_), None) => Law::Linear,
        (None, None, Some(_)) => Law::Quadratic,
        (None, None, None) => return Err(BouncerError::Config("give --alpha or --gamma".into())),
        (None, Some(_), Some(_)) => {
            return Err(BouncerError::Config("give only one of --alpha and --gamma".into()))
        }
    };
    let value = match law {
        Law::Linear if d.gamma.is_some() => {
            return Err(BouncerError::Config("linear law takes --alpha, not --gamma".into()))
        }
        Law::Quadratic if d.alpha.is_some() => {
            return Err(BouncerError::Config("quadratic law takes --gamma, not --alpha".into()))
        }
        Law::Linear => d.alpha,
        Law::Quadratic => d.gamma,
    }
    .ok_or_else(|| BouncerError::Config(format!("{law} law needs its drag coefficient")))?;
    if !(value.is_finite() && value >= 0.0) {
        return Err(BouncerError::Config(format!("drag coefficient must be finite and >= 0, got {value}")));
    }
    Ok((law, value))
}

fn branch(b: Option<BranchArg>) -> Option<Branch> {
    b.map(|b| match b {
        BranchArg::Up => Branch::Up,
        BranchArg::Down => Branch::Down,
    })
}

/// `a..b`, `a..=b` or a single level.
pub fn parse_levels(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || BouncerError::Config(format!("level range `{text}` is not `a..b`"));
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let range = match text.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.trim_start_matches('='))?,
        None => {
            let n = parse(text)?;
            n..=n
        }
    };
    if *range.start() == 0 || range.is_empty() {
        return Err(BouncerError::Config(format!(
            "level range `{text}` must be non-empty and start at 1 or above"
        )));
    }
    Ok(range)
}

fn comparison_json(rows: &[DeltaE], sys: &PhysicalSystem) -> Value {
    let e = sys.e_g();
    rows.iter()
        .map(|r| {
            json!({
                "n": r.n,
                "E0": r.e0 * e,
                "E_K": r.e_k * e,
                "E_H": r.e_h * e,
                "delta_direct": r.direct,
                "delta_printed_rhs": r.printed_rhs,
                "reading": r.reading,
            })
        })
        .collect()
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let sys = units(&a.units)?;
    let (law, parameter) = drag(&a.drag)?;
    let eps = match law {
        Law::Linear => sys.alpha_to_normalized(parameter),
        Law::Quadratic => sys.gamma_to_normalized(parameter),
    };
    let levels = parse_levels(&a.levels)?;
    let branch = branch(a.branch);
    if law == Law::Quadratic && branch.is_none() {
        return Err(BouncerError::Config("quadratic law needs --branch up|down".into()));
    }
    let model = models().create(a.model.as_deref().unwrap_or(bouncer_core::spectra::DEFAULT_MODEL))?;
    let catalog = catalogs().create(a.catalog.as_deref().unwrap_or(DEFAULT_CATALOG))?;
    let truncation = match a.truncation {
        TruncationArg::Adaptive => Truncation::Adaptive {
            tail_tol: a.tol.unwrap_or(1e-3),
            cap: a.basis_size.unwrap_or(400),
        },
        TruncationArg::Fixed => {
            if a.tol.is_some() {
                log::warn!("--tol has no effect with --truncation fixed");
            }
            Truncation::Fixed(a.basis_size.unwrap_or(120))
        }
    };
    if truncation.max_level() < 2 {
        return Err(BouncerError::Config("--basis-size must be at least 2".into()));
    }
    let basis = AiryBasis::new(truncation.max_level().max(*levels.end()))?;
    let req = SpectrumRequest {
        law,
        route: Route::K,
        eps,
        branch,
        basis: &basis,
        catalog: catalog.as_ref(),
        truncation,
        validity_limit: a.validity_limit.unwrap_or(VALIDITY_LIMIT),
    };
    let meta = json!({
        "command": "spectrum",
        "model": model.name(),
        "catalog": catalog.name(),
        "law": law,
        "route": format!("{:?}", a.route).to_lowercase(),
        "branch": branch,
        "parameter": parameter,
        "parameter_normalized": eps,
        "levels": [levels.start(), levels.end()],
        "truncation": truncation,
        "m": sys.m(), "g": sys.g(), "hbar": sys.hbar(),
    });

    let bytes = match a.route {
        RouteArg::Both => {
            let rows = compare_routes(model.as_ref(), &req, levels)?;
            match a.output.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_comparison_csv(&rows, &sys, &mut buf)?;
                    buf
                }
                Format::Json => {
                    let mut doc = meta.clone();
                    doc["comparison"] = comparison_json(&rows, &sys);
                    json_bytes(&doc)?
                }
            }
        }
        RouteArg::K | RouteArg::H => {
            let route = if a.route == RouteArg::K { Route::K } else { Route::H };
            let req = req.with_route(route);
            let result = spectrum(model.as_ref(), &req, levels.clone(), &sys, parameter)?;
            let rows = if a.compare {
                Some(compare_routes(model.as_ref(), &req, levels)?)
            } else {
                None
            };
            match (a.output.format, rows) {
                (Format::Csv, None) => {
                    let mut buf = Vec::new();
                    result.write_csv(&mut buf)?;
                    buf
                }
                (Format::Csv, Some(rows)) => {
                    let e = sys.e_g();
                    let mut w = csv_writer(Vec::new());
                    w.write_record([
                        "n", "E0", "shift1", "shift2", "E_total", "tail_estimate", "terms_used", "E_K", "E_H",
                        "delta_direct", "delta_printed_rhs", "reading",
                    ])?;
                    for (r, d) in result.levels.iter().zip(&rows) {
                        w.write_record([
                            r.n.to_string(),
                            fmt17(r.e0 * e),
                            fmt17(r.shift1 * e),
                            fmt17(r.shift2 * e),
                            fmt17(r.total * e),
                            fmt17(r.tail_estimate * e),
                            r.terms_used.to_string(),
                            fmt17(d.e_k * e),
                            fmt17(d.e_h * e),
                            fmt17(d.direct),
                            fmt17(d.printed_rhs),
                            serde_json::to_value(d.reading)?.as_str().unwrap_or("none").to_string(),
                        ])?;
                    }
                    w.into_inner().map_err(|e| BouncerError::Io(e.into_error()))?
                }
                (Format::Json, rows) => {
                    let mut doc = result.to_json();
                    if let Some(rows) = rows {
                        doc["comparison"] = comparison_json(&rows, &sys);
                    }
                    json_bytes(&doc)?
                }
            }
        }
    };
    emit(a.output.out.as_deref(), &bytes, meta)?;
    Ok(Outcome::Ok)
}

pub fn cmd_classical(a: &ClassicalArgs) -> Result<Outcome> {
    let sys = units(&a.units)?;
    let (law, parameter) = drag(&a.drag)?;
    let drag = match law {
        Law::Linear => Drag::Linear(parameter),
        Law::Quadratic => Drag::Quadratic(parameter),
    };
    let formulation = match a.formulation {
        FormulationArg::Exact => Formulation::Exact,
        FormulationArg::Series2 => Formulation::Series2,
    };
    let spec = DissipationSpec::new(drag, formulation)?;
    let opts = IntegrateOptions {
        // With a bounce budget the run ends on the last bounce.
        t_end: a.t_end.unwrap_or(if a.cycles.is_some() { 1e9 } else { 10.0 }),
        dt: a.dt,
        max_bounces: a.cycles,
    };
    let traj = integrate(a.x0, a.v0, &spec, &sys, &opts)?;
    let bytes = match a.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            traj.write_csv(&mut buf)?;
            buf
        }
        Format::Json => json_bytes(&serde_json::to_value(&traj)?)?,
    };
    // The summary goes wherever the data does not.
    let mut summary = String::new();
    for (i, apex) in traj.apexes.iter().enumerate() {
        summary.push_str(&format!("apex {} t={} x={}\n", i + 1, fmt17(apex.t), fmt17(apex.x)));
    }
    for (i, b) in traj.bounces.iter().enumerate() {
        summary.push_str(&format!("bounce {} t={} speed={}\n", i + 1, fmt17(b.t), fmt17(b.speed)));
    }
    summary.push_str(&format!("max relative drift {:.3e}\n", traj.max_relative_drift()));
    if a.output.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    let meta = json!({
        "command": "classical",
        "spec": spec,
        "x0": a.x0,
        "v0": a.v0,
        "dt": traj.dt,
        "t_end": opts.t_end,
        "cycles": a.cycles,
        "m": sys.m(), "g": sys.g(), "hbar": sys.hbar(),
    });
    emit(a.output.out.as_deref(), &bytes, meta)?;
    Ok(Outcome::Ok)
}

pub fn cmd_estimate(a: &EstimateArgs) -> Result<Outcome> {
    let sys = units(&a.units)?;
    let opts = EstimateOptions::default();
    let (name, est) = match a.law {
        LawArg::Linear => ("alpha", estimate_alpha(a.v0, a.xmax, &sys, &opts)?),
        LawArg::Quadratic => ("gamma", estimate_gamma(a.v0, a.xmax, &sys, &opts)?),
    };
    let bytes = match a.format {
        Format::Csv => format!("parameter,value,residual\n{name},{},{}\n", fmt17(est.value), fmt17(est.residual))
            .into_bytes(),
        Format::Json => json_bytes(&json!({ "parameter": name, "value": est.value, "residual": est.residual }))?,
    };
    if a.out.is_some() {
        println!("{name} = {}", fmt17(est.value));
    }
    let meta = json!({
        "command": "estimate",
        "v0": a.v0,
        "xmax": a.xmax,
        "m": sys.m(), "g": sys.g(), "hbar": sys.hbar(),
    });
    emit(a.out.as_deref(), &bytes, meta)?;
    Ok(Outcome::Ok)
}

pub fn cmd_elements(a: &ElementsArgs) -> Result<Outcome> {
    let catalog = catalogs().create(a.catalog.as_deref().unwrap_or(DEFAULT_CATALOG))?;
    let families = if a.family.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.family.iter().map(|f| f.parse()).collect::<Result<Vec<Family>>>()?
    };
    let basis = AiryBasis::new(a.basis_size)?;
    let table = ElementTable::build(&basis, a.basis_size, catalog.as_ref())?;
    let n = table.size();
    let bytes = match a.output.format {
        Format::Csv => {
            let mut w = csv_writer(Vec::new());
            w.write_record(["family", "operator", "n", "k", "value"])?;
            for f in &families {
                for i in 1..=n {
                    for k in 1..=n {
                        w.write_record([
                            f.tag().to_string(),
                            f.descriptor().to_string(),
                            i.to_string(),
                            k.to_string(),
                            fmt17(table.get(*f, i, k)),
                        ])?;
                    }
                }
            }
            w.into_inner().map_err(|e| BouncerError::Io(e.into_error()))?
        }
        Format::Json => {
            let tables: serde_json::Map<String, Value> = families
                .iter()
                .map(|f| {
                    let rows: Vec<Vec<f64>> = (1..=n).map(|i| (1..=n).map(|k| table.get(*f, i, k)).collect()).collect();
                    (f.tag().to_string(), json!({ "operator": f.descriptor(), "matrix": rows }))
                })
                .collect();
            json_bytes(&json!({
                "catalog": table.catalog(),
                "size": n,
                "zeros": table.zeros(),
                "families": tables,
            }))?
        }
    };
    let meta = json!({ "command": "elements", "catalog": catalog.name(), "size": n });
    emit(a.output.out.as_deref(), &bytes, meta)?;
    Ok(Outcome::Ok)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let model = models().create(a.model.as_deref().unwrap_or("derived"))?;
    let catalog = catalogs().create(a.catalog.as_deref().unwrap_or(DEFAULT_CATALOG))?;
    let mut opts = SuiteOptions {
        quick: a.quick,
        ..Default::default()
    };
    if let Some(tol) = a.tol {
        if !(tol > 0.0) {
            return Err(BouncerError::Config(format!("--tol must be > 0, got {tol}")));
        }
        opts.rel_tol = tol;
    }
    let report = run_suite(model.as_ref(), catalog.as_ref(), &opts)?;
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let line = format!("{tag} {:<32} {:>12.4e} (limit {:.1e})  {}", c.name, c.value, c.limit, c.detail);
        if a.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    let bytes = match a.format {
        Format::Json => json_bytes(&serde_json::to_value(&report)?)?,
        Format::Csv => {
            let mut w = csv_writer(Vec::new());
            w.write_record(["check", "passed", "value", "limit", "detail"])?;
            for c in &report.checks {
                w.write_record([c.name.clone(), c.passed.to_string(), fmt17(c.value), fmt17(c.limit), c.detail.clone()])?;
            }
            w.into_inner().map_err(|e| BouncerError::Io(e.into_error()))?
        }
    };
    let meta = json!({ "command": "verify", "quick": a.quick, "model": model.name(), "catalog": catalog.name() });
    emit(a.out.as_deref(), &bytes, meta)?;
    Ok(if report.passed() {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed
    })
}
