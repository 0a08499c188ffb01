use bouncer_core::airy::AiryBasis;
use bouncer_core::elements::DerivedCatalog;
use bouncer_core::oracle::diagonalize_quadratic;
use bouncer_core::spectra::*;
use bouncer_core::{BouncerError, Branch, Law, Route};
use proptest::prelude::*;
use std::sync::OnceLock;

fn basis() -> &'static AiryBasis {
    static B: OnceLock<AiryBasis> = OnceLock::new();
    B.get_or_init(|| AiryBasis::new(400).unwrap())
}

fn request(law: Law, route: Route, eps: f64, branch: Option<Branch>) -> SpectrumRequest<'static> {
    SpectrumRequest {
        law,
        route,
        eps,
        branch,
        basis: basis(),
        catalog: &DerivedCatalog,
        truncation: Truncation::Fixed(60),
        validity_limit: VALIDITY_LIMIT,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifts_scale_with_their_order(
        n in 1usize..6,
        eps in 1e-4f64..5e-3,
        quadratic in any::<bool>(),
        h in any::<bool>(),
        up in any::<bool>(),
    ) {
        let law = if quadratic { Law::Quadratic } else { Law::Linear };
        let route = if h { Route::H } else { Route::K };
        let branch = Some(if up { Branch::Up } else { Branch::Down });
        for model in [&PrintedModel as &dyn SpectrumModel, &DerivedModel] {
            let a = evaluate_level(model, &request(law, route, eps, branch), n).unwrap();
            let b = evaluate_level(model, &request(law, route, 2.0 * eps, branch), n).unwrap();
            prop_assert!((b.shift1 - 2.0 * a.shift1).abs() <= 1e-12 * a.shift1.abs().max(1e-300));
            prop_assert!((b.shift2 - 4.0 * a.shift2).abs() <= 1e-12 * a.shift2.abs());
            prop_assert!((a.total - (a.e0 + a.shift1 + a.shift2)).abs() < 1e-15 * a.total);
        }
    }
}

#[test]
fn zero_drag_gives_airy_zeros() {
    for model in [&PrintedModel as &dyn SpectrumModel, &DerivedModel] {
        for law in [Law::Linear, Law::Quadratic] {
            let req = request(law, Route::K, 0.0, Some(Branch::Up));
            for n in 1..=5 {
                assert_eq!(evaluate_level(model, &req, n).unwrap().total, basis().zero(n));
            }
        }
    }
}

#[test]
fn route_difference_is_first_order_and_branches_cancel() {
    let gamma = 0.01;
    for model in [&PrintedModel as &dyn SpectrumModel, &DerivedModel] {
        for n in 1..=5 {
            let z = basis().zero(n);
            let req = request(Law::Quadratic, Route::K, gamma, Some(Branch::Up));
            let k_up = energy_k(model, &req, n).unwrap();
            let h_up = energy_h(model, &req, n).unwrap();
            assert!((h_up.shift1 - k_up.shift1 - gamma * 16.0 / 15.0 * z * z).abs() < 1e-12 * z * z);
            let k_down = energy_k(model, &req.with_branch(Branch::Down), n).unwrap();
            assert_eq!(k_up.shift1 + k_down.shift1, 0.0);
            if model.name() == "printed" {
                // The published second-order brackets are route independent,
                // so the whole difference is first order.
                let up = delta_e(model, &req, n).unwrap();
                assert!((up.direct * up.e0 - up.printed_rhs).abs() < 1e-12 * z, "n={n}");
                assert_eq!(up.reading, Reading::Difference);
            }
        }
    }
}

#[test]
fn linear_shift1_vanishes_and_adaptive_sum_reports_divergence() {
    for model in [&PrintedModel as &dyn SpectrumModel, &DerivedModel] {
        let mut req = request(Law::Linear, Route::K, 0.02, None);
        assert_eq!(evaluate_level(model, &req, 1).unwrap().shift1, 0.0);
        req.truncation = Truncation::default();
        match evaluate_level(model, &req, 1) {
            Err(BouncerError::Truncation { level: 1, .. }) => {}
            other => panic!("{}: expected a truncation error, got {other:?}", model.name()),
        }
    }
}

#[test]
fn quadratic_sums_converge_adaptively() {
    let mut req = request(Law::Quadratic, Route::H, 0.01, Some(Branch::Down));
    req.truncation = Truncation::default();
    let r = evaluate_level(&DerivedModel, &req, 2).unwrap();
    assert!(r.tail_estimate.abs() < 1e-3 * r.shift2.abs());
}

#[test]
fn validity_guard_names_the_level() {
    let req = request(Law::Quadratic, Route::K, 0.5, Some(Branch::Up));
    match evaluate_level(&PrintedModel, &req, 3) {
        Err(BouncerError::Validity { level: 3, .. }) => {}
        other => panic!("expected a validity error, got {other:?}"),
    }
}

#[test]
fn diagonalization_basis_drift() {
    let b = basis();
    let ground = |gamma: f64, size: usize| {
        diagonalize_quadratic(Route::K, gamma, Branch::Up, size, b, &DerivedCatalog)
            .unwrap()
            .level(1)
            .unwrap()
            .eigenvalue
    };
    for gamma in [0.001, 0.0005] {
        let drift = (ground(gamma, 120) - ground(gamma, 240)).abs();
        assert!(drift < 1e-9, "gamma {gamma}: drift {drift:e}");
    }
    // At gamma = 0.005 the drift is the k^-2 tail of the second-order sum,
    // about 2e-8, and falls as gamma^2.
    let d1 = (ground(0.005, 120) - ground(0.005, 240)).abs();
    let d2 = (ground(0.0025, 120) - ground(0.0025, 240)).abs();
    assert!(d1 > 1e-9 && d1 < 5e-8, "{d1:e}");
    assert!((3.0..5.0).contains(&(d1 / d2)), "{}", d1 / d2);
}
