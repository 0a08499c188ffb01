use bouncer_core::airy::AiryBasis;
use bouncer_core::elements::*;
use bouncer_core::oracle::element_by_quadrature;
use bouncer_core::{Branch, Law, Route};
use proptest::prelude::*;
use std::sync::OnceLock;

fn basis() -> &'static AiryBasis {
    static B: OnceLock<AiryBasis> = OnceLock::new();
    B.get_or_init(|| AiryBasis::new(60).unwrap())
}

fn el(f: Family, n: usize, k: usize) -> f64 {
    DerivedCatalog.element(f, &Pair::new(basis(), n, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hermitian_families_are_symmetric(n in 1usize..60, k in 1usize..60) {
        for f in [Family::Identity, Family::Z, Family::Z2, Family::Z3, Family::D2, Family::D4] {
            let (a, b) = (el(f, n, k), el(f, k, n));
            prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0), "{f}: {a} vs {b}");
        }
    }

    #[test]
    fn odd_derivatives_pick_up_boundary_terms(n in 1usize..60, k in 1usize..60) {
        // <n|D|k> + <k|D|n> = -psi_n(0) psi_k(0) = 0, and for D^3 the wall
        // term is psi_n'(0) psi_k'(0) = (-1)^(n+k).
        let sigma = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((el(Family::D1, n, k) + el(Family::D1, k, n)).abs() < 1e-12);
        let s = el(Family::D3, n, k) + el(Family::D3, k, n);
        prop_assert!((s - sigma).abs() < 1e-9 * el(Family::D3, n, k).abs().max(1.0), "{s}");
    }
}

#[test]
fn derived_catalog_matches_quadrature_off_the_small_block() {
    let b = basis();
    for (n, k) in [(1, 12), (7, 15), (15, 3)] {
        for f in Family::ALL {
            let closed = el(f, n, k);
            let quad = element_by_quadrature(f.descriptor(), n, k, b).unwrap().re;
            assert!(
                (closed - quad).abs() <= 1e-8_f64.max(1e-6 * quad.abs()),
                "{f} ({n},{k}): {closed} vs {quad}"
            );
        }
    }
}

#[test]
fn quadratic_first_order_branches_cancel() {
    let table = ElementTable::build(basis(), 20, &DerivedCatalog).unwrap();
    for route in [Route::K, Route::H] {
        let up = PerturbationMatrix::build(PerturbationOperator::new(Law::Quadratic, route, Some(Branch::Up)).unwrap(), &table);
        let down = PerturbationMatrix::build(PerturbationOperator::new(Law::Quadratic, route, Some(Branch::Down)).unwrap(), &table);
        assert_eq!(&up.order1 + &down.order1, nalgebra::DMatrix::zeros(20, 20));
        assert_eq!(up.order2, down.order2);
    }
}

#[test]
fn printed_catalog_mismatches_are_reported() {
    let report = bouncer_core::oracle::verify_catalog(&PrintedCatalog, basis(), 4, 1e-6, 1e-8).unwrap();
    assert_eq!(report.failing_families(), vec!["z3", "d2", "d3", "d4"]);
    for c in report.failures() {
        println!("{} ({}, {}): printed {:.10e}, quadrature {:.10e}", c.family, c.n, c.k, c.closed_form, c.quadrature);
    }
}
