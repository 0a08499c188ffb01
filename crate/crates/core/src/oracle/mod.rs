//! Brute-force checks: matrix elements by quadrature, truncated-basis
//! diagonalization, and the suite that ties them to the closed forms.

mod descriptor;
mod diagonalize;
mod elements;
mod suite;

pub use descriptor::{parse, Complex, Letter, Word};
pub use diagonalize::{diagonalize_quadratic, Comparison, DiagonalizationReport, LevelMatch, MATCH_THRESHOLD};
pub use elements::{
    agrees, element_by_quadrature, perturbation_descriptors, second_order_by_elements, verify_catalog,
    CatalogReport, ElementCheck, OracleLevel, QuadratureElement, ELEMENT_ERROR_LIMIT,
};
pub use suite::{run_suite, SuiteCheck, SuiteOptions, SuiteReport};
