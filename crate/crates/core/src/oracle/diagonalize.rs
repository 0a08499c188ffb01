//! Truncated-basis diagonalization of the quadratic-drag operators.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::airy::AiryBasis;
use crate::elements::{ElementCatalog, ElementTable, PerturbationMatrix, PerturbationOperator};
use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Law, Route};
use crate::spectra::{evaluate_level, SpectrumModel, SpectrumRequest};

/// Eigenvector overlaps below this leave the level assignment ambiguous.
pub const MATCH_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelMatch {
    /// Unperturbed level label.
    pub n: usize,
    /// Index (0-based, ascending) of the matched eigenvalue.
    pub index: usize,
    pub eigenvalue: f64,
    /// `|⟨n|eigenvector⟩|`.
    pub overlap: f64,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub eigenvalue: f64,
    pub perturbative: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalizationReport {
    pub route: Route,
    pub branch: Branch,
    pub gamma: f64,
    pub size: usize,
    pub catalog: &'static str,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Largest residual relative to the matrix norm.
    pub max_relative_residual: f64,
    pub matches: Vec<LevelMatch>,
    pub comparison: Vec<Comparison>,
}

impl DiagonalizationReport {
    /// Matched eigenvalue of unperturbed level `n`.
    pub fn level(&self, n: usize) -> Option<&LevelMatch> {
        self.matches.iter().find(|m| m.n == n)
    }

    /// Fill [`Self::comparison`] for levels `1..=levels` against `model`.
    pub fn compare(&mut self, model: &dyn SpectrumModel, req: &SpectrumRequest, levels: usize) -> Result<()> {
        let req = SpectrumRequest {
            law: Law::Quadratic,
            route: self.route,
            branch: Some(self.branch),
            eps: self.gamma,
            ..req.clone()
        };
        self.comparison = (1..=levels.min(self.matches.len()))
            .map(|n| {
                let pert = evaluate_level(model, &req, n)?;
                let eig = self.level(n).map(|m| m.eigenvalue).unwrap_or(f64::NAN);
                Ok(Comparison {
                    n,
                    eigenvalue: eig,
                    perturbative: pert.total,
                    deviation: (eig - pert.total).abs(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(())
    }
}

/// Eigenvalues of `diag(z_n) + γ M1 + γ² M2` on the first `size` levels.
pub fn diagonalize_quadratic(
    route: Route,
    gamma: f64,
    branch: Branch,
    size: usize,
    basis: &AiryBasis,
    catalog: &dyn ElementCatalog,
) -> Result<DiagonalizationReport> {
    if size < 40 {
        return Err(BouncerError::Config(format!("diagonalization needs N >= 40, got {size}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(BouncerError::Config(format!("gamma must be >= 0, got {gamma}")));
    }
    let table = ElementTable::build(basis, size, catalog)?;
    let op = PerturbationOperator::new(Law::Quadratic, route, Some(branch))?;
    let pert = PerturbationMatrix::build(op, &table);
    let mut m = pert.total(gamma)?;
    for i in 0..size {
        m[(i, i)] += table.zeros()[i];
    }
    // Remove rounding-level asymmetry before the symmetric solve.
    let m = (&m + m.transpose()) * 0.5;
    let norm = m.norm();
    let eig = SymmetricEigen::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| BouncerError::Eigen(format!("symmetric eigensolve did not converge (N = {size})")))?;

    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = DMatrix::from_fn(size, size, |i, c| eig.eigenvectors[(i, order[c])]);

    let residuals: Vec<f64> = (0..size)
        .map(|c| {
            let v = vectors.column(c);
            (&m * v - v * eigenvalues[c]).norm()
        })
        .collect();
    let max_relative_residual = residuals.iter().fold(0.0f64, |a, &r| a.max(r)) / norm.max(f64::MIN_POSITIVE);

    let matches = (0..size)
        .map(|i| {
            let (index, overlap) = (0..size)
                .map(|c| (c, vectors[(i, c)].abs()))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            LevelMatch {
                n: i + 1,
                index,
                eigenvalue: eigenvalues[index],
                overlap,
                ambiguous: overlap < MATCH_THRESHOLD,
            }
        })
        .collect();

    Ok(DiagonalizationReport {
        route,
        branch,
        gamma,
        size,
        catalog: catalog.name(),
        eigenvalues,
        residuals,
        max_relative_residual,
        matches,
        comparison: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::DerivedCatalog;

    #[test]
    fn unperturbed_matrix_gives_zeros() {
        let basis = AiryBasis::new(40).unwrap();
        let rep = diagonalize_quadratic(Route::K, 0.0, Branch::Up, 40, &basis, &DerivedCatalog).unwrap();
        for (n, e) in rep.eigenvalues.iter().enumerate() {
            assert!((e - basis.zero(n + 1)).abs() < 1e-12 * e);
        }
        assert!(rep.matches.iter().all(|m| !m.ambiguous && m.index + 1 == m.n));
    }

    #[test]
    fn residuals_small_and_sorted() {
        let basis = AiryBasis::new(60).unwrap();
        let rep = diagonalize_quadratic(Route::H, 0.005, Branch::Down, 60, &basis, &DerivedCatalog).unwrap();
        assert!(rep.max_relative_residual < 1e-10);
        assert!(rep.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(rep.level(1).unwrap().overlap > 0.99);
    }

    #[test]
    fn rejects_small_basis() {
        let basis = AiryBasis::new(40).unwrap();
        assert!(diagonalize_quadratic(Route::K, 0.01, Branch::Up, 20, &basis, &DerivedCatalog).is_err());
    }
}
