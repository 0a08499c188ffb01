//! Bouncer-basis matrix elements and the perturbation operators built from
//! them.

mod catalog;
mod perturbation;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

pub use catalog::{PrintedCatalog, DerivedCatalog};
pub use perturbation::{perturbation_entry, Order, Phase, PerturbationMatrix, PerturbationOperator};

use crate::airy::AiryBasis;
use crate::error::{BouncerError, Result};
use crate::registry::Registry;

/// Separation below which two levels are treated as degenerate.
pub const DEGENERACY_GUARD: f64 = 1e-9;

/// The eight element families `⟨n|k⟩`, `⟨n|z^s|k⟩` (s = 1..3) and
/// `⟨n|d^s/dz^s|k⟩` (s = 1..4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Identity,
    Z,
    Z2,
    Z3,
    D1,
    D2,
    D3,
    D4,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Identity,
        Family::Z,
        Family::Z2,
        Family::Z3,
        Family::D1,
        Family::D2,
        Family::D3,
        Family::D4,
    ];

    /// Short label: `one`, `z`, `z2`, `z3`, `d1` .. `d4`.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Identity => "one",
            Family::Z => "z",
            Family::Z2 => "z2",
            Family::Z3 => "z3",
            Family::D1 => "d1",
            Family::D2 => "d2",
            Family::D3 => "d3",
            Family::D4 => "d4",
        }
    }

    /// Operator word understood by the quadrature oracle.
    pub fn descriptor(self) -> &'static str {
        match self {
            Family::Identity => "1",
            Family::Z => "z",
            Family::Z2 => "z^2",
            Family::Z3 => "z^3",
            Family::D1 => "d",
            Family::D2 => "d^2",
            Family::D3 => "d^3",
            Family::D4 => "d^4",
        }
    }

    fn index(self) -> usize {
        Family::ALL.iter().position(|&f| f == self).unwrap()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <n|{}|k>", self.tag(), self.descriptor())
    }
}

impl FromStr for Family {
    type Err = BouncerError;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(' ', "");
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(&key) || f.descriptor() == key)
            .ok_or_else(|| BouncerError::Config(format!("unknown element family `{s}` (one, z, z2, z3, d1..d4, or operator words such as z^2, d^3)")))
    }
}

/// Labels and zeros of one `(n, k)` entry.
#[derive(Debug, Clone, Copy)]
pub struct Pair {
    pub n: usize,
    pub k: usize,
    pub zn: f64,
    pub zk: f64,
}

impl Pair {
    pub fn new(basis: &AiryBasis, n: usize, k: usize) -> Result<Self> {
        basis.require(n.max(k))?;
        basis.require(n.min(k))?;
        let (zn, zk) = (basis.zero(n), basis.zero(k));
        if n != k && (zn - zk).abs() < DEGENERACY_GUARD {
            return Err(BouncerError::Consistency(format!(
                "levels {n} and {k} nearly degenerate (|z_n - z_k| = {:e})",
                (zn - zk).abs()
            )));
        }
        Ok(Self { n, k, zn, zk })
    }
}

/// A source of closed-form matrix elements.
pub trait ElementCatalog: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn element(&self, family: Family, pair: &Pair) -> f64;
}

/// Built-in catalogs: `derived` (default) and `printed`.
pub fn catalogs() -> Registry<dyn ElementCatalog> {
    let mut reg: Registry<dyn ElementCatalog> = Registry::new("element catalog");
    reg.register("derived", || Box::new(DerivedCatalog))
        .register("printed", || Box::new(PrintedCatalog));
    reg
}

pub const DEFAULT_CATALOG: &str = "derived";

/// Dense `N x N` tables of all eight families.
#[derive(Debug, Clone)]
pub struct ElementTable {
    catalog: &'static str,
    zeros: Vec<f64>,
    tables: Vec<DMatrix<f64>>,
}

impl ElementTable {
    pub fn build(basis: &AiryBasis, size: usize, catalog: &dyn ElementCatalog) -> Result<Self> {
        if size < 2 {
            return Err(BouncerError::Config(format!("element table needs N >= 2, got {size}")));
        }
        basis.require(size)?;
        let mut tables = vec![DMatrix::zeros(size, size); Family::ALL.len()];
        for n in 1..=size {
            for k in 1..=size {
                let pair = Pair::new(basis, n, k)?;
                for family in Family::ALL {
                    tables[family.index()][(n - 1, k - 1)] = catalog.element(family, &pair);
                }
            }
        }
        Ok(Self {
            catalog: catalog.name(),
            zeros: basis.zeros()[..size].to_vec(),
            tables,
        })
    }

    pub fn size(&self) -> usize {
        self.zeros.len()
    }

    pub fn catalog(&self) -> &'static str {
        self.catalog
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Matrix of a family, 0-based indices (entry `(n-1, k-1)` is `⟨n|·|k⟩`).
    pub fn matrix(&self, family: Family) -> &DMatrix<f64> {
        &self.tables[family.index()]
    }

    /// `⟨n|·|k⟩` with 1-based labels.
    pub fn get(&self, family: Family, n: usize, k: usize) -> f64 {
        self.tables[family.index()][(n - 1, k - 1)]
    }

    /// `n,k,value` rows of one family.
    pub fn write_csv<W: std::io::Write>(&self, family: Family, out: W) -> Result<()> {
        let mut w = crate::io::csv_writer(out);
        w.write_record(["n", "k", "value"])?;
        let m = self.matrix(family);
        for n in 0..self.size() {
            for k in 0..self.size() {
                w.write_record([
                    (n + 1).to_string(),
                    (k + 1).to_string(),
                    crate::io::fmt17(m[(n, k)]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
