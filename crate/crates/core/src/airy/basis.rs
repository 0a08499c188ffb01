use rayon::prelude::*;

use super::eval::airy_pair_unchecked;
use super::zeros::zero;
use crate::error::{BouncerError, Result};
use crate::quadrature::{self, AdaptiveOptions, Estimate};

/// Past the largest zero involved, `Ai(z - z_n)` has decayed below `1e-17`.
pub const TAIL_MARGIN: f64 = 15.0;

/// Zeros `z_n` and normalizations `|Ai'(-z_n)|` of the unperturbed bouncer,
/// labelled `n = 1..=max_n`.
#[derive(Debug, Clone)]
pub struct AiryBasis {
    zeros: Vec<f64>,
    norms: Vec<f64>,
}

impl AiryBasis {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n == 0 {
            return Err(BouncerError::Config("basis needs at least one level".into()));
        }
        let zeros = (1..=max_n)
            .into_par_iter()
            .map(zero)
            .collect::<Result<Vec<_>>>()?;
        let norms = zeros
            .iter()
            .map(|&z| airy_pair_unchecked(-z).1.abs())
            .collect();
        Ok(Self { zeros, norms })
    }

    pub fn max_n(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// `z_n` for 1-based `n`.
    pub fn zero(&self, n: usize) -> f64 {
        self.zeros[n - 1]
    }

    pub fn norm(&self, n: usize) -> f64 {
        self.norms[n - 1]
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_n() {
            Err(BouncerError::BasisTooSmall {
                requested: n,
                available: self.max_n(),
            })
        } else {
            Ok(())
        }
    }

    /// `psi_n(z) = Ai(z - z_n) / |Ai'(-z_n)|`.
    pub fn eigenfunction(&self, n: usize, z: f64) -> Result<f64> {
        self.require(n)?;
        if !z.is_finite() {
            return Err(BouncerError::Domain(format!("z must be finite, got {z}")));
        }
        Ok(airy_pair_unchecked(z - self.zero(n)).0 / self.norm(n))
    }

    /// `d^s psi_n / dz^s` as a closed [`AiryForm`].
    pub fn derivative_form(&self, n: usize, s: u32) -> Result<AiryForm> {
        self.require(n)?;
        let mut form = AiryForm::eigenfunction(n);
        for _ in 0..s {
            form = form.differentiate(self.zero(n));
        }
        Ok(form)
    }

    /// Upper integration limit for overlaps among levels up to `n_max`.
    pub fn cutoff(&self, n_max: usize) -> f64 {
        self.zero(n_max) + TAIL_MARGIN
    }

    /// `∫_0^∞ f(z) dz` for integrands that decay like a product of two
    /// eigenfunctions of levels at most `n_max`.
    pub fn inner_product<F: Fn(f64) -> f64>(&self, n_max: usize, f: F) -> Result<Estimate> {
        self.require(n_max)?;
        let opts = AdaptiveOptions::default();
        quadrature::integrate(f, 0.0, self.cutoff(n_max), &opts)
    }

    /// `⟨n|k⟩` by quadrature.
    pub fn overlap(&self, n: usize, k: usize) -> Result<Estimate> {
        self.require(n.max(k))?;
        let (zn, zk) = (self.zero(n), self.zero(k));
        let (an, ak) = (self.norm(n), self.norm(k));
        self.inner_product(n.max(k), |z| {
            airy_pair_unchecked(z - zn).0 * airy_pair_unchecked(z - zk).0 / (an * ak)
        })
    }
}

/// Polynomial in `z` with coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn times_z(&self) -> Self {
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.0);
        Poly(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Self {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0))
                .collect(),
        )
    }
}

/// `(P(z) Ai(z - z_n) + Q(z) Ai'(z - z_n)) / |Ai'(-z_n)|`.
///
/// Closed under multiplication by `z` and under `d/dz` (using
/// `Ai''(y) = y Ai(y)`), so any word in `z` and `d/dz` applied to an
/// eigenfunction stays exact.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryForm {
    pub level: usize,
    pub p: Poly,
    pub q: Poly,
}

impl AiryForm {
    pub fn eigenfunction(level: usize) -> Self {
        Self {
            level,
            p: Poly::constant(1.0),
            q: Poly::default(),
        }
    }

    pub fn times_z(&self) -> Self {
        Self {
            level: self.level,
            p: self.p.times_z(),
            q: self.q.times_z(),
        }
    }

    /// `d/dz (P Ai + Q Ai') = (P' + Q (z - z_n)) Ai + (P + Q') Ai'`.
    pub fn differentiate(&self, z_n: f64) -> Self {
        let shift = Poly(vec![-z_n, 1.0]);
        let q_shift = mul(&self.q, &shift);
        Self {
            level: self.level,
            p: self.p.derivative().add(&q_shift),
            q: self.p.add(&self.q.derivative()),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            level: self.level,
            p: self.p.scale(s),
            q: self.q.scale(s),
        }
    }

    pub fn eval(&self, basis: &AiryBasis, z: f64) -> f64 {
        let (a, ap) = airy_pair_unchecked(z - basis.zero(self.level));
        (self.p.eval(z) * a + self.q.eval(z) * ap) / basis.norm(self.level)
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.0.is_empty() || b.0.is_empty() {
        return Poly::default();
    }
    let mut c = vec![0.0; a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        for (j, y) in b.0.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    Poly(c)
}
