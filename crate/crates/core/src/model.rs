//! Barycentric rational models, their evaluation and state-space realization.
//!
//! A model with support points `λ_j`, values `h_j` and weights `w_j` is
//!
//! ```text
//!          Σ_j w_j h_j / (z - λ_j)     n(z; w)
//!   r(z) = ----------------------- = ---------
//!          Σ_j w_j     / (z - λ_j)     d(z; w)
//! ```
//!
//! and interpolates `h_j` at every `λ_j` whose weight is nonzero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The barycentric parameters `(λ, h, w)` of a degree `k - 1` rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Barycentric {
    supports: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl Barycentric {
    pub fn new(
        supports: Vec<Complex64>,
        values: Vec<Complex64>,
        weights: Vec<Complex64>,
    ) -> Result<Self> {
        let k = supports.len();
        if k == 0 {
            return Err(Error::InvalidModel("no support points".into()));
        }
        if values.len() != k || weights.len() != k {
            return Err(Error::InvalidModel(format!(
                "length mismatch: {k} supports, {} values, {} weights",
                values.len(),
                weights.len()
            )));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !(supports.iter().all(finite) && values.iter().all(finite) && weights.iter().all(finite)) {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        for i in 0..k {
            for j in 0..i {
                if supports[i] == supports[j] {
                    return Err(Error::InvalidModel(format!(
                        "support points {j} and {i} coincide"
                    )));
                }
            }
        }
        if weights.iter().all(|w| *w == ZERO) {
            return Err(Error::ZeroWeights);
        }
        Ok(Self {
            supports,
            values,
            weights,
        })
    }

    pub fn supports(&self) -> &[Complex64] {
        &self.supports
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut n = ZERO;
        let mut d = ZERO;
        for ((&lam, &h), &w) in self.supports.iter().zip(&self.values).zip(&self.weights) {
            if z == lam {
                if w != ZERO {
                    return Ok(h);
                }
                // zero-weight support: the term drops from both sums
                continue;
            }
            let c = w / (z - lam);
            n += c * h;
            d += c;
        }
        if d == ZERO {
            return Err(Error::PoleAtPoint { z });
        }
        Ok(n / d)
    }

    /// Same rational with the weights rescaled to unit 2-norm.
    pub fn normalized(&self) -> Self {
        let norm = self.weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        Self {
            supports: self.supports.clone(),
            values: self.values.clone(),
            weights: self.weights.iter().map(|w| w / norm).collect(),
        }
    }
}

/// A rational approximant: either the degree-0 constant used to seed the
/// greedy iterations or a barycentric form.
#[derive(Debug, Clone, PartialEq)]
pub enum RationalModel {
    Constant(Complex64),
    Barycentric(Barycentric),
}

impl RationalModel {
    pub fn constant(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidModel("non-finite constant".into()));
        }
        Ok(Self::Constant(value))
    }

    pub fn barycentric(
        supports: Vec<Complex64>,
        values: Vec<Complex64>,
        weights: Vec<Complex64>,
    ) -> Result<Self> {
        Barycentric::new(supports, values, weights).map(Self::Barycentric)
    }

    /// Evaluates the model. Hitting a support point bit-exactly returns the
    /// stored value when its weight is nonzero.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Self::Constant(c) => Ok(*c),
            Self::Barycentric(b) => b.eval(z),
        }
    }

    /// Number of support points (zero for the constant model).
    pub fn support_count(&self) -> usize {
        match self {
            Self::Constant(_) => 0,
            Self::Barycentric(b) => b.len(),
        }
    }

    /// Polynomial degree of numerator and denominator.
    pub fn degree(&self) -> usize {
        self.support_count().saturating_sub(1)
    }

    /// State-space dimension of the realization, i.e. the degree plus one.
    pub fn order(&self) -> usize {
        self.support_count()
    }

    pub fn as_barycentric(&self) -> Option<&Barycentric> {
        match self {
            Self::Barycentric(b) => Some(b),
            Self::Constant(_) => None,
        }
    }
}

/// Numerator and denominator `(wᵀp(z), wᵀq(z))` at a point that is not a
/// support point.
pub fn num_den(
    weights: &[Complex64],
    supports: &[Complex64],
    values: &[Complex64],
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    debug_assert_eq!(weights.len(), supports.len());
    debug_assert_eq!(values.len(), supports.len());
    let mut n = ZERO;
    let mut d = ZERO;
    for (j, ((&w, &lam), &h)) in weights.iter().zip(supports).zip(values).enumerate() {
        if z == lam {
            return Err(Error::SupportCoincidence { z, support: j });
        }
        let q = ONE / (z - lam);
        n += w * h * q;
        d += w * q;
    }
    Ok((n, d))
}

/// Descriptor realization `r(z) = ĉᵀ (zÊ - Â)⁻¹ b̂` of a barycentric model.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub e_hat: DMatrix<Complex64>,
    pub a_hat: DMatrix<Complex64>,
    pub b_hat: DVector<Complex64>,
    pub c_hat: DVector<Complex64>,
}

impl Realization {
    pub fn dim(&self) -> usize {
        self.b_hat.len()
    }

    /// Transfer function `ĉᵀ (zÊ - Â)⁻¹ b̂` by a dense LU solve.
    pub fn transfer(&self, z: Complex64) -> Result<Complex64> {
        let pencil = self.e_hat.map(|e| e * z) - &self.a_hat;
        let x = pencil
            .lu()
            .solve(&self.b_hat)
            .ok_or(Error::PoleAtPoint { z })?;
        Ok(self.c_hat.iter().zip(x.iter()).map(|(c, x)| c * x).sum())
    }
}

/// Builds `(Ê, Â, b̂, ĉ)` for a barycentric model.
///
/// The first `k - 1` rows of the pencil force `x_j ∝ 1/(z - λ_j)`; the last
/// row of `Â` holds `-w_j` so that `b̂ = e_k` normalizes by `d(z)`, and
/// `ĉ_j = h_j w_j` recovers `n(z)`.
pub fn realize(model: &RationalModel) -> Result<Realization> {
    let bary = model.as_barycentric().ok_or(Error::EmptyRealization)?;
    let k = bary.len();
    let lam = bary.supports();
    let mut e_hat = DMatrix::from_element(k, k, ZERO);
    let mut a_hat = DMatrix::from_element(k, k, ZERO);
    for i in 0..k.saturating_sub(1) {
        e_hat[(i, 0)] = ONE;
        e_hat[(i, i + 1)] = -ONE;
        a_hat[(i, 0)] = lam[0];
        a_hat[(i, i + 1)] = -lam[i + 1];
    }
    for j in 0..k {
        a_hat[(k - 1, j)] = -bary.weights()[j];
    }
    let mut b_hat = DVector::from_element(k, ZERO);
    b_hat[k - 1] = ONE;
    let c_hat = DVector::from_iterator(
        k,
        bary.values().iter().zip(bary.weights()).map(|(h, w)| h * w),
    );
    Ok(Realization {
        e_hat,
        a_hat,
        b_hat,
        c_hat,
    })
}
