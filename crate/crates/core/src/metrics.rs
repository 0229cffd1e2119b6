//! Normalized discrete error measures over a full sample set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::RationalModel;
use crate::sample::SampleSet;

/// Normalized `ℓ2` and `ℓ∞` errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub l2: f64,
    pub linf: f64,
}

/// Residuals `r(z_i) - H(z_i)` over every sample, interpolated or not. A pole
/// exactly at a sample yields an infinite residual.
pub fn residuals(model: &RationalModel, data: &SampleSet) -> Vec<f64> {
    data.points()
        .iter()
        .zip(data.values())
        .map(|(&z, &h)| match model.eval(z) {
            Ok(r) => {
                let e = (r - h).norm();
                if e.is_nan() {
                    f64::INFINITY
                } else {
                    e
                }
            }
            Err(_) => f64::INFINITY,
        })
        .collect()
}

/// `Σ_i |r(z_i) - H(z_i)|²` over the full data set.
pub fn full_sq_error(model: &RationalModel, data: &SampleSet) -> f64 {
    residuals(model, data).iter().map(|e| e * e).sum()
}

pub fn metrics(model: &RationalModel, data: &SampleSet) -> Result<MetricPair> {
    let h_sq: f64 = data.values().iter().map(Complex64::norm_sqr).sum();
    let h_max = data.values().iter().map(|h| h.norm()).fold(0.0, f64::max);
    if h_sq == 0.0 || h_max == 0.0 {
        return Err(Error::ZeroData);
    }
    let res = residuals(model, data);
    let err_sq: f64 = res.iter().map(|e| e * e).sum();
    let err_max = res.iter().cloned().fold(0.0, f64::max);
    Ok(MetricPair {
        l2: err_sq.sqrt() / h_sq.sqrt(),
        linf: err_max / h_max,
    })
}
