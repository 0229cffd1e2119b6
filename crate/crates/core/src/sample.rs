//! Sampled data `{(z_i, H(z_i))}` with an active/interpolated partition.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Immutable set of samples. Points and values are shared between copies;
/// only the activity mask is per-instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    points: Arc<[Complex64]>,
    values: Arc<[Complex64]>,
    active: Vec<bool>,
}

fn bits(z: Complex64) -> (u64, u64) {
    // +0.0 and -0.0 compare equal, so normalize before hashing.
    let norm = |x: f64| if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() };
    (norm(z.re), norm(z.im))
}

impl SampleSet {
    /// Builds a fully active sample set, rejecting empty input, non-finite
    /// entries and duplicate points.
    pub fn new(points: Vec<Complex64>, values: Vec<Complex64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                values: values.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::EmptyData);
        }
        let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        for (i, (z, h)) in points.iter().zip(&values).enumerate() {
            if !(z.re.is_finite() && z.im.is_finite() && h.re.is_finite() && h.im.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            if let Some(&first) = seen.get(&bits(*z)) {
                return Err(Error::DuplicatePoint {
                    point: *z,
                    first,
                    second: i,
                });
            }
            seen.insert(bits(*z), i);
        }
        let m = points.len();
        Ok(Self {
            points: points.into(),
            values: values.into(),
            active: vec![true; m],
        })
    }

    /// Convenience constructor for real abscissae and values.
    pub fn from_real(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::new(
            x.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            y.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// Indices of the non-interpolated samples, ascending.
    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.active[i]).collect()
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn active_points(&self) -> Vec<Complex64> {
        self.active_indices().into_iter().map(|i| self.points[i]).collect()
    }

    pub fn active_values(&self) -> Vec<Complex64> {
        self.active_indices().into_iter().map(|i| self.values[i]).collect()
    }

    /// Returns a copy in which sample `index` is marked as interpolated.
    pub fn interpolate(&self, index: usize) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::InvalidConfig(format!(
                "sample index {index} out of range for {} samples",
                self.len()
            )));
        }
        if !self.active[index] {
            return Err(Error::AlreadyInterpolated { index });
        }
        let mut next = self.clone();
        next.active[index] = false;
        Ok(next)
    }

    /// Returns a fully active copy.
    pub fn reset(&self) -> Self {
        let mut next = self.clone();
        next.active.iter_mut().for_each(|a| *a = true);
        next
    }

    /// Arithmetic mean of all data values.
    pub fn mean_value(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum / self.len() as f64
    }
}
