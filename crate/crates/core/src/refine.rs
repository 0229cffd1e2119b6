//! Iterative refinement of the barycentric weights for fixed support points.
//!
//! Both iterations solve a sequence of linear least-squares problems over
//! the active samples and keep the iterate with the smallest true rational
//! error, since neither is guaranteed to converge:
//!
//! * the reweighted iteration ([`sk_iterate`]) divides each linearized
//!   residual `n - dH` by the previous denominator magnitude and takes the
//!   smallest right singular vector;
//! * the linearization iteration ([`wf_iterate`]) expands `r(z; w)` to first
//!   order around the previous weights, which makes each step a
//!   Gauss-Newton step normalized by fixing one weight to one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    levy_matrix, min_unit_norm_solution, pivoted_weighted_lsq, CMatrix, CVector, LevySystem,
    WeightingDiag,
};
use crate::sample::SampleSet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    pub p_max: usize,
    /// Weight-change threshold for the reweighted iteration.
    pub tol_sk: f64,
    /// Weight-change threshold for the linearization iteration.
    pub tol_wf: f64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            p_max: 20,
            tol_sk: 1e-8,
            tol_wf: 1e-8,
        }
    }
}

impl RefineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_max == 0 {
            return Err(Error::InvalidConfig("p_max must be at least 1".into()));
        }
        for (name, t) in [("tol_sk", self.tol_sk), ("tol_wf", self.tol_wf)] {
            if t.is_nan() || t < 0.0 {
                return Err(Error::InvalidConfig(format!("{name} = {t} must be >= 0")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineResult {
    /// The iterate with the smallest recorded error.
    pub weights: Vec<Complex64>,
    /// Raw active squared error of every recorded iterate. For
    /// [`wf_iterate`] entry 0 is the initialization.
    pub errors: Vec<f64>,
    pub converged: bool,
    /// Index into `errors` of the returned iterate.
    pub best_index: usize,
    /// Number of least-squares steps performed.
    pub iterations: usize,
}

impl RefineResult {
    pub fn best_error(&self) -> f64 {
        self.errors[self.best_index]
    }
}

fn argmin_first(errors: &[f64]) -> usize {
    let mut best = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e < errors[best] {
            best = i;
        }
    }
    best
}

/// `‖α a - b‖₂` for the unit-modulus `α` that minimizes it.
fn phase_aligned_distance(a: &CVector, b: &CVector) -> f64 {
    let s: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let alpha = if s.norm() > 0.0 {
        s / s.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a * alpha - b).norm()
}

fn denominators(sys: &LevySystem, w: &[Complex64]) -> Vec<Complex64> {
    sys.num_den(w).1
}

/// Reweighted homogeneous iteration. The first step uses unit row weights
/// and therefore reproduces the linearized weights.
pub fn sk_iterate(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    cfg: &RefineConfig,
) -> Result<RefineResult> {
    cfg.validate()?;
    let sys = LevySystem::from_samples(supports, interp_values, data)?;
    sk_iterate_system(&sys, cfg)
}

pub(crate) fn sk_iterate_system(sys: &LevySystem, cfg: &RefineConfig) -> Result<RefineResult> {
    let k = sys.cols();
    if k == 0 {
        return Err(Error::InvalidModel("no support points".into()));
    }
    let levy = levy_matrix(sys);
    let mut iterates: Vec<CVector> = Vec::new();
    let mut errors = Vec::new();
    let mut converged = false;
    let mut weighting: Option<WeightingDiag> = None;

    for _ in 0..cfg.p_max {
        let v = if k == 1 {
            CVector::from_element(1, Complex64::new(1.0, 0.0))
        } else {
            match &weighting {
                None => min_unit_norm_solution(&levy)?,
                Some(d) => min_unit_norm_solution(&d.scale_rows(&levy))?,
            }
        };
        errors.push(sys.sq_error(v.as_slice()));
        let change = match iterates.last() {
            // the iteration starts from w = 0
            None => v.norm(),
            Some(prev) => phase_aligned_distance(&v, prev),
        };
        weighting = Some(WeightingDiag::from_denominators(&denominators(sys, v.as_slice())));
        iterates.push(v);
        if change < cfg.tol_sk {
            converged = true;
            break;
        }
    }
    let best_index = argmin_first(&errors);
    Ok(RefineResult {
        weights: iterates[best_index].iter().cloned().collect(),
        errors,
        converged,
        best_index,
        iterations: iterates.len(),
    })
}

/// Pivot for the `w[pivot] = 1` normalization: the first entry unless it is
/// negligible, then the largest-magnitude entry.
pub fn choose_pivot(w: &[Complex64]) -> Result<usize> {
    let mut imax = 0;
    let mut max = 0.0;
    for (i, x) in w.iter().enumerate() {
        if x.norm() > max {
            max = x.norm();
            imax = i;
        }
    }
    if !(max > 0.0 && max.is_finite()) {
        return Err(Error::ZeroWeights);
    }
    if w[0].norm() < 1e-12 * max {
        Ok(imax)
    } else {
        Ok(0)
    }
}

pub(crate) fn wf_step_system(sys: &LevySystem, w_prev: &[Complex64]) -> Result<(CVector, usize)> {
    let k = sys.cols();
    if w_prev.len() != k {
        return Err(Error::InvalidConfig(format!(
            "{} weights for {k} support points",
            w_prev.len()
        )));
    }
    let pivot = choose_pivot(w_prev)?;
    let (n, d) = sys.num_den(w_prev);
    let m = sys.rows();
    let mut f = CMatrix::from_element(m, k, ZERO);
    let mut b = vec![ZERO; m];
    for i in 0..m {
        if d[i] == ZERO || !(d[i].re.is_finite() && d[i].im.is_finite()) {
            return Err(Error::VanishingDenominator { index: i });
        }
        let r = n[i] / d[i];
        for j in 0..k {
            f[(i, j)] = (sys.interp_values[j] - r) * sys.cauchy[(i, j)];
        }
        b[i] = d[i] * sys.data_values[i] - n[i];
    }
    let weighting = WeightingDiag::from_denominators(&d);
    let w = pivoted_weighted_lsq(&weighting, &f, &b, pivot)?;
    Ok((w, pivot))
}

/// One linearization step from `w_prev`; the result has `w[pivot] = 1`.
pub fn wf_step(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w_prev: &[Complex64],
) -> Result<Vec<Complex64>> {
    let sys = LevySystem::from_samples(supports, interp_values, data)?;
    Ok(wf_step_system(&sys, w_prev)?.0.iter().cloned().collect())
}

/// Repeated linearization steps from `w0`. The error of `w0` itself is
/// recorded first, so the result is never worse than the initialization.
pub fn wf_iterate(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w0: &[Complex64],
    cfg: &RefineConfig,
) -> Result<RefineResult> {
    cfg.validate()?;
    let sys = LevySystem::from_samples(supports, interp_values, data)?;
    wf_iterate_system(&sys, w0, cfg)
}

pub(crate) fn wf_iterate_system(
    sys: &LevySystem,
    w0: &[Complex64],
    cfg: &RefineConfig,
) -> Result<RefineResult> {
    let mut iterates = vec![CVector::from_column_slice(w0)];
    let mut errors = vec![sys.sq_error(w0)];
    let mut converged = false;

    for p in 1..=cfg.p_max {
        let current = iterates.last().expect("nonempty");
        let (w, pivot) = match wf_step_system(sys, current.as_slice()) {
            Ok(step) => step,
            Err(e) if p == 1 => return Err(e),
            // a later iterate put a pole on a sample; keep what we have
            Err(_) => break,
        };
        if w.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
            break;
        }
        let change = (&w - current / current[pivot]).norm();
        errors.push(sys.sq_error(w.as_slice()));
        iterates.push(w);
        if change < cfg.tol_wf {
            converged = true;
            break;
        }
    }
    let best_index = argmin_first(&errors);
    Ok(RefineResult {
        weights: iterates[best_index].iter().cloned().collect(),
        errors,
        converged,
        best_index,
        iterations: iterates.len() - 1,
    })
}
