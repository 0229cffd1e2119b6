//! Classical AAA: greedy support selection followed by linearized
//! (homogeneous least-squares) weights.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{levy_matrix, min_unit_norm_solution, LevySystem};
use crate::metrics::{metrics, residuals};
use crate::model::RationalModel;
use crate::sample::SampleSet;
use crate::trace::{Branch, FitTrace, StopReason, TraceRecord};

/// Stopping controls shared by both greedy algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Threshold on the raw active squared error.
    pub tol: f64,
    /// Maximum degree; at most `max_degree + 1` support points are used.
    pub max_degree: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_degree: 30,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidConfig(format!("tolerance {} must be >= 0", self.tol)));
        }
        Ok(())
    }
}

/// Degree-0 starting model: the mean of the data.
pub fn initial_model(data: &SampleSet) -> Result<RationalModel> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    RationalModel::constant(data.mean_value())
}

fn argmax_lowest(scores: impl Iterator<Item = (usize, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores {
        let s = if s.is_nan() { f64::INFINITY } else { s };
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the active sample with the largest mismatch `|r(z_i) - H(z_i)|`;
/// ties go to the lowest index.
pub fn greedy_select(model: &RationalModel, data: &SampleSet) -> Result<usize> {
    let res = residuals(model, data);
    argmax_lowest(data.active_indices().into_iter().map(|i| (i, res[i]))).ok_or(Error::NoActiveSamples)
}

/// Unit-norm weights minimizing `‖(G C - C H) w‖₂` over the active samples.
pub fn levy_weights(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
) -> Result<Vec<Complex64>> {
    if supports.is_empty() {
        return Err(Error::InvalidModel("no support points".into()));
    }
    if supports.len() == 1 {
        // every nonzero scalar gives the same constant rational r ≡ h_1
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    let sys = LevySystem::from_samples(supports, interp_values, data)?;
    let v = min_unit_norm_solution(&levy_matrix(&sys))?;
    Ok(v.iter().cloned().collect())
}

/// Weight computation plugged into the shared greedy driver.
pub(crate) trait GreedyStep {
    fn select(&mut self, model: &RationalModel, data: &SampleSet) -> Result<usize>;

    /// Weights for the current supports. `previous` is the model of the
    /// previous iteration.
    fn weights(
        &mut self,
        supports: &[Complex64],
        interp_values: &[Complex64],
        data: &SampleSet,
        previous: &RationalModel,
    ) -> Result<(Vec<Complex64>, Branch)>;
}

pub(crate) fn greedy_fit<S: GreedyStep>(
    data: &SampleSet,
    cfg: &FitConfig,
    step: &mut S,
) -> Result<(RationalModel, FitTrace)> {
    cfg.validate()?;
    if data.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least two samples, got {}",
            data.len()
        )));
    }
    let full = data.reset();
    let mut data = full.clone();
    let mut model = initial_model(&data)?;
    // fail early rather than after the first solve
    metrics(&model, &full)?;
    let mut supports = Vec::new();
    let mut values = Vec::new();
    let mut records = Vec::new();
    let mut stop = StopReason::DegreeBudget;

    for k in 1..=cfg.max_degree + 1 {
        if data.active_count() <= 1 {
            stop = StopReason::DataExhausted;
            break;
        }
        let idx = step.select(&model, &data)?;
        data = data.interpolate(idx)?;
        supports.push(data.points()[idx]);
        values.push(data.values()[idx]);

        let (weights, branch) = step.weights(&supports, &values, &data, &model)?;
        model = RationalModel::barycentric(supports.clone(), values.clone(), weights)?;

        // same evaluation path as the full-data metrics
        let res = residuals(&model, &data);
        let raw: f64 = data.active_indices().iter().map(|&i| res[i] * res[i]).sum();
        let m = metrics(&model, &full)?;
        records.push(TraceRecord {
            k,
            degree: k - 1,
            support: supports[k - 1],
            raw_active_sq_err: raw,
            l2: m.l2,
            linf: m.linf,
            branch,
        });
        if raw < cfg.tol {
            stop = StopReason::Tolerance;
            break;
        }
    }
    Ok((model, FitTrace { records, stop }))
}

struct Classical;

impl GreedyStep for Classical {
    fn select(&mut self, model: &RationalModel, data: &SampleSet) -> Result<usize> {
        greedy_select(model, data)
    }

    fn weights(
        &mut self,
        supports: &[Complex64],
        interp_values: &[Complex64],
        data: &SampleSet,
        _previous: &RationalModel,
    ) -> Result<(Vec<Complex64>, Branch)> {
        let branch = if supports.len() == 1 {
            Branch::Initial
        } else {
            Branch::Levy
        };
        Ok((levy_weights(supports, interp_values, data)?, branch))
    }
}

/// Runs classical AAA on the full data set.
pub fn aaa_fit(data: &SampleSet, cfg: &FitConfig) -> Result<(RationalModel, FitTrace)> {
    greedy_fit(data, cfg, &mut Classical)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn initial_model_is_mean() {
        let d = SampleSet::from_real(&[0., 1., 2.], &[1., 2., 3.]).unwrap();
        assert_eq!(initial_model(&d).unwrap(), RationalModel::Constant(r(2.)));
        let d = SampleSet::from_real(&[0.], &[7.]).unwrap();
        assert_eq!(initial_model(&d).unwrap(), RationalModel::Constant(r(7.)));
        let d = SampleSet::new(vec![r(0.), r(1.)], vec![Complex64::new(1., 1.), Complex64::new(1., -1.)]).unwrap();
        assert_eq!(initial_model(&d).unwrap(), RationalModel::Constant(r(1.)));
    }

    #[test]
    fn greedy_ties_go_low() {
        let d = SampleSet::from_real(&[0., 1., 2.], &[1., 2., 3.]).unwrap();
        assert_eq!(greedy_select(&RationalModel::Constant(r(2.)), &d).unwrap(), 0);
        let d = SampleSet::from_real(&[0., 1., 2.], &[2.1, 7., 2.3]).unwrap();
        assert_eq!(greedy_select(&RationalModel::Constant(r(2.)), &d).unwrap(), 1);
        let d = SampleSet::from_real(&[0., 1., 2.], &[2., 2., 2.]).unwrap();
        assert_eq!(greedy_select(&RationalModel::Constant(r(2.)), &d).unwrap(), 0);
    }

    #[test]
    fn greedy_skips_interpolated() {
        let d = SampleSet::from_real(&[0., 1., 2.], &[1., 2., 3.]).unwrap().interpolate(0).unwrap();
        assert_eq!(greedy_select(&RationalModel::Constant(r(2.)), &d).unwrap(), 2);
        let none = d.interpolate(1).unwrap().interpolate(2).unwrap();
        assert!(matches!(
            greedy_select(&RationalModel::Constant(r(2.)), &none),
            Err(Error::NoActiveSamples)
        ));
    }

    #[test]
    fn infinite_tolerance_stops_after_one_step() {
        let d = SampleSet::from_real(&[0., 1., 2.], &[1., 2., 5.]).unwrap();
        let (model, trace) = aaa_fit(&d, &FitConfig { tol: f64::INFINITY, max_degree: 5 }).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(model.support_count(), 1);
        assert_eq!(trace.stop, StopReason::Tolerance);
    }

    #[test]
    fn stops_when_data_runs_out() {
        let d = SampleSet::from_real(&[0., 1., 2.], &[1., 4., 5.]).unwrap();
        let (_, trace) = aaa_fit(&d, &FitConfig { tol: 0.0, max_degree: 10 }).unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace.stop, StopReason::DataExhausted);
    }

    #[test]
    fn rejects_tiny_data_and_bad_tol() {
        let d = SampleSet::from_real(&[0.], &[1.]).unwrap();
        assert!(aaa_fit(&d, &FitConfig::default()).is_err());
        let d = SampleSet::from_real(&[0., 1.], &[1., 2.]).unwrap();
        assert!(aaa_fit(&d, &FitConfig { tol: -1.0, max_degree: 3 }).is_err());
    }
}
