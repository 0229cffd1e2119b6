//! Greedy AAA-type fitting in which each step's weights come from the
//! nonlinear least-squares refinements instead of the linearized problem.
//!
//! Every step considers the previous weights padded with a zero, whose
//! rational equals the previous model, as a candidate. A step therefore never
//! increases the full-data squared error; when nothing improves on it, the
//! padded weights are kept and the next support point is drawn with an
//! alternative greedy rule so the new basis function is not wasted.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aaa::{greedy_fit, greedy_select, FitConfig, GreedyStep};
use crate::error::{Error, Result};
use crate::linalg::LevySystem;
use crate::metrics::{full_sq_error, residuals};
use crate::model::RationalModel;
use crate::refine::{sk_iterate_system, wf_iterate_system, wf_step_system, RefineConfig};
use crate::sample::SampleSet;
use crate::trace::{Branch, FitTrace};

/// Support selection used right after a step kept the previous rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FallbackMode {
    /// Sample an active point with probability proportional to its error.
    #[default]
    Probabilistic,
    /// Largest error relative to `|H(z_i)|`.
    Relative,
}

impl FallbackMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FallbackMode::Probabilistic => "probabilistic",
            FallbackMode::Relative => "relative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlaaaConfig {
    pub tol: f64,
    pub max_degree: usize,
    pub refine: RefineConfig,
    pub fallback_mode: FallbackMode,
    pub rng_seed: u64,
}

impl Default for NlaaaConfig {
    fn default() -> Self {
        let fit = FitConfig::default();
        Self {
            tol: fit.tol,
            max_degree: fit.max_degree,
            refine: RefineConfig::default(),
            fallback_mode: FallbackMode::default(),
            rng_seed: 0,
        }
    }
}

impl NlaaaConfig {
    pub fn fit_config(&self) -> FitConfig {
        FitConfig {
            tol: self.tol,
            max_degree: self.max_degree,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fit_config().validate()?;
        self.refine.validate()
    }
}

fn is_finite_vec(w: &[Complex64]) -> bool {
    w.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

fn unit_normalized(w: &[Complex64]) -> Option<Vec<Complex64>> {
    let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) || !is_finite_vec(w) {
        return None;
    }
    Some(w.iter().map(|x| x / norm).collect())
}

/// Picks the weights for the current supports.
///
/// `w_prev_ext` is the previous step's weight vector with a trailing zero for
/// the newest support. The reweighted iteration and a single linearization
/// step from `w_prev_ext` are compared on the active error; the full
/// linearization iteration then starts from the better one. The result must
/// strictly lower the full-data squared error below that of `w_prev_ext`,
/// otherwise `w_prev_ext` is returned with [`Branch::Fallback`].
pub fn select_weights(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w_prev_ext: &[Complex64],
    cfg: &RefineConfig,
) -> Result<(Vec<Complex64>, Branch)> {
    cfg.validate()?;
    if w_prev_ext.len() != supports.len() {
        return Err(Error::InvalidConfig(format!(
            "{} previous weights for {} supports",
            w_prev_ext.len(),
            supports.len()
        )));
    }
    let sys = LevySystem::from_samples(supports, interp_values, data)?;
    let previous = RationalModel::barycentric(supports.to_vec(), interp_values.to_vec(), w_prev_ext.to_vec())?;
    let prev_err = full_sq_error(&previous, data);

    // Failures in either refinement only remove candidates.
    let sk = sk_iterate_system(&sys, cfg).ok();
    let one_step = wf_step_system(&sys, w_prev_ext).ok().map(|(w, _)| w);

    let sk_err = sk.as_ref().map_or(f64::INFINITY, |r| r.best_error());
    let step_err = one_step
        .as_ref()
        .map_or(f64::INFINITY, |w| sys.sq_error(w.as_slice()));

    let (init, branch): (Vec<Complex64>, Branch) = match &sk {
        Some(sk) if sk_err < step_err => (sk.weights.clone(), Branch::WfFromSk),
        _ => (w_prev_ext.to_vec(), Branch::WfFromPrev),
    };

    let mut candidates: Vec<(Vec<Complex64>, Branch)> = Vec::new();
    if let Ok(wf) = wf_iterate_system(&sys, &init, cfg) {
        candidates.push((wf.weights, branch));
    }
    if let Some(w) = one_step {
        candidates.push((w.iter().cloned().collect(), Branch::WfFromPrev));
    }
    if let Some(sk) = sk {
        candidates.push((sk.weights, Branch::WfFromSk));
    }

    let mut best: Option<(Vec<Complex64>, Branch, f64)> = None;
    for (w, tag) in candidates {
        let Some(w) = unit_normalized(&w) else { continue };
        let Ok(model) = RationalModel::barycentric(supports.to_vec(), interp_values.to_vec(), w.clone()) else {
            continue;
        };
        let err = full_sq_error(&model, data);
        if err.is_finite() && best.as_ref().is_none_or(|(_, _, e)| err < *e) {
            best = Some((w, tag, err));
        }
    }
    match best {
        Some((w, tag, err)) if err < prev_err => Ok((w, tag)),
        _ => Ok((w_prev_ext.to_vec(), Branch::Fallback)),
    }
}

/// Alternative support selection over the active samples.
pub fn fallback_greedy<R: Rng + ?Sized>(
    model: &RationalModel,
    data: &SampleSet,
    mode: FallbackMode,
    rng: &mut R,
) -> Result<usize> {
    let active = data.active_indices();
    if active.is_empty() {
        return Err(Error::NoActiveSamples);
    }
    let res = residuals(model, data);
    match mode {
        FallbackMode::Probabilistic => {
            let errs: Vec<f64> = active.iter().map(|&i| res[i]).collect();
            if let Some(pos) = errs.iter().position(|e| !e.is_finite()) {
                return Ok(active[pos]);
            }
            let pick = match WeightedIndex::new(&errs) {
                Ok(dist) => dist.sample(rng),
                // all errors zero: uniform
                Err(_) => rng.random_range(0..active.len()),
            };
            Ok(active[pick])
        }
        FallbackMode::Relative => {
            let mut best: Option<(usize, f64)> = None;
            for &i in &active {
                let h = data.values()[i].norm();
                if h == 0.0 {
                    continue;
                }
                let ratio = res[i] / h;
                let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
                if best.is_none_or(|(_, b)| ratio > b) {
                    best = Some((i, ratio));
                }
            }
            best.map(|(i, _)| i).ok_or(Error::NoNonzeroData)
        }
    }
}

struct Refined {
    refine: RefineConfig,
    mode: FallbackMode,
    rng: ChaCha8Rng,
    use_fallback: bool,
}

impl GreedyStep for Refined {
    fn select(&mut self, model: &RationalModel, data: &SampleSet) -> Result<usize> {
        if std::mem::take(&mut self.use_fallback) {
            fallback_greedy(model, data, self.mode, &mut self.rng)
        } else {
            greedy_select(model, data)
        }
    }

    fn weights(
        &mut self,
        supports: &[Complex64],
        interp_values: &[Complex64],
        data: &SampleSet,
        previous: &RationalModel,
    ) -> Result<(Vec<Complex64>, Branch)> {
        let Some(prev) = previous.as_barycentric() else {
            return Ok((vec![Complex64::new(1.0, 0.0)], Branch::Initial));
        };
        let mut w_prev_ext = prev.weights().to_vec();
        w_prev_ext.push(Complex64::new(0.0, 0.0));
        let (w, branch) = select_weights(supports, interp_values, data, &w_prev_ext, &self.refine)?;
        self.use_fallback = branch == Branch::Fallback;
        Ok((w, branch))
    }
}

/// Runs the refined greedy algorithm on the full data set.
pub fn nlaaa_fit(data: &SampleSet, cfg: &NlaaaConfig) -> Result<(RationalModel, FitTrace)> {
    cfg.validate()?;
    let mut step = Refined {
        refine: cfg.refine,
        mode: cfg.fallback_mode,
        rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
        use_fallback: false,
    };
    greedy_fit(data, &cfg.fit_config(), &mut step)
}
