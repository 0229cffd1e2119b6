//! Wirtinger derivatives of the four error criteria with respect to the
//! barycentric weights, a central finite-difference checker, and the
//! denominator-variation diagnostic.
//!
//! Every gradient has the shape `Σ_i s_i (h_j - α_i) C_ij conj(B_i)` over the
//! active samples, with `p_j = h_j q_j` and `q_j = 1/(z_i - λ_j) = C_ij`.
//! The criteria differ only in the scale `s_i`, the coefficient `α_i`
//! multiplying `q`, and the residual `B_i`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::LevySystem;
use crate::sample::SampleSet;

/// Error criteria whose weight gradients are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `Σ |r - H|²`.
    Nonlinear,
    /// `Σ |n - d H|²`.
    Levy,
    /// `Σ |n - d H|² / |d_prev|²`.
    SkStep,
    /// `Σ |n - r_prev d + n_prev - d_prev H|² / |d_prev|²`.
    WfStep,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::Nonlinear, Criterion::Levy, Criterion::SkStep, Criterion::WfStep];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Nonlinear => "nonlinear",
            Criterion::Levy => "levy",
            Criterion::SkStep => "sk_step",
            Criterion::WfStep => "wf_step",
        }
    }

    /// Whether the criterion depends on the previous iterate.
    pub fn uses_previous(self) -> bool {
        matches!(self, Criterion::SkStep | Criterion::WfStep)
    }
}

fn check_len(sys: &LevySystem, w: &[Complex64]) -> Result<()> {
    if w.len() != sys.cols() {
        return Err(Error::InvalidModel(format!(
            "{} weights for {} supports",
            w.len(),
            sys.cols()
        )));
    }
    Ok(())
}

/// Numerator and denominator at each active sample; fails on a vanishing
/// denominator.
fn num_den_nonzero(sys: &LevySystem, w: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_len(sys, w)?;
    let (n, d) = sys.num_den(w);
    if let Some(i) = d.iter().position(|x| *x == Complex64::new(0.0, 0.0) || !x.is_finite()) {
        return Err(Error::VanishingDenominator { index: i });
    }
    Ok((n, d))
}

/// Per-sample `(s_i, α_i, B_i)` for the gradient shape described above.
fn terms(
    sys: &LevySystem,
    criterion: Criterion,
    w: &[Complex64],
    w_prev: Option<&[Complex64]>,
) -> Result<Vec<(Complex64, Complex64, Complex64)>> {
    let h = &sys.data_values;
    let prev = || -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let wp = w_prev.ok_or_else(|| Error::InvalidConfig(format!("{} needs previous weights", criterion.as_str())))?;
        num_den_nonzero(sys, wp)
    };
    let out = match criterion {
        Criterion::Nonlinear => {
            let (n, d) = num_den_nonzero(sys, w)?;
            (0..h.len())
                .map(|i| {
                    let r = n[i] / d[i];
                    (d[i].inv(), r, r - h[i])
                })
                .collect()
        }
        Criterion::Levy => {
            check_len(sys, w)?;
            let (n, d) = sys.num_den(w);
            (0..h.len())
                .map(|i| (Complex64::new(1.0, 0.0), h[i], n[i] - d[i] * h[i]))
                .collect()
        }
        Criterion::SkStep => {
            check_len(sys, w)?;
            let (_, dp) = prev()?;
            let (n, d) = sys.num_den(w);
            (0..h.len())
                .map(|i| (Complex64::new(dp[i].norm_sqr().recip(), 0.0), h[i], n[i] - h[i] * d[i]))
                .collect()
        }
        Criterion::WfStep => {
            check_len(sys, w)?;
            let (np, dp) = prev()?;
            let (n, d) = sys.num_den(w);
            (0..h.len())
                .map(|i| {
                    let rp = np[i] / dp[i];
                    let b = n[i] - rp * d[i] + np[i] - dp[i] * h[i];
                    (Complex64::new(dp[i].norm_sqr().recip(), 0.0), rp, b)
                })
                .collect()
        }
    };
    Ok(out)
}

fn reduce(sys: &LevySystem, terms: &[(Complex64, Complex64, Complex64)]) -> Vec<Complex64> {
    (0..sys.cols())
        .map(|j| {
            let hj = sys.interp_values[j];
            terms
                .iter()
                .enumerate()
                .map(|(i, &(s, a, b))| s * (hj - a) * sys.cauchy[(i, j)] * b.conj())
                .sum()
        })
        .collect()
}

fn reduce_conj(sys: &LevySystem, terms: &[(Complex64, Complex64, Complex64)]) -> Vec<Complex64> {
    (0..sys.cols())
        .map(|j| {
            let hj = sys.interp_values[j].conj();
            terms
                .iter()
                .enumerate()
                .map(|(i, &(s, a, b))| s.conj() * (hj - a.conj()) * sys.cauchy[(i, j)].conj() * b)
                .sum()
        })
        .collect()
}

/// Wirtinger derivative `dE/dw` of a criterion. `w_prev` is required for the
/// step criteria and ignored otherwise.
pub fn gradient(
    sys: &LevySystem,
    criterion: Criterion,
    w: &[Complex64],
    w_prev: Option<&[Complex64]>,
) -> Result<Vec<Complex64>> {
    Ok(reduce(sys, &terms(sys, criterion, w, w_prev)?))
}

/// Conjugate Wirtinger derivative `dE/dw̄`, evaluated from the conjugated
/// expression rather than by conjugating [`gradient`].
pub fn conj_gradient(
    sys: &LevySystem,
    criterion: Criterion,
    w: &[Complex64],
    w_prev: Option<&[Complex64]>,
) -> Result<Vec<Complex64>> {
    Ok(reduce_conj(sys, &terms(sys, criterion, w, w_prev)?))
}

/// Scalar value of a criterion over the active samples.
pub fn error_value(
    sys: &LevySystem,
    criterion: Criterion,
    w: &[Complex64],
    w_prev: Option<&[Complex64]>,
) -> Result<f64> {
    if criterion == Criterion::Nonlinear {
        num_den_nonzero(sys, w)?;
        return Ok(sys.sq_error(w));
    }
    // the Levy and step scales are real and positive
    Ok(terms(sys, criterion, w, w_prev)?
        .iter()
        .map(|&(s, _, b)| s.re * b.norm_sqr())
        .sum())
}

fn system(supports: &[Complex64], interp_values: &[Complex64], data: &SampleSet) -> Result<LevySystem> {
    LevySystem::from_samples(supports, interp_values, data)
}

/// `Σ (1/d)(p - r q) conj(r - H)`.
pub fn grad_nonlinear(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
) -> Result<Vec<Complex64>> {
    gradient(&system(supports, interp_values, data)?, Criterion::Nonlinear, w, None)
}

/// `Σ (p - H q) conj(n - d H)`.
pub fn grad_levy(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
) -> Result<Vec<Complex64>> {
    gradient(&system(supports, interp_values, data)?, Criterion::Levy, w, None)
}

/// The Levy gradient written as `Σ |d|² (1/d)(p - H q) conj(r - H)`.
pub fn grad_levy_rearranged(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
) -> Result<Vec<Complex64>> {
    let sys = system(supports, interp_values, data)?;
    let (n, d) = num_den_nonzero(&sys, w)?;
    let t: Vec<_> = (0..sys.rows())
        .map(|i| {
            let h = sys.data_values[i];
            (d[i].norm_sqr() / d[i], h, n[i] / d[i] - h)
        })
        .collect();
    Ok(reduce(&sys, &t))
}

/// `Σ (1/|d_prev|²)(p - H q) conj(n - H d)`.
pub fn grad_sk_step(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
    w_prev: &[Complex64],
) -> Result<Vec<Complex64>> {
    gradient(&system(supports, interp_values, data)?, Criterion::SkStep, w, Some(w_prev))
}

/// Reweighted gradient at a fixed point, `Σ (1/d)(p - H q) conj(r - H)`.
pub fn grad_sk_fixed_point(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
) -> Result<Vec<Complex64>> {
    let sys = system(supports, interp_values, data)?;
    let (n, d) = num_den_nonzero(&sys, w)?;
    let t: Vec<_> = (0..sys.rows())
        .map(|i| {
            let h = sys.data_values[i];
            (d[i].inv(), h, n[i] / d[i] - h)
        })
        .collect();
    Ok(reduce(&sys, &t))
}

/// `Σ (1/|d_prev|²)(p - r_prev q) conj(n - r_prev d + n_prev - d_prev H)`.
pub fn grad_wf_step(
    supports: &[Complex64],
    interp_values: &[Complex64],
    data: &SampleSet,
    w: &[Complex64],
    w_prev: &[Complex64],
) -> Result<Vec<Complex64>> {
    gradient(&system(supports, interp_values, data)?, Criterion::WfStep, w, Some(w_prev))
}

/// Central-difference partials `(∂E/∂x_j, ∂E/∂y_j)` with step
/// `1e-6 (1 + |w_j|)` per coordinate.
pub fn finite_difference<F>(f: F, w: &[Complex64]) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&[Complex64]) -> Result<f64>,
{
    let mut probe = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    for j in 0..w.len() {
        let step = 1e-6 * (1.0 + w[j].norm());
        let mut partial = |dir: Complex64| -> Result<f64> {
            probe[j] = w[j] + dir * step;
            let plus = f(&probe)?;
            probe[j] = w[j] - dir * step;
            let minus = f(&probe)?;
            probe[j] = w[j];
            Ok((plus - minus) / (2.0 * step))
        };
        let dx = partial(Complex64::new(1.0, 0.0))?;
        let dy = partial(Complex64::new(0.0, 1.0))?;
        out.push((dx, dy));
    }
    Ok(out)
}

/// Real partials implied by a Wirtinger derivative: `∂E/∂x = 2 Re g`,
/// `∂E/∂y = -2 Im g`.
pub fn real_partials(g: &[Complex64]) -> Vec<(f64, f64)> {
    g.iter().map(|g| (2.0 * g.re, -2.0 * g.im)).collect()
}

/// `‖a - b‖₂ / max(‖a‖₂, ‖b‖₂)` over the stacked real partials; zero when both
/// vanish.
pub fn relative_deviation(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let norm = |v: &[(f64, f64)]| v.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|((ax, ay), (bx, by))| (ax - bx).powi(2) + (ay - by).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / scale
    }
}

/// Compares the analytic gradient of `criterion` with central differences of
/// its scalar error and returns the relative deviation.
pub fn check_gradient(
    sys: &LevySystem,
    criterion: Criterion,
    w: &[Complex64],
    w_prev: Option<&[Complex64]>,
) -> Result<f64> {
    let analytic = real_partials(&gradient(sys, criterion, w, w_prev)?);
    let fd = finite_difference(|v| error_value(sys, criterion, v, w_prev), w)?;
    Ok(relative_deviation(&analytic, &fd))
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Component of the Levy gradient tangent to the unit sphere at `w`. It
/// vanishes at the constrained minimizer returned by the singular-vector solve.
pub fn projected_levy_gradient(sys: &LevySystem, w: &[Complex64]) -> Result<Vec<Complex64>> {
    let g: Vec<Complex64> = gradient(sys, Criterion::Levy, w, None)?.iter().map(|x| x.conj()).collect();
    let ww: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    if ww == 0.0 {
        return Err(Error::ZeroWeights);
    }
    let along: Complex64 = w.iter().zip(&g).map(|(a, b)| a.conj() * b).sum::<Complex64>() / ww;
    Ok(g.iter().zip(w).map(|(g, w)| g - w * along).collect())
}

/// Gradient of the nonlinear error at `w / w[pivot]` with the pivot
/// coordinate removed.
pub fn pivot_restricted_gradient(sys: &LevySystem, w: &[Complex64], pivot: usize) -> Result<Vec<Complex64>> {
    let p = *w
        .get(pivot)
        .ok_or_else(|| Error::InvalidConfig(format!("pivot {pivot} out of range")))?;
    if p == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroWeights);
    }
    let scaled: Vec<Complex64> = w.iter().map(|x| x / p).collect();
    let mut g = gradient(sys, Criterion::Nonlinear, &scaled, None)?;
    g.remove(pivot);
    Ok(g)
}

/// `max|d| / min|d|` over the probe points, `d(z) = Σ w_j / (z - λ_j)`.
pub fn denominator_variation(supports: &[Complex64], w: &[Complex64], probes: &[Complex64]) -> Result<f64> {
    if supports.len() != w.len() {
        return Err(Error::InvalidModel(format!(
            "{} weights for {} supports",
            w.len(),
            supports.len()
        )));
    }
    if probes.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &z in probes {
        let mut d = Complex64::new(0.0, 0.0);
        for (j, (&lam, &wj)) in supports.iter().zip(w).enumerate() {
            if z == lam {
                return Err(Error::SupportCoincidence { z, support: j });
            }
            d += wj / (z - lam);
        }
        let a = d.norm();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    Ok(if lo == 0.0 { f64::INFINITY } else { hi / lo })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn instance() -> (Vec<Complex64>, Vec<Complex64>, SampleSet) {
        let xs: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin() + 0.3 * x * x).collect();
        let data = SampleSet::from_real(&xs, &ys).unwrap().interpolate(1).unwrap().interpolate(6).unwrap();
        let lam = vec![c(xs[1], 0.), c(xs[6], 0.)];
        let h = vec![c(ys[1], 0.), c(ys[6], 0.)];
        (lam, h, data)
    }

    #[test]
    fn k1_nonlinear_gradient_vanishes() {
        let data = SampleSet::from_real(&[0., 1., 2.], &[1., 3., 2.]).unwrap().interpolate(0).unwrap();
        let g = grad_nonlinear(&[c(0., 0.)], &[c(1., 0.)], &data, &[c(0.7, -0.2)]).unwrap();
        assert!(norm(&g) < 1e-15);
    }

    #[test]
    fn two_point_hand_checks_match_fd() {
        let (lam, h, data) = instance();
        let sys = LevySystem::from_samples(&lam, &h, &data).unwrap();
        let w = [c(0.8, 0.1), c(-0.5, 0.3)];
        let wp = [c(0.7, -0.1), c(-0.6, 0.2)];
        for crit in Criterion::ALL {
            let dev = check_gradient(&sys, crit, &w, Some(&wp)).unwrap();
            assert!(dev < 1e-6, "{crit:?}: {dev}");
        }
    }

    #[test]
    fn wf_step_at_previous_matches_nonlinear() {
        let (lam, h, data) = instance();
        let w = [c(0.8, 0.1), c(-0.5, 0.3)];
        let a = grad_wf_step(&lam, &h, &data, &w, &w).unwrap();
        let b = grad_nonlinear(&lam, &h, &data, &w).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() <= 1e-13 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn rearranged_and_fixed_point_forms() {
        let (lam, h, data) = instance();
        let w = [c(0.8, 0.1), c(-0.5, 0.3)];
        let a = grad_levy(&lam, &h, &data, &w).unwrap();
        let b = grad_levy_rearranged(&lam, &h, &data, &w).unwrap();
        let s = grad_sk_step(&lam, &h, &data, &w, &w).unwrap();
        let f = grad_sk_fixed_point(&lam, &h, &data, &w).unwrap();
        for j in 0..2 {
            assert!((a[j] - b[j]).norm() < 1e-12 * a[j].norm());
            assert!((s[j] - f[j]).norm() < 1e-12 * s[j].norm());
        }
    }

    #[test]
    fn sk_step_with_unit_denominator_is_levy() {
        // a single support at 0 with w = 1 and samples on the unit circle
        let pts: Vec<Complex64> = (0..6).map(|i| Complex64::from_polar(1.0, 0.3 + i as f64)).collect();
        let mut all = vec![c(0., 0.)];
        all.extend(&pts);
        let vals: Vec<Complex64> = (0..7).map(|i| c(i as f64 * 0.5 - 1.0, 0.2 * i as f64)).collect();
        let data = SampleSet::new(all, vals.clone()).unwrap().interpolate(0).unwrap();
        let lam = [c(0., 0.)];
        let h = [vals[0]];
        let one = [c(1., 0.)];
        let w = [c(0.4, -1.2)];
        let levy = grad_levy(&lam, &h, &data, &w).unwrap();
        let sk = grad_sk_step(&lam, &h, &data, &w, &one).unwrap();
        assert!((levy[0] - sk[0]).norm() < 1e-13 * levy[0].norm());
    }

    #[test]
    fn conjugates_agree() {
        let (lam, h, data) = instance();
        let sys = LevySystem::from_samples(&lam, &h, &data).unwrap();
        let w = [c(0.8, 0.1), c(-0.5, 0.3)];
        let wp = [c(0.7, -0.1), c(-0.6, 0.2)];
        for crit in Criterion::ALL {
            let g = gradient(&sys, crit, &w, Some(&wp)).unwrap();
            let gc = conj_gradient(&sys, crit, &w, Some(&wp)).unwrap();
            for (a, b) in g.iter().zip(&gc) {
                assert!((a.conj() - b).norm() <= 1e-13 * a.norm());
            }
        }
    }

    #[test]
    fn exact_fit_gradients_vanish() {
        // data from r(z) = 1/(z + 2), two supports reproduce it exactly
        let xs: Vec<f64> = (0..7).map(|i| -1.0 + i as f64 / 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 / (x + 2.0)).collect();
        let data = SampleSet::from_real(&xs, &ys).unwrap().interpolate(0).unwrap().interpolate(6).unwrap();
        let lam = [c(xs[0], 0.), c(xs[6], 0.)];
        let h = [c(ys[0], 0.), c(ys[6], 0.)];
        let w = crate::aaa::levy_weights(&lam, &h, &data).unwrap();
        let scale = 1.0;
        for g in [
            grad_nonlinear(&lam, &h, &data, &w).unwrap(),
            grad_levy(&lam, &h, &data, &w).unwrap(),
            grad_sk_step(&lam, &h, &data, &w, &w).unwrap(),
            grad_wf_step(&lam, &h, &data, &w, &w).unwrap(),
        ] {
            assert!(norm(&g) < 1e-12 * scale, "{g:?}");
        }
    }

    #[test]
    fn levy_minimizer_has_zero_projected_gradient() {
        let (lam, h, data) = instance();
        let sys = LevySystem::from_samples(&lam, &h, &data).unwrap();
        let w = crate::aaa::levy_weights(&lam, &h, &data).unwrap();
        let scale: f64 = sys.data_values.iter().map(|x| x.norm_sqr()).sum::<f64>() * 16.0;
        assert!(norm(&projected_levy_gradient(&sys, &w).unwrap()) < 1e-8 * scale);
        let off = [w[0] + c(0.1, 0.), w[1]];
        assert!(norm(&projected_levy_gradient(&sys, &off).unwrap()) > 1e-6);
    }

    #[test]
    fn vanishing_denominator_reported() {
        // w = (1, 1) with supports ±1 gives d(0) = 0
        let data = SampleSet::from_real(&[-1., 0., 1.], &[1., 2., 3.]).unwrap().interpolate(0).unwrap().interpolate(2).unwrap();
        let r = grad_nonlinear(&[c(-1., 0.), c(1., 0.)], &[c(1., 0.), c(3., 0.)], &data, &[c(1., 0.), c(1., 0.)]);
        assert!(matches!(r, Err(Error::VanishingDenominator { index: 0 })));
    }

    #[test]
    fn denominator_variation_hand_values() {
        let v = denominator_variation(&[c(0., 0.)], &[c(2.5, 1.)], &[c(2., 0.), c(3., 0.)]).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        assert_eq!(denominator_variation(&[c(0., 0.)], &[c(1., 0.)], &[c(2., 0.)]).unwrap(), 1.0);
        assert!(denominator_variation(&[c(0., 0.)], &[c(1., 0.)], &[c(0., 0.)]).is_err());
    }
}
