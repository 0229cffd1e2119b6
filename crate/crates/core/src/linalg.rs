//! Dense complex assembly of the linearized fitting problems and the two
//! least-squares kernels they reduce to.
//!
//! All kernels reduce tall problems to a square triangular factor with a
//! Householder QR before the SVD; everything is deterministic for fixed
//! input bits.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sample::SampleSet;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Cauchy matrix `C_ij = 1/(z_i - λ_j)`.
pub fn build_cauchy(active_points: &[Complex64], supports: &[Complex64]) -> Result<CMatrix> {
    let mut c = CMatrix::from_element(active_points.len(), supports.len(), ZERO);
    for (i, &z) in active_points.iter().enumerate() {
        for (j, &lam) in supports.iter().enumerate() {
            if z == lam {
                return Err(Error::SupportCoincidence { z, support: j });
            }
            c[(i, j)] = ONE / (z - lam);
        }
    }
    Ok(c)
}

/// The matrices of one linearized fitting step: the Cauchy matrix over the
/// active samples together with the interpolated values `H = diag(h_j)` and
/// the data values `G = diag(H(z_i))`.
#[derive(Debug, Clone)]
pub struct LevySystem {
    pub cauchy: CMatrix,
    pub interp_values: Vec<Complex64>,
    pub data_values: Vec<Complex64>,
    pub active_points: Vec<Complex64>,
}

impl LevySystem {
    pub fn new(
        active_points: Vec<Complex64>,
        data_values: Vec<Complex64>,
        supports: &[Complex64],
        interp_values: Vec<Complex64>,
    ) -> Result<Self> {
        if active_points.len() != data_values.len() {
            return Err(Error::LengthMismatch {
                points: active_points.len(),
                values: data_values.len(),
            });
        }
        if supports.len() != interp_values.len() {
            return Err(Error::InvalidModel(format!(
                "{} supports but {} interpolated values",
                supports.len(),
                interp_values.len()
            )));
        }
        let cauchy = build_cauchy(&active_points, supports)?;
        Ok(Self {
            cauchy,
            interp_values,
            data_values,
            active_points,
        })
    }

    /// Assembles the system over the active samples of `data`.
    pub fn from_samples(
        supports: &[Complex64],
        interp_values: &[Complex64],
        data: &SampleSet,
    ) -> Result<Self> {
        Self::new(
            data.active_points(),
            data.active_values(),
            supports,
            interp_values.to_vec(),
        )
    }

    pub fn rows(&self) -> usize {
        self.cauchy.nrows()
    }

    pub fn cols(&self) -> usize {
        self.cauchy.ncols()
    }

    /// Numerator and denominator values `(C (h∘w), C w)` at the active samples.
    pub fn num_den(&self, w: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.rows();
        let mut n = vec![ZERO; m];
        let mut d = vec![ZERO; m];
        for (j, (&wj, &hj)) in w.iter().zip(&self.interp_values).enumerate() {
            let wh = wj * hj;
            for i in 0..m {
                let c = self.cauchy[(i, j)];
                n[i] += wh * c;
                d[i] += wj * c;
            }
        }
        (n, d)
    }

    /// Rational values `n/d` at the active samples; `None` where `d = 0`.
    pub fn rational(&self, w: &[Complex64]) -> Vec<Option<Complex64>> {
        let (n, d) = self.num_den(w);
        n.into_iter()
            .zip(d)
            .map(|(n, d)| if d == ZERO { None } else { Some(n / d) })
            .collect()
    }

    /// Raw squared error `Σ |r(z_i) - H(z_i)|²` over the active samples;
    /// infinite if the denominator vanishes at any sample.
    pub fn sq_error(&self, w: &[Complex64]) -> f64 {
        let mut err = 0.0;
        for (r, h) in self.rational(w).into_iter().zip(&self.data_values) {
            match r {
                Some(r) => err += (r - h).norm_sqr(),
                None => return f64::INFINITY,
            }
        }
        if err.is_nan() {
            f64::INFINITY
        } else {
            err
        }
    }
}

/// `G C - C H`, formed entrywise as `(H(z_i) - h_j) / (z_i - λ_j)`.
pub fn levy_matrix(system: &LevySystem) -> CMatrix {
    let mut l = system.cauchy.clone();
    for j in 0..system.cols() {
        let hj = system.interp_values[j];
        for i in 0..system.rows() {
            l[(i, j)] *= system.data_values[i] - hj;
        }
    }
    l
}

/// Row weights `1/|d(z_i)|`, with `|d|` floored at machine epsilon times its
/// largest magnitude so that no entry overflows.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingDiag {
    entries: Vec<f64>,
}

impl WeightingDiag {
    pub fn identity(m: usize) -> Self {
        Self {
            entries: vec![1.0; m],
        }
    }

    pub fn from_denominators(d: &[Complex64]) -> Self {
        let max = d.iter().map(|d| d.norm()).fold(0.0f64, f64::max);
        let floor = (f64::EPSILON * max).max(f64::MIN_POSITIVE);
        Self {
            entries: d.iter().map(|d| 1.0 / d.norm().max(floor)).collect(),
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `D A`.
    pub fn scale_rows(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for (i, &s) in self.entries.iter().enumerate() {
            out.row_mut(i).scale_mut(s);
        }
        out
    }
}

fn svd(a: CMatrix, compute_u: bool) -> Result<SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn>> {
    SVD::try_new(a, compute_u, true, f64::EPSILON, 0).ok_or(Error::SvdFailed)
}

/// Unit-norm `v` minimizing `‖A v‖₂`: the right singular vector belonging to
/// the smallest singular value. Unique only up to a unit-modulus factor.
pub fn min_unit_norm_solution(a: &CMatrix) -> Result<CVector> {
    let (r, k) = a.shape();
    if k == 0 {
        return Err(Error::InvalidConfig("matrix has no columns".into()));
    }
    let square = if r > k {
        a.clone().qr().unpack_r()
    } else if r < k {
        // zero rows do not change ‖Av‖ but expose the full null space
        let mut padded = CMatrix::from_element(k, k, ZERO);
        padded.rows_mut(0, r).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let dec = svd(square, false)?;
    let v_t = dec.v_t.as_ref().ok_or(Error::SvdFailed)?;
    let mut best = 0;
    for (i, &s) in dec.singular_values.iter().enumerate() {
        if s <= dec.singular_values[best] {
            best = i;
        }
    }
    let v: CVector = v_t.row(best).adjoint();
    let norm = v.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::SvdFailed);
    }
    Ok(v / Complex64::new(norm, 0.0))
}

/// Minimum-norm solution of the (possibly rank-deficient) problem
/// `min ‖A x - b‖₂`.
pub fn min_norm_lsq(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(CVector::zeros(0));
    }
    let (square, rhs) = if m > n {
        let qr = a.clone().qr();
        let mut qtb = b.clone();
        qr.q_tr_mul(&mut qtb);
        (qr.unpack_r(), qtb.rows(0, n).into_owned())
    } else {
        (a.clone(), b.clone())
    };
    let dec = svd(square, true)?;
    let smax = dec.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let eps = smax * (m.max(n) as f64) * f64::EPSILON;
    dec.solve(&rhs, eps).map_err(|_| Error::SvdFailed)
}

/// Solves `min ‖D(F v - b)‖₂` subject to `v[pivot] = 1`, i.e. the
/// unconstrained problem in the remaining `k - 1` entries with right-hand
/// side `b - F[:, pivot]`. `pivot` is zero-based.
pub fn pivoted_weighted_lsq(
    d: &WeightingDiag,
    f: &CMatrix,
    b: &[Complex64],
    pivot: usize,
) -> Result<CVector> {
    let (m, k) = f.shape();
    if pivot >= k {
        return Err(Error::InvalidConfig(format!("pivot {pivot} out of range for {k} columns")));
    }
    if b.len() != m || d.len() != m {
        return Err(Error::InvalidConfig("weighted least-squares dimensions disagree".into()));
    }
    let mut w = CVector::from_element(k, ZERO);
    w[pivot] = ONE;
    if k == 1 {
        return Ok(w);
    }
    let free: Vec<usize> = (0..k).filter(|&j| j != pivot).collect();
    let mut a = CMatrix::from_element(m, k - 1, ZERO);
    let mut rhs = CVector::from_element(m, ZERO);
    for i in 0..m {
        let s = d.entries()[i];
        for (c, &j) in free.iter().enumerate() {
            a[(i, c)] = f[(i, j)] * s;
        }
        rhs[i] = (b[i] - f[(i, pivot)]) * s;
    }
    let x = min_norm_lsq(&a, &rhs)?;
    for (c, &j) in free.iter().enumerate() {
        w[j] = x[c];
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        c(re, 0.0)
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(build_cauchy(&[r(2.)], &[r(1.)]).unwrap()[(0, 0)], r(1.));
        let m = build_cauchy(&[r(1.), r(2.)], &[r(0.)]).unwrap();
        assert_eq!((m[(0, 0)], m[(1, 0)]), (r(1.), r(0.5)));
        let m = build_cauchy(&[r(0.)], &[c(0., 1.)]).unwrap();
        assert!((m[(0, 0)] - c(0., 1.)).norm() < 1e-16);
        assert!(matches!(
            build_cauchy(&[r(1.)], &[r(1.)]),
            Err(Error::SupportCoincidence { .. })
        ));
    }

    #[test]
    fn levy_matrix_examples() {
        let sys = LevySystem::new(vec![r(1.), r(2.)], vec![r(2.), r(3.)], &[r(0.)], vec![r(1.)]).unwrap();
        let l = levy_matrix(&sys);
        assert_eq!((l[(0, 0)], l[(1, 0)]), (r(1.), r(1.)));

        let sys = LevySystem::new(vec![r(2.)], vec![r(4.)], &[r(0.)], vec![r(1.)]).unwrap();
        assert_eq!(levy_matrix(&sys)[(0, 0)], r(1.5));

        let sys = LevySystem::new(vec![r(2.), r(3.)], vec![r(7.); 2], &[r(0.), r(1.)], vec![r(7.); 2]).unwrap();
        assert!(levy_matrix(&sys).iter().all(|x| *x == ZERO));
    }

    #[test]
    fn unit_norm_examples() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![r(1.), r(2.)]));
        let v = min_unit_norm_solution(&a).unwrap();
        assert!(((&a * &v).norm() - 1.0).abs() < 1e-14);
        assert!((v[0].norm() - 1.0).abs() < 1e-14);

        let a = CMatrix::from_element(2, 2, r(1.));
        let v = min_unit_norm_solution(&a).unwrap();
        assert!((&a * &v).norm() < 1e-14);
        assert!((v[0] + v[1]).norm() < 1e-14);

        let a = CMatrix::from_element(1, 1, r(3.));
        let v = min_unit_norm_solution(&a).unwrap();
        assert!(((&a * &v).norm() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn unit_norm_wide_and_tall() {
        // wide: exact null vector exists
        let a = CMatrix::from_row_slice(1, 3, &[r(1.), r(2.), c(0., 1.)]);
        let v = min_unit_norm_solution(&a).unwrap();
        assert!((&a * &v).norm() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-14);
        // tall: reduces through QR
        let a = CMatrix::from_row_slice(3, 2, &[r(1.), r(0.), r(0.), r(2.), r(0.), r(0.)]);
        let v = min_unit_norm_solution(&a).unwrap();
        assert!(((&a * &v).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pivoted_examples() {
        let f = CMatrix::from_row_slice(2, 1, &[r(3.), r(4.)]);
        let w = pivoted_weighted_lsq(&WeightingDiag::identity(2), &f, &[r(1.), r(1.)], 0).unwrap();
        assert_eq!(w.as_slice(), &[r(1.)]);

        let f = CMatrix::from_row_slice(2, 2, &[r(0.), r(1.), r(0.), r(0.)]);
        let w = pivoted_weighted_lsq(&WeightingDiag::identity(2), &f, &[r(2.), r(0.)], 0).unwrap();
        assert!((w[0] - r(1.)).norm() < 1e-15);
        assert!((w[1] - r(2.)).norm() < 1e-14);
    }

    #[test]
    fn pivoted_consistent_system() {
        let f = CMatrix::from_row_slice(
            3,
            2,
            &[r(1.), c(0., 2.), r(-1.), r(3.), c(0.5, 0.5), r(1.)],
        );
        let target = CVector::from_vec(vec![r(1.), c(0.3, -0.7)]);
        let b: Vec<Complex64> = (&f * &target).iter().cloned().collect();
        let d = WeightingDiag::from_denominators(&[r(1.), r(10.), r(0.1)]);
        let w = pivoted_weighted_lsq(&d, &f, &b, 0).unwrap();
        assert!((w - target).norm() < 1e-13);
    }

    #[test]
    fn weighting_clamps_underflow() {
        let d = WeightingDiag::from_denominators(&[r(1.), r(0.), r(1e-300)]);
        assert!(d.entries().iter().all(|x| x.is_finite() && *x > 0.0));
        assert_eq!(d.entries()[0], 1.0);
        assert_eq!(d.entries()[1], 1.0 / f64::EPSILON);
    }
}
