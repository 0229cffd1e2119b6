#![allow(dead_code)]

use baryfit::linalg::LevySystem;
use baryfit::{grid, Complex64, RationalModel, SampleSet};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

pub fn vec_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    c(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// `c0 + Σ a_l / (z - p_l)` with `degree` poles kept at least 0.2 away from
/// the real interval `[-1, 1]`.
pub struct PoleResidue {
    pub c0: Complex64,
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
}

impl PoleResidue {
    pub fn random<R: Rng>(rng: &mut R, degree: usize) -> Self {
        let poles = (0..degree)
            .map(|_| {
                let re = rng.random_range(-1.2..1.2);
                let im = rng.random_range(0.2..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                c(re, im)
            })
            .collect();
        let residues = (0..degree).map(|_| random_complex(rng, 1.0)).collect();
        Self {
            c0: random_complex(rng, 1.0),
            poles,
            residues,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.c0
            + self
                .poles
                .iter()
                .zip(&self.residues)
                .map(|(p, a)| a / (z - p))
                .sum::<Complex64>()
    }

    pub fn sample(&self, count: usize) -> SampleSet {
        let xs = grid(count).unwrap();
        let pts: Vec<Complex64> = xs.iter().map(|&x| c(x, 0.0)).collect();
        let vals = pts.iter().map(|&z| self.eval(z)).collect();
        SampleSet::new(pts, vals).unwrap()
    }
}

/// Random points in the square `[-1, 1]²` with smooth non-rational values,
/// the first `k` of which are interpolated as supports.
pub struct GradInstance {
    pub supports: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub data: SampleSet,
    pub w: Vec<Complex64>,
    pub w_prev: Vec<Complex64>,
}

impl GradInstance {
    pub fn random<R: Rng>(rng: &mut R, k: usize, m: usize) -> Self {
        let pts: Vec<Complex64> = (0..m).map(|_| random_complex(rng, 1.0)).collect();
        let vals: Vec<Complex64> = pts.iter().map(|z| (z * 1.7).exp() / (z - c(0.0, 1.6))).collect();
        let mut data = SampleSet::new(pts.clone(), vals.clone()).unwrap();
        for i in 0..k {
            data = data.interpolate(i).unwrap();
        }
        let w: Vec<Complex64> = (0..k).map(|_| random_complex(rng, 1.0)).collect();
        let w_prev = w.iter().map(|x| x + random_complex(rng, 0.2)).collect();
        Self {
            supports: pts[..k].to_vec(),
            values: vals[..k].to_vec(),
            data,
            w,
            w_prev,
        }
    }

    pub fn system(&self) -> LevySystem {
        LevySystem::from_samples(&self.supports, &self.values, &self.data).unwrap()
    }

    pub fn model(&self, w: &[Complex64]) -> RationalModel {
        RationalModel::barycentric(self.supports.clone(), self.values.clone(), w.to_vec()).unwrap()
    }
}
