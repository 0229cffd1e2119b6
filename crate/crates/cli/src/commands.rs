use std::fs;
use std::path::Path;
use std::thread;

use baryfit::gradients::{self, Criterion};
use baryfit::linalg::LevySystem;
use baryfit::{
    aaa_fit, io, metrics, nlaaa_fit, sample_builtin, Builtin, Complex64, FitTrace, NlaaaConfig, RationalModel,
    RefineConfig, SampleSet,
};
use log::{debug, info};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{FitArgs, Failure, RefineArgs};

const GRADCHECK_TOL: f64 = 1e-5;

pub fn sample(function: Builtin, count: usize, out: &Path) -> Result<(), Failure> {
    let data = sample_builtin(function, count)?;
    io::save_samples(out, &data)?;
    info!("wrote {count} samples of {function} to {}", out.display());
    Ok(())
}

/// Validated fit settings.
pub struct FitPlan {
    pub nlaaa: bool,
    pub cfg: NlaaaConfig,
}

impl FitPlan {
    pub fn new(nlaaa: bool, fit: &FitArgs, refine: &RefineArgs) -> Result<Self, Failure> {
        let given = refine.given();
        if !nlaaa && !given.is_empty() {
            return Err(Failure::usage(format!("{} require --algo nlaaa", given.join(", "))));
        }
        let defaults = RefineConfig::default();
        let cfg = NlaaaConfig {
            tol: fit.tol,
            max_degree: fit.max_degree,
            refine: RefineConfig {
                p_max: refine.pmax.unwrap_or(defaults.p_max),
                tol_sk: refine.tol_sk.unwrap_or(defaults.tol_sk),
                tol_wf: refine.tol_wf.unwrap_or(defaults.tol_wf),
            },
            fallback_mode: refine.fallback.map(Into::into).unwrap_or_default(),
            rng_seed: refine.seed.unwrap_or(0),
        };
        cfg.validate()?;
        Ok(Self { nlaaa, cfg })
    }

    fn run(&self, data: &SampleSet, nlaaa: bool) -> Result<(RationalModel, FitTrace), Failure> {
        let name = if nlaaa { "nlaaa" } else { "aaa" };
        info!("{name}: fitting {} samples up to degree {}", data.len(), self.cfg.max_degree);
        let out = if nlaaa {
            nlaaa_fit(data, &self.cfg)?
        } else {
            aaa_fit(data, &self.cfg.fit_config())?
        };
        for r in &out.1.records {
            debug!(
                "{name}: k = {} l2 = {:.3e} linf = {:.3e} branch = {}",
                r.k, r.l2, r.linf, r.branch
            );
        }
        info!("{name}: {} steps, stop: {}", out.1.len(), out.1.stop.as_str());
        Ok(out)
    }
}

pub fn fit(plan: &FitPlan, data: &Path, model_out: &Path, trace_out: &Path) -> Result<(), Failure> {
    let data = io::load_csv(data)?;
    let (model, trace) = plan.run(&data, plan.nlaaa)?;
    io::save_model(model_out, &model)?;
    io::save_trace(trace_out, &trace)?;
    let m = metrics(&model, &data)?;
    println!(
        "degree {} l2_norm {:.6e} linf_norm {:.6e} stop {}",
        model.degree(),
        m.l2,
        m.linf,
        trace.stop.as_str()
    );
    Ok(())
}

pub fn eval(model: &Path, points: &Path) -> Result<(), Failure> {
    let model = io::load_model(model)?;
    let points = io::load_points(points)?;
    let mut out = String::from("z_re,z_im,r_re,r_im\n");
    for z in points {
        let r = model.eval(z)?;
        out.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", z.re, z.im, r.re, r.im));
    }
    print!("{out}");
    Ok(())
}

pub fn realize(model: &Path, out: &Path) -> Result<(), Failure> {
    let model = io::load_model(model)?;
    let real = baryfit::realize(&model)?;
    io::save_realization(out, &real)?;
    info!("wrote realization of dimension {} to {}", real.dim(), out.display());
    Ok(())
}

fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

pub fn gradcheck(data: &Path, k: usize, seed: u64) -> Result<(), Failure> {
    let data = io::load_csv(data)?;
    if k < 2 || k >= data.len() {
        return Err(Failure::usage(format!(
            "--k must be between 2 and {} for {} samples",
            data.len().saturating_sub(1),
            data.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, data.len(), k).into_vec();
    picks.sort_unstable();
    let mut active = data.clone();
    for &i in &picks {
        active = active.interpolate(i)?;
    }
    let supports: Vec<Complex64> = picks.iter().map(|&i| data.points()[i]).collect();
    let values: Vec<Complex64> = picks.iter().map(|&i| data.values()[i]).collect();
    let w: Vec<Complex64> = (0..k).map(|_| random_complex(&mut rng, 1.0)).collect();
    let w_prev: Vec<Complex64> = w.iter().map(|x| x + random_complex(&mut rng, 0.1)).collect();
    let sys = LevySystem::from_samples(&supports, &values, &active)?;

    let mut worst = 0.0f64;
    for crit in Criterion::ALL {
        let dev = gradients::check_gradient(&sys, crit, &w, Some(&w_prev))?;
        println!("{:<10} {dev:.3e}", crit.as_str());
        worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
    }
    println!("max        {worst:.3e}");
    if worst > GRADCHECK_TOL {
        return Err(Failure::numerical(format!(
            "gradient deviation {worst:.3e} exceeds {GRADCHECK_TOL:.0e}"
        )));
    }
    Ok(())
}

fn l2_linf_at(trace: &FitTrace, k: usize) -> Option<(f64, f64)> {
    trace
        .records
        .iter()
        .rfind(|r| r.k <= k)
        .map(|r| (r.l2, r.linf))
}

/// Merged per-k errors; a fit that stopped early repeats its last row.
pub fn compare_csv(aaa: &FitTrace, nlaaa: &FitTrace) -> String {
    let mut out = String::from("k,aaa_l2,nlaaa_l2,aaa_linf,nlaaa_linf\n");
    let kmax = aaa.len().max(nlaaa.len());
    for k in 1..=kmax {
        let (al2, alinf) = l2_linf_at(aaa, k).unwrap_or((f64::NAN, f64::NAN));
        let (nl2, nlinf) = l2_linf_at(nlaaa, k).unwrap_or((f64::NAN, f64::NAN));
        out.push_str(&format!("{k},{al2:.16e},{nl2:.16e},{alinf:.16e},{nlinf:.16e}\n"));
    }
    out
}

pub fn compare(plan: &FitPlan, data: &Path, out: &Path) -> Result<(), Failure> {
    let data = io::load_csv(data)?;
    let (aaa, nlaaa) = thread::scope(|s| {
        let a = s.spawn(|| plan.run(&data, false));
        let n = plan.run(&data, true);
        (a.join().expect("aaa thread"), n)
    });
    let (aaa_model, aaa_trace) = aaa?;
    let (nl_model, nl_trace) = nlaaa?;
    fs::create_dir_all(out).map_err(baryfit::Error::from)?;
    io::save_trace(out.join("aaa_trace.csv"), &aaa_trace)?;
    io::save_trace(out.join("nlaaa_trace.csv"), &nl_trace)?;
    io::save_model(out.join("aaa_model.json"), &aaa_model)?;
    io::save_model(out.join("nlaaa_model.json"), &nl_model)?;
    fs::write(out.join("compare.csv"), compare_csv(&aaa_trace, &nl_trace)).map_err(baryfit::Error::from)?;
    for (name, trace) in [("aaa", &aaa_trace), ("nlaaa", &nl_trace)] {
        if let Some(r) = trace.last() {
            println!(
                "{name} degree {} l2_norm {:.6e} linf_norm {:.6e} stop {}",
                r.degree,
                r.l2,
                r.linf,
                trace.stop.as_str()
            );
        }
    }
    Ok(())
}
