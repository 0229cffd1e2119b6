//! `baryfit` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or data error, 3 numerical failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use baryfit::{Builtin, FallbackMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;

#[derive(Debug, Parser)]
#[command(name = "baryfit", version, about = "Barycentric rational fitting with AAA and NL-AAA")]
#[command(after_help = "Set BARYFIT_LOG to quiet, info or debug to control progress logging on stderr.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a built-in test function on [-1, 1].
    Sample {
        /// One of abs, relu, abs_sin3pi, triwave.
        #[arg(long = "fn", value_name = "NAME", value_parser = parse_builtin)]
        function: Builtin,
        /// Number of equidistant points, endpoints included.
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a rational model to sample data.
    Fit {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        refine: RefineArgs,
        /// Output model JSON.
        #[arg(long)]
        model: PathBuf,
        /// Output trace CSV.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Evaluate a model at the points of a CSV file with header z_re,z_im.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Write the descriptor realization E, A, b, c of a model.
    Realize {
        #[arg(long)]
        model: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare analytic weight gradients with finite differences on a random
    /// instance drawn from the data.
    Gradcheck {
        #[arg(long)]
        data: PathBuf,
        /// Number of support points (at least 2).
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run AAA and NL-AAA to the same budget and merge their traces.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        refine: RefineArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Aaa,
    Nlaaa,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fallback {
    Probabilistic,
    Relative,
}

impl From<Fallback> for FallbackMode {
    fn from(f: Fallback) -> Self {
        match f {
            Fallback::Probabilistic => FallbackMode::Probabilistic,
            Fallback::Relative => FallbackMode::Relative,
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Stop once the raw squared error over the active samples is below this.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Largest degree; at most max-degree + 1 support points are used.
    #[arg(long, default_value_t = 30)]
    max_degree: usize,
}

/// Options that only apply to NL-AAA.
#[derive(Debug, Args)]
struct RefineArgs {
    /// Iteration cap for both inner refinements [default: 20].
    #[arg(long)]
    pmax: Option<usize>,
    /// Convergence threshold of the reweighted iteration [default: 1e-8].
    #[arg(long)]
    tol_sk: Option<f64>,
    /// Convergence threshold of the linearization iteration [default: 1e-8].
    #[arg(long)]
    tol_wf: Option<f64>,
    /// Support selection after a step that kept the previous rational
    /// [default: probabilistic].
    #[arg(long, value_enum)]
    fallback: Option<Fallback>,
    /// Seed for the probabilistic selection [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

impl RefineArgs {
    fn given(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.pmax.is_some() {
            v.push("--pmax");
        }
        if self.tol_sk.is_some() {
            v.push("--tol-sk");
        }
        if self.tol_wf.is_some() {
            v.push("--tol-wf");
        }
        if self.fallback.is_some() {
            v.push("--fallback");
        }
        if self.seed.is_some() {
            v.push("--seed");
        }
        v
    }
}

fn parse_builtin(s: &str) -> Result<Builtin, String> {
    s.parse().map_err(|e: baryfit::Error| e.to_string())
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<baryfit::Error> for Failure {
    fn from(e: baryfit::Error) -> Self {
        Self {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn init_logging() -> Result<(), Failure> {
    let level = match std::env::var("BARYFIT_LOG").as_deref() {
        Err(_) | Ok("info") => LevelFilter::Info,
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        Ok(other) => {
            return Err(Failure::usage(format!(
                "BARYFIT_LOG must be quiet, info or debug, got `{other}`"
            )))
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sample { function, count, out } => commands::sample(function, count, &out),
        Command::Fit {
            algo,
            data,
            fit,
            refine,
            model,
            trace,
        } => {
            let plan = commands::FitPlan::new(algo == Algo::Nlaaa, &fit, &refine)?;
            commands::fit(&plan, &data, &model, &trace)
        }
        Command::Eval { model, points } => commands::eval(&model, &points),
        Command::Realize { model, out } => commands::realize(&model, &out),
        Command::Gradcheck { data, k, seed } => commands::gradcheck(&data, k, seed),
        Command::Compare { data, fit, refine, out } => {
            let plan = commands::FitPlan::new(true, &fit, &refine)?;
            commands::compare(&plan, &data, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_logging().and_then(|()| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
