//! Barycentric rational approximation of sampled complex data.
//!
//! The crate fits rational functions in barycentric form with the classical
//! AAA algorithm and with a nonlinear least-squares variant that refines the
//! weights of each greedy step, checks weight gradients against finite
//! differences, and converts fitted models to descriptor state-space form.

pub mod aaa;
pub mod datasets;
pub mod error;
pub mod gradients;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod nlaaa;
pub mod refine;
pub mod sample;
pub mod trace;

pub use aaa::{aaa_fit, greedy_select, initial_model, levy_weights, FitConfig};
pub use datasets::{grid, sample_builtin, Builtin};
pub use error::{Error, Result};
pub use gradients::{denominator_variation, Criterion};
pub use metrics::{metrics, MetricPair};
pub use model::{realize, Barycentric, RationalModel, Realization};
pub use nlaaa::{fallback_greedy, nlaaa_fit, select_weights, FallbackMode, NlaaaConfig};
pub use num_complex::Complex64;
pub use refine::{sk_iterate, wf_iterate, wf_step, RefineConfig, RefineResult};
pub use sample::SampleSet;
pub use trace::{Branch, FitTrace, StopReason, TraceRecord};
