//! File formats: sample and point CSV, fit traces, model JSON and
//! realization matrices.
//!
//! Floats are written with 17 significant digits (or the shortest
//! round-trip form in JSON), so saving and reloading is bit-exact.

use std::fs;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{RationalModel, Realization};
use crate::sample::SampleSet;
use crate::trace::FitTrace;

pub const SAMPLE_HEADER: [&str; 4] = ["z_re", "z_im", "H_re", "H_im"];
pub const POINT_HEADER: [&str; 2] = ["z_re", "z_im"];
pub const TRACE_HEADER: &str = "k,degree,support_re,support_im,raw_active_sq_err,l2_norm,linf_norm,branch";

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses CSV text with the given header, returning the numeric fields of
/// each row together with its line number.
fn parse_rows(text: &str, header: &[&str]) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rdr = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let first = match records.next() {
        Some(rec) => rec.map_err(|e| csv_error(e, 1))?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: format!("missing header `{}`", header.join(",")),
            })
        }
    };
    let got: Vec<&str> = first.iter().collect();
    if got != header {
        return Err(Error::Parse {
            line: line_of(&first, 1),
            message: format!("expected header `{}`, found `{}`", header.join(","), got.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(e, 0))?;
        let line = line_of(&rec, 0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let mut vals = Vec::with_capacity(header.len());
        for (field, name) in rec.iter().zip(header) {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number `{field}` in column {name}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value `{field}` in column {name}"),
                });
            }
            vals.push(v);
        }
        rows.push((line, vals));
    }
    Ok(rows)
}

fn line_of(rec: &StringRecord, fallback: usize) -> usize {
    rec.position().map_or(fallback, |p| p.line() as usize)
}

fn csv_error(e: csv::Error, fallback: usize) -> Error {
    let line = e.position().map_or(fallback, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Parses sample CSV text with header `z_re,z_im,H_re,H_im`. Duplicate
/// points are reported with the line numbers of both rows.
pub fn parse_samples_csv(text: &str) -> Result<SampleSet> {
    let rows = parse_rows(text, &SAMPLE_HEADER)?;
    let points = rows.iter().map(|(_, v)| Complex64::new(v[0], v[1])).collect();
    let values = rows.iter().map(|(_, v)| Complex64::new(v[2], v[3])).collect();
    SampleSet::new(points, values).map_err(|e| match e {
        Error::DuplicatePoint { point, first, second } => Error::Parse {
            line: rows[second].0,
            message: format!("duplicate sample point {point} (first seen on line {})", rows[first].0),
        },
        other => other,
    })
}

/// Parses evaluation points with header `z_re,z_im`.
pub fn parse_points_csv(text: &str) -> Result<Vec<Complex64>> {
    Ok(parse_rows(text, &POINT_HEADER)?
        .into_iter()
        .map(|(_, v)| Complex64::new(v[0], v[1]))
        .collect())
}

pub fn samples_to_csv(data: &SampleSet) -> String {
    let mut out = SAMPLE_HEADER.join(",");
    out.push('\n');
    for (z, h) in data.points().iter().zip(data.values()) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(h.re),
            fmt_f64(h.im)
        ));
    }
    out
}

pub fn points_to_csv(points: &[Complex64]) -> String {
    let mut out = POINT_HEADER.join(",");
    out.push('\n');
    for z in points {
        out.push_str(&format!("{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}

pub fn trace_to_csv(trace: &FitTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.k,
            r.degree,
            fmt_f64(r.support.re),
            fmt_f64(r.support.im),
            fmt_f64(r.raw_active_sq_err),
            fmt_f64(r.l2),
            fmt_f64(r.linf),
            r.branch
        ));
    }
    out
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<SampleSet> {
    parse_samples_csv(&fs::read_to_string(path)?)
}

pub fn save_samples(path: impl AsRef<Path>, data: &SampleSet) -> Result<()> {
    Ok(fs::write(path, samples_to_csv(data))?)
}

pub fn load_points(path: impl AsRef<Path>) -> Result<Vec<Complex64>> {
    parse_points_csv(&fs::read_to_string(path)?)
}

pub fn save_trace(path: impl AsRef<Path>, trace: &FitTrace) -> Result<()> {
    Ok(fs::write(path, trace_to_csv(trace))?)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant: Option<ComplexJson>,
    #[serde(default)]
    supports: Vec<ComplexJson>,
    #[serde(default)]
    values: Vec<ComplexJson>,
    #[serde(default)]
    weights: Vec<ComplexJson>,
}

fn to_vec(v: &[Complex64]) -> Vec<ComplexJson> {
    v.iter().map(|&z| z.into()).collect()
}

fn from_vec(v: Vec<ComplexJson>) -> Vec<Complex64> {
    v.into_iter().map(Into::into).collect()
}

pub fn model_to_json(model: &RationalModel) -> String {
    let doc = match model {
        RationalModel::Constant(c) => ModelJson {
            kind: "constant".into(),
            constant: Some((*c).into()),
            supports: vec![],
            values: vec![],
            weights: vec![],
        },
        RationalModel::Barycentric(b) => ModelJson {
            kind: "barycentric".into(),
            constant: None,
            supports: to_vec(b.supports()),
            values: to_vec(b.values()),
            weights: to_vec(b.weights()),
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("model serializes");
    s.push('\n');
    s
}

/// Parses a model document: `kind` is `constant` (with `constant`) or
/// `barycentric` (with `supports`, `values`, `weights`).
pub fn parse_model_json(text: &str) -> Result<RationalModel> {
    let doc: ModelJson = serde_json::from_str(text)?;
    match doc.kind.as_str() {
        "constant" => {
            if !(doc.supports.is_empty() && doc.values.is_empty() && doc.weights.is_empty()) {
                return Err(Error::InvalidModel("constant model with support data".into()));
            }
            let c = doc
                .constant
                .ok_or_else(|| Error::InvalidModel("constant model without `constant`".into()))?;
            RationalModel::constant(c.into())
        }
        "barycentric" => {
            if doc.constant.is_some() {
                return Err(Error::InvalidModel("barycentric model with `constant`".into()));
            }
            RationalModel::barycentric(from_vec(doc.supports), from_vec(doc.values), from_vec(doc.weights))
                .map_err(|e| match e {
                    Error::ZeroWeights => Error::InvalidModel("all weights are zero".into()),
                    other => other,
                })
        }
        other => Err(Error::InvalidModel(format!("unknown model kind `{other}`"))),
    }
}

pub fn save_model(path: impl AsRef<Path>, model: &RationalModel) -> Result<()> {
    Ok(fs::write(path, model_to_json(model))?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<RationalModel> {
    parse_model_json(&fs::read_to_string(path)?)
}

/// Matrix as CSV with columns `c1_re,c1_im,c2_re,...`.
pub fn matrix_to_csv(m: &DMatrix<Complex64>) -> String {
    let header: Vec<String> = (1..=m.ncols())
        .flat_map(|j| [format!("c{j}_re"), format!("c{j}_im")])
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|j| [fmt_f64(m[(i, j)].re), fmt_f64(m[(i, j)].im)])
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes `E.csv`, `A.csv`, `b.csv` and `c.csv` into `dir`, creating it if
/// needed. Vectors are written as single columns.
pub fn save_realization(dir: impl AsRef<Path>, real: &Realization) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let col = |v: &nalgebra::DVector<Complex64>| DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    fs::write(dir.join("E.csv"), matrix_to_csv(&real.e_hat))?;
    fs::write(dir.join("A.csv"), matrix_to_csv(&real.a_hat))?;
    fs::write(dir.join("b.csv"), matrix_to_csv(&col(&real.b_hat)))?;
    fs::write(dir.join("c.csv"), matrix_to_csv(&col(&real.c_hat)))?;
    Ok(())
}
