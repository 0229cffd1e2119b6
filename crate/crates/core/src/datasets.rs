//! Built-in real test functions sampled on `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sample::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `|x|`
    Abs,
    /// `max(x, 0)`
    Relu,
    /// `|sin(3πx)|`
    AbsSin3Pi,
    /// `2 |3x - floor(3x + 1/2)|`
    Triwave,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Abs, Builtin::Relu, Builtin::AbsSin3Pi, Builtin::Triwave];

    pub fn as_str(self) -> &'static str {
        match self {
            Builtin::Abs => "abs",
            Builtin::Relu => "relu",
            Builtin::AbsSin3Pi => "abs_sin3pi",
            Builtin::Triwave => "triwave",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Builtin::Abs => x.abs(),
            Builtin::Relu => x.max(0.0),
            Builtin::AbsSin3Pi => (3.0 * std::f64::consts::PI * x).sin().abs(),
            Builtin::Triwave => 2.0 * (3.0 * x - (3.0 * x + 0.5).floor()).abs(),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `count` equidistant points on `[-1, 1]` including both endpoints.
///
/// Point `j` is `(2j - (count - 1)) / (count - 1)`: the numerator is an exact
/// integer, so mirrored points are exact negatives and an odd grid has an
/// exact zero midpoint.
pub fn grid(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::GridTooSmall(count));
    }
    let m = (count - 1) as f64;
    Ok((0..count).map(|j| (2.0 * j as f64 - m) / m).collect())
}

pub fn sample_builtin(f: Builtin, count: usize) -> Result<SampleSet> {
    let xs = grid(count)?;
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    SampleSet::from_real(&xs, &ys)
}
