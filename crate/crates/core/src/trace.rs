use std::fmt;

use num_complex::Complex64;

/// Which weight computation produced a greedy step's model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// First step: a single support point, weight fixed to one.
    Initial,
    /// Classical linearized (homogeneous least-squares) weights.
    Levy,
    /// Refinement initialized from the reweighted iteration.
    WfFromSk,
    /// Refinement initialized from the previous weights padded with zero.
    WfFromPrev,
    /// No candidate improved the error; the previous rational is kept.
    Fallback,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Initial => "initial",
            Branch::Levy => "levy",
            Branch::WfFromSk => "wf-from-sk",
            Branch::WfFromPrev => "wf-from-prev",
            Branch::Fallback => "fallback",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "initial" => Branch::Initial,
            "levy" => Branch::Levy,
            "wf-from-sk" => Branch::WfFromSk,
            "wf-from-prev" => Branch::WfFromPrev,
            "fallback" => Branch::Fallback,
            _ => return None,
        })
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One greedy iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Number of support points.
    pub k: usize,
    pub degree: usize,
    /// Support point added in this iteration.
    pub support: Complex64,
    /// Raw `Σ|r - H|²` over the samples still active after this iteration.
    pub raw_active_sq_err: f64,
    /// Normalized `ℓ2` error over the full data set.
    pub l2: f64,
    /// Normalized `ℓ∞` error over the full data set.
    pub linf: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Raw active error fell below the tolerance.
    Tolerance,
    /// The support-count budget `max_degree + 1` was used up.
    DegreeBudget,
    /// Every sample but one was interpolated.
    DataExhausted,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Tolerance => "tolerance",
            StopReason::DegreeBudget => "budget_exhausted",
            StopReason::DataExhausted => "data_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitTrace {
    pub records: Vec<TraceRecord>,
    pub stop: StopReason,
}

impl FitTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// True unless the fit met its tolerance.
    pub fn budget_exhausted(&self) -> bool {
        self.stop != StopReason::Tolerance
    }

    /// Whether the normalized `ℓ2` column never increases by more than
    /// `rel_slack` relative to the previous entry.
    pub fn l2_non_increasing(&self, rel_slack: f64) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].l2 <= w[0].l2 * (1.0 + rel_slack))
    }
}
