use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spaces::SpaceTag;

/// Number of trailing trace values written to reports.
pub const TRACE_TAIL: usize = 16;

/// Characterization conditions on an infinite matrix `A = (a_nk)`.
///
/// `C1`..`C6` are the classical conditions on `A`; `C7`..`C13` are stated
/// through `d^(m)_nk = sum_{j=k}^m f_{j+1}^2/(f_k f_{k+1}) a_nj` and its limit
/// `d_nk`; `CDelta`, `CF1`, `CF2` serve the almost convergent spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
    CDelta,
    CF1,
    CF2,
}

impl ConditionId {
    pub const ALL: [ConditionId; 16] = [
        Self::C1,
        Self::C2,
        Self::C3,
        Self::C4,
        Self::C5,
        Self::C6,
        Self::C7,
        Self::C8,
        Self::C9,
        Self::C10,
        Self::C11,
        Self::C12,
        Self::C13,
        Self::CDelta,
        Self::CF1,
        Self::CF2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::C1 => "C1",
            Self::C2 => "C2",
            Self::C3 => "C3",
            Self::C4 => "C4",
            Self::C5 => "C5",
            Self::C6 => "C6",
            Self::C7 => "C7",
            Self::C8 => "C8",
            Self::C9 => "C9",
            Self::C10 => "C10",
            Self::C11 => "C11",
            Self::C12 => "C12",
            Self::C13 => "C13",
            Self::CDelta => "CDelta",
            Self::CF1 => "CF1",
            Self::CF2 => "CF2",
        }
    }

    /// The condition as a formula.
    pub fn anchor(&self) -> &'static str {
        match self {
            Self::C1 => "sup_n sum_k |a_nk| < inf",
            Self::C2 => "lim_n a_nk = 0 for each k",
            Self::C3 => "lim_n a_nk = alpha_k exists for each k",
            Self::C4 => "lim_n sum_k a_nk = 0",
            Self::C5 => "lim_n sum_k a_nk = alpha exists",
            Self::C6 => "sup_{K finite} sum_n |sum_{k in K} a_nk| < inf",
            Self::C7 => "sup_m sum_{k<=m} |d^(m)_nk| < inf for each n",
            Self::C8 => "lim_m d^(m)_nk = d_nk exists for each k, n",
            Self::C9 => "sup_n sum_k |d_nk| < inf",
            Self::C10 => "lim_n d_nk = alpha_k exists for each k",
            Self::C11 => "sup_{N,K finite} |sum_{n in N} sum_{k in K} d_nk| < inf",
            Self::C12 => "lim_m sum_{k<=m} d^(m)_nk = beta_n exists for each n",
            Self::C13 => "lim_n sum_k d_nk = alpha exists",
            Self::CDelta => "lim_n sum_k [(a_nk - alpha_k) - (a_n,k+1 - alpha_k+1)] = 0",
            Self::CF1 => "f-lim_n a_nk = alpha_k exists for each k",
            Self::CF2 => "f-lim_n sum_k a_nk = alpha exists",
        }
    }

    /// Whether the condition is stated on `d^(m)_nk` or `d_nk` rather than `a_nk`.
    pub fn uses_d(&self) -> bool {
        matches!(
            self,
            Self::C7 | Self::C8 | Self::C9 | Self::C10 | Self::C11 | Self::C12 | Self::C13
        )
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', "");
        let key = if key == "CΔ" {
            "CDELTA".to_string()
        } else {
            key
        };
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().to_ascii_uppercase() == key)
            .ok_or_else(|| Error::Parse(format!("unknown condition `{s}`")))
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionVerdict {
    SatisfiedEvidence,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    MemberEvidence,
    Violated,
    Inconclusive,
}

impl Overall {
    pub fn from_verdicts(verdicts: impl IntoIterator<Item = ConditionVerdict>) -> Self {
        let mut overall = Overall::MemberEvidence;
        for v in verdicts {
            match v {
                ConditionVerdict::Violated => return Overall::Violated,
                ConditionVerdict::Inconclusive => overall = Overall::Inconclusive,
                ConditionVerdict::SatisfiedEvidence => {}
            }
        }
        overall
    }
}

/// An exact value with its float projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "rational::serialize")]
    pub exact: Rational,
    pub approx: f64,
}

impl Estimate {
    pub fn new(exact: Rational) -> Self {
        let approx = rational::to_f64(&exact);
        Self { exact, approx }
    }
}

/// Location of the value that violates a condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Row of the tested matrix (for ladder conditions, the truncation `m`).
    pub row: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    /// Row `n` of `A` whose ladder `(m, k) -> d^(m)_nk` was tested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<usize>,
    #[serde(serialize_with = "rational::serialize")]
    pub value: Rational,
}

/// Limits and suprema read off a satisfied condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extracted {
    Sup {
        value: Estimate,
        row: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        ladder: Option<usize>,
    },
    SubsetSup {
        value: Estimate,
        columns: Vec<usize>,
        cap: usize,
    },
    /// One per column; columns beyond the tested ones carry their last-row value.
    Alphas(Vec<Estimate>),
    Alpha(Estimate),
    /// One per row of `A`.
    Betas(Vec<Estimate>),
}

/// Evidence for one condition on one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub anchor: &'static str,
    /// Matrix the condition was evaluated on, such as `a`, `a(n,k)` or `b`.
    pub subject: String,
    /// Set for the variants with `alpha_k = 0` or `alpha = 0`.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub zero_limit: bool,
    pub verdict: ConditionVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extracted: Option<Extracted>,
    /// What the trace lists.
    pub trace_of: String,
    #[serde(rename = "trace_tail", serialize_with = "serialize_tail")]
    pub trace: Vec<Rational>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn is_satisfied(&self) -> bool {
        self.verdict == ConditionVerdict::SatisfiedEvidence
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == ConditionVerdict::Violated
    }

    pub fn trace_tail(&self) -> &[Rational] {
        &self.trace[self.trace.len().saturating_sub(TRACE_TAIL)..]
    }
}

fn serialize_tail<S: Serializer>(trace: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    rational::serialize_vec(&trace[trace.len().saturating_sub(TRACE_TAIL)..], s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pair {
    pub source: SpaceTag,
    pub target: SpaceTag,
}

/// Aggregated evidence for `A in (source, target)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassVerdict {
    pub pair: Pair,
    /// Provenance of the matrix that was classified.
    pub matrix: String,
    pub required: Vec<ConditionId>,
    pub conditions: Vec<ConditionReport>,
    pub overall: Overall,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ClassVerdict {
    pub fn report(&self, id: ConditionId) -> Option<&ConditionReport> {
        self.conditions.iter().find(|r| r.id == id)
    }

    pub fn first_violation(&self) -> Option<&ConditionReport> {
        self.conditions.iter().find(|r| r.is_violated())
    }
}
