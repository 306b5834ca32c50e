//! The sets `d1`..`d4` whose intersections are the alpha-, beta- and
//! gamma-duals of the domain spaces.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::conditions::{Operand, Requirement, Settings};
use super::report::{ConditionId, ConditionReport};
use crate::bandops::{build_c_from_a, column_weight, row_weight, SeqPrefix, TruncatedMatrix};
use crate::error::{Error, Result};
use crate::evidence::check_window;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DualSet {
    /// `sup_K sum_n |sum_{k in K} f_{n+1}^2/(f_k f_{k+1}) a_n| < inf`
    D1,
    /// `sup_n sum_k |c_nk| < inf`
    D2,
    /// `lim_n c_nk` exists for each `k`
    D3,
    /// `lim_n sum_k c_nk` exists
    D4,
}

impl DualSet {
    pub const ALL: [DualSet; 4] = [Self::D1, Self::D2, Self::D3, Self::D4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::D1 => "d1",
            Self::D2 => "d2",
            Self::D3 => "d3",
            Self::D4 => "d4",
        }
    }

    /// The condition evaluated for membership in this set.
    pub fn condition(&self) -> ConditionId {
        match self {
            Self::D1 => ConditionId::C6,
            Self::D2 => ConditionId::C1,
            Self::D3 => ConditionId::C3,
            Self::D4 => ConditionId::C5,
        }
    }
}

impl fmt::Display for DualSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DualSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|d| d.as_str() == key)
            .ok_or_else(|| Error::Parse(format!("unknown dual set `{s}`")))
    }
}

impl Serialize for DualSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualReport {
    pub set_id: DualSet,
    #[serde(flatten)]
    pub report: ConditionReport,
}

/// `b_nk = f_{n+1}^2/(f_k f_{k+1}) a_n` for `k <= n`.
pub fn alpha_dual_matrix(a: &SeqPrefix) -> TruncatedMatrix {
    let len = a.len();
    let mut out = TruncatedMatrix::zeros(len, len);
    for (n, an) in a.iter().enumerate() {
        if num_traits::Zero::is_zero(an) {
            continue;
        }
        let scaled: Rational = row_weight(n) * an;
        for k in 0..=n {
            out.set(n, k, column_weight(k) * &scaled);
        }
    }
    out.with_provenance("alpha_dual(sequence)")
}

/// Evidence for `a` in one of `d1`..`d4`.
pub fn dual_membership(a: &SeqPrefix, set: DualSet, tol: f64, window: usize) -> Result<DualReport> {
    check_window(a.len(), window)?;
    let s = Settings { tol, window };
    let (label, matrix) = match set {
        DualSet::D1 => ("a_n f_{n+1}^2/(f_k f_{k+1})", alpha_dual_matrix(a)),
        _ => ("c", build_c_from_a(a)),
    };
    let report =
        Operand::new(label, Cow::Owned(matrix)).evaluate(Requirement::new(set.condition()), s)?;
    Ok(DualReport {
        set_id: set,
        report,
    })
}

/// All four sets, in order.
pub fn dual_all(a: &SeqPrefix, tol: f64, window: usize) -> Result<Vec<DualReport>> {
    DualSet::ALL
        .iter()
        .map(|set| dual_membership(a, *set, tol, window))
        .collect()
}
