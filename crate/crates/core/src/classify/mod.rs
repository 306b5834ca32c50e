//! Matrix classes `(lambda, mu)` judged on truncated corners.
//!
//! A class is a list of conditions; each condition is evaluated exactly on
//! the corner and tested on its tail, so verdicts are evidence. Classes
//! with a domain space as source are reduced to conditions on
//! `d^(m)_nk` and `d_nk`; classes with a domain space as target are reduced
//! to classical classes of `B`.

mod conditions;
mod duals;
mod report;
mod subsets;

pub use conditions::Requirement;
pub use duals::{alpha_dual_matrix, dual_all, dual_membership, DualReport, DualSet};
pub use report::{
    ClassVerdict, ConditionId, ConditionReport, ConditionVerdict, Estimate, Extracted, Overall,
    Pair, Witness, TRACE_TAIL,
};
pub use subsets::{block_subset_sup, subset_sup, SubsetSup, MAX_SUBSET_COLUMNS};

use std::borrow::Cow;

use crate::bandops::{build_b_from_a, TruncatedMatrix};
use crate::error::{Error, Result};
use crate::spaces::SpaceTag;
use conditions::{Operand, Settings};

use ConditionId::*;

const fn req(id: ConditionId) -> Requirement {
    Requirement::new(id)
}

fn unsupported(source: SpaceTag, target: SpaceTag) -> Error {
    Error::UnsupportedPair {
        source_space: source.to_string(),
        target: target.to_string(),
    }
}

/// Conditions characterizing `(source, target)` between classical spaces.
pub fn pair_requirements(source: SpaceTag, target: SpaceTag) -> Result<Vec<Requirement>> {
    use SpaceTag as S;
    let list = match (source, target) {
        (S::C0, S::C0) => vec![req(C1), req(C2)],
        (S::C0, S::C) => vec![req(C1), req(C3)],
        (S::C, S::C0) => vec![req(C1), req(C2), req(C4)],
        (S::C, S::C) => vec![req(C1), req(C3), req(C5)],
        (S::C0 | S::C, S::EllInf) => vec![req(C1)],
        (S::C0 | S::C, S::Ell1) => vec![req(C6)],
        (S::F, S::C) => vec![req(C1), req(C3), req(C5), req(CDelta)],
        (S::F, S::C0) => vec![req(C1), req(C5), req(C3).zero(), req(CDelta).zero()],
        (S::C, S::F) => vec![req(C1), req(CF1), req(CF2)],
        _ => return Err(unsupported(source, target)),
    };
    Ok(list)
}

/// How a domain-space class rewrites `A` before the conditions run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preprocess {
    None,
    /// `a(n,k) = sum_{j<=n} a_jk`, for series targets.
    ColumnPartialSums,
    /// `a_nk - a_{n-1,k}`, for `bv1`.
    RowDifferences,
}

impl Preprocess {
    pub fn apply<'a>(&self, a: &'a TruncatedMatrix) -> (String, Cow<'a, TruncatedMatrix>) {
        match self {
            Self::None => ("a".into(), Cow::Borrowed(a)),
            Self::ColumnPartialSums => ("a(n,k)".into(), Cow::Owned(a.column_partial_sums())),
            Self::RowDifferences => ("a_nk - a_n-1,k".into(), Cow::Owned(a.row_differences())),
        }
    }
}

/// Conditions characterizing `(source, target)` with `source` a domain space.
pub fn domain_requirements(
    source: SpaceTag,
    target: SpaceTag,
) -> Result<(Preprocess, Vec<Requirement>)> {
    use SpaceTag as S;
    let convergent = match source {
        S::C0Fhat => false,
        S::CFhat => true,
        _ => return Err(unsupported(source, target)),
    };
    let (pre, base) = match target {
        S::C0 | S::C | S::EllInf | S::Ell1 | S::F | S::F0 => (Preprocess::None, target),
        S::Cs0 => (Preprocess::ColumnPartialSums, S::C0),
        S::Cs => (Preprocess::ColumnPartialSums, S::C),
        S::Bs => (Preprocess::ColumnPartialSums, S::EllInf),
        S::Fs => (Preprocess::ColumnPartialSums, S::F),
        S::Bv1 => (Preprocess::RowDifferences, S::Ell1),
        _ => return Err(unsupported(source, target)),
    };
    let mut list = vec![req(C7), req(C8)];
    let tail: &[Requirement] = match (convergent, base) {
        (false, S::C0) => &[req(C9), req(C10).zero()],
        (false, S::C) => &[req(C9), req(C10)],
        (false, S::EllInf) => &[req(C9)],
        (false, S::Ell1) => &[req(C11)],
        (false, S::F) => &[req(C9), req(CF1).on_d()],
        (false, S::F0) => &[req(C9), req(CF1).on_d().zero()],
        (true, S::C0) => &[req(C9), req(C10).zero(), req(C12), req(C13).zero()],
        (true, S::C) => &[req(C9), req(C10), req(C12), req(C13)],
        (true, S::EllInf) => &[req(C9), req(C12)],
        (true, S::Ell1) => &[req(C11), req(C12)],
        (true, S::F) => &[req(C12), req(C13), req(CF1).on_d(), req(CF2).on_d()],
        (true, S::F0) => &[req(C12), req(C13), req(CF1).on_d().zero(), req(CF2).on_d()],
        _ => unreachable!("targets are normalized above"),
    };
    list.extend_from_slice(tail);
    Ok((pre, list))
}

fn settings(tol: f64, window: usize) -> Result<Settings> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parse(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(Settings { tol, window })
}

fn run(
    operand: &Operand<'_>,
    pair: Pair,
    matrix: &str,
    reqs: &[Requirement],
    s: Settings,
) -> Result<ClassVerdict> {
    let conditions = reqs
        .iter()
        .map(|r| operand.evaluate(*r, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassVerdict {
        pair,
        matrix: matrix.to_string(),
        required: reqs.iter().map(|r| r.id).collect(),
        overall: Overall::from_verdicts(conditions.iter().map(|r| r.verdict)),
        conditions,
        notes: Vec::new(),
    })
}

/// Evidence for one condition on `A` itself.
///
/// `C7`..`C13` are read through `d^(m)_nk` and `d_nk` built from `A`;
/// `CDelta` takes `alpha_k` from the last row of `A`.
pub fn eval_condition(
    a: &TruncatedMatrix,
    id: ConditionId,
    tol: f64,
    window: usize,
) -> Result<ConditionReport> {
    let s = settings(tol, window)?;
    Operand::new("a", Cow::Borrowed(a)).evaluate(Requirement::new(id), s)
}

/// Same as [`eval_condition`] for a [`Requirement`] variant.
pub fn eval_requirement(
    a: &TruncatedMatrix,
    requirement: Requirement,
    tol: f64,
    window: usize,
) -> Result<ConditionReport> {
    let s = settings(tol, window)?;
    Operand::new("a", Cow::Borrowed(a)).evaluate(requirement, s)
}

/// `CDelta` with caller-supplied `alpha_k`; needs one per column.
pub fn eval_delta_condition(
    a: &TruncatedMatrix,
    alphas: &[crate::Rational],
    tol: f64,
    window: usize,
) -> Result<ConditionReport> {
    let s = settings(tol, window)?;
    let o = conditions::delta(a, alphas, s)?;
    Ok(ConditionReport {
        id: CDelta,
        anchor: CDelta.anchor(),
        subject: "a".into(),
        zero_limit: false,
        verdict: o.verdict,
        witness: o.witness,
        extracted: o.extracted,
        trace_of: o.trace_of,
        trace: o.trace,
        notes: o.notes,
    })
}

/// `A in (source, target)` for classical spaces.
pub fn classify_pair(
    a: &TruncatedMatrix,
    source: SpaceTag,
    target: SpaceTag,
    tol: f64,
    window: usize,
) -> Result<ClassVerdict> {
    let reqs = pair_requirements(source, target)?;
    let s = settings(tol, window)?;
    let operand = Operand::new("a", Cow::Borrowed(a));
    run(&operand, Pair { source, target }, a.provenance(), &reqs, s)
}

/// `A in (source, target)` with `source` in `{c0_fhat, c_fhat}`.
pub fn classify_domain_source(
    a: &TruncatedMatrix,
    source: SpaceTag,
    target: SpaceTag,
    tol: f64,
    window: usize,
) -> Result<ClassVerdict> {
    let (pre, reqs) = domain_requirements(source, target)?;
    let s = settings(tol, window)?;
    let (label, matrix) = pre.apply(a);
    let operand = Operand::new(label, matrix);
    run(&operand, Pair { source, target }, a.provenance(), &reqs, s)
}

/// `A in (source, target)` with `target` in `{c0_fhat, c_fhat}`, through
/// `B in (source, underlying target)`.
pub fn classify_into_domain(
    a: &TruncatedMatrix,
    source: SpaceTag,
    target: SpaceTag,
    tol: f64,
    window: usize,
) -> Result<ClassVerdict> {
    let underlying = target
        .underlying()
        .ok_or_else(|| unsupported(source, target))?;
    if !matches!(source, SpaceTag::F | SpaceTag::C | SpaceTag::C0) {
        return Err(unsupported(source, target));
    }
    let reqs = pair_requirements(source, underlying)?;
    let s = settings(tol, window)?;
    let b = build_b_from_a(a);
    let operand = Operand::new("b", Cow::Owned(b));
    let mut verdict = run(&operand, Pair { source, target }, a.provenance(), &reqs, s)?;
    verdict
        .notes
        .push(format!("conditions of ({source}, {underlying}) on b"));
    Ok(verdict)
}

/// Dispatches on the kind of pair.
pub fn classify(
    a: &TruncatedMatrix,
    source: SpaceTag,
    target: SpaceTag,
    tol: f64,
    window: usize,
) -> Result<ClassVerdict> {
    if source.underlying().is_some() {
        classify_domain_source(a, source, target, tol, window)
    } else if target.underlying().is_some() {
        classify_into_domain(a, source, target, tol, window)
    } else {
        classify_pair(a, source, target, tol, window)
    }
}
