//! Condition evaluators on truncated matrices.
//!
//! Every condition reduces to one of a few shapes (a supremum of row sums,
//! limits down columns, the limit of row sums, a subset supremum, an f-lim)
//! applied to `A`, to `D`, or to each ladder `(m, k) -> d^(m)_nk`.

use std::borrow::Cow;
use std::cell::OnceCell;

use num_traits::Zero;

use super::report::{ConditionId, ConditionReport, ConditionVerdict, Estimate, Extracted, Witness};
use super::subsets::{block_subset_sup, subset_sup, MAX_SUBSET_COLUMNS};
use crate::bandops::{build_d_from_a, ladder, ConvergenceGrid, SeqPrefix, TruncatedMatrix};
use crate::error::{Error, Result};
use crate::evidence::{limit_test, sup_test, LimitEvidence, SupEvidence};
use crate::rational::{self, Rational};
use crate::spaces::{f_lim_exact, Verdict, MIN_ALMOST_LEN};

/// A condition as required by a class: its id, whether limits are forced to
/// zero, and whether an `A`-condition is to be read on `D` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Requirement {
    pub id: ConditionId,
    pub zero_limit: bool,
    pub on_d: bool,
}

impl Requirement {
    pub const fn new(id: ConditionId) -> Self {
        Self {
            id,
            zero_limit: false,
            on_d: false,
        }
    }

    pub const fn zero(mut self) -> Self {
        self.zero_limit = true;
        self
    }

    pub const fn on_d(mut self) -> Self {
        self.on_d = true;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub tol: f64,
    pub window: usize,
}

/// A matrix under evaluation with its lazily built `D` and ladders.
pub(crate) struct Operand<'a> {
    label: String,
    a: Cow<'a, TruncatedMatrix>,
    d: OnceCell<std::result::Result<(TruncatedMatrix, ConvergenceGrid), Error>>,
    ladders: OnceCell<Vec<TruncatedMatrix>>,
}

impl<'a> Operand<'a> {
    pub fn new(label: impl Into<String>, a: Cow<'a, TruncatedMatrix>) -> Self {
        Self {
            label: label.into(),
            a,
            d: OnceCell::new(),
            ladders: OnceCell::new(),
        }
    }

    fn d(&self, s: Settings) -> Result<&(TruncatedMatrix, ConvergenceGrid)> {
        self.d
            .get_or_init(|| build_d_from_a(&self.a, s.tol, s.window))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn ladders(&self) -> &[TruncatedMatrix] {
        self.ladders
            .get_or_init(|| (0..self.a.rows()).map(|n| ladder(&self.a, n)).collect())
    }

    pub fn evaluate(&self, req: Requirement, s: Settings) -> Result<ConditionReport> {
        use ConditionId::*;
        let zero = req.zero_limit;
        let (subject, outcome) = match req.id {
            C7 | C8 | C12 => {
                let shape = match req.id {
                    C7 => Shape::SupRows,
                    C8 => Shape::Columns { zero: false },
                    _ => Shape::RowSums { zero },
                };
                (self.label.clone(), self.over_ladders(shape, s)?)
            }
            C9 | C10 | C11 | C13 => {
                let shape = match req.id {
                    C9 => Shape::SupRows,
                    C10 => Shape::Columns { zero },
                    C11 => Shape::Subsets { block: true },
                    _ => Shape::RowSums { zero },
                };
                (format!("d from {}", self.label), self.on_d(shape, s)?)
            }
            id if req.on_d => {
                let shape = Shape::for_a(id, zero);
                (format!("d from {}", self.label), self.on_d(shape, s)?)
            }
            id => {
                let shape = Shape::for_a(id, zero);
                (self.label.clone(), shape.run(&self.a, s)?)
            }
        };
        Ok(ConditionReport {
            id: req.id,
            anchor: req.id.anchor(),
            subject,
            zero_limit: zero,
            verdict: outcome.verdict,
            witness: outcome.witness,
            extracted: outcome.extracted,
            trace_of: outcome.trace_of,
            trace: outcome.trace,
            notes: outcome.notes,
        })
    }

    fn on_d(&self, shape: Shape, s: Settings) -> Result<Outcome> {
        let (d, grid) = self.d(s)?;
        let mut outcome = shape.run(d, s)?;
        let unsettled = grid.inconclusive().count();
        if unsettled > 0 {
            outcome.notes.push(format!(
                "{unsettled} entries of d have not settled at truncation"
            ));
            if outcome.verdict == ConditionVerdict::SatisfiedEvidence {
                outcome.verdict = ConditionVerdict::Inconclusive;
                outcome.extracted = None;
            }
        }
        Ok(outcome)
    }

    fn over_ladders(&self, shape: Shape, s: Settings) -> Result<Outcome> {
        let ladders = self.ladders();
        if ladders.is_empty() {
            return Err(too_small(&self.a, "no rows"));
        }
        // Row n of D^(m) moves with m up to m = n, so a ladder needs two
        // windows of columns past its row before its tail says anything.
        let observable = ladders
            .len()
            .min((self.a.cols() + 1).saturating_sub(2 * s.window));
        if observable == 0 {
            let mut o = Outcome::new(ConditionVerdict::Inconclusive, "ladders", Vec::new());
            o.notes.push(format!(
                "no ladder has {} columns beyond its row",
                2 * s.window
            ));
            return Ok(o);
        }
        let mut outcomes = Vec::with_capacity(observable);
        for (n, l) in ladders.iter().enumerate().take(observable) {
            let mut o = shape.run(l, s)?;
            if let Some(w) = &mut o.witness {
                w.ladder = Some(n);
            }
            o.trace_of = format!("ladder {n}: {}", o.trace_of);
            outcomes.push(o);
        }
        let skipped = ladders.len() - observable;
        let pick = outcomes
            .iter()
            .position(|o| o.verdict == ConditionVerdict::Violated)
            .or_else(|| {
                outcomes
                    .iter()
                    .position(|o| o.verdict == ConditionVerdict::Inconclusive)
            });
        let note = (skipped > 0).then(|| {
            format!(
                "ladders of rows {observable}..{} not judged: fewer than {} columns beyond the row",
                ladders.len() - 1,
                2 * s.window
            )
        });
        if let Some(i) = pick {
            let mut o = outcomes.swap_remove(i);
            o.extracted = None;
            o.notes.extend(note);
            return Ok(o);
        }
        let extracted = match shape {
            Shape::SupRows => outcomes
                .iter()
                .enumerate()
                .filter_map(|(n, o)| match &o.extracted {
                    Some(Extracted::Sup { value, row, .. }) => Some((n, value, *row)),
                    _ => None,
                })
                .fold(None::<(usize, &Estimate, usize)>, |best, cur| match best {
                    Some(b) if b.1.exact >= cur.1.exact => Some(b),
                    _ => Some(cur),
                })
                .map(|(n, value, row)| Extracted::Sup {
                    value: value.clone(),
                    row,
                    ladder: Some(n),
                }),
            Shape::RowSums { zero: false } => Some(Extracted::Betas(
                outcomes
                    .iter()
                    .filter_map(|o| match &o.extracted {
                        Some(Extracted::Alpha(a)) => Some(a.clone()),
                        _ => None,
                    })
                    .collect(),
            )),
            _ => None,
        };
        let mut last = outcomes.pop().expect("nonempty");
        last.extracted = extracted;
        last.notes.extend(note);
        Ok(last)
    }
}

fn too_small(a: &TruncatedMatrix, reason: &str) -> Error {
    Error::MatrixTooSmall {
        rows: a.rows(),
        cols: a.cols(),
        reason: reason.into(),
    }
}

fn check_rows(a: &TruncatedMatrix, s: Settings) -> Result<()> {
    if s.window < 2 {
        return Err(Error::WindowOutOfRange {
            window: s.window,
            max: a.rows() / 2,
        });
    }
    if a.rows() < 2 * s.window {
        return Err(too_small(
            a,
            &format!("needs at least {} rows", 2 * s.window),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    SupRows,
    Columns { zero: bool },
    RowSums { zero: bool },
    Subsets { block: bool },
    Delta { zero: bool },
    FColumns { zero: bool },
    FRowSums { zero: bool },
}

impl Shape {
    fn for_a(id: ConditionId, zero: bool) -> Shape {
        use ConditionId::*;
        match id {
            C1 | C7 | C9 => Shape::SupRows,
            C2 => Shape::Columns { zero: true },
            C3 | C8 | C10 => Shape::Columns { zero },
            C4 => Shape::RowSums { zero: true },
            C5 | C12 | C13 => Shape::RowSums { zero },
            C6 => Shape::Subsets { block: false },
            C11 => Shape::Subsets { block: true },
            CDelta => Shape::Delta { zero },
            CF1 => Shape::FColumns { zero },
            CF2 => Shape::FRowSums { zero },
        }
    }

    fn run(self, a: &TruncatedMatrix, s: Settings) -> Result<Outcome> {
        match self {
            Shape::SupRows => sup_rows(a, s),
            Shape::Columns { zero } => column_limits(a, s, zero),
            Shape::RowSums { zero } => row_sum_limit(a, s, zero),
            Shape::Subsets { block } => subsets(a, s, block),
            Shape::Delta { zero } => {
                let alphas = if zero {
                    vec![Rational::zero(); a.cols()]
                } else {
                    last_row(a)
                };
                delta(a, &alphas, s)
            }
            Shape::FColumns { zero } => f_columns(a, s, zero),
            Shape::FRowSums { zero } => f_row_sums(a, s, zero),
        }
    }
}

pub(crate) struct Outcome {
    pub verdict: ConditionVerdict,
    pub witness: Option<Witness>,
    pub extracted: Option<Extracted>,
    pub trace_of: String,
    pub trace: Vec<Rational>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(verdict: ConditionVerdict, trace_of: impl Into<String>, trace: Vec<Rational>) -> Self {
        Self {
            verdict,
            witness: None,
            extracted: None,
            trace_of: trace_of.into(),
            trace,
            notes: Vec::new(),
        }
    }
}

fn last_row(a: &TruncatedMatrix) -> Vec<Rational> {
    match a.rows() {
        0 => vec![Rational::zero(); a.cols()],
        r => a.row(r - 1).to_vec(),
    }
}

fn running_max(values: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let next = match out.last() {
            Some(m) if m >= v => Rational::clone(m),
            _ => v.clone(),
        };
        out.push(next);
    }
    out
}

fn witness(row: usize, column: Option<usize>, value: &Rational) -> Option<Witness> {
    Some(Witness {
        row,
        column,
        ladder: None,
        value: value.clone(),
    })
}

/// Classification of one tail that should converge (to zero when `zero`).
enum Tail {
    Limit(Rational),
    Violated(usize, Rational),
    Undecided,
}

fn judge_limit(values: &[Rational], s: Settings, zero: bool) -> Tail {
    let test = limit_test(values, s.tol, s.window);
    match test.evidence {
        LimitEvidence::Converges => {
            let limit = test.limit().clone();
            if zero && rational::to_f64(&limit).abs() >= s.tol {
                Tail::Violated(values.len() - 1, limit)
            } else {
                Tail::Limit(limit)
            }
        }
        LimitEvidence::Diverges { witness } => Tail::Violated(witness, values[witness].clone()),
        LimitEvidence::Undecided => Tail::Undecided,
    }
}

fn sup_rows(a: &TruncatedMatrix, s: Settings) -> Result<Outcome> {
    check_rows(a, s)?;
    let sums = a.row_abs_sums();
    let test = sup_test(&sums, s.tol, s.window);
    let mut o = Outcome::new(
        ConditionVerdict::Inconclusive,
        "running max of sum_k |entry|",
        running_max(&sums),
    );
    match test.evidence {
        SupEvidence::Bounded => {
            o.verdict = ConditionVerdict::SatisfiedEvidence;
            o.extracted = Some(Extracted::Sup {
                value: Estimate::new(test.sup),
                row: test.argmax,
                ladder: None,
            });
        }
        SupEvidence::Unbounded { witness: w } => {
            o.verdict = ConditionVerdict::Violated;
            o.witness = witness(w, None, &sums[w]);
        }
        SupEvidence::Undecided => {}
    }
    Ok(o)
}

/// Columns `k` whose every nonzero can be seen before the last two windows
/// are the ones a tail test can judge: `k + 2 window <= rows`.
fn observable_columns(a: &TruncatedMatrix, s: Settings) -> Result<usize> {
    check_rows(a, s)?;
    let count = (a.rows() + 1 - 2 * s.window).min(a.cols());
    if count == 0 {
        return Err(too_small(a, "no column can be judged"));
    }
    Ok(count)
}

fn column_limits(a: &TruncatedMatrix, s: Settings, zero: bool) -> Result<Outcome> {
    let count = observable_columns(a, s)?;
    let mut undecided = None;
    let mut last_column = Vec::new();
    for k in 0..count {
        let column = a.column(k);
        match judge_limit(&column, s, zero) {
            Tail::Limit(_) => last_column = column,
            Tail::Violated(row, value) => {
                let mut o = Outcome::new(ConditionVerdict::Violated, format!("column {k}"), column);
                o.witness = witness(row, Some(k), &value);
                return Ok(o);
            }
            Tail::Undecided => {
                undecided.get_or_insert((k, column));
            }
        }
    }
    let mut o = if let Some((k, column)) = undecided {
        Outcome::new(
            ConditionVerdict::Inconclusive,
            format!("column {k}"),
            column,
        )
    } else {
        let mut o = Outcome::new(
            ConditionVerdict::SatisfiedEvidence,
            format!("column {}", count - 1),
            last_column,
        );
        if !zero {
            o.extracted = Some(Extracted::Alphas(
                last_row(a).into_iter().map(Estimate::new).collect(),
            ));
        }
        o
    };
    if count < a.cols() {
        o.notes
            .push(format!("columns 0..={} of {} tested", count - 1, a.cols()));
    }
    Ok(o)
}

fn row_sum_limit(a: &TruncatedMatrix, s: Settings, zero: bool) -> Result<Outcome> {
    check_rows(a, s)?;
    let sums = a.row_sums();
    Ok(limit_outcome(sums, "sum_k entry", s, zero))
}

fn limit_outcome(values: Vec<Rational>, label: &str, s: Settings, zero: bool) -> Outcome {
    match judge_limit(&values, s, zero) {
        Tail::Limit(limit) => {
            let mut o = Outcome::new(ConditionVerdict::SatisfiedEvidence, label, values);
            if !zero {
                o.extracted = Some(Extracted::Alpha(Estimate::new(limit)));
            }
            o
        }
        Tail::Violated(row, value) => {
            let mut o = Outcome::new(ConditionVerdict::Violated, label, values);
            o.witness = witness(row, None, &value);
            o
        }
        Tail::Undecided => Outcome::new(ConditionVerdict::Inconclusive, label, values),
    }
}

fn subsets(a: &TruncatedMatrix, s: Settings, block: bool) -> Result<Outcome> {
    check_rows(a, s)?;
    let cap = a.cols().min(MAX_SUBSET_COLUMNS);
    if cap == 0 {
        return Err(too_small(a, "no columns"));
    }
    let sup = if block {
        block_subset_sup(a, cap)?
    } else {
        subset_sup(a, cap)?
    };
    let label = if block {
        "max over K of sup_N |sum_{n in N, n<=row} sum_{k in K} entry|"
    } else {
        "max over K of sum_{n<=row} |sum_{k in K} entry|"
    };
    let mut o = Outcome::new(ConditionVerdict::Inconclusive, label, sup.by_rows.clone());
    match judge_limit(&sup.by_rows, s, false) {
        Tail::Limit(_) => {
            o.verdict = ConditionVerdict::SatisfiedEvidence;
            o.extracted = Some(Extracted::SubsetSup {
                value: Estimate::new(sup.value),
                columns: sup.columns,
                cap,
            });
        }
        Tail::Violated(row, value) => {
            o.verdict = ConditionVerdict::Violated;
            o.witness = witness(row, None, &value);
        }
        Tail::Undecided => {}
    }
    if cap < a.cols() {
        o.notes.push(format!(
            "subsets of the first {cap} of {} columns",
            a.cols()
        ));
    }
    Ok(o)
}

/// `sum_{k=0}^{cols-2} [(a_nk - alpha_k) - (a_n,k+1 - alpha_k+1)]` per row,
/// tested against zero.
pub(crate) fn delta(a: &TruncatedMatrix, alphas: &[Rational], s: Settings) -> Result<Outcome> {
    if alphas.len() < a.cols() {
        return Err(Error::LengthMismatch {
            expected: a.cols(),
            got: alphas.len(),
        });
    }
    check_rows(a, s)?;
    if a.cols() < 2 {
        return Err(too_small(a, "needs two columns"));
    }
    let values: Vec<Rational> = (0..a.rows())
        .map(|n| {
            let row = a.row(n);
            (0..a.cols() - 1).fold(Rational::zero(), |acc, k| {
                acc + (&row[k] - &alphas[k]) - (&row[k + 1] - &alphas[k + 1])
            })
        })
        .collect();
    Ok(limit_outcome(
        values,
        "sum_k delta(entry - alpha_k)",
        s,
        true,
    ))
}

fn f_columns(a: &TruncatedMatrix, s: Settings, zero: bool) -> Result<Outcome> {
    if a.rows() < MIN_ALMOST_LEN {
        return Err(too_small(a, &format!("f-lim needs {MIN_ALMOST_LEN} rows")));
    }
    let count = observable_columns(a, s)?;
    let mut undecided = None;
    let mut alphas = Vec::with_capacity(count);
    let mut last_column = Vec::new();
    for k in 0..count {
        let column = a.column(k);
        let (verdict, limit, _) = f_lim_exact(&SeqPrefix::new(column.clone()), s.tol, zero)?;
        match verdict {
            Verdict::MemberEvidence => {
                alphas.push(Estimate::new(limit));
                last_column = column;
            }
            Verdict::NonMemberEvidence => {
                let mut o = Outcome::new(ConditionVerdict::Violated, format!("column {k}"), column);
                o.witness = witness(a.rows() - 1, Some(k), &limit);
                o.notes.push("witness value is the average t_{m,0}".into());
                return Ok(o);
            }
            Verdict::Inconclusive => {
                undecided.get_or_insert((k, column));
            }
        }
    }
    let mut o = match undecided {
        Some((k, column)) => Outcome::new(
            ConditionVerdict::Inconclusive,
            format!("column {k}"),
            column,
        ),
        None => {
            let mut o = Outcome::new(
                ConditionVerdict::SatisfiedEvidence,
                format!("column {}", count - 1),
                last_column,
            );
            if !zero {
                o.extracted = Some(Extracted::Alphas(alphas));
            }
            o
        }
    };
    if count < a.cols() {
        o.notes
            .push(format!("columns 0..={} of {} tested", count - 1, a.cols()));
    }
    Ok(o)
}

fn f_row_sums(a: &TruncatedMatrix, s: Settings, zero: bool) -> Result<Outcome> {
    if a.rows() < MIN_ALMOST_LEN {
        return Err(too_small(a, &format!("f-lim needs {MIN_ALMOST_LEN} rows")));
    }
    let sums = a.row_sums();
    let (verdict, limit, _) = f_lim_exact(&SeqPrefix::new(sums.clone()), s.tol, zero)?;
    let label = "sum_k entry";
    Ok(match verdict {
        Verdict::MemberEvidence => {
            let mut o = Outcome::new(ConditionVerdict::SatisfiedEvidence, label, sums);
            if !zero {
                o.extracted = Some(Extracted::Alpha(Estimate::new(limit)));
            }
            o
        }
        Verdict::NonMemberEvidence => {
            let row = a.rows() - 1;
            let mut o = Outcome::new(ConditionVerdict::Violated, label, sums);
            o.witness = witness(row, None, &limit);
            o.notes.push("witness value is the average t_{m,0}".into());
            o
        }
        Verdict::Inconclusive => Outcome::new(ConditionVerdict::Inconclusive, label, sums),
    })
}
