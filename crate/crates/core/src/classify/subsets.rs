//! Exhaustive maxima over finite column sets, walked in Gray-code order so
//! each step adds or removes a single column.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bandops::TruncatedMatrix;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest column count searched exhaustively (65535 nonempty subsets).
pub const MAX_SUBSET_COLUMNS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// `sum_n |sum_{k in K} a_nk|`
    RowAbs,
    /// `sup_N |sum_{n in N} sum_{k in K} a_nk|`, i.e. the larger of the
    /// positive and negative parts.
    Block,
}

/// Result of an exhaustive subset search over the first `cap` columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetSup {
    pub cap: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub value: Rational,
    /// A maximizing column set (the first met in Gray-code order).
    pub columns: Vec<usize>,
    /// `G(N)`: the same maximum over rows `0..=N`, one value per row.
    #[serde(serialize_with = "rational::serialize_vec")]
    pub by_rows: Vec<Rational>,
}

/// `max_K sum_n |sum_{k in K} a_nk|` over nonempty `K` within the first
/// `cap` columns.
pub fn subset_sup(a: &TruncatedMatrix, cap: usize) -> Result<SubsetSup> {
    search(a, cap, Mode::RowAbs)
}

/// `max_{N,K} |sum_{n in N} sum_{k in K} a_nk|` over nonempty `K` within the
/// first `cap` columns and all row sets `N`.
pub fn block_subset_sup(a: &TruncatedMatrix, cap: usize) -> Result<SubsetSup> {
    search(a, cap, Mode::Block)
}

fn search(a: &TruncatedMatrix, cap: usize, mode: Mode) -> Result<SubsetSup> {
    if cap == 0 {
        return Err(Error::ZeroParameter("cap"));
    }
    if cap > MAX_SUBSET_COLUMNS {
        return Err(Error::SubsetBoundExceeded {
            requested: cap,
            cap: MAX_SUBSET_COLUMNS,
        });
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::MatrixTooSmall {
            rows: a.rows(),
            cols: a.cols(),
            reason: "subset search needs at least one entry".into(),
        });
    }
    let width = cap.min(a.cols());
    let active: Vec<usize> = (0..a.rows())
        .filter(|&n| a.row(n)[..width].iter().any(|v| !v.is_zero()))
        .collect();

    let denom = active
        .iter()
        .flat_map(|&n| a.row(n)[..width].iter())
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let scaled: Vec<Vec<BigInt>> = active
        .iter()
        .map(|&n| {
            a.row(n)[..width]
                .iter()
                .map(|v| v.numer() * (&denom / v.denom()))
                .collect()
        })
        .collect();

    let total: BigInt = scaled.iter().flatten().map(Signed::abs).sum();
    let small = total
        .to_i128()
        .filter(|t| *t < i128::MAX / 4)
        .and_then(|_| {
            scaled
                .iter()
                .map(|row| {
                    row.iter()
                        .map(ToPrimitive::to_i128)
                        .collect::<Option<Vec<_>>>()
                })
                .collect::<Option<Vec<_>>>()
        });
    let (best, mask, per_active) = match small {
        Some(rows) => {
            let (best, mask, per) = gray_walk(&rows, width, mode);
            (
                BigInt::from(best),
                mask,
                per.into_iter().map(BigInt::from).collect(),
            )
        }
        None => gray_walk(&scaled, width, mode),
    };

    let to_value = |v: &BigInt| Rational::new(v.clone(), denom.clone());
    let mut by_rows = Vec::with_capacity(a.rows());
    let mut current = Rational::zero();
    let mut next_active = active.iter().zip(&per_active).peekable();
    for n in 0..a.rows() {
        if let Some((_, v)) = next_active.next_if(|(&row, _)| row == n) {
            current = to_value(v);
        }
        by_rows.push(current.clone());
    }
    Ok(SubsetSup {
        cap: width,
        value: to_value(&best),
        columns: (0..width).filter(|k| mask >> k & 1 == 1).collect(),
        by_rows,
    })
}

/// Returns the overall max, a maximizing mask, and the running max after
/// each active row.
fn gray_walk<T>(rows: &[Vec<T>], width: usize, mode: Mode) -> (T, u32, Vec<T>)
where
    T: Clone + Ord + Signed + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let mut sums = vec![T::zero(); rows.len()];
    let mut per_row = vec![T::zero(); rows.len()];
    let mut best = T::zero();
    let mut best_mask = 0u32;
    let mut mask = 0u32;
    for step in 1u32..(1u32 << width) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let adding = mask >> bit & 1 == 1;
        for (sum, row) in sums.iter_mut().zip(rows) {
            if adding {
                *sum += &row[bit];
            } else {
                *sum -= &row[bit];
            }
        }
        let mut pos = T::zero();
        let mut neg = T::zero();
        for (i, s) in sums.iter().enumerate() {
            match mode {
                Mode::RowAbs => pos += &s.abs(),
                Mode::Block if s.is_positive() => pos += s,
                Mode::Block => neg -= s,
            }
            let value = if pos >= neg { &pos } else { &neg };
            if *value > per_row[i] {
                per_row[i] = value.clone();
            }
        }
        let total = if pos >= neg { pos } else { neg };
        if total > best {
            best = total;
            best_mask = mask;
        }
    }
    (best, best_mask, per_row)
}
