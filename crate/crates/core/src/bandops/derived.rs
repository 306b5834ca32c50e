//! Matrices derived from a corner `A` (or a sequence `a`) through the
//! inverse weights `f_{j+1}^2 / (f_k f_{k+1})`.
//!
//! All of them share the factorization `w_k * (P_m - P_{k-1})`, where
//! `w_k = 1/(f_k f_{k+1})` and `P` is the prefix sum of `f_{j+1}^2 a_j`.

use num_traits::Zero;
use serde::Serialize;

use super::{column_weight, row_weight, SeqPrefix, TruncatedMatrix};
use crate::error::{Error, Result};
use crate::evidence::spread;
use crate::fibcore::fib;
use crate::rational::{self, Rational};

/// `P_m = sum_{j<=m} f_{j+1}^2 a_j` for `m = 0..len`, with a leading `P_{-1} = 0`.
fn weighted_prefix(row: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(row.len() + 1);
    let mut acc = Rational::zero();
    out.push(acc.clone());
    for (j, a) in row.iter().enumerate() {
        if !a.is_zero() {
            acc += row_weight(j) * a;
        }
        out.push(acc.clone());
    }
    out
}

/// `b_nk = -(f_{n+1}/f_n) a_{n-1,k} + (f_n/f_{n+1}) a_nk`; row 0 is `a_0k`.
pub fn build_b_from_a(a: &TruncatedMatrix) -> TruncatedMatrix {
    let rows = a.rows();
    let cols = a.cols();
    let mut out = TruncatedMatrix::zeros(rows, cols);
    for n in 0..rows {
        let diag = Rational::new(fib(n), fib(n + 1));
        let sub = (n > 0).then(|| -Rational::new(fib(n + 1), fib(n)));
        for k in 0..cols {
            let mut v = &diag * a.get(n, k);
            if let Some(sub) = &sub {
                let above = a.get(n - 1, k);
                if !above.is_zero() {
                    v += sub * above;
                }
            }
            out.set(n, k, v);
        }
    }
    out.with_provenance(format!("b_from({})", a.provenance()))
}

/// `d^(m)_nk = sum_{j=k}^m f_{j+1}^2/(f_k f_{k+1}) a_nj` for `k <= m`, zero after.
pub fn build_dm_from_a(a: &TruncatedMatrix, m: usize) -> Result<TruncatedMatrix> {
    if m >= a.cols() {
        return Err(Error::IndexOutOfRange {
            index: m,
            bound: a.cols(),
        });
    }
    let mut out = TruncatedMatrix::zeros(a.rows(), a.cols());
    for n in 0..a.rows() {
        let prefix = weighted_prefix(a.row(n));
        for k in 0..=m {
            let inner = &prefix[m + 1] - &prefix[k];
            if !inner.is_zero() {
                out.set(n, k, column_weight(k) * inner);
            }
        }
    }
    Ok(out.with_provenance(format!("dm_from({}, m={m})", a.provenance())))
}

/// Ladder of row `n`: entry `(m, k)` is `d^(m)_nk`, a `cols x cols` lower triangle.
pub fn ladder(a: &TruncatedMatrix, n: usize) -> TruncatedMatrix {
    let cols = a.cols();
    let prefix = weighted_prefix(a.row(n));
    let mut out = TruncatedMatrix::zeros(cols, cols);
    for k in 0..cols {
        let weight = column_weight(k);
        for m in k..cols {
            let inner = &prefix[m + 1] - &prefix[k];
            if !inner.is_zero() {
                out.set(m, k, &weight * inner);
            }
        }
    }
    out.with_provenance(format!("ladder({}, n={n})", a.provenance()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceFlag {
    Converged,
    InconclusiveAtTruncation,
}

/// Per-entry convergence flags of a series corner.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceGrid {
    rows: usize,
    cols: usize,
    flags: Vec<ConvergenceFlag>,
}

impl ConvergenceGrid {
    pub fn get(&self, n: usize, k: usize) -> ConvergenceFlag {
        self.flags[n * self.cols + k]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn all_converged(&self) -> bool {
        self.flags.iter().all(|f| *f == ConvergenceFlag::Converged)
    }

    /// Entries flagged inconclusive, in row-major order.
    pub fn inconclusive(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == ConvergenceFlag::InconclusiveAtTruncation)
            .map(move |(i, _)| (i / self.cols, i % self.cols))
    }
}

/// Truncated `d_nk = sum_{j>=k} f_{j+1}^2/(f_k f_{k+1}) a_nj`, summed over the
/// available columns.
///
/// An entry is flagged converged when its last `window` partial sums
/// (counting the empty sum) spread less than `tol`.
pub fn build_d_from_a(
    a: &TruncatedMatrix,
    tol: f64,
    window: usize,
) -> Result<(TruncatedMatrix, ConvergenceGrid)> {
    let cols = a.cols();
    if window < 2 || window > cols {
        return Err(Error::WindowOutOfRange { window, max: cols });
    }
    let mut out = TruncatedMatrix::zeros(a.rows(), cols);
    let mut flags = Vec::with_capacity(a.rows() * cols);
    for n in 0..a.rows() {
        let prefix = weighted_prefix(a.row(n));
        let total = &prefix[cols];
        for k in 0..cols {
            let weight = column_weight(k);
            let inner = total - &prefix[k];
            // partial sums for m = k-1 ..= cols-1 are weight * (prefix[m+1] - prefix[k])
            let first = (cols + 1 - window).max(k);
            let osc = spread(&prefix[first..=cols]) * &weight;
            flags.push(if rational::to_f64(&osc) < tol {
                ConvergenceFlag::Converged
            } else {
                ConvergenceFlag::InconclusiveAtTruncation
            });
            if !inner.is_zero() {
                out.set(n, k, weight * inner);
            }
        }
    }
    let grid = ConvergenceGrid {
        rows: a.rows(),
        cols,
        flags,
    };
    Ok((
        out.with_provenance(format!("d_from({})", a.provenance())),
        grid,
    ))
}

/// `c_nk = sum_{j=k}^n a_j f_{j+1}^2/(f_k f_{k+1})` for `k <= n`, zero after.
pub fn build_c_from_a(a: &SeqPrefix) -> TruncatedMatrix {
    let len = a.len();
    let prefix = weighted_prefix(a.terms());
    let mut out = TruncatedMatrix::zeros(len, len);
    for k in 0..len {
        let weight = column_weight(k);
        for n in k..len {
            let inner = &prefix[n + 1] - &prefix[k];
            if !inner.is_zero() {
                out.set(n, k, &weight * inner);
            }
        }
    }
    out.with_provenance("c_from(sequence)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandops::{inverse_entry, BandMatrixSpec};
    use crate::fibcore::fib_q;
    use crate::rational::{int, ratio};

    /// `f_{j+1}^2 / (f_k f_{k+1})` straight from the Fibonacci numbers.
    fn weight(j: usize, k: usize) -> Rational {
        fib_q(j + 1) * fib_q(j + 1) / (fib_q(k) * fib_q(k + 1))
    }

    #[test]
    fn b_of_identity_is_fhat_corner() {
        let b = build_b_from_a(&TruncatedMatrix::identity(3, 3));
        assert_eq!(b.get(0, 0), &int(1));
        assert_eq!(b.get(1, 0), &int(-2));
        assert_eq!(b.get(1, 1), &ratio(1, 2));
        let fhat = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 3, 3);
        assert_eq!(b.to_rows(), fhat.to_rows());
        assert!(build_b_from_a(&TruncatedMatrix::zeros(4, 4)).is_zero());
    }

    #[test]
    fn dm_matches_direct_sum() {
        let a = TruncatedMatrix::from_fn(4, 6, |n, k| ratio((n * 7 + k * 3) as i64 % 5 - 2, 3));
        for m in 0..6 {
            let d = build_dm_from_a(&a, m).unwrap();
            for n in 0..4 {
                for k in 0..6 {
                    let direct = if k <= m {
                        (k..=m).fold(int(0), |acc, j| acc + weight(j, k) * a.get(n, j))
                    } else {
                        int(0)
                    };
                    assert_eq!(d.get(n, k), &direct, "m={m} n={n} k={k}");
                }
            }
        }
        let d0 = build_dm_from_a(&TruncatedMatrix::identity(3, 3), 0).unwrap();
        assert_eq!(d0.get(0, 0), &int(1));
        assert!(build_dm_from_a(&TruncatedMatrix::zeros(3, 3), 2)
            .unwrap()
            .is_zero());
        assert!(matches!(
            build_dm_from_a(&a, 6),
            Err(Error::IndexOutOfRange { index: 6, bound: 6 })
        ));
    }

    #[test]
    fn ladder_rows_are_dm_rows() {
        let a =
            TruncatedMatrix::from_fn(3, 7, |n, k| ratio((n + 2 * k) as i64 - 4, (k + 1) as i64));
        for n in 0..3 {
            let l = ladder(&a, n);
            for m in 0..7 {
                let dm = build_dm_from_a(&a, m).unwrap();
                assert_eq!(l.row(m), dm.row(n));
            }
        }
    }

    #[test]
    fn d_of_telescoping_row_is_exact_and_converged() {
        // a_nj = 2^-j / f_{j+1}^2, so d_nk = (2^{1-k} - 2^{1-cols}) / (f_k f_{k+1}).
        let cols = 64;
        let a = TruncatedMatrix::from_fn(3, cols, |_, j| {
            num_traits::pow(ratio(1, 2), j) / (fib_q(j + 1) * fib_q(j + 1))
        });
        let (d, flags) = build_d_from_a(&a, 1e-8, 8).unwrap();
        for n in 0..3 {
            for k in 0..cols {
                let expected = (num_traits::pow(ratio(1, 2), k) * int(2)
                    - num_traits::pow(ratio(1, 2), cols) * int(2))
                    / (fib_q(k) * fib_q(k + 1));
                assert_eq!(d.get(n, k), &expected);
            }
        }
        assert!(flags.all_converged());
    }

    #[test]
    fn d_of_zero_and_identity() {
        let (d, flags) = build_d_from_a(&TruncatedMatrix::zeros(4, 8), 1e-8, 4).unwrap();
        assert!(d.is_zero() && flags.all_converged());

        let (d, flags) = build_d_from_a(&TruncatedMatrix::identity(8, 16), 1e-8, 8).unwrap();
        for n in 0..8 {
            for k in 0..16 {
                assert_eq!(d.get(n, k), &inverse_entry(n, k));
            }
        }
        assert!(flags.all_converged());

        // a nonzero in the last window columns cannot be told apart from a
        // series still moving
        let (_, flags) = build_d_from_a(&TruncatedMatrix::identity(16, 16), 1e-8, 8).unwrap();
        assert_eq!(flags.get(15, 0), ConvergenceFlag::InconclusiveAtTruncation);
        assert_eq!(flags.get(3, 0), ConvergenceFlag::Converged);
    }

    #[test]
    fn d_rejects_bad_window() {
        let a = TruncatedMatrix::zeros(2, 4);
        assert!(build_d_from_a(&a, 1e-8, 1).is_err());
        assert!(build_d_from_a(&a, 1e-8, 5).is_err());
    }

    #[test]
    fn c_from_unit_sequences() {
        let c = build_c_from_a(&SeqPrefix::unit(0, 5));
        for n in 0..5 {
            assert_eq!(c.get(n, 0), &int(1));
            for k in 1..5 {
                assert_eq!(c.get(n, k), &int(0));
            }
        }
        let c = build_c_from_a(&SeqPrefix::unit(1, 5));
        assert_eq!(c.get(0, 0), &int(0));
        for n in 1..5 {
            assert_eq!(c.get(n, 0), &int(4));
            assert_eq!(c.get(n, 1), &int(2));
            assert_eq!(c.get(n, 2), &int(0));
        }
        assert!(build_c_from_a(&SeqPrefix::zeros(6)).is_zero());
    }
}
