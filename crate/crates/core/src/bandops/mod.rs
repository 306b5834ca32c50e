//! Band and triangle matrices: the Fibonacci difference matrix, its
//! inverse, the classical difference matrices, and the derived matrices
//! used to reduce matrix classes on the domain spaces to classical ones.

mod derived;
mod prefix;
mod spec;
mod truncated;

pub use derived::{
    build_b_from_a, build_c_from_a, build_d_from_a, build_dm_from_a, ladder, ConvergenceFlag,
    ConvergenceGrid,
};
pub use prefix::SeqPrefix;
pub use spec::{fhat_entry, inverse_entry, BandMatrixSpec, CustomMatrix, Support};
pub use truncated::TruncatedMatrix;

pub(crate) use spec::{column_weight, row_weight};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `(A_0(x), ..., A_{M-1}(x))` for every row whose support lies inside the
/// prefix.
pub fn apply(spec: &BandMatrixSpec, x: &SeqPrefix) -> Result<SeqPrefix> {
    if x.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    if matches!(spec, BandMatrixSpec::FhatInverse) {
        return apply_fhat_inverse(x);
    }
    let out_len = spec.support().output_len(x.len());
    if out_len == 0 {
        return Err(Error::PrefixTooShort {
            len: x.len(),
            needed: x.len() + 1,
        });
    }
    let terms = (0..out_len)
        .map(|n| {
            spec.row_columns(n)
                .filter(|&k| !x[k].is_zero())
                .fold(Rational::zero(), |acc, k| acc + spec.entry(n, k) * &x[k])
        })
        .collect();
    Ok(SeqPrefix::new(terms))
}

/// `x_k = sum_{j<=k} f_{k+1}^2 / (f_j f_{j+1}) y_j`, in one pass.
pub fn apply_fhat_inverse(y: &SeqPrefix) -> Result<SeqPrefix> {
    if y.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    let mut running = Rational::zero();
    let terms = y
        .iter()
        .enumerate()
        .map(|(k, yk)| {
            if !yk.is_zero() {
                running += column_weight(k) * yk;
            }
            row_weight(k) * &running
        })
        .collect();
    Ok(SeqPrefix::new(terms))
}

/// Whether the inverse undoes the transform term by term.
pub fn roundtrip_check(x: &SeqPrefix) -> bool {
    if x.is_empty() {
        return true;
    }
    apply(&BandMatrixSpec::Fhat, x)
        .and_then(|y| apply_fhat_inverse(&y))
        .map(|back| back.terms() == x.terms())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibcore::{fib_q, fib_ratio};
    use crate::rational::{int, ratio};

    fn ones(len: usize) -> SeqPrefix {
        SeqPrefix::from_fn(len, |_| int(1))
    }

    #[test]
    fn fhat_of_ones() {
        let y = apply(&BandMatrixSpec::Fhat, &ones(4)).unwrap();
        // y_1 = 1/2 - 2, y_2 = 2/3 - 3/2, y_3 = 3/5 - 5/3
        assert_eq!(
            y.terms(),
            &[int(1), ratio(-3, 2), ratio(-5, 6), ratio(-16, 15)]
        );
    }

    #[test]
    fn fhat_of_fib_squares_is_first_unit() {
        let x = SeqPrefix::from_fn(50, |k| fib_q(k + 1) * fib_q(k + 1));
        assert_eq!(
            apply(&BandMatrixSpec::Fhat, &x).unwrap(),
            SeqPrefix::unit(0, 50)
        );
    }

    #[test]
    fn fhat_of_ratio_sum_is_fib_ratio() {
        let x = SeqPrefix::from_fn(50, |k| {
            (0..=k).fold(int(0), |acc, j| {
                acc + fib_q(k + 1) * fib_q(k + 1) / (fib_q(j) * fib_q(j))
            })
        });
        let y = apply(&BandMatrixSpec::Fhat, &x).unwrap();
        for k in 0..50 {
            assert_eq!(y[k], fib_ratio(k));
        }
    }

    #[test]
    fn inverse_matches_double_loop() {
        let y = ones(3);
        let fast = apply_fhat_inverse(&y).unwrap();
        let slow = SeqPrefix::from_fn(3, |k| {
            (0..=k).fold(int(0), |acc, j| acc + inverse_entry(k, j) * &y[j])
        });
        assert_eq!(fast, slow);
        assert_eq!(fast.terms(), &[int(1), int(6), int(15)]);
    }

    #[test]
    fn inverse_of_first_unit_is_fib_squares() {
        let x = apply_fhat_inverse(&SeqPrefix::unit(0, 20)).unwrap();
        for k in 0..20 {
            assert_eq!(x[k], fib_q(k + 1) * fib_q(k + 1));
        }
        assert!(apply_fhat_inverse(&SeqPrefix::zeros(7)).unwrap().is_zero());
    }

    #[test]
    fn empty_prefix_rejected() {
        assert_eq!(
            apply(&BandMatrixSpec::Fhat, &SeqPrefix::default()).unwrap_err(),
            Error::EmptyPrefix
        );
        assert_eq!(
            apply_fhat_inverse(&SeqPrefix::default()).unwrap_err(),
            Error::EmptyPrefix
        );
    }

    #[test]
    fn forward_difference_loses_one_term() {
        let x = SeqPrefix::new(vec![int(1), int(4), int(9)]);
        let y = apply(&BandMatrixSpec::DeltaForward, &x).unwrap();
        assert_eq!(y.terms(), &[int(-3), int(-5)]);
        assert!(apply(&BandMatrixSpec::DeltaForward, &SeqPrefix::zeros(1)).is_err());
        let d = apply(&BandMatrixSpec::Delta, &x).unwrap();
        assert_eq!(d.terms(), &[int(1), int(3), int(5)]);
    }

    #[test]
    fn roundtrip_examples() {
        assert!(roundtrip_check(&SeqPrefix::new(vec![
            int(1),
            int(2),
            int(3)
        ])));
        assert!(roundtrip_check(&SeqPrefix::zeros(10)));
    }

    #[test]
    fn triangle_structure() {
        for n in 0..30 {
            for k in 0..30 {
                if k > n || k + 1 < n {
                    assert!(fhat_entry(n, k).is_zero());
                }
                if k > n {
                    assert!(inverse_entry(n, k).is_zero());
                }
            }
        }
    }
}
