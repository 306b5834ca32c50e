//! Truncation tests shared by the membership and condition evaluators.
//!
//! Every test looks at the tail of a finite list of exact values and
//! returns evidence, never proof. Oscillations are computed exactly and
//! projected to `f64` only for the comparison against `tol`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Average per-step growth factor that flags a tail as unbounded.
pub const GROWTH_FACTOR: (i64, i64) = (3, 2);

/// Ratio `max / max(first half)` that flags a late spike as unbounded.
pub const SPIKE_FACTOR: (i64, i64) = (3, 2);

pub(crate) fn check_window(len: usize, window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::WindowOutOfRange {
            window,
            max: len / 2,
        });
    }
    if len < 2 * window {
        return Err(Error::PrefixTooShort {
            len,
            needed: 2 * window,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailStats {
    /// `max - min` over the last `window` values.
    pub oscillation: f64,
    /// Same over the `window` values before those.
    pub previous_oscillation: f64,
    pub last: Rational,
    pub growing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitEvidence {
    Converges,
    Diverges { witness: usize },
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitTest {
    pub evidence: LimitEvidence,
    pub stats: TailStats,
}

impl LimitTest {
    pub fn limit(&self) -> &Rational {
        &self.stats.last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupEvidence {
    Bounded,
    Unbounded { witness: usize },
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupTest {
    pub evidence: SupEvidence,
    pub sup: Rational,
    pub argmax: usize,
}

/// Exact `max - min` of a nonempty slice.
pub fn spread(values: &[Rational]) -> Rational {
    let (lo, hi) = min_max(values);
    hi - lo
}

fn min_max(values: &[Rational]) -> (Rational, Rational) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if v < &lo {
            lo = v.clone();
        }
        if v > &hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

fn argmax(values: &[Rational]) -> (usize, Rational) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v > &values[best] {
            best = i;
        }
    }
    (best, values[best].clone())
}

/// Strictly increasing absolute values over the final window whose
/// average per-step factor is at least 3/2.
pub fn grows_geometrically(values: &[Rational], window: usize) -> bool {
    if window < 2 || values.len() < window {
        return false;
    }
    let tail: Vec<Rational> = values[values.len() - window..]
        .iter()
        .map(Signed::abs)
        .collect();
    if tail[0].is_zero() || tail.windows(2).any(|w| w[1] <= w[0]) {
        return false;
    }
    let factor = rational::ratio(GROWTH_FACTOR.0, GROWTH_FACTOR.1);
    let needed = num_traits::pow(factor, window - 1) * &tail[0];
    tail[window - 1] >= needed
}

pub fn tail_stats(values: &[Rational], window: usize) -> TailStats {
    let len = values.len();
    debug_assert!(len >= 2 * window && window >= 2);
    let last_window = &values[len - window..];
    let prev_window = &values[len - 2 * window..len - window];
    TailStats {
        oscillation: rational::to_f64(&spread(last_window)),
        previous_oscillation: rational::to_f64(&spread(prev_window)),
        last: values[len - 1].clone(),
        growing: grows_geometrically(values, window),
    }
}

/// Tail Cauchy test.
///
/// Converges when the last `window` values spread less than `tol`. Diverges
/// when the tail grows geometrically, or when it spreads at least `tol` and
/// no less than the window before it. Anything else is undecided.
pub fn limit_test(values: &[Rational], tol: f64, window: usize) -> LimitTest {
    let stats = tail_stats(values, window);
    let len = values.len();
    let evidence = if stats.growing {
        LimitEvidence::Diverges { witness: len - 1 }
    } else if stats.oscillation < tol {
        LimitEvidence::Converges
    } else if stats.oscillation >= stats.previous_oscillation {
        let start = len - window;
        let witness = values[start..]
            .iter()
            .enumerate()
            .max_by(|a, b| {
                (a.1 - &stats.last)
                    .abs()
                    .cmp(&(b.1 - &stats.last).abs())
                    .then(b.0.cmp(&a.0))
            })
            .map(|(i, _)| start + i)
            .unwrap_or(len - 1);
        LimitEvidence::Diverges { witness }
    } else {
        LimitEvidence::Undecided
    };
    LimitTest { evidence, stats }
}

/// Running-max plateau test for `sup < inf` on nonnegative values.
///
/// Bounded when nothing in the last `window` values exceeds the earlier max
/// by `tol` or more. Unbounded when the tail grows geometrically, or when
/// the max sits in the last window at 3/2 or more of the first half's max
/// and the values are still rising over the last half window.
pub fn sup_test(values: &[Rational], tol: f64, window: usize) -> SupTest {
    let len = values.len();
    debug_assert!(len >= 2 * window && window >= 2);
    let (argmax, sup) = argmax(values);
    let split = len - window;
    let (_, earlier) = self::argmax(&values[..split]);
    let (_, tail) = self::argmax(&values[split..]);
    let evidence = if grows_geometrically(values, window) {
        SupEvidence::Unbounded { witness: argmax }
    } else if tail <= earlier.clone() + rational::from_f64(tol) {
        SupEvidence::Bounded
    } else {
        let (_, first_half) = self::argmax(&values[..len / 2]);
        let spike = rational::ratio(SPIKE_FACTOR.0, SPIKE_FACTOR.1) * first_half;
        let still_rising = values[len - 1] > values[len - 1 - window / 2];
        if tail >= spike && still_rising {
            SupEvidence::Unbounded { witness: argmax }
        } else {
            SupEvidence::Undecided
        }
    };
    SupTest {
        evidence,
        sup,
        argmax,
    }
}
