//! Almost convergence through the averages
//! `t_mn(x) = (x_n + ... + x_{n+m}) / (m + 1)`, which must tend to the
//! generalized limit as `m` grows, uniformly in `n`.

use num_traits::{Signed, Zero};

use super::{MembershipVerdict, Verdict};
use crate::bandops::SeqPrefix;
use crate::error::{Error, Result};
use crate::evidence::{grows_geometrically, limit_test, spread, LimitEvidence};
use crate::rational::{self, Rational};

/// Shortest prefix accepted by [`f_lim_estimate`].
pub const MIN_ALMOST_LEN: usize = 16;

const GROWTH_WINDOW: usize = 8;

/// `grid[m][n] = t_mn(x)` for `0 <= m <= m_max`, `0 <= n <= n_max`.
///
/// Needs `x_{m_max + n_max}`, so `m_max + n_max < x.len()`.
pub fn t_matrix(x: &SeqPrefix, m_max: usize, n_max: usize) -> Result<Vec<Vec<Rational>>> {
    let needed = m_max + n_max + 1;
    if x.len() < needed {
        return Err(Error::PrefixTooShort {
            len: x.len(),
            needed,
        });
    }
    let sums = prefix_sums(x);
    Ok((0..=m_max)
        .map(|m| (0..=n_max).map(|n| average(&sums, m, n)).collect())
        .collect())
}

fn prefix_sums(x: &SeqPrefix) -> Vec<Rational> {
    let mut sums = Vec::with_capacity(x.len() + 1);
    let mut acc = Rational::zero();
    sums.push(acc.clone());
    for t in x {
        acc += t;
        sums.push(acc.clone());
    }
    sums
}

fn average(sums: &[Rational], m: usize, n: usize) -> Rational {
    (&sums[n + m + 1] - &sums[n]) / Rational::from_integer((m + 1).into())
}

/// Measurements of the averages at the largest usable `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostScan {
    /// Largest `m` used; every `n` in `0..n_count` is available at this `m`.
    pub m: usize,
    pub n_count: usize,
    /// `max_n |t_{m,n} - t_{m-1,n}|`.
    pub step: Rational,
    /// `max_n t_{m,n} - min_n t_{m,n}`.
    pub spread: Rational,
    /// Spread at `m / 2` over the same `n`.
    pub half_spread: Rational,
    /// `t_{m,0}`.
    pub limit: Rational,
}

/// Scans `n` over the first quarter of the prefix and `m` over the rest.
pub fn almost_scan(x: &SeqPrefix) -> Result<AlmostScan> {
    if x.len() < MIN_ALMOST_LEN {
        return Err(Error::PrefixTooShort {
            len: x.len(),
            needed: MIN_ALMOST_LEN,
        });
    }
    let sums = prefix_sums(x);
    let n_count = x.len() / 4;
    let m = x.len() - n_count;
    let row = |m: usize| -> Vec<Rational> { (0..n_count).map(|n| average(&sums, m, n)).collect() };
    let top = row(m);
    let below = row(m - 1);
    let step = top
        .iter()
        .zip(&below)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(AlmostScan {
        m,
        n_count,
        step,
        spread: spread(&top),
        half_spread: spread(&row(m / 2)),
        limit: top[0].clone(),
    })
}

/// Lorentz-criterion evidence for `x` in `f`.
///
/// Member evidence when the tail converges outright, or when both the step
/// in `m` and the spread across `n` at the largest `m` fall below `tol`. Non-member evidence when the terms
/// grow geometrically or the spread has not shrunk since `m / 2`.
pub fn f_lim_estimate(x: &SeqPrefix, tol: f64) -> Result<MembershipVerdict> {
    f_lim_verdict(x, tol, false)
}

pub(crate) fn f_lim_verdict(
    x: &SeqPrefix,
    tol: f64,
    zero_limit: bool,
) -> Result<MembershipVerdict> {
    let (verdict, limit, oscillation) = f_lim_exact(x, tol, zero_limit)?;
    Ok(MembershipVerdict {
        verdict,
        limit_estimate: Some(rational::to_f64(&limit)),
        tail_oscillation: oscillation,
        exact_witness: None,
    })
}

/// Verdict, exact limit estimate and oscillation behind [`f_lim_estimate`].
///
/// A tail that passes the ordinary Cauchy test is member evidence outright,
/// since convergent sequences are almost convergent to the same limit.
pub(crate) fn f_lim_exact(
    x: &SeqPrefix,
    tol: f64,
    zero_limit: bool,
) -> Result<(Verdict, Rational, f64)> {
    let scan = almost_scan(x)?;
    let zero_check = |limit: &Rational, verdict| {
        if zero_limit && rational::to_f64(limit).abs() >= tol {
            Verdict::NonMemberEvidence
        } else {
            verdict
        }
    };
    let cauchy = limit_test(x.terms(), tol, GROWTH_WINDOW);
    if cauchy.evidence == LimitEvidence::Converges {
        let limit = cauchy.limit().clone();
        let verdict = zero_check(&limit, Verdict::MemberEvidence);
        return Ok((verdict, limit, cauchy.stats.oscillation));
    }
    let step = rational::to_f64(&scan.step);
    let spread = rational::to_f64(&scan.spread);
    let oscillation = step.max(spread);
    let verdict = if grows_geometrically(x.terms(), GROWTH_WINDOW) {
        Verdict::NonMemberEvidence
    } else if step < tol && spread < tol {
        zero_check(&scan.limit, Verdict::MemberEvidence)
    } else if spread >= tol && scan.spread >= scan.half_spread {
        Verdict::NonMemberEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok((verdict, scan.limit, oscillation))
}
