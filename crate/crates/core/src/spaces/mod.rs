//! Sequence spaces: membership evidence on prefixes, the norm of the
//! domain spaces, basis reconstruction, named witnesses and almost
//! convergence.

mod almost;
mod named;

pub use almost::{almost_scan, f_lim_estimate, t_matrix, AlmostScan, MIN_ALMOST_LEN};
pub use named::{counterexample, KnownTransform, NamedSequence};

pub(crate) use almost::f_lim_exact;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::bandops::{apply, BandMatrixSpec, SeqPrefix};
use crate::error::{Error, Result};
use crate::evidence::{check_window, limit_test, sup_test, tail_stats, LimitEvidence, SupEvidence};
use crate::rational::{self, Rational};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    EllInf,
    C,
    C0,
    Ell1,
    Bs,
    Cs,
    Cs0,
    Bv1,
    F,
    F0,
    Fs,
    C0Fhat,
    CFhat,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 13] = [
        Self::EllInf,
        Self::C,
        Self::C0,
        Self::Ell1,
        Self::Bs,
        Self::Cs,
        Self::Cs0,
        Self::Bv1,
        Self::F,
        Self::F0,
        Self::Fs,
        Self::C0Fhat,
        Self::CFhat,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::EllInf => "ell_inf",
            Self::C => "c",
            Self::C0 => "c0",
            Self::Ell1 => "ell_1",
            Self::Bs => "bs",
            Self::Cs => "cs",
            Self::Cs0 => "cs0",
            Self::Bv1 => "bv1",
            Self::F => "f",
            Self::F0 => "f0",
            Self::Fs => "fs",
            Self::C0Fhat => "c0_fhat",
            Self::CFhat => "c_fhat",
        }
    }

    /// Underlying classical space of a domain space.
    pub fn underlying(&self) -> Option<SpaceTag> {
        match self {
            Self::C0Fhat => Some(Self::C0),
            Self::CFhat => Some(Self::C),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let tag = match key.as_str() {
            "ell_inf" | "ellinf" | "l_inf" | "linf" => Self::EllInf,
            "c" => Self::C,
            "c0" | "c_0" => Self::C0,
            "ell_1" | "ell1" | "l1" | "l_1" => Self::Ell1,
            "bs" => Self::Bs,
            "cs" => Self::Cs,
            "cs0" | "cs_0" => Self::Cs0,
            "bv1" | "bv_1" => Self::Bv1,
            "f" => Self::F,
            "f0" | "f_0" => Self::F0,
            "fs" => Self::Fs,
            "c0_fhat" | "c0fhat" => Self::C0Fhat,
            "c_fhat" | "cfhat" => Self::CFhat,
            _ => return Err(Error::UnknownSpace(s.to_string())),
        };
        Ok(tag)
    }
}

impl Serialize for SpaceTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MemberEvidence,
    NonMemberEvidence,
    Inconclusive,
}

/// Membership evidence for one prefix and one space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub limit_estimate: Option<f64>,
    pub tail_oscillation: f64,
    /// Set when an algebraic identity, not a tail test, decides.
    pub exact_witness: Option<String>,
}

/// Coefficients of an expansion in the basis `c^(n)` (and `c^(-1)`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisCoefficients {
    /// Generalized limit `l`; only present for the convergent space.
    #[serde(serialize_with = "rational::serialize_opt")]
    pub limit: Option<Rational>,
    #[serde(serialize_with = "rational::serialize_vec")]
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub target: SpaceTag,
    pub m: usize,
    pub coefficients: BasisCoefficients,
    /// True when `l` was estimated from the tail rather than supplied.
    pub limit_estimated: bool,
    #[serde(serialize_with = "rational::serialize_vec")]
    pub partial: Vec<Rational>,
    #[serde(serialize_with = "rational::serialize")]
    pub residual_norm: Rational,
}

/// `max_n |F_n(x)|` over the prefix, a lower bound of the domain-space norm.
pub fn fhat_norm(x: &SeqPrefix) -> Result<Rational> {
    let y = apply(&BandMatrixSpec::Fhat, x)?;
    Ok(y.iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Prefix of the basis element `c^(n)`: zero before `n`, then
/// `f_{k+1}^2 / (f_n f_{n+1})`.
pub fn basis_sequence(n: usize, length: usize) -> Result<SeqPrefix> {
    if length <= n {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: length,
        });
    }
    Ok(NamedSequence::Basis(n).generate(length))
}

/// Prefix of `c^(-1)`, `c_k = sum_{j<=k} f_{k+1}^2 / (f_j f_{j+1})`.
pub fn basis_c_minus1(length: usize) -> SeqPrefix {
    NamedSequence::BasisMinus1.generate(length)
}

/// Partial basis expansion through index `m` and the norm of what is left.
///
/// For [`SpaceTag::CFhat`] the limit `l` is taken from `limit` when given,
/// otherwise from the mean of the last `window` transform terms.
pub fn reconstruct(
    x: &SeqPrefix,
    target: SpaceTag,
    m: usize,
    limit: Option<Rational>,
    window: usize,
) -> Result<Reconstruction> {
    if !matches!(target, SpaceTag::C0Fhat | SpaceTag::CFhat) {
        return Err(Error::UnsupportedPair {
            source_space: "reconstruct".into(),
            target: target.to_string(),
        });
    }
    if m >= x.len() {
        return Err(Error::IndexOutOfRange {
            index: m,
            bound: x.len(),
        });
    }
    let len = x.len();
    let y = apply(&BandMatrixSpec::Fhat, x)?;
    let (l, estimated) = match (target, limit) {
        (SpaceTag::C0Fhat, _) => (None, false),
        (_, Some(l)) => (Some(l), false),
        (_, None) => {
            let w = window.clamp(1, len);
            let tail = &y.terms()[len - w..];
            let mean = tail.iter().fold(Rational::zero(), |acc, t| acc + t)
                / Rational::from_integer(w.into());
            (Some(mean), true)
        }
    };
    let shift = l.clone().unwrap_or_else(Rational::zero);
    let coeffs: Vec<Rational> = y.iter().map(|t| t - &shift).collect();

    let mut partial = match &l {
        Some(l) => basis_c_minus1(len).iter().map(|c| c * l).collect(),
        None => vec![Rational::zero(); len],
    };
    for (n, coeff) in coeffs.iter().enumerate().take(m + 1) {
        if coeff.is_zero() {
            continue;
        }
        let basis = basis_sequence(n, len)?;
        for (p, b) in partial.iter_mut().zip(basis.iter()).skip(n) {
            *p += coeff * b;
        }
    }
    let residual = x.sub(&SeqPrefix::new(partial.clone()));
    let residual_norm = fhat_norm(&residual)?;
    Ok(Reconstruction {
        target,
        m,
        coefficients: BasisCoefficients { limit: l, coeffs },
        limit_estimated: estimated,
        partial,
        residual_norm,
    })
}

/// Membership evidence for `x` in `tag`.
///
/// Domain spaces are judged on the transform. Sequences generated by name
/// whose transform follows from an exact identity get an exact witness,
/// once the identity is confirmed on the whole prefix.
pub fn membership_estimate(
    x: &SeqPrefix,
    tag: SpaceTag,
    tol: f64,
    window: usize,
) -> Result<MembershipVerdict> {
    check_window(x.len(), window)?;
    let abs = |s: &SeqPrefix| SeqPrefix::new(s.iter().map(Signed::abs).collect());
    match tag {
        SpaceTag::EllInf => Ok(bounded_verdict(&abs(x), tol, window)),
        SpaceTag::C => Ok(limit_verdict(x, tol, window, false)),
        SpaceTag::C0 => Ok(limit_verdict(x, tol, window, true)),
        SpaceTag::Ell1 => Ok(limit_verdict(&abs(x).partial_sums(), tol, window, false)),
        SpaceTag::Bs => Ok(bounded_verdict(&abs(&x.partial_sums()), tol, window)),
        SpaceTag::Cs => Ok(limit_verdict(&x.partial_sums(), tol, window, false)),
        SpaceTag::Cs0 => Ok(limit_verdict(&x.partial_sums(), tol, window, true)),
        SpaceTag::Bv1 => Ok(limit_verdict(
            &abs(&x.differences()).partial_sums(),
            tol,
            window,
            false,
        )),
        SpaceTag::F => almost::f_lim_verdict(x, tol, false),
        SpaceTag::F0 => almost::f_lim_verdict(x, tol, true),
        SpaceTag::Fs => almost::f_lim_verdict(&x.partial_sums(), tol, false),
        SpaceTag::C0Fhat | SpaceTag::CFhat => {
            let y = apply(&BandMatrixSpec::Fhat, x)?;
            let zero_limit = tag == SpaceTag::C0Fhat;
            if let Some(v) = exact_domain_verdict(x, &y, zero_limit) {
                return Ok(v);
            }
            Ok(limit_verdict(&y, tol, window, zero_limit))
        }
    }
}

fn exact_domain_verdict(
    x: &SeqPrefix,
    y: &SeqPrefix,
    zero_limit: bool,
) -> Option<MembershipVerdict> {
    let named: NamedSequence = x.name()?.parse().ok()?;
    let known = named.known_transform()?;
    if named.generate(x.len()).terms() != x.terms() {
        return None;
    }
    match known {
        KnownTransform::FiniteSupport(last) => {
            let vanishes = y
                .iter()
                .enumerate()
                .all(|(k, t)| last.is_some_and(|l| k <= l) || t.is_zero());
            if !vanishes {
                return None;
            }
            let note = match (named, last) {
                (_, None) => "transform is identically zero".to_string(),
                (NamedSequence::Unit(n), _) => {
                    format!("transform is supported on {{{n}, {}}}", n + 1)
                }
                (_, Some(l)) => format!("transform is e^({l})"),
            };
            Some(MembershipVerdict {
                verdict: Verdict::MemberEvidence,
                limit_estimate: Some(0.0),
                tail_oscillation: 0.0,
                exact_witness: Some(note),
            })
        }
        KnownTransform::Ones => {
            if !y.iter().all(One::is_one) {
                return None;
            }
            Some(MembershipVerdict {
                verdict: if zero_limit {
                    Verdict::NonMemberEvidence
                } else {
                    Verdict::MemberEvidence
                },
                limit_estimate: Some(1.0),
                tail_oscillation: 0.0,
                exact_witness: Some("transform is e".into()),
            })
        }
    }
}

fn bounded_verdict(values: &SeqPrefix, tol: f64, window: usize) -> MembershipVerdict {
    let stats = tail_stats(values.terms(), window);
    let test = sup_test(values.terms(), tol, window);
    let verdict = match test.evidence {
        SupEvidence::Bounded => Verdict::MemberEvidence,
        SupEvidence::Unbounded { .. } => Verdict::NonMemberEvidence,
        SupEvidence::Undecided => Verdict::Inconclusive,
    };
    MembershipVerdict {
        verdict,
        limit_estimate: None,
        tail_oscillation: stats.oscillation,
        exact_witness: None,
    }
}

fn limit_verdict(
    values: &SeqPrefix,
    tol: f64,
    window: usize,
    zero_limit: bool,
) -> MembershipVerdict {
    let test = limit_test(values.terms(), tol, window);
    let limit = rational::to_f64(test.limit());
    let verdict = match test.evidence {
        LimitEvidence::Converges if zero_limit && limit.abs() >= tol => Verdict::NonMemberEvidence,
        LimitEvidence::Converges => Verdict::MemberEvidence,
        LimitEvidence::Diverges { .. } => Verdict::NonMemberEvidence,
        LimitEvidence::Undecided => Verdict::Inconclusive,
    };
    let limit_estimate = match test.evidence {
        LimitEvidence::Diverges { .. } => None,
        _ => Some(limit),
    };
    MembershipVerdict {
        verdict,
        limit_estimate,
        tail_oscillation: test.stats.oscillation,
        exact_witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandops::apply_fhat_inverse;
    use crate::fibcore::GoldenRatio;
    use crate::rational::{int, ratio};

    #[test]
    fn norm_examples() {
        assert_eq!(fhat_norm(&SeqPrefix::unit(0, 6)).unwrap(), int(2));
        assert_eq!(fhat_norm(&SeqPrefix::zeros(6)).unwrap(), int(0));
        assert_eq!(
            fhat_norm(&NamedSequence::FibSquares.generate(30)).unwrap(),
            int(1)
        );
        assert_eq!(
            fhat_norm(&SeqPrefix::default()).unwrap_err(),
            Error::EmptyPrefix
        );
    }

    #[test]
    fn basis_examples() {
        assert_eq!(
            basis_sequence(0, 3).unwrap().terms(),
            &[int(1), int(4), int(9)]
        );
        assert_eq!(
            basis_sequence(2, 3).unwrap().terms(),
            &[int(0), int(0), ratio(3, 2)]
        );
        assert!(basis_sequence(3, 3).is_err());
        assert_eq!(basis_c_minus1(1).terms(), &[int(1)]);
        assert_eq!(basis_c_minus1(2).terms(), &[int(1), int(6)]);
        assert_eq!(
            basis_c_minus1(12),
            apply_fhat_inverse(&NamedSequence::Ones.generate(12))
                .unwrap()
                .with_name("basis_minus1")
        );
    }

    #[test]
    fn basis_maps_to_units() {
        for n in 0..10 {
            let y = apply(&BandMatrixSpec::Fhat, &basis_sequence(n, 12).unwrap()).unwrap();
            assert_eq!(y, SeqPrefix::unit(n, 12));
        }
        let e = apply(&BandMatrixSpec::Fhat, &basis_c_minus1(12)).unwrap();
        assert!(e.iter().all(|t| *t == int(1)));
    }

    #[test]
    fn reconstruct_finite_expansion_is_exact() {
        let x = basis_sequence(3, 20).unwrap();
        let r = reconstruct(&x, SpaceTag::C0Fhat, 3, None, 8).unwrap();
        assert_eq!(r.residual_norm, int(0));
        assert_eq!(r.partial.as_slice(), x.terms());
        assert!(r.coefficients.limit.is_none());
    }

    #[test]
    fn reconstruct_geometric_tail() {
        let y = SeqPrefix::from_fn(16, |k| num_traits::pow(ratio(1, 2), k));
        let x = apply_fhat_inverse(&y).unwrap();
        let r = reconstruct(&x, SpaceTag::C0Fhat, 10, None, 8).unwrap();
        assert_eq!(r.residual_norm, num_traits::pow(ratio(1, 2), 11));
    }

    #[test]
    fn reconstruct_c_minus1_with_exact_limit() {
        let z = basis_c_minus1(20);
        for m in [0, 5, 19] {
            let r = reconstruct(&z, SpaceTag::CFhat, m, Some(int(1)), 8).unwrap();
            assert_eq!(r.residual_norm, int(0));
            assert!(!r.limit_estimated);
        }
        let r = reconstruct(&z, SpaceTag::CFhat, 4, None, 8).unwrap();
        assert!(r.limit_estimated);
        assert_eq!(r.coefficients.limit, Some(int(1)));
        assert!(reconstruct(&z, SpaceTag::CFhat, 20, None, 8).is_err());
        assert!(reconstruct(&z, SpaceTag::C, 2, None, 8).is_err());
    }

    #[test]
    fn fib_squares_membership() {
        let x = NamedSequence::FibSquares.generate(64);
        let v = membership_estimate(&x, SpaceTag::C0Fhat, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::MemberEvidence);
        assert_eq!(v.exact_witness.as_deref(), Some("transform is e^(0)"));
        let v = membership_estimate(&x, SpaceTag::EllInf, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::NonMemberEvidence);
    }

    #[test]
    fn ratio_sum_membership() {
        let x = NamedSequence::RatioSum.generate(64);
        let v = membership_estimate(&x, SpaceTag::CFhat, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::MemberEvidence);
        let phi = GoldenRatio::approx(64);
        assert!((v.limit_estimate.unwrap() - phi).abs() < DEFAULT_TOL);
        assert!(v.exact_witness.is_none());
        let v = membership_estimate(&x, SpaceTag::C0Fhat, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::NonMemberEvidence);
    }

    #[test]
    fn exact_witness_requires_matching_prefix() {
        // renamed prefix that does not satisfy the identity falls back to the tail test
        let x = SeqPrefix::zeros(32).with_name("fib_squares");
        let v = membership_estimate(&x, SpaceTag::C0Fhat, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::MemberEvidence);
        assert!(v.exact_witness.is_none());

        let c = basis_c_minus1(32);
        let v = membership_estimate(&c, SpaceTag::C0Fhat, DEFAULT_TOL, DEFAULT_WINDOW).unwrap();
        assert_eq!(v.verdict, Verdict::NonMemberEvidence);
        assert_eq!(v.exact_witness.as_deref(), Some("transform is e"));
    }

    #[test]
    fn classical_space_criteria() {
        let geometric = SeqPrefix::from_fn(80, |k| num_traits::pow(ratio(1, 2), k));
        let tol = DEFAULT_TOL;
        let w = DEFAULT_WINDOW;
        let check = |x: &SeqPrefix, tag| membership_estimate(x, tag, tol, w).unwrap().verdict;
        assert_eq!(check(&geometric, SpaceTag::C0), Verdict::MemberEvidence);
        assert_eq!(check(&geometric, SpaceTag::Ell1), Verdict::MemberEvidence);
        assert_eq!(check(&geometric, SpaceTag::Cs), Verdict::MemberEvidence);
        assert_eq!(check(&geometric, SpaceTag::Cs0), Verdict::NonMemberEvidence);
        assert_eq!(check(&geometric, SpaceTag::Bv1), Verdict::MemberEvidence);

        let ones = NamedSequence::Ones.generate(80);
        assert_eq!(check(&ones, SpaceTag::C), Verdict::MemberEvidence);
        assert_eq!(check(&ones, SpaceTag::C0), Verdict::NonMemberEvidence);
        assert_eq!(check(&ones, SpaceTag::EllInf), Verdict::MemberEvidence);
        assert_eq!(check(&ones, SpaceTag::Bs), Verdict::NonMemberEvidence);

        let alt = NamedSequence::Alternating.generate(80);
        assert_eq!(check(&alt, SpaceTag::C), Verdict::NonMemberEvidence);
        assert_eq!(check(&alt, SpaceTag::Bs), Verdict::MemberEvidence);
        assert_eq!(check(&alt, SpaceTag::EllInf), Verdict::MemberEvidence);

        assert!(membership_estimate(&ones.clone(), SpaceTag::C, tol, 41).is_err());
    }

    #[test]
    fn space_tags_parse() {
        for tag in SpaceTag::ALL {
            assert_eq!(tag.as_str().parse::<SpaceTag>().unwrap(), tag);
        }
        assert_eq!("c0_Fhat".parse::<SpaceTag>().unwrap(), SpaceTag::C0Fhat);
        assert!("lp".parse::<SpaceTag>().is_err());
    }
}
