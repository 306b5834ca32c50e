use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::bandops::{column_weight, row_weight, SeqPrefix};
use crate::error::{Error, Result};
use crate::fibcore::fib_q;
use crate::rational::{int, Rational};

/// Sequences that can be generated by name, including the witnesses for
/// strict inclusion, unboundedness and non-solidity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSequence {
    /// `f_{k+1}^2`; transform is `e^(0)`.
    FibSquares,
    /// `sum_{j<=k} f_{k+1}^2 / f_j^2`; transform is `f_{k+1}/f_k`.
    RatioSum,
    /// `u_k = f_{k+1}^2`.
    NonsolidU,
    /// `v_k = (-1)^{k+1}`.
    NonsolidV,
    /// `u_k v_k`.
    NonsolidUv,
    Ones,
    Zero,
    Unit(usize),
    /// `(-1)^k`.
    Alternating,
    /// `0, 1, 0, 1, ...`.
    Staircase,
    /// Basis element `c^(n)`.
    Basis(usize),
    /// Basis element `c^(-1)`.
    BasisMinus1,
}

/// Transform of a named sequence that follows from an algebraic identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownTransform {
    /// Zero beyond the given index.
    FiniteSupport(Option<usize>),
    /// Constant `1`.
    Ones,
}

impl NamedSequence {
    pub fn generate(&self, len: usize) -> SeqPrefix {
        let terms = match *self {
            Self::FibSquares | Self::NonsolidU => (0..len).map(fib_square).collect(),
            Self::RatioSum => (0..len)
                .map(|k| {
                    let inner = (0..=k).fold(Rational::zero(), |acc, j| {
                        let f = fib_q(j);
                        acc + (&f * &f).recip()
                    });
                    fib_square(k) * inner
                })
                .collect(),
            Self::NonsolidV => (0..len).map(sign_plus_one).collect(),
            Self::NonsolidUv => (0..len).map(|k| sign_plus_one(k) * fib_square(k)).collect(),
            Self::Ones => vec![Rational::one(); len],
            Self::Zero => vec![Rational::zero(); len],
            Self::Unit(n) => SeqPrefix::unit(n, len).into_terms(),
            Self::Alternating => (0..len).map(|k| -sign_plus_one(k)).collect(),
            Self::Staircase => (0..len).map(|k| int((k % 2) as i64)).collect(),
            Self::Basis(n) => (0..len)
                .map(|k| {
                    if k < n {
                        Rational::zero()
                    } else {
                        fib_square(k) * column_weight(n)
                    }
                })
                .collect(),
            Self::BasisMinus1 => {
                let mut running = Rational::zero();
                (0..len)
                    .map(|k| {
                        running += column_weight(k);
                        row_weight(k) * &running
                    })
                    .collect()
            }
        };
        SeqPrefix::named(self.to_string(), terms)
    }

    pub fn known_transform(&self) -> Option<KnownTransform> {
        match *self {
            Self::FibSquares | Self::NonsolidU => Some(KnownTransform::FiniteSupport(Some(0))),
            Self::Basis(n) => Some(KnownTransform::FiniteSupport(Some(n))),
            Self::Unit(n) => Some(KnownTransform::FiniteSupport(Some(n + 1))),
            Self::Zero => Some(KnownTransform::FiniteSupport(None)),
            Self::BasisMinus1 => Some(KnownTransform::Ones),
            _ => None,
        }
    }
}

fn fib_square(k: usize) -> Rational {
    let f = fib_q(k + 1);
    &f * &f
}

/// `(-1)^{k+1}`.
fn sign_plus_one(k: usize) -> Rational {
    if k % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

impl fmt::Display for NamedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FibSquares => f.write_str("fib_squares"),
            Self::RatioSum => f.write_str("ratio_sum"),
            Self::NonsolidU => f.write_str("nonsolid_u"),
            Self::NonsolidV => f.write_str("nonsolid_v"),
            Self::NonsolidUv => f.write_str("nonsolid_uv"),
            Self::Ones => f.write_str("ones"),
            Self::Zero => f.write_str("zero"),
            Self::Unit(n) => write!(f, "unit({n})"),
            Self::Alternating => f.write_str("alternating"),
            Self::Staircase => f.write_str("staircase"),
            Self::Basis(n) => write!(f, "basis({n})"),
            Self::BasisMinus1 => f.write_str("basis_minus1"),
        }
    }
}

fn indexed(s: &str, prefix: &str) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    let rest = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    rest.parse().ok()
}

impl FromStr for NamedSequence {
    type Err = Error;

    /// Accepts the display names; indexed names also parse as `unit3` or `basis3`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let named = match key.as_str() {
            "fib_squares" => Self::FibSquares,
            "ratio_sum" => Self::RatioSum,
            "nonsolid_u" => Self::NonsolidU,
            "nonsolid_v" => Self::NonsolidV,
            "nonsolid_uv" => Self::NonsolidUv,
            "ones" | "e" => Self::Ones,
            "zero" | "zeros" => Self::Zero,
            "alternating" => Self::Alternating,
            "staircase" => Self::Staircase,
            "basis_minus1" | "basis(-1)" => Self::BasisMinus1,
            other => {
                if let Some(n) = indexed(other, "unit") {
                    Self::Unit(n)
                } else if let Some(n) = indexed(other, "basis") {
                    Self::Basis(n)
                } else {
                    return Err(Error::UnknownSequence(s.to_string()));
                }
            }
        };
        Ok(named)
    }
}

/// Prefix of a named sequence; names are those accepted by [`NamedSequence`].
pub fn counterexample(name: &str, length: usize) -> Result<SeqPrefix> {
    let named: NamedSequence = name.parse()?;
    if length == 0 {
        return Err(Error::EmptyPrefix);
    }
    Ok(named.generate(length))
}
