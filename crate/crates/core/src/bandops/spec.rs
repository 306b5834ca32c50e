use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fibcore::{fib, fib_q};
use crate::rational::Rational;

type EntryFn = dyn Fn(usize, usize) -> Rational + Send + Sync;

/// Where a matrix may have nonzero entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Nonzero only for `n - below <= k <= n + above`.
    Band { below: usize, above: usize },
    /// Nonzero only for `k <= n`.
    LowerTriangle,
}

impl Support {
    pub fn contains(&self, n: usize, k: usize) -> bool {
        match *self {
            Support::Band { below, above } => k + below >= n && k <= n + above,
            Support::LowerTriangle => k <= n,
        }
    }

    /// Number of transform terms computable from a prefix of `len` terms.
    pub fn output_len(&self, len: usize) -> usize {
        match *self {
            Support::Band { above, .. } => len.saturating_sub(above),
            Support::LowerTriangle => len,
        }
    }

    fn columns(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        match *self {
            Support::Band { below, above } => n.saturating_sub(below)..=n + above,
            Support::LowerTriangle => 0..=n,
        }
    }
}

/// User-supplied entry generator with a declared support shape.
#[derive(Clone)]
pub struct CustomMatrix {
    label: String,
    support: Support,
    generator: Arc<EntryFn>,
}

impl CustomMatrix {
    pub fn new(
        label: impl Into<String>,
        support: Support,
        generator: impl Fn(usize, usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            support,
            generator: Arc::new(generator),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for CustomMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomMatrix")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

/// Symbolic description of a band or lower-triangular infinite matrix.
#[derive(Debug, Clone)]
pub enum BandMatrixSpec {
    /// Backward difference: `1` on the diagonal, `-1` below it.
    Delta,
    /// Forward difference: `1` on the diagonal, `-1` above it.
    DeltaForward,
    /// Generalized difference `r x_k + s x_{k-1}`.
    Brs {
        r: Rational,
        s: Rational,
    },
    /// Triple band `r x_k + s x_{k-1} + t x_{k-2}`.
    Brst {
        r: Rational,
        s: Rational,
        t: Rational,
    },
    /// Fibonacci difference matrix.
    Fhat,
    /// Inverse of the Fibonacci difference matrix.
    FhatInverse,
    Custom(CustomMatrix),
}

impl BandMatrixSpec {
    pub fn brs(r: Rational, s: Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroParameter("r"));
        }
        if s.is_zero() {
            return Err(Error::ZeroParameter("s"));
        }
        Ok(Self::Brs { r, s })
    }

    pub fn brst(r: Rational, s: Rational, t: Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroParameter("r"));
        }
        if s.is_zero() {
            return Err(Error::ZeroParameter("s"));
        }
        if t.is_zero() {
            return Err(Error::ZeroParameter("t"));
        }
        Ok(Self::Brst { r, s, t })
    }

    pub fn support(&self) -> Support {
        match self {
            Self::Delta | Self::Brs { .. } | Self::Fhat => Support::Band { below: 1, above: 0 },
            Self::DeltaForward => Support::Band { below: 0, above: 1 },
            Self::Brst { .. } => Support::Band { below: 2, above: 0 },
            Self::FhatInverse => Support::LowerTriangle,
            Self::Custom(c) => c.support,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Delta => "delta".into(),
            Self::DeltaForward => "delta_forward".into(),
            Self::Brs { r, s } => format!("brs({r},{s})"),
            Self::Brst { r, s, t } => format!("brst({r},{s},{t})"),
            Self::Fhat => "fhat".into(),
            Self::FhatInverse => "fhat_inverse".into(),
            Self::Custom(c) => format!("custom({})", c.label),
        }
    }

    /// Exact entry `(n, k)`; zero outside the declared support.
    pub fn entry(&self, n: usize, k: usize) -> Rational {
        if !self.support().contains(n, k) {
            return Rational::zero();
        }
        match self {
            Self::Delta => {
                if k == n {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            }
            Self::DeltaForward => {
                if k == n {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            }
            Self::Brs { r, s } => {
                if k == n {
                    r.clone()
                } else {
                    s.clone()
                }
            }
            Self::Brst { r, s, t } => match n - k {
                0 => r.clone(),
                1 => s.clone(),
                _ => t.clone(),
            },
            Self::Fhat => fhat_entry(n, k),
            Self::FhatInverse => inverse_entry(n, k),
            Self::Custom(c) => (c.generator)(n, k),
        }
    }

    /// Column indices that may hold nonzeros in row `n`.
    pub(crate) fn row_columns(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        self.support().columns(n)
    }
}

/// Entry of the Fibonacci difference matrix. Row 0 is `(1, 0, 0, ...)`.
pub fn fhat_entry(n: usize, k: usize) -> Rational {
    if k == n {
        Rational::new(fib(n), fib(n + 1))
    } else if k + 1 == n {
        -Rational::new(fib(n + 1), fib(n))
    } else {
        Rational::zero()
    }
}

/// Entry `f_{n+1}^2 / (f_k f_{k+1})` of the inverse, zero above the diagonal.
pub fn inverse_entry(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let top = fib(n + 1);
    Rational::new(&top * &top, fib(k) * fib(k + 1))
}

/// `1 / (f_k f_{k+1})`, the column factor shared by the inverse entries.
pub(crate) fn column_weight(k: usize) -> Rational {
    Rational::new(1.into(), fib(k) * fib(k + 1))
}

/// `f_{j+1}^2`, the row factor shared by the inverse entries.
pub(crate) fn row_weight(j: usize) -> Rational {
    let f = fib_q(j + 1);
    &f * &f
}
