use std::ops::Index;

use num_traits::Zero;

use crate::rational::Rational;

/// Finite prefix `x_0, ..., x_{N-1}` of an infinite sequence.
///
/// `name` records where the prefix came from (a named sequence, a file) and
/// is carried through the exchange format.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeqPrefix {
    terms: Vec<Rational>,
    name: Option<String>,
}

impl SeqPrefix {
    pub fn new(terms: Vec<Rational>) -> Self {
        Self { terms, name: None }
    }

    pub fn named(name: impl Into<String>, terms: Vec<Rational>) -> Self {
        Self {
            terms,
            name: Some(name.into()),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Rational::zero(); len])
    }

    /// `e^(n)` truncated to `len` terms.
    pub fn unit(n: usize, len: usize) -> Self {
        let mut terms = vec![Rational::zero(); len];
        if n < len {
            terms[n] = Rational::from_integer(1.into());
        }
        Self::new(terms)
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self::new((0..len).map(f).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Zero::is_zero)
    }

    /// Partial sums `s_n = x_0 + ... + x_n`.
    pub fn partial_sums(&self) -> SeqPrefix {
        let mut acc = Rational::zero();
        SeqPrefix::new(
            self.terms
                .iter()
                .map(|t| {
                    acc += t;
                    acc.clone()
                })
                .collect(),
        )
    }

    /// Backward differences `x_n - x_{n-1}` with `x_{-1} = 0`.
    pub fn differences(&self) -> SeqPrefix {
        SeqPrefix::new(
            self.terms
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if i == 0 {
                        t.clone()
                    } else {
                        t - &self.terms[i - 1]
                    }
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &SeqPrefix) -> SeqPrefix {
        SeqPrefix::new(
            self.terms
                .iter()
                .zip(&other.terms)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Index<usize> for SeqPrefix {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.terms[i]
    }
}

impl From<Vec<Rational>> for SeqPrefix {
    fn from(terms: Vec<Rational>) -> Self {
        Self::new(terms)
    }
}

impl<'a> IntoIterator for &'a SeqPrefix {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
