use num_traits::{One, Signed, Zero};

use super::{BandMatrixSpec, SeqPrefix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense `rows x cols` corner of an infinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
    provenance: String,
}

impl TruncatedMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
            provenance: "zeros".into(),
        }
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m.set(i, i, Rational::one());
        }
        m.provenance = "identity".into();
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for n in 0..rows {
            for k in 0..cols {
                entries.push(f(n, k));
            }
        }
        Self {
            rows,
            cols,
            entries,
            provenance: "generated".into(),
        }
    }

    /// Corner of a band matrix; only entries inside the support are evaluated.
    pub fn from_spec(spec: &BandMatrixSpec, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for n in 0..rows {
            for k in spec.row_columns(n) {
                if k < cols {
                    m.set(n, k, spec.entry(n, k));
                }
            }
        }
        m.provenance = format!("spec:{}", spec.name());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
            provenance: "rows".into(),
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn get(&self, n: usize, k: usize) -> &Rational {
        assert!(n < self.rows && k < self.cols, "({n}, {k}) outside corner");
        &self.entries[n * self.cols + k]
    }

    pub fn set(&mut self, n: usize, k: usize, value: Rational) {
        assert!(n < self.rows && k < self.cols, "({n}, {k}) outside corner");
        self.entries[n * self.cols + k] = value;
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.entries[n * self.cols..(n + 1) * self.cols]
    }

    pub fn column(&self, k: usize) -> Vec<Rational> {
        (0..self.rows).map(|n| self.get(n, k).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|n| self.row(n).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `sum_k a_nk` over the corner, one value per row.
    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.rows)
            .map(|n| self.row(n).iter().fold(Rational::zero(), |acc, v| acc + v))
            .collect()
    }

    /// `sum_k |a_nk|` over the corner, one value per row.
    pub fn row_abs_sums(&self) -> Vec<Rational> {
        (0..self.rows)
            .map(|n| {
                self.row(n)
                    .iter()
                    .fold(Rational::zero(), |acc, v| acc + v.abs())
            })
            .collect()
    }

    /// `A z` over the corner; `z` must have exactly `cols` terms.
    pub fn mul_vec(&self, z: &SeqPrefix) -> Result<SeqPrefix> {
        if z.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: z.len(),
            });
        }
        Ok(SeqPrefix::from_fn(self.rows, |n| {
            self.row(n)
                .iter()
                .zip(z.iter())
                .filter(|(a, _)| !a.is_zero())
                .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
        }))
    }

    /// Corner product; zero entries of `self` are skipped.
    pub fn matmul(&self, other: &TruncatedMatrix) -> Result<TruncatedMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = TruncatedMatrix::zeros(self.rows, other.cols);
        for n in 0..self.rows {
            for (j, a) in self.row(n).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, b) in other.row(j).iter().enumerate() {
                    if !b.is_zero() {
                        let idx = n * out.cols + k;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out.provenance = format!("product({}, {})", self.provenance, other.provenance);
        Ok(out)
    }

    /// Column partial sums `a(n,k) = sum_{j<=n} a_jk`.
    pub fn column_partial_sums(&self) -> TruncatedMatrix {
        let mut out = self.clone();
        for n in 1..self.rows {
            for k in 0..self.cols {
                let prev = out.get(n - 1, k).clone();
                out.entries[n * self.cols + k] += prev;
            }
        }
        out.provenance = format!("column_partial_sums({})", self.provenance);
        out
    }

    /// Row differences `a_nk - a_{n-1,k}`, with row 0 kept as-is.
    pub fn row_differences(&self) -> TruncatedMatrix {
        let mut out = self.clone();
        for n in 1..self.rows {
            for k in 0..self.cols {
                out.entries[n * self.cols + k] = self.get(n, k) - self.get(n - 1, k);
            }
        }
        out.provenance = format!("row_differences({})", self.provenance);
        out
    }

    /// Leading `rows x cols` sub-corner.
    pub fn corner(&self, rows: usize, cols: usize) -> TruncatedMatrix {
        let rows = rows.min(self.rows);
        let cols = cols.min(self.cols);
        let mut out = TruncatedMatrix::from_fn(rows, cols, |n, k| self.get(n, k).clone());
        out.provenance = self.provenance.clone();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn spec_corner_matches_generator() {
        let m = TruncatedMatrix::from_spec(&BandMatrixSpec::FhatInverse, 6, 5);
        for n in 0..6 {
            for k in 0..5 {
                assert_eq!(m.get(n, k), &BandMatrixSpec::FhatInverse.entry(n, k));
            }
        }
        assert_eq!(m.provenance(), "spec:fhat_inverse");
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err = TruncatedMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3)]]).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn column_partial_sums_of_identity() {
        let a = TruncatedMatrix::identity(4, 4).column_partial_sums();
        for n in 0..4 {
            for k in 0..4 {
                let expected = if k <= n { int(1) } else { int(0) };
                assert_eq!(a.get(n, k), &expected);
            }
        }
        assert!(TruncatedMatrix::zeros(3, 3).column_partial_sums().is_zero());
    }

    #[test]
    fn column_partial_sums_of_fhat_match_double_loop() {
        let f = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 12, 12);
        let sums = f.column_partial_sums();
        for n in 0..12 {
            for k in 0..12 {
                let mut direct = int(0);
                for j in 0..=n {
                    direct += BandMatrixSpec::Fhat.entry(j, k);
                }
                assert_eq!(sums.get(n, k), &direct);
            }
        }
    }

    #[test]
    fn row_differences_keep_first_row() {
        let a = TruncatedMatrix::from_fn(3, 2, |n, k| int((n * 10 + k) as i64));
        let d = a.row_differences();
        assert_eq!(d.row(0), a.row(0));
        assert_eq!(d.row(2), &[int(10), int(10)]);
    }

    #[test]
    fn mul_vec_checks_length() {
        let a = TruncatedMatrix::identity(3, 3);
        assert!(a.mul_vec(&SeqPrefix::zeros(2)).is_err());
        let z = SeqPrefix::new(vec![int(1), int(2), int(3)]);
        assert_eq!(a.mul_vec(&z).unwrap(), z);
    }
}
