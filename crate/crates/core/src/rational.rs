//! Exact rational values and their canonical text form.
//!
//! Every matrix entry and sequence term in the crate is a [`Rational`]
//! (a `num_rational::BigRational`, always in lowest terms with a positive
//! denominator). The canonical string form is `p/q`, with `/q` omitted when
//! `q = 1`. Floats only appear as projections for reporting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_big(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Canonical `p/q` form.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Float projection. Values beyond the `f64` range saturate to ±inf.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational equal to the given finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Fixed-precision decimal rendering, rounded half away from zero.
pub fn decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = digits
    )
}

pub(crate) fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub(crate) fn serialize_opt<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format(r)),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_vec<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_unit_denominator() {
        assert_eq!(format(&ratio(6, 3)), "2");
        assert_eq!(format(&ratio(-4, 6)), "-2/3");
        assert_eq!(format(&ratio(3, -5)), "-3/5");
    }

    #[test]
    fn parse_accepts_fraction_integer_and_decimal() {
        assert_eq!(parse("3/5").unwrap(), ratio(3, 5));
        assert_eq!(parse(" -12 ").unwrap(), int(-12));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse("2.50").unwrap(), ratio(5, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn decimal_rounds() {
        assert_eq!(decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&int(7), 0), "7");
        assert_eq!(decimal(&ratio(-1, 1000), 2), "0.00");
    }

    #[test]
    fn float_projection_saturates() {
        let huge = from_big(num_traits::pow(BigInt::from(10), 400));
        assert_eq!(to_f64(&huge), f64::INFINITY);
        assert_eq!(to_f64(&-huge), f64::NEG_INFINITY);
        assert_eq!(to_f64(&ratio(1, 4)), 0.25);
    }
}
