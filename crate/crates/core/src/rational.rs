//! Arbitrary-precision rational scalars.
//!
//! All exact coefficients in this crate are `BigRational` values: reduced to
//! lowest terms with a positive denominator by construction, so overflow and
//! normalization never need per-call checks. This module adds the small
//! constructors and the `p/q` string round-trip used by the JSON formats.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Rational from machine integers, `den` must be nonzero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Formats as `p/q`, omitting the denominator when it is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with optional sign; `q` must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid numerator in {s:?}"))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| format!("invalid denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Nearest binary64 value; `None` only for magnitudes beyond the f64 range.
pub fn to_f64(r: &Rational) -> Option<f64> {
    r.to_f64().filter(|v| v.is_finite() || r.numer().is_zero())
}

/// Exact factorial as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= Rational::new(BigInt::from(n - i), BigInt::from(i + 1));
    }
    acc
}
