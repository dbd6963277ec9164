//! Exact rational helpers shared by every module.
//!
//! Processing times, loads and all powered costs are [`Rational`]s. Text
//! form is `"num/den"` (or a bare integer), always in lowest terms when
//! written.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"3"`, `"-3"`, or `"3/4"`. Zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(text, "bad numerator"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(text, "bad denominator"))?;
    if den.is_zero() {
        return Err(Error::parse(text, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn pow(value: &Rational, exp: u32) -> Rational {
    num_traits::pow(value.clone(), exp as usize)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact dyadic value of a finite float.
pub fn from_f64(value: f64) -> Rational {
    Rational::from_float(value).expect("finite float")
}

/// A rational that is at least `value * (1 + rel_margin)`; used to turn a
/// floating-point constant into a safe exact upper bound.
pub fn upper_bound_of(value: f64, rel_margin: f64) -> Rational {
    let padded = value * (1.0 + rel_margin);
    let bound = from_f64(padded);
    // Float multiplication may round down; bump to the next representable.
    if bound < from_f64(value) {
        from_f64(next_up(padded))
    } else {
        bound
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales every value by `scale` and returns the integer numerators.
/// `scale` must clear all denominators.
pub fn scaled_integers(values: &[Rational], scale: &BigInt) -> Vec<BigInt> {
    values
        .iter()
        .map(|v| {
            let scaled = v * Rational::from_integer(scale.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

/// Relative slack `(rhs - lhs) / |rhs|` as a float, for reporting.
pub fn relative_slack(lhs: &Rational, rhs: &Rational) -> f64 {
    let diff = rhs - lhs;
    if rhs.is_zero() {
        return if diff.is_zero() { 0.0 } else { to_f64(&diff) };
    }
    to_f64(&(diff / rhs.abs()))
}

/// Serde adapter writing a rational in its canonical text form.
pub fn serialize_text<S: serde::Serializer>(
    value: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}
