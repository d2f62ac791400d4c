//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, always in lowest terms with a
//! positive denominator. This module adds the textual `"p/q"` encoding used by
//! every file format in the crate, a fixed-significant-digit decimal renderer,
//! and a few exact helpers (factorials, powers of two).

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`; panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn pow2(n: u32) -> BigInt {
    BigInt::one() << n as usize
}

/// Formats `r` as `"p/q"`; the denominator is always present.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`. The result is reduced to lowest
/// terms; a zero denominator, signs on the denominator, whitespace and
/// decimal points are rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num, true).ok_or_else(|| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den = match den {
        Some(d) => parse_int(d, false).ok_or_else(|| Error::Parse(format!("bad denominator in {s:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Nearest `f64`; saturates to `±inf` only when the value really is out of
/// range.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Decimal rendering with `sig` significant digits in scientific notation,
/// truncated toward zero, e.g. `"4.8207...e-2"`.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // Find e with 10^e <= |r| < 10^(e+1).
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> (BigInt, BigInt) {
        if e >= 0 {
            (num.clone(), &den * ten.pow(e as u32))
        } else {
            (&num * ten.pow((-e) as u32), den.clone())
        }
    };
    loop {
        let (n, d) = scaled(e);
        if n < d {
            e -= 1;
        } else if n >= &d * &ten {
            e += 1;
        } else {
            break;
        }
    }
    // digits = floor(|r| * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let digits = if shift >= 0 {
        (&num * ten.pow(shift as u32)).div_floor(&den)
    } else {
        num.div_floor(&(&den * ten.pow((-shift) as u32)))
    };
    let digits = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    write!(out, "e{e}").unwrap();
    out
}

/// Exact integer `n`-th root of a non-negative integer, if it exists.
pub(crate) fn exact_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.sign() == Sign::Minus {
        return None;
    }
    let r = x.nth_root(n);
    (r.pow(n) == *x).then_some(r)
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod serde_pq {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}
