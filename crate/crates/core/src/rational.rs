//! Exact rational helpers.
//!
//! Every probability and threshold in the crate is a [`Q`]. Rationals are
//! exchanged as `"num/den"` strings; the parser additionally accepts plain
//! integers (`"3"`) and terminating decimals (`"0.005"`), which are converted
//! exactly.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

/// `num / den` as a [`Q`]. Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(if neg { -v } else { v })
}

/// Parses `"a/b"`, `"a"` or a terminating decimal such as `"-0.125"`.
pub fn parse_rational(input: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_int(n).ok_or_else(|| err("numerator is not an integer"))?;
        let den = parse_int(d).ok_or_else(|| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim().trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("malformed decimal fraction"));
        }
        let w = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(whole_digits).ok_or_else(|| err("malformed decimal integer part"))?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let f = BigInt::parse_bytes(frac.as_bytes(), 10).ok_or_else(|| err("malformed decimal"))?;
        let mag = Q::new(w * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    parse_int(s)
        .map(Q::from_integer)
        .ok_or_else(|| err("not a rational"))
}

/// Canonical `"num/den"` rendering (always with a denominator).
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Decimal expansion rounded half-up to `digits` fractional digits.
pub fn to_decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = a.numer() * &scale;
    let (mut quot, rem) = scaled.div_rem(a.denom());
    if rem * BigInt::from(2u32) >= *a.denom() {
        quot += 1u32;
    }
    let mut s = quot.to_str_radix(10);
    if digits > 0 {
        if s.len() <= digits {
            let pad = digits + 1 - s.len();
            s = format!("{}{}", "0".repeat(pad), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg && quot_is_nonzero(&s) {
        s.insert(0, '-');
    }
    s
}

fn quot_is_nonzero(s: &str) -> bool {
    s.bytes().any(|b| b.is_ascii_digit() && b != b'0')
}

/// `ceil(x)` as an integer.
pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn is_probability(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}
