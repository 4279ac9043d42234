//! Fixed-point reals with 256 fractional bits (plus guard bits) for
//! evaluating bounds that involve `exp`, `ln`, square and cube roots.
//!
//! Precision is absolute: a value near 1e-87 keeps only ~30 significant bits.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{to_decimal, Q};

/// Fractional bits carried by every [`Real`].
pub const FRAC_BITS: u32 = 320;
/// Bits guaranteed after argument reduction in `exp`.
pub const PRECISION_BITS: u32 = 256;

/// `mantissa / 2^FRAC_BITS`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real {
    mantissa: BigInt,
}

fn scale() -> BigInt {
    BigInt::one() << FRAC_BITS
}

impl Real {
    pub fn zero() -> Self {
        Real { mantissa: BigInt::zero() }
    }

    pub fn one() -> Self {
        Real { mantissa: scale() }
    }

    pub fn from_int(n: i64) -> Self {
        Real {
            mantissa: BigInt::from(n) << FRAC_BITS,
        }
    }

    /// Nearest representable value (rounded toward −∞).
    pub fn from_q(x: &Q) -> Self {
        Real {
            mantissa: (x.numer() << FRAC_BITS).div_floor(x.denom()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real {
            mantissa: self.mantissa.abs(),
        }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other {
            self
        } else {
            other
        }
    }

    fn shr(&self, bits: u32) -> Self {
        Real {
            mantissa: &self.mantissa >> bits,
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_q(&self, x: &Q) -> Ordering {
        (&self.mantissa * x.denom()).cmp(&(x.numer() << FRAC_BITS))
    }

    pub fn exp(&self) -> Real {
        if self.is_negative() {
            let pos = (-self).exp();
            if pos.is_zero() {
                return Real::zero();
            }
            return &Real::one() / &pos;
        }
        // Each squaring costs about one bit; the guard bits absorb that for
        // arguments up to 2^40 or so.
        let int_part = &self.mantissa >> FRAC_BITS;
        let int_bits = int_part.bits() as u32;
        // Halve until the argument is below 2^-8, then square back.
        let halvings = int_bits + 8;
        let r = self.shr(halvings);
        let mut sum = Real::one();
        let mut term = Real::one();
        let mut k = 1i64;
        loop {
            term = &(&term * &r) / &Real::from_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        for _ in 0..halvings {
            sum = &sum * &sum;
        }
        sum
    }

    /// Natural logarithm of a positive value (Newton iteration on `exp`).
    pub fn ln(&self) -> Option<Real> {
        if !self.mantissa.is_positive() {
            return None;
        }
        let guess = libm::log(self.to_f64());
        let mut y = Real::from_f64(guess);
        for _ in 0..12 {
            let e = y.exp();
            // y ← y + 2(x − e^y)/(x + e^y)
            let step = &(&(self - &e) * &Real::from_int(2)) / &(self + &e);
            y = &y + &step;
            if step.abs().mantissa.bits() < (FRAC_BITS - PRECISION_BITS) as u64 {
                break;
            }
        }
        Some(y)
    }

    pub fn sqrt(&self) -> Option<Real> {
        if self.is_negative() {
            return None;
        }
        Some(Real {
            mantissa: (&self.mantissa << FRAC_BITS).sqrt(),
        })
    }

    pub fn cbrt(&self) -> Real {
        Real {
            mantissa: (&self.mantissa << (2 * FRAC_BITS)).cbrt(),
        }
    }

    pub fn from_f64(x: f64) -> Real {
        if !x.is_finite() {
            return Real::zero();
        }
        // Exact binary expansion of the double.
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1 << 52) - 1);
        let (mant, exp) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | 1 << 52, exponent - 1075)
        };
        let mut m = BigInt::from(mant) * sign;
        let shift = exp + FRAC_BITS as i64;
        if shift >= 0 {
            m <<= shift as usize;
        } else {
            m >>= (-shift) as usize;
        }
        Real { mantissa: m }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before converting.
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top * libm::pow(2.0, (drop - FRAC_BITS as i64) as f64)
    }

    /// Decimal string rounded half-up to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        to_decimal(&Q::new(self.mantissa.clone(), scale()), digits)
    }

    /// Shortest scientific rendering with `sig` significant digits.
    pub fn to_scientific(&self, sig: usize) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let x = Q::new(self.mantissa.abs(), scale());
        // Find e with 10^e ≤ x < 10^(e+1).
        let ten = Q::from_integer(BigInt::from(10));
        let mut e: i64 = 0;
        let mut y = x.clone();
        while y >= ten {
            y /= &ten;
            e += 1;
        }
        while y < Q::one() {
            y *= &ten;
            e -= 1;
        }
        let mut m = to_decimal(&y, sig.saturating_sub(1));
        if m.starts_with("10") {
            // rounding carried into a new digit
            y /= &ten;
            e += 1;
            m = to_decimal(&y, sig.saturating_sub(1));
        }
        alloc::format!("{sign}{m}e{e}")
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_scientific(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(20))
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real {
            mantissa: &self.mantissa + &rhs.mantissa,
        }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real {
            mantissa: &self.mantissa - &rhs.mantissa,
        }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real {
            mantissa: (&self.mantissa * &rhs.mantissa) >> FRAC_BITS,
        }
    }
}

impl Div for &Real {
    type Output = Real;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Real) -> Real {
        Real {
            mantissa: (&self.mantissa << FRAC_BITS).div_floor(&rhs.mantissa),
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            mantissa: -&self.mantissa,
        }
    }
}

impl Real {
    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn exp_of_known_values() {
        assert_eq!(Real::zero().exp(), Real::one());
        let e = Real::one().exp();
        assert_eq!(e.to_decimal(40), "2.7182818284590452353602874713526624977572");
        let e2 = Real::from_int(-2).exp();
        assert_eq!(e2.to_decimal(20), "0.13533528323661269189");
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Real::from_q(&q(2000, 1));
        let l = x.ln().unwrap();
        assert_eq!(l.to_decimal(30), "7.600902459542082361471206485511");
        assert!(Real::zero().ln().is_none());
    }

    #[test]
    fn roots() {
        assert_eq!(Real::from_int(1000).cbrt().to_decimal(30), "10.000000000000000000000000000000");
        assert_eq!(Real::from_int(2).sqrt().unwrap().to_decimal(30), "1.414213562373095048801688724210");
    }

    #[test]
    fn tiny_values_render() {
        let v = Real::from_int(-200).exp();
        assert_eq!(v.to_scientific(6), "1.38390e-87");
        assert!((v.to_f64() / 1.3838965267367375e-87 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn compares_with_rationals() {
        let third = Real::from_q(&q(1, 3));
        assert_eq!(third.cmp_q(&q(1, 3)), Ordering::Less);
        assert_eq!(Real::from_int(1).cmp_q(&q(1, 1)), Ordering::Equal);
        assert_eq!(Real::from_f64(0.5).cmp_q(&q(1, 2)), Ordering::Equal);
    }
}
