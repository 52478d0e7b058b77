//! High-precision real arithmetic for the analysis quantities (θ, repeat
//! counts, entropies, running-time bases).
//!
//! Values are binary floating point with [`PRECISION_BITS`] bits of mantissa
//! (about 77 decimal digits), well beyond the 30 digits the analysis needs.
//! Rational inputs are converted exactly up to that precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::ExactRational;

/// Mantissa bits for every operation.
pub const PRECISION_BITS: usize = 256;

/// Decimal digits guaranteed by [`PRECISION_BITS`] (⌊256·log₁₀2⌋ − 1).
pub const PRECISION_DIGITS: usize = 76;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real number carried to [`PRECISION_BITS`] bits.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

fn checked(x: BigFloat, what: &str) -> Result<Real> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::Parameter(format!("{what} is not a finite real")));
    }
    Ok(Real(x))
}

impl Real {
    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, PRECISION_BITS))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        match i64::try_from(v) {
            Ok(small) => Self::from_i64(small),
            Err(_) => Real(with_cc(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, PRECISION_BITS, RM, cc))),
        }
    }

    pub fn from_rational(q: &ExactRational) -> Self {
        Self::from_bigint(&q.numer()).div(&Self::from_bigint(&q.denom()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).div(&Self::from_i64(den))
    }

    /// Parse a decimal literal such as `0.001` or `1e-7`, or a fraction `a/b`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let den: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Self::from_bigint(&num).div(&Self::from_bigint(&den)));
        }
        let ok = !s.is_empty()
            && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+'))
            && s.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::Parse(format!("not a number: {s:?}")));
        }
        let v = with_cc(|cc| BigFloat::parse(s, Radix::Dec, PRECISION_BITS, RM, cc));
        checked(v, s).map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Real(self.0.add(&rhs.0, PRECISION_BITS, RM))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Real(self.0.sub(&rhs.0, PRECISION_BITS, RM))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Real(self.0.mul(&rhs.0, PRECISION_BITS, RM))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Real(self.0.div(&rhs.0, PRECISION_BITS, RM))
    }

    pub fn neg(&self) -> Self {
        Real(self.0.neg())
    }

    pub fn powi(&self, n: usize) -> Self {
        Real(self.0.powi(n, PRECISION_BITS, RM))
    }

    /// Natural logarithm; fails for non-positive input.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Parameter("logarithm of a non-positive number".into()));
        }
        checked(with_cc(|cc| self.0.ln(PRECISION_BITS, RM, cc)), "ln")
    }

    pub fn log2(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Parameter("logarithm of a non-positive number".into()));
        }
        checked(with_cc(|cc| self.0.log2(PRECISION_BITS, RM, cc)), "log2")
    }

    pub fn exp(&self) -> Result<Self> {
        checked(with_cc(|cc| self.0.exp(PRECISION_BITS, RM, cc)), "exp")
    }

    /// `self^e` for positive `self`, via `exp(e·ln self)`.
    pub fn pow(&self, e: &Self) -> Result<Self> {
        self.ln()?.mul(e).exp()
    }

    /// `2^e`.
    pub fn exp2(e: &Self) -> Result<Self> {
        Self::from_i64(2).pow(e)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn max(self, rhs: Self) -> Self {
        if rhs > self {
            rhs
        } else {
            self
        }
    }

    /// `⌈self⌉` as an exact integer.
    pub fn ceil_bigint(&self) -> Result<BigInt> {
        let c = self.0.ceil();
        if c.is_nan() || c.is_inf() {
            return Err(Error::Parameter("ceiling of a non-finite value".into()));
        }
        if c.is_zero() {
            return Ok(BigInt::zero());
        }
        let (words, _, sign, exponent, _) = c.as_raw_parts().expect("finite value");
        // value = 0.m × 2^e with the mantissa spread over all stored words.
        let mut mant = BigInt::zero();
        for &w in words.iter().rev() {
            mant = (mant << 64) + BigInt::from(w);
        }
        let shift = exponent as i64 - 64 * words.len() as i64;
        let mag = if shift >= 0 { mant << shift as usize } else { mant >> (-shift) as usize };
        Ok(if sign == Sign::Neg { -mag } else { mag })
    }

    /// `⌊self⌋` as an exact integer.
    pub fn floor_bigint(&self) -> Result<BigInt> {
        Ok(-self.neg().ceil_bigint()?)
    }

    /// Nearest `f64` (for display and loose comparisons only).
    pub fn to_f64(&self) -> f64 {
        self.to_sci(20).parse().unwrap_or(f64::NAN)
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.891e0`.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let digits = digits.clamp(1, PRECISION_DIGITS);
        let s = with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let neg = mant.starts_with('-');
        let body: String = mant.trim_start_matches('-').chars().filter(|c| c.is_ascii_digit()).collect();
        let point = mant.trim_start_matches('-').find('.').unwrap_or(body.len());
        let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
        // Normalize to d.ddd × 10^e10 and round half up on the decimal digits.
        let lead = body.find(|c| c != '0').unwrap_or(0);
        let mut sig: Vec<u8> = body.bytes().skip(lead).map(|b| b - b'0').collect();
        let mut e10 = exp + point as i64 - lead as i64 - 1;
        sig.resize(sig.len().max(digits + 1), 0);
        let round_up = sig[digits] >= 5;
        sig.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    sig.insert(0, 1);
                    sig.truncate(digits);
                    e10 += 1;
                    break;
                }
                i -= 1;
                if sig[i] == 9 {
                    sig[i] = 0;
                } else {
                    sig[i] += 1;
                    break;
                }
            }
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + sig[0]) as char);
        if digits > 1 {
            out.push('.');
            out.extend(sig[1..].iter().map(|d| (b'0' + d) as char));
        }
        out.push_str(&format!("e{e10}"));
        out
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(f.precision().unwrap_or(30)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_functions() {
        let two = Real::from_i64(2);
        assert_eq!(two.log2().unwrap(), Real::from_i64(1));
        let e = Real::from_i64(1).exp().unwrap();
        assert_eq!(e.to_sci(20), "2.7182818284590452354e0");
        assert!(Real::from_i64(0).ln().is_err());
        let third = Real::from_ratio(1, 3);
        assert_eq!(third.to_sci(5), "3.3333e-1");
        assert_eq!(Real::from_ratio(-2, 3).to_sci(3), "-6.67e-1");
    }

    #[test]
    fn ceilings() {
        assert_eq!(Real::from_ratio(7, 2).ceil_bigint().unwrap(), BigInt::from(4));
        assert_eq!(Real::from_i64(24).ceil_bigint().unwrap(), BigInt::from(24));
        assert_eq!(Real::from_ratio(-7, 2).ceil_bigint().unwrap(), BigInt::from(-3));
        let big = Real::from_i64(10).powi(30);
        assert_eq!(big.ceil_bigint().unwrap(), BigInt::from(10).pow(30));
        assert_eq!(Real::from_ratio(1, 1000).ceil_bigint().unwrap(), BigInt::from(1));
        assert_eq!(Real::from_ratio(7, 2).floor_bigint().unwrap(), BigInt::from(3));
        assert_eq!(Real::from_ratio(-7, 2).floor_bigint().unwrap(), BigInt::from(-4));
    }

    #[test]
    fn parsing() {
        assert_eq!(Real::parse("1/1000").unwrap(), Real::from_ratio(1, 1000));
        assert!((Real::parse("0.001").unwrap().to_f64() - 0.001).abs() < 1e-18);
        assert!(Real::parse("abc").is_err());
        assert!(Real::parse("1/0").is_err());
    }

    #[test]
    fn rounding_carries() {
        assert_eq!(Real::parse("9.9996").unwrap().to_sci(4), "1.000e1");
    }
}
