//! Exact rationals and their text forms.

use alloc::format;
use alloc::string::String;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// Parses `"3/10"`, `"0.3"`, `"1"` or `"-2.5e-3"` into an exact rational.
/// Decimal input is read as the exact decimal value, not as the nearest
/// binary float.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_digits.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10u8));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Ok(if negative { -value } else { value })
}

/// `"num/den"` in lowest terms; the denominator is always written.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &BigRational) -> f64 {
    // Ratio::to_f64 handles numerators and denominators beyond f64 range.
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn from_u64(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn from_biguint(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `x^e` for a non-negative integer exponent.
pub fn powu(x: &BigRational, e: u64) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// Checks `0 ≤ p ≤ 1`.
pub fn check_probability(p: &BigRational, what: &str) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "{what} must lie in [0, 1], got {}",
            format_rational(p)
        )));
    }
    Ok(())
}
