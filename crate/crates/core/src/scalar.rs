//! Scalar abstraction shared by the exact and floating-point code paths.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Field-like scalar used by the generic linear algebra and the weakening
/// matrices. Implemented for `f32`, `f64` and [`BigRational`].
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Whether arithmetic on this type is exact. Exact scalars pivot on the
    /// first nonzero entry, inexact ones on the largest magnitude.
    const EXACT: bool;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    const EXACT: bool = true;
}

pub fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

/// `num/den` rendering used in every exact output. Integers keep the `/1`
/// so that parsers never have to special-case them.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Accepts `num/den`, plain integers and finite decimals such as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(n, d));
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| err())
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn ratio_of(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        let r = BigRational::new(BigInt::from(-11), BigInt::from(120));
        assert_eq!(format_rational(&r), "-11/120");
        assert_eq!(parse_rational("-11/120").unwrap(), r);
        assert_eq!(format_rational(&BigRational::one()), "1/1");
    }

    #[test]
    fn decimals_parse_exactly() {
        let r = parse_rational("0.3").unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(10)));
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new(BigInt::from(-5), BigInt::from(4)));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(BigInt::from(7)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
    }
}
