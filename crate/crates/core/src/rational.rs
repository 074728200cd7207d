//! Exact rational helpers shared by the counting and certificate code.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_u128(v: u128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `"p/q"`, including integers (`"4/1"`).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge operands so the quotient stays representable.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            let q = if d == 0.0 { f64::INFINITY } else { n / d };
            if r.is_negative() {
                -q
            } else {
                q
            }
        }
    }
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/3").unwrap(), frac(2, 3));
        assert_eq!(parse(" 4 ").unwrap(), int(4));
        assert_eq!(format(&int(4)), "4/1");
        assert_eq!(format(&frac(-6, 4)), "-3/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 2), BigInt::from(45));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn huge_to_f64() {
        let big = (pow(&int(10), 400) + int(1)) / pow(&int(10), 399);
        assert!((to_f64(&big) - 10.0).abs() < 1e-9);
        let tiny = int(1) / (pow(&int(10), 400) + int(1));
        assert_eq!(to_f64(&tiny), 0.0);
    }
}
