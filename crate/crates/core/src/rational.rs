//! Exact rational scalars.
//!
//! Every coefficient in the engine is a [`Q`], an arbitrary precision
//! fraction kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qu(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"-a"` or `"a/b"` exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

pub fn pow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Falling factorial r (r-1) ... (r-j+1).
pub fn falling(r: usize, j: usize) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(r - i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

/// Rational square root when it exists.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_q(" -4 ").unwrap(), q(-4));
        assert_eq!(parse_q("6/4").unwrap(), frac(3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&q(9)), Some(q(3)));
        assert_eq!(sqrt_exact(&frac(4, 9)), Some(frac(2, 3)));
        assert_eq!(sqrt_exact(&q(2)), None);
        assert_eq!(sqrt_exact(&q(-4)), None);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }
}
