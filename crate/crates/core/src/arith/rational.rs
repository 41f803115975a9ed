//! Helpers around [`BigRational`], the exact scalar used everywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"` or a plain decimal integer.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| Error::Invalid(format!("not a rational number: {s:?}")))?;
    Ok(r)
}

/// Canonical `"p/q"` (or `"p"` when integral).
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(from_big).collect()
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Lcm of all denominators; multiplying by it clears every fraction.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction. Returns the vector and the positive factor `s` with
/// `v = s * primitive`.
pub fn primitive_direction(v: &[Rational]) -> Option<(Vec<BigInt>, Rational)> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let prim: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    let scale = Rational::new(g, den);
    Some((prim, scale))
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}
