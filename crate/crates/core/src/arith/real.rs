//! Real-valued expressions with certified enclosures and the comparison
//! procedure used for every verdict.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::radical::RadicalSum;
use super::rational::Rational;

/// Start and cap of the precision-doubling loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 128,
            max_bits: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    /// Enclosures still overlapped at this many bits.
    Inconclusive(u32),
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        }
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// An expression tree over exact radical sums and pi.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Radical(RadicalSum),
    Pi,
    Sum(Vec<Real>),
    Product(Vec<Real>),
    Neg(Box<Real>),
    Recip(Box<Real>),
    Sqrt(Box<Real>),
    Cbrt(Box<Real>),
    /// Angle in `[0, pi]` between vectors with the given inner product and
    /// product of squared norms.
    Angle {
        dot: Rational,
        norm_sq_product: Rational,
    },
}

impl Real {
    pub fn rational(q: Rational) -> Real {
        Real::Radical(RadicalSum::from_rational(q))
    }

    pub fn int(n: i64) -> Real {
        Real::Radical(RadicalSum::from_int(n))
    }

    pub fn pi() -> Real {
        Real::Pi
    }

    pub fn as_radical(&self) -> Option<&RadicalSum> {
        match self {
            Real::Radical(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_radical().and_then(RadicalSum::as_rational)
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Radical(a), Real::Radical(b)) => Real::Radical(a + b),
            _ => Real::Sum(vec![self.clone(), other.clone()]),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Radical(a) => Real::Radical(-a),
            Real::Neg(inner) => (**inner).clone(),
            _ => Real::Neg(Box::new(self.clone())),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Radical(a), Real::Radical(b)) => Real::Radical(a * b),
            _ => Real::Product(vec![self.clone(), other.clone()]),
        }
    }

    pub fn scale(&self, q: &Rational) -> Real {
        self.mul(&Real::rational(q.clone()))
    }

    /// Multiplicative inverse. Single-term radicals stay exact:
    /// `1 / (q sqrt d) = sqrt d / (q d)`.
    pub fn recip(&self) -> Real {
        if let Real::Radical(r) = self {
            if let [(q, d)] = r.terms() {
                let dq = Rational::from_integer(d.clone().into());
                return Real::Radical(RadicalSum::term(
                    (q * &dq).recip(),
                    d.clone(),
                ));
            }
        }
        Real::Recip(Box::new(self.clone()))
    }

    pub fn div(&self, other: &Real) -> Real {
        self.mul(&other.recip())
    }

    pub fn sqrt(&self) -> Real {
        if let Some(q) = self.as_rational() {
            if !q.is_negative() {
                return Real::Radical(RadicalSum::sqrt_of(&q));
            }
        }
        Real::Sqrt(Box::new(self.clone()))
    }

    pub fn cbrt(&self) -> Real {
        Real::Cbrt(Box::new(self.clone()))
    }

    pub fn powi(&self, k: u32) -> Real {
        (0..k).fold(Real::int(1), |acc, _| acc.mul(self))
    }

    pub fn angle(dot: Rational, norm_sq_product: Rational) -> Real {
        Real::Angle {
            dot,
            norm_sq_product,
        }
    }

    /// Certified enclosure at `prec` bits; `None` when an intermediate
    /// division or root is undefined on the current enclosure.
    pub fn enclose(&self, prec: u32) -> Option<Interval> {
        let p = prec;
        Some(match self {
            Real::Radical(r) => r.enclose(p),
            Real::Pi => Interval::pi(p + 8),
            Real::Sum(parts) => {
                let mut acc = Interval::from_int(0, p + 8);
                for part in parts {
                    acc = acc.add(&part.enclose(p)?);
                }
                acc
            }
            Real::Product(parts) => {
                let mut acc = Interval::from_int(1, p + 8);
                for part in parts {
                    acc = acc.mul(&part.enclose(p)?);
                }
                acc
            }
            Real::Neg(inner) => inner.enclose(p)?.neg(),
            Real::Recip(inner) => inner.enclose(p + 8)?.recip()?,
            Real::Sqrt(inner) => inner.enclose(p + 8)?.sqrt()?,
            Real::Cbrt(inner) => inner.enclose(p + 8)?.cbrt(),
            Real::Angle {
                dot,
                norm_sq_product,
            } => Interval::vector_angle(dot, norm_sq_product, p + 8),
        })
    }

    /// Enclosure at the first precision in the doubling schedule that
    /// yields one (falls back to the cap).
    pub fn enclosure(&self, precision: &Precision) -> Option<Interval> {
        let mut bits = precision.start_bits;
        loop {
            if let Some(i) = self.enclose(bits) {
                return Some(i);
            }
            if bits >= precision.max_bits {
                return None;
            }
            bits = (bits * 2).min(precision.max_bits);
        }
    }
}

impl From<RadicalSum> for Real {
    fn from(r: RadicalSum) -> Self {
        Real::Radical(r)
    }
}

impl From<Rational> for Real {
    fn from(q: Rational) -> Self {
        Real::rational(q)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Radical(r) => write!(f, "{r}"),
            Real::Pi => write!(f, "pi"),
            Real::Sum(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Real::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match p {
                        Real::Radical(r) if r.terms().len() > 1 => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            Real::Neg(inner) => write!(f, "-({inner})"),
            Real::Recip(inner) => write!(f, "1/({inner})"),
            Real::Sqrt(inner) => write!(f, "sqrt({inner})"),
            Real::Cbrt(inner) => write!(f, "cbrt({inner})"),
            Real::Angle {
                dot,
                norm_sq_product,
            } => write!(f, "angle({dot}, {norm_sq_product})"),
        }
    }
}

/// Certified three-way comparison.
///
/// `Equal` is only reported when both sides are exact radical sums with the
/// same canonical form; otherwise enclosures are refined by doubling the
/// precision until they separate or the cap is reached.
pub fn certified_compare(x: &Real, y: &Real, precision: &Precision) -> Comparison {
    if let (Some(a), Some(b)) = (x.as_radical(), y.as_radical()) {
        let d = a - b;
        if d.is_zero() {
            return Comparison::Equal;
        }
        return compare_nonzero(&d, precision);
    }
    let mut bits = precision.start_bits;
    loop {
        if let (Some(ex), Some(ey)) = (x.enclose(bits), y.enclose(bits)) {
            if let Some(o) = ex.separated_cmp(&ey) {
                return o.into();
            }
        }
        if bits >= precision.max_bits {
            return Comparison::Inconclusive(bits);
        }
        bits = (bits * 2).min(precision.max_bits);
    }
}

fn compare_nonzero(d: &RadicalSum, precision: &Precision) -> Comparison {
    if let Some(q) = d.as_rational() {
        return q.cmp(&Rational::zero()).into();
    }
    let mut bits = precision.start_bits;
    loop {
        let e = d.enclose(bits);
        if e.lo().is_positive() {
            return Comparison::Greater;
        }
        if e.hi().is_negative() {
            return Comparison::Less;
        }
        if bits >= precision.max_bits {
            return Comparison::Inconclusive(bits);
        }
        bits = (bits * 2).min(precision.max_bits);
    }
}

/// Decides `s >= sqrt(t)` exactly for rationals `s` and `t >= 0`.
pub fn rational_ge_sqrt(s: &Rational, t: &Rational) -> bool {
    !s.is_negative() && s * s >= *t
}

/// `sqrt(n)` for a natural number as a radical sum.
pub fn sqrt_nat(n: u64) -> RadicalSum {
    RadicalSum::term(Rational::one(), BigUint::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn sqrt2_plus_one_vs_two() {
        let x = Real::from(&sqrt_nat(2) + &RadicalSum::from_int(1));
        assert_eq!(certified_compare(&x, &Real::int(2), &p()), Comparison::Greater);
    }

    #[test]
    fn simplex_surface_vs_nine_quarters() {
        let x = Real::from((&RadicalSum::from_int(3) + &sqrt_nat(3)).scale(&rat(1, 2)));
        let y = Real::rational(rat(9, 4));
        assert_eq!(certified_compare(&x, &y, &p()), Comparison::Greater);
        assert_eq!(certified_compare(&y, &x, &p()), Comparison::Less);
    }

    #[test]
    fn canonical_equality() {
        let x = Real::from(sqrt_nat(2).scale(&int(2)));
        let y = Real::from(sqrt_nat(8));
        assert_eq!(certified_compare(&x, &y, &p()), Comparison::Equal);
    }

    #[test]
    fn transcendental_equality_is_inconclusive() {
        let x = Real::Pi.mul(&Real::int(2));
        let y = Real::Pi.add(&Real::Pi);
        let cap = Precision {
            start_bits: 64,
            max_bits: 256,
        };
        assert_eq!(certified_compare(&x, &y, &cap), Comparison::Inconclusive(256));
    }

    #[test]
    fn pi_against_rationals() {
        assert_eq!(
            certified_compare(&Real::Pi, &Real::rational(rat(355, 113)), &p()),
            Comparison::Less
        );
        assert_eq!(
            certified_compare(&Real::Pi, &Real::rational(rat(333, 106)), &p()),
            Comparison::Greater
        );
    }

    #[test]
    fn single_term_reciprocal_is_exact() {
        let r = Real::from(sqrt_nat(3).scale(&int(2))).recip();
        let expect = sqrt_nat(3).scale(&rat(1, 6));
        assert_eq!(r.as_radical(), Some(&expect));
    }

    #[test]
    fn rational_vs_sqrt() {
        assert!(rational_ge_sqrt(&int(1), &rat(1, 3)));
        assert!(!rational_ge_sqrt(&rat(1, 2), &rat(1, 3)));
        assert!(rational_ge_sqrt(&rat(1, 2), &rat(1, 4)));
        assert!(!rational_ge_sqrt(&int(-1), &int(0)));
    }
}
