//! Exact sums `Σ q_i √d_i` with rational `q_i` and distinct squarefree `d_i`.
//!
//! Square roots of distinct squarefree integers are linearly independent over
//! the rationals, so a canonical sum is zero iff it has no terms. Sign
//! determination therefore always terminates under interval refinement.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::factor::square_part;
use super::interval::Interval;
use super::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadicalSum {
    terms: Vec<(Rational, BigUint)>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum { terms: Vec::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        RadicalSum::term(q, BigUint::one())
    }

    pub fn from_int(n: i64) -> Self {
        RadicalSum::from_rational(rational::int(n))
    }

    /// `q * sqrt(radicand)`, canonicalized.
    pub fn term(q: Rational, radicand: BigUint) -> Self {
        if q.is_zero() || radicand.is_zero() {
            return RadicalSum::zero();
        }
        let (s, d) = square_part(&radicand);
        RadicalSum {
            terms: vec![(q * Rational::from_integer(BigInt::from(s)), d)],
        }
    }

    /// `sqrt(r)` for a non-negative rational `r`.
    pub fn sqrt_of(r: &Rational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() {
            return RadicalSum::zero();
        }
        // sqrt(p/q) = sqrt(p q) / q
        let radicand = (r.numer() * r.denom())
            .to_biguint()
            .expect("non-negative radicand");
        RadicalSum::term(Rational::new(BigInt::one(), r.denom().clone()), radicand)
    }

    fn from_map(map: BTreeMap<BigUint, Rational>) -> Self {
        RadicalSum {
            terms: map
                .into_iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|(d, q)| (q, d))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(Rational, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(q, d)] if d.is_one() => Some(q.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum {
            terms: self.terms.iter().map(|(q, d)| (q * r, d.clone())).collect(),
        }
    }

    pub fn enclose(&self, prec: u32) -> Interval {
        let p = prec + 8;
        let mut acc = Interval::from_int(0, p);
        for (q, d) in &self.terms {
            let root = Interval::sqrt_rational(&Rational::from_integer(BigInt::from(d.clone())), p);
            acc = acc.add(&root.mul_rational(q));
        }
        acc
    }

    /// Exact sign, found by refining enclosures from `start_bits` upward.
    pub fn signum(&self, start_bits: u32) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if let Some(q) = self.as_rational() {
            return q.cmp(&Rational::zero());
        }
        if self.terms.iter().all(|(q, _)| q.is_positive()) {
            return Ordering::Greater;
        }
        if self.terms.iter().all(|(q, _)| q.is_negative()) {
            return Ordering::Less;
        }
        let mut bits = start_bits.max(32);
        loop {
            let e = self.enclose(bits);
            if e.lo().is_positive() {
                return Ordering::Greater;
            }
            if e.hi().is_negative() {
                return Ordering::Less;
            }
            // A nonzero canonical sum has a nonzero value, so refinement ends.
            bits *= 2;
        }
    }
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut map: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (q, d) in self.terms.iter().chain(&rhs.terms) {
            *map.entry(d.clone()).or_insert_with(Rational::zero) += q;
        }
        RadicalSum::from_map(map)
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self.terms.iter().map(|(q, d)| (-q, d.clone())).collect(),
        }
    }
}

impl Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs)
    }
}

impl Mul for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut map: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (q1, d1) in &self.terms {
            for (q2, d2) in &rhs.terms {
                let (s, d) = square_part(&(d1 * d2));
                let coeff = q1 * q2 * Rational::from_integer(BigInt::from(s));
                *map.entry(d).or_insert_with(Rational::zero) += coeff;
            }
        }
        RadicalSum::from_map(map)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RadicalSum {
            type Output = RadicalSum;
            fn $m(self, rhs: RadicalSum) -> RadicalSum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -&self
    }
}

impl From<Rational> for RadicalSum {
    fn from(q: Rational) -> Self {
        RadicalSum::from_rational(q)
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (q, d)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            if i == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if d.is_one() {
                write!(f, "{}", rational::format(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{}*sqrt({d})", rational::format(&mag))?;
            }
        }
        Ok(())
    }
}
