//! Dyadic interval arithmetic with outward rounding.
//!
//! Every operation returns an enclosure of the exact result; endpoints are
//! dyadic rationals `m * 2^e` rounded to the working precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// The dyadic rational `mantissa * 2^exponent`, kept with an odd mantissa.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), pow2(self.exponent.unsigned_abs()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 60 {
            let k = bits - 60;
            (&self.mantissa >> k, self.exponent + k as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        m.to_f64().unwrap_or(0.0) * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        let ma = &a.mantissa << (a.exponent - e) as u64;
        let mb = &b.mantissa << (b.exponent - e) as u64;
        (ma, mb, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mantissa.clone(), self.exponent + k)
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let d = pow2(k);
        let m = match dir {
            Round::Down => self.mantissa.div_floor(&d),
            Round::Up => self.mantissa.div_ceil(&d),
        };
        Dyadic::new(m, self.exponent + k as i64)
    }

    /// `a / b` rounded to about `prec` significant bits.
    pub fn div_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        let shift = (prec as i64 + b.mantissa.bits() as i64 - a.mantissa.bits() as i64 + 2).max(0);
        let num = &a.mantissa << shift as u64;
        let q = match dir {
            Round::Down => num.div_floor(&b.mantissa),
            Round::Up => num.div_ceil(&b.mantissa),
        };
        Dyadic::new(q, a.exponent - b.exponent - shift)
    }

    pub fn from_rational(r: &Rational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::div_round(
            &Dyadic::new(r.numer().clone(), 0),
            &Dyadic::new(r.denom().clone(), 0),
            prec,
            dir,
        )
    }

    /// Square root of a non-negative dyadic, rounded.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut t = (2 * prec as i64 + 2 - self.mantissa.bits() as i64).max(0);
        if (self.exponent - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let m = &self.mantissa << t as u64;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, (self.exponent - t) / 2)
    }

    /// Real cube root, rounded.
    pub fn cbrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        if self.is_negative() {
            let flipped = match dir {
                Round::Down => Round::Up,
                Round::Up => Round::Down,
            };
            return self.neg().cbrt_round(prec, flipped).neg();
        }
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut t = (3 * prec as i64 + 3 - self.mantissa.bits() as i64).max(0);
        while (self.exponent - t).rem_euclid(3) != 0 {
            t += 1;
        }
        let m = &self.mantissa << t as u64;
        let mut r = m.cbrt();
        if dir == Round::Up && &r * &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, (self.exponent - t) / 3)
    }

    /// Floor of `self * 2^w` as an integer.
    fn fixed_point(&self, w: u64) -> BigInt {
        let e = self.exponent + w as i64;
        if e >= 0 {
            &self.mantissa << e as u64
        } else {
            self.mantissa.div_floor(&pow2(e.unsigned_abs()))
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", &self.mantissa << self.exponent as u64)
        } else {
            write!(f, "{}/{}", self.mantissa, pow2(self.exponent.unsigned_abs()))
        }
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Interval {
            lo: d.clone(),
            hi: d,
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    /// Enclosure of `sqrt(r)` for a non-negative rational `r`.
    pub fn sqrt_rational(r: &Rational, prec: u32) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        Interval::from_rational(r, prec + 8).sqrt().expect("non-negative").with_prec(prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn with_prec(mut self, prec: u32) -> Self {
        self.lo = self.lo.round(prec, Round::Down);
        self.hi = self.hi.round(prec, Round::Up);
        self.prec = prec;
        self
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.lo.add(&self.hi).mul_pow2(-1).to_f64()
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Whether the two enclosures share a point.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Ordering when the intervals are separated, `None` when they overlap.
    pub fn separated_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let prec = self.prec.max(other.prec);
        Interval {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
            prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let prec = self.prec.max(other.prec);
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products").round(prec, Round::Down);
        let hi = products.iter().max().expect("four products").round(prec, Round::Up);
        Interval { lo, hi, prec }
    }

    pub fn mul_rational(&self, r: &Rational) -> Interval {
        self.mul(&Interval::from_rational(r, self.prec))
    }

    /// `1 / self`, or `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::from_int(1);
        Some(Interval {
            lo: Dyadic::div_round(&one, &self.hi, self.prec, Round::Down),
            hi: Dyadic::div_round(&one, &self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self.mul(&r))
    }

    /// Square root; negative parts of the interval are clipped at zero.
    /// Returns `None` if the whole interval is negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt_round(self.prec, Round::Down)
        };
        Some(Interval {
            lo,
            hi: self.hi.sqrt_round(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn cbrt(&self) -> Interval {
        Interval {
            lo: self.lo.cbrt_round(self.prec, Round::Down),
            hi: self.hi.cbrt_round(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::from_int(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Enclosure of pi.
    pub fn pi(prec: u32) -> Interval {
        let w = prec as u64 + 64;
        let (s5, e5) = atan_inv_fixed(5, w);
        let (s239, e239) = atan_inv_fixed(239, w);
        let s = s5 * 16 - s239 * 4;
        let e = e5 * 16 + e239 * 4;
        let exp = -(w as i64);
        Interval {
            lo: Dyadic::new(&s - &e, exp).round(prec, Round::Down),
            hi: Dyadic::new(&s + &e, exp).round(prec, Round::Up),
            prec,
        }
    }

    /// Arctangent of a non-negative interval.
    pub fn atan_nonneg(&self) -> Interval {
        assert!(!self.lo.is_negative(), "atan_nonneg on a negative interval");
        let lo = atan_point(&self.lo, self.prec).lo;
        let hi = atan_point(&self.hi, self.prec).hi;
        Interval {
            lo,
            hi,
            prec: self.prec,
        }
    }

    /// The angle in `[0, pi]` between two vectors whose inner product is
    /// `dot` and whose squared norms multiply to `norm_sq_product`.
    pub fn vector_angle(dot: &Rational, norm_sq_product: &Rational, prec: u32) -> Interval {
        assert!(norm_sq_product.is_positive(), "angle with a zero vector");
        let cross_sq = norm_sq_product - dot * dot;
        assert!(!cross_sq.is_negative(), "Cauchy-Schwarz violated");
        if dot.is_zero() {
            return Interval::pi(prec).mul_pow2(-1);
        }
        if cross_sq.is_zero() {
            return if dot.is_positive() {
                Interval::from_int(0, prec)
            } else {
                Interval::pi(prec)
            };
        }
        let z = Interval::sqrt_rational(&(&cross_sq / (dot * dot)), prec + 4);
        let base = z.atan_nonneg().with_prec(prec);
        if dot.is_positive() {
            base
        } else {
            Interval::pi(prec).sub(&base)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    /// Intersection of two enclosures of the same quantity.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Interval {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.prec)
    }
}

/// `atan(1/k) * 2^w` as `(s, e)` with the true value in `[s - e, s + e]`.
fn atan_inv_fixed(k: u64, w: u64) -> (BigInt, BigInt) {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut p = pow2(w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = &p / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        p /= &k2;
        j += 1;
    }
    (sum, BigInt::from(3 * j + 3))
}

/// `atan(x) * 2^w` for `0 <= x <= 1/4`, as `(s, e)` with the true value in `[s - e, s + e]`.
fn atan_small_fixed(x: &Dyadic, w: u64) -> (BigInt, BigInt) {
    let xf = x.fixed_point(w);
    let x2 = (&xf * &xf) >> w;
    let mut p = xf;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = &p / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        p = (&p * &x2) >> w;
        j += 1;
    }
    (sum, BigInt::from(10 * (j + 2)))
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::from_int(0, prec);
    }
    let one = Dyadic::from_int(1);
    let quarter = Dyadic::new(BigInt::one(), -2);
    if x > &one {
        let inv = Interval::point(x.clone(), prec + 4).recip().expect("x > 1");
        let half_pi = Interval::pi(prec + 4).mul_pow2(-1);
        return half_pi.sub(&inv.atan_nonneg()).with_prec(prec);
    }
    if x <= &quarter {
        let w = prec as u64 + 64;
        let (s, e) = atan_small_fixed(x, w);
        let exp = -(w as i64);
        return Interval {
            lo: Dyadic::new(&s - &e, exp).round(prec, Round::Down),
            hi: Dyadic::new(&s + &e, exp).round(prec, Round::Up),
            prec,
        };
    }
    // atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
    let p = prec + 8;
    let xi = Interval::point(x.clone(), p);
    let one_i = Interval::from_int(1, p);
    let denom = one_i.add(&one_i.add(&xi.mul(&xi)).sqrt().expect("positive"));
    let reduced = xi.div(&denom).expect("positive denominator");
    reduced.atan_nonneg().mul_pow2(1).with_prec(prec)
}
