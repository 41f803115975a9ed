//! Slab enumeration of integer points in a box cut by half-spaces and at
//! most one ellipsoid.
//!
//! The last coordinate is swept outermost; for every fixed tail the
//! admissible range of the first coordinate is solved exactly, so the work
//! is proportional to the number of rows, not the number of candidates.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::rational::{self, Rational};
use crate::arith::RatMatrix;
use crate::error::{Error, Result};

/// `normal · y <= rhs`, or `<` when `strict`.
#[derive(Clone, Debug)]
pub(crate) struct Linear {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
    pub strict: bool,
}

/// `q(y - center) <= radius_sq` for the quadratic form `gram`.
#[derive(Clone, Debug)]
pub(crate) struct Quadric {
    pub gram: RatMatrix,
    pub center: Vec<Rational>,
    pub radius_sq: Rational,
}

#[derive(Clone, Debug)]
pub(crate) struct Region {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
    pub linear: Vec<Linear>,
    pub quadric: Option<Quadric>,
}

pub(crate) struct Enumerated {
    pub count: BigInt,
    pub points: Option<Vec<Vec<BigInt>>>,
}

impl Region {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Number of integer points in the bounding box.
    pub fn box_volume(&self) -> BigInt {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| if h < l { BigInt::zero() } else { h - l + 1 })
            .product()
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        let v = self.box_volume();
        if v > BigInt::from(budget) {
            return Err(Error::BudgetExceeded {
                candidates: v.to_string(),
                budget,
            });
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn contains(&self, y: &[BigInt]) -> bool {
        let yr = rational::to_rational_vec(y);
        let in_box = y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h);
        in_box
            && self.linear.iter().all(|c| {
                let s = rational::dot(&c.normal, &yr);
                if c.strict {
                    s < c.rhs
                } else {
                    s <= c.rhs
                }
            })
            && self.quadric.as_ref().is_none_or(|q| {
                let d: Vec<Rational> = yr.iter().zip(&q.center).map(|(a, b)| a - b).collect();
                q.gram.quad(&d) <= q.radius_sq
            })
    }

    /// Inclusive range of the first coordinate for a fixed tail.
    fn first_range(&self, tail: &[BigInt]) -> Option<(BigInt, BigInt)> {
        let mut lo = self.lo[0].clone();
        let mut hi = self.hi[0].clone();
        for c in &self.linear {
            let mut r = c.rhs.clone();
            for (k, t) in tail.iter().enumerate() {
                r -= &c.normal[k + 1] * rational::from_big(t);
            }
            let a = &c.normal[0];
            if a.is_zero() {
                let ok = if c.strict { r.is_positive() } else { !r.is_negative() };
                if !ok {
                    return None;
                }
                continue;
            }
            let bound = &r / a;
            if a.is_positive() {
                // y0 <= bound (or <)
                let b = if c.strict && bound.is_integer() {
                    bound.to_integer() - 1
                } else {
                    rational::floor(&bound)
                };
                hi = hi.min(b);
            } else {
                let b = if c.strict && bound.is_integer() {
                    bound.to_integer() + 1
                } else {
                    rational::ceil(&bound)
                };
                lo = lo.max(b);
            }
            if lo > hi {
                return None;
            }
        }
        if let Some(q) = &self.quadric {
            let (ql, qh) = quadric_range(q, tail)?;
            lo = lo.max(ql);
            hi = hi.min(qh);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Count of one slab and its points, unless more than `limit`.
    fn slab(&self, last: &BigInt, limit: usize) -> (BigInt, Option<Vec<Vec<BigInt>>>) {
        let n = self.dim();
        let mut count = BigInt::zero();
        let mut points = Some(Vec::new());
        if n == 1 {
            if let Some((lo, hi)) = self.first_range(&[]) {
                count += &hi - &lo + 1;
                if count > BigInt::from(limit) {
                    points = None;
                } else if let Some(pts) = points.as_mut() {
                    let mut v = lo;
                    while v <= hi {
                        pts.push(vec![v.clone()]);
                        v += 1;
                    }
                }
            }
            return (count, points);
        }
        // tail = (y_1, ..., y_{n-1}) with y_{n-1} fixed to `last`
        let mut tail: Vec<BigInt> = self.lo[1..].to_vec();
        tail[n - 2] = last.clone();
        if self.lo[1..n - 1].iter().zip(&self.hi[1..n - 1]).any(|(l, h)| l > h) {
            return (count, points);
        }
        loop {
            if let Some((lo, hi)) = self.first_range(&tail) {
                count += &hi - &lo + 1;
                if count > BigInt::from(limit) {
                    points = None;
                }
                if let Some(pts) = points.as_mut() {
                    let mut v = lo;
                    while v <= hi {
                        let mut p = Vec::with_capacity(n);
                        p.push(v.clone());
                        p.extend(tail.iter().cloned());
                        pts.push(p);
                        v += 1;
                    }
                }
            }
            // odometer over y_1 .. y_{n-2}
            let mut k = 0;
            while k + 1 < n - 1 {
                tail[k] += 1;
                if tail[k] <= self.hi[k + 1] {
                    break;
                }
                tail[k] = self.lo[k + 1].clone();
                k += 1;
            }
            if k + 1 >= n - 1 {
                break;
            }
        }
        (count, points)
    }

    /// Counts all integer points, keeping them when there are at most
    /// `retain_limit`.
    pub fn enumerate(&self, retain_limit: usize) -> Enumerated {
        let n = self.dim();
        let last_values: Vec<BigInt> = if n == 1 {
            vec![BigInt::zero()]
        } else {
            let mut v = Vec::new();
            let mut x = self.lo[n - 1].clone();
            while x <= self.hi[n - 1] {
                v.push(x.clone());
                x += 1;
            }
            v
        };
        let slabs: Vec<(BigInt, Option<Vec<Vec<BigInt>>>)> =
            last_values.par_iter().map(|l| self.slab(l, retain_limit)).collect();
        let count: BigInt = slabs.iter().map(|(c, _)| c).sum();
        let points = if count <= BigInt::from(retain_limit) {
            let mut pts: Vec<Vec<BigInt>> = slabs.into_iter().flat_map(|(_, p)| p.unwrap_or_default()).collect();
            pts.sort();
            Some(pts)
        } else {
            None
        };
        Enumerated { count, points }
    }
}

/// Exact integer range of `y_0` on the ellipsoid slice with the given tail.
fn quadric_range(q: &Quadric, tail: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let n = q.center.len();
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    d.push(Rational::zero());
    for (k, t) in tail.iter().enumerate() {
        d.push(rational::from_big(t) - &q.center[k + 1]);
    }
    // q(d + (y0 - c0) e0) = g00 u² + 2 β u + γ, u = y0 - c0
    let g00 = q.gram.get(0, 0).clone();
    let beta: Rational = (1..n).map(|k| q.gram.get(0, k) * &d[k]).sum();
    let gamma = q.gram.quad(&d);
    // (u + β/g00)² <= (β² - g00 (γ - r²)) / g00²
    let disc = (&beta * &beta - &g00 * (&gamma - &q.radius_sq)) / (&g00 * &g00);
    if disc.is_negative() {
        return None;
    }
    let mid = &q.center[0] - &beta / &g00;
    let inside = |y: &BigInt| -> bool {
        let u = rational::from_big(y) - &mid;
        &u * &u <= disc
    };
    let root = rational::floor(&disc).sqrt();
    let mut hi = rational::floor(&mid) + &root + 2;
    while !inside(&hi) && hi > rational::floor(&mid) - &root - 2 {
        hi -= 1;
    }
    let mut lo = rational::ceil(&mid) - &root - 2;
    while !inside(&lo) && lo < hi {
        lo += 1;
    }
    (inside(&lo) && inside(&hi) && lo <= hi).then_some((lo, hi))
}

/// Smallest integer `m >= 0` with `m² >= x`, for rational `x >= 0`.
pub(crate) fn ceil_sqrt(x: &Rational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let mut m = rational::floor(x).sqrt();
    while rational::from_big(&(&m * &m)) < *x {
        m += 1;
    }
    m
}

/// Integer box `[floor(min), ceil(max)]` of rational points.
pub(crate) fn bounding_box(points: &[Vec<Rational>]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = points[0].len();
    let lo = (0..n)
        .map(|k| rational::floor(points.iter().map(|p| &p[k]).min().expect("nonempty")))
        .collect();
    let hi = (0..n)
        .map(|k| rational::ceil(points.iter().map(|p| &p[k]).max().expect("nonempty")))
        .collect();
    (lo, hi)
}

/// Coefficient box of the ellipsoid `q(y - c) <= r²`: `|y_k - c_k|² <= r² (G⁻¹)_kk`.
pub(crate) fn ellipsoid_box(q: &Quadric) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let inv = q.gram.inverse()?;
    let n = q.center.len();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for k in 0..n {
        let ext = ceil_sqrt(&(&q.radius_sq * inv.get(k, k)));
        let e = rational::from_big(&ext);
        lo.push(rational::floor(&(&q.center[k] - &e)));
        hi.push(rational::ceil(&(&q.center[k] + &e)));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn disc_of_radius_three_halves() {
        let q = Quadric {
            gram: RatMatrix::identity(2),
            center: vec![int(0), int(0)],
            radius_sq: rat(9, 4),
        };
        let (lo, hi) = ellipsoid_box(&q).unwrap();
        let r = Region {
            lo,
            hi,
            linear: vec![],
            quadric: Some(q),
        };
        let e = r.enumerate(100);
        assert_eq!(e.count, BigInt::from(9));
        assert_eq!(e.points.unwrap().len(), 9);
    }

    #[test]
    fn strict_constraints() {
        // 0 <= y < 3 in one dimension
        let r = Region {
            lo: vec![BigInt::from(-5)],
            hi: vec![BigInt::from(5)],
            linear: vec![
                Linear {
                    normal: vec![int(-1)],
                    rhs: int(0),
                    strict: false,
                },
                Linear {
                    normal: vec![int(1)],
                    rhs: int(3),
                    strict: true,
                },
            ],
            quadric: None,
        };
        assert_eq!(r.enumerate(10).count, BigInt::from(3));
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(&int(0)), BigInt::zero());
        assert_eq!(ceil_sqrt(&int(4)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&int(5)), BigInt::from(3));
        assert_eq!(ceil_sqrt(&rat(1, 3)), BigInt::from(1));
    }

    #[test]
    fn slab_count_matches_membership_scan() {
        let q = Quadric {
            gram: RatMatrix::new(vec![vec![int(2), int(1), int(0)], vec![int(1), int(3), int(1)], vec![int(0), int(1), int(2)]])
                .unwrap(),
            center: vec![rat(1, 3), rat(-1, 2), rat(2, 5)],
            radius_sq: rat(37, 3),
        };
        let (lo, hi) = ellipsoid_box(&q).unwrap();
        let r = Region {
            lo: lo.clone(),
            hi: hi.clone(),
            linear: vec![Linear {
                normal: vec![int(1), int(-2), int(1)],
                rhs: rat(3, 2),
                strict: true,
            }],
            quadric: Some(q),
        };
        let fast = r.enumerate(10_000);
        let mut slow = Vec::new();
        let mut y = lo.clone();
        loop {
            if r.contains(&y) {
                slow.push(y.clone());
            }
            let mut k = 0;
            while k < 3 {
                y[k] += 1;
                if y[k] <= hi[k] {
                    break;
                }
                y[k] = lo[k].clone();
                k += 1;
            }
            if k == 3 {
                break;
            }
        }
        slow.sort();
        assert_eq!(fast.points.unwrap(), slow);
    }
}
