//! Exact enumeration of lattice vectors in ellipsoids, driven by the Gram
//! matrix. All bounds are exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{self, Rational};
use crate::arith::{IntMatrix, RatMatrix};

/// Gram–Schmidt data of a Gram matrix: `q(y) = Σ_j b[j] (y_j + Σ_{i>j} mu[i][j] y_i)^2`.
pub(crate) struct GramSchmidt {
    pub mu: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

pub(crate) fn gram_schmidt(gram: &RatMatrix) -> GramSchmidt {
    let n = gram.n_rows();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = gram.get(i, j).clone();
            for l in 0..j {
                v -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = v / &b[j];
        }
        let mut v = gram.get(i, i).clone();
        for l in 0..i {
            v -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        b[i] = v;
    }
    GramSchmidt { mu, b }
}

fn transformed_gram(t: &IntMatrix, gram: &RatMatrix) -> RatMatrix {
    let tr = RatMatrix::from_int(t);
    tr.mul(gram).mul(&tr.transpose())
}

/// LLL reduction (δ = 3/4) of the basis described by `gram`.
///
/// Returns the unimodular `T` (new basis = `T * old`) and the reduced Gram
/// matrix. Used only to shorten enumeration; correctness never depends on
/// the reduction quality.
pub(crate) fn lll(gram: &RatMatrix) -> (IntMatrix, RatMatrix) {
    let n = gram.n_rows();
    let mut t = IntMatrix::identity(n);
    if n <= 1 {
        return (t, gram.clone());
    }
    let delta = rational::rat(3, 4);
    let mut g = gram.clone();
    let mut k = 1;
    let mut rows = t.to_rows();
    while k < n {
        for j in (0..k).rev() {
            let gs = gram_schmidt(&g);
            let q = round_half_up(&gs.mu[k][j]);
            if !q.is_zero() {
                let src = rows[j].clone();
                for (x, s) in rows[k].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
                t = IntMatrix::from_rows(&rows).expect("square");
                g = transformed_gram(&t, gram);
            }
        }
        let gs = gram_schmidt(&g);
        let lhs = gs.b[k].clone();
        let rhs = (&delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            t = IntMatrix::from_rows(&rows).expect("square");
            g = transformed_gram(&t, gram);
            k = (k - 1).max(1);
        }
    }
    (t, g)
}

fn round_half_up(r: &Rational) -> BigInt {
    rational::floor(&(r + rational::rat(1, 2)))
}

/// All integer `y` with `q(y - center) <= radius_sq`, paired with that value.
pub(crate) fn enumerate_within(
    gram: &RatMatrix,
    center: &[Rational],
    radius_sq: &Rational,
) -> Vec<(Vec<BigInt>, Rational)> {
    let n = gram.n_rows();
    let gs = gram_schmidt(gram);
    let mut out = Vec::new();
    if n == 0 || radius_sq.is_negative() {
        return out;
    }
    let mut y = vec![BigInt::zero(); n];
    descend(&gs, center, n - 1, radius_sq.clone(), &mut y, &mut out, radius_sq);
    out
}

fn descend(
    gs: &GramSchmidt,
    center: &[Rational],
    j: usize,
    rem: Rational,
    y: &mut Vec<BigInt>,
    out: &mut Vec<(Vec<BigInt>, Rational)>,
    radius_sq: &Rational,
) {
    let n = y.len();
    let mut shift = Rational::zero();
    for i in j + 1..n {
        shift += &gs.mu[i][j] * (rational::from_big(&y[i]) - &center[i]);
    }
    let c = &center[j] - shift;
    let bound = &rem / &gs.b[j];
    let r = rational::floor(&bound).sqrt() + BigInt::one();
    let lo = rational::floor(&c) - &r;
    let hi = rational::ceil(&c) + &r;
    let mut v = lo;
    while v <= hi {
        let diff = rational::from_big(&v) - &c;
        let val = &gs.b[j] * &diff * &diff;
        if val <= rem {
            y[j] = v.clone();
            let left = &rem - &val;
            if j == 0 {
                out.push((y.clone(), radius_sq - &left));
            } else {
                descend(gs, center, j - 1, left, y, out, radius_sq);
            }
        }
        v += 1;
    }
    y[j] = BigInt::zero();
}

/// Maps coefficients in the reduced basis back to the original basis.
pub(crate) fn back_transform(t: &IntMatrix, y: &[BigInt]) -> Vec<BigInt> {
    let n = t.cols();
    (0..n)
        .map(|c| (0..t.rows()).fold(BigInt::zero(), |acc, r| acc + &y[r] * t.get(r, c)))
        .collect()
}

/// Fixes the sign so that the first nonzero coordinate is positive.
pub(crate) fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}
