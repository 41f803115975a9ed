//! Integer and rational matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_rows(&big).expect("rectangular literal")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] -= q * row[source]`
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[source * self.cols + c].clone();
            self.data[target * self.cols + c] -= q * s;
        }
    }

    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = self.data[r * self.cols + source].clone();
            self.data[r * self.cols + target] -= q * s;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Invalid("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let v = (a.get(i, j) * &pivot - &aik * a.get(k, j)) / &prev;
                    a.data[i * n + j] = v;
                }
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }

    /// Row-style lower echelon form with its unimodular transform.
    ///
    /// Columns are processed right to left; the pivot of column `j` lands on
    /// the lowest free row and entries below a pivot are reduced into
    /// `[0, pivot)`. Returns `(H, U, pivots)` with `H = U * self` and
    /// `pivots` listing `(row, col)` pairs.
    pub fn lower_echelon(&self) -> (IntMatrix, IntMatrix, Vec<(usize, usize)>) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut target = self.rows;
        for col in (0..self.cols).rev() {
            if target == 0 {
                break;
            }
            let t = target - 1;
            loop {
                let best = (0..=t)
                    .filter(|&r| !h.get(r, col).is_zero())
                    .min_by_key(|&r| h.get(r, col).abs());
                let Some(best) = best else { break };
                h.swap_rows(best, t);
                u.swap_rows(best, t);
                let mut clean = true;
                for r in 0..t {
                    if h.get(r, col).is_zero() {
                        continue;
                    }
                    let q = h.get(r, col).div_floor(h.get(t, col));
                    h.row_axpy(r, t, &q);
                    u.row_axpy(r, t, &q);
                    if !h.get(r, col).is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if h.get(t, col).is_zero() {
                continue;
            }
            if h.get(t, col).is_negative() {
                h.negate_row(t);
                u.negate_row(t);
            }
            for r in t + 1..self.rows {
                let q = h.get(r, col).div_floor(h.get(t, col));
                h.row_axpy(r, t, &q);
                u.row_axpy(r, t, &q);
            }
            pivots.push((t, col));
            target = t;
        }
        (h, u, pivots)
    }

    /// Hermite normal form `H = U * self` (lower triangular for square input)
    /// together with the unimodular `U`.
    pub fn hermite_normal_form(&self) -> Result<(IntMatrix, IntMatrix)> {
        let (h, u, pivots) = self.lower_echelon();
        if pivots.len() < self.rows {
            return Err(Error::DegenerateBasis);
        }
        Ok((h, u))
    }

    /// Smith invariants `d_1 | d_2 | ... | d_n` of a nonsingular square matrix.
    pub fn smith_invariants(&self) -> Result<Vec<BigInt>> {
        if !self.is_square() {
            return Err(Error::Invalid("Smith form of a non-square matrix".into()));
        }
        if self.det()?.is_zero() {
            return Err(Error::Singular);
        }
        let mut a = self.clone();
        let n = self.rows;
        let mut out = Vec::with_capacity(n);
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        let v = a.get(i, j);
                        if v.is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let (bi, bj) = best.expect("nonsingular matrix keeps a nonzero entry");
                a.swap_rows(t, bi);
                a.swap_cols(t, bj);
                let mut clean = true;
                for i in t + 1..n {
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    a.row_axpy(i, t, &q);
                    clean &= a.get(i, t).is_zero();
                }
                for j in t + 1..n {
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    a.col_axpy(j, t, &q);
                    clean &= a.get(t, j).is_zero();
                }
                if !clean {
                    continue;
                }
                let p = a.get(t, t).clone();
                let offender = (t + 1..n)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
                match offender {
                    Some((i, _)) => a.row_axpy(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            out.push(a.get(t, t).abs());
        }
        Ok(out)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn det(m: &IntMatrix) -> Result<BigInt> {
    m.det()
}

pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    m.hermite_normal_form()
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<Vec<BigInt>> {
    m.smith_invariants()
}

/// Basis of the integer lattice `{y : c·y = 0}` for a nonzero integer `c`.
///
/// Obtained from the unimodular transform that reduces `c` (as a column) to
/// `±gcd(c) e_n`: the first `n - 1` rows of that transform annihilate `c`.
pub fn integer_kernel_basis(c: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = c.len();
    let col: Vec<Vec<BigInt>> = c.iter().map(|x| vec![x.clone()]).collect();
    let m = IntMatrix::from_rows(&col).expect("column vector");
    let (_, u, _) = m.lower_echelon();
    (0..n.saturating_sub(1)).map(|r| u.row(r).to_vec()).collect()
}

/// Dense rational matrix, rows as vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: Vec<Vec<Rational>>,
    cols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(RatMatrix { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        RatMatrix { rows, cols: n }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Rational::from_integer).collect())
                .collect(),
            cols: m.cols(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RatMatrix {
            rows,
            cols: self.rows.len(),
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.n_rows(), "matrix product shape");
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect();
        RatMatrix {
            rows,
            cols: other.cols,
        }
    }

    /// Row vector times matrix: `v * self`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cols];
        for (vi, row) in v.iter().zip(&self.rows) {
            if vi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += vi * x;
            }
        }
        out
    }

    /// Matrix times column vector: `self * v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Quadratic form `vᵀ self v`.
    pub fn quad(&self, v: &[Rational]) -> Rational {
        let mv = self.mul_vec(v);
        mv.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mv = self.mul_vec(v);
        mv.iter().zip(u).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..a.len() {
                if i == r || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..self.cols {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            RatMatrix {
                rows: a,
                cols: self.cols,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.rows[i][f].clone();
                }
                x
            })
            .collect()
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows.len(), self.cols, "determinant of a non-square matrix");
        let mut a = self.rows.clone();
        let n = a.len();
        let mut d = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                d = -d;
            }
            let piv = a[c][c].clone();
            d *= &piv;
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] / &piv;
                for j in c..n {
                    let s = &a[c][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        d
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return Err(Error::Invalid("inverse of a non-square matrix".into()));
        }
        let aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let (red, pivots) = RatMatrix {
            rows: aug,
            cols: 2 * n,
        }
        .rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(RatMatrix {
            rows: red.rows.into_iter().map(|r| r[n..].to_vec()).collect(),
            cols: n,
        })
    }

    /// Solves the row-vector system `x * self = b`.
    pub fn solve_left(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.inverse()?.vec_mul(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn determinant_examples() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), BigInt::one());
        assert_eq!(IntMatrix::from_i64(&[&[2, 0], &[1, 2]]).det().unwrap(), BigInt::from(4));
        // (e1, e2, 5(1,1,1))
        let m = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[5, 5, 5]]);
        assert_eq!(m.det().unwrap(), BigInt::from(5));
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det().unwrap(), BigInt::from(-1));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(singular.det().unwrap().is_zero());
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = IntMatrix::identity(3).hermite_normal_form().unwrap();
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));

        let m = IntMatrix::from_i64(&[&[2, 0], &[1, 2]]);
        let (h, u) = m.hermite_normal_form().unwrap();
        assert_eq!(u.mul(&m).unwrap(), h);
        assert!(h.get(0, 1).is_zero());
        assert!(h.get(0, 0).is_positive() && h.get(1, 1).is_positive());
        assert_eq!(h.get(0, 0) * h.get(1, 1), BigInt::from(4));
        assert_eq!(u.det().unwrap().abs(), BigInt::one());

        let p = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (h, u) = p.hermite_normal_form().unwrap();
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_rejects_rank_deficient() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.hermite_normal_form(), Err(Error::DegenerateBasis));
    }

    #[test]
    fn smith_examples() {
        let one = BigInt::one();
        assert_eq!(IntMatrix::identity(3).smith_invariants().unwrap(), vec![one.clone(); 3]);
        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(d.smith_invariants().unwrap(), vec![BigInt::from(2), BigInt::from(4)]);
        let m = IntMatrix::from_i64(&[&[2, 0], &[1, 2]]);
        assert_eq!(m.smith_invariants().unwrap(), vec![one, BigInt::from(4)]);
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.smith_invariants(), Err(Error::Singular));
    }

    #[test]
    fn kernel_basis_of_primitive_normal() {
        let c: Vec<BigInt> = [1, 2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let k = integer_kernel_basis(&c);
        assert_eq!(k.len(), 2);
        for row in &k {
            let dot: BigInt = row.iter().zip(&c).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        // Together with any y with c·y = 1 the rows form a unimodular basis.
        let mut full = k.clone();
        full.push(vec![BigInt::one(), BigInt::zero(), BigInt::zero()]);
        assert_eq!(IntMatrix::from_rows(&full).unwrap().det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn rational_inverse_and_det() {
        let b = RatMatrix::new(vec![vec![int(1), int(0)], vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert_eq!(b.det(), rat(1, 2));
        let inv = b.inverse().unwrap();
        assert_eq!(b.mul(&inv), RatMatrix::identity(2));
        let sing = RatMatrix::new(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
        assert_eq!(sing.kernel().len(), 1);
    }
}
