//! Named example bodies, random corpora and the body-spec file format.

mod rng;
mod spec;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::arith::IntMatrix;
use crate::counting::Body;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::polytope::LatticePolytope;

pub use rng::Stream;
pub use spec::{body_from_json, body_to_json, read_body_spec, write_body_spec};

pub const RETRY_LIMIT: usize = 1000;

fn unit(n: usize, i: usize, scale: i64) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[i] = BigInt::from(scale);
    e
}

/// `conv{0, k e_1, e_2, ..., e_n}` over `Z^n`.
pub fn simplex_sk(n: usize, k: u64) -> Result<LatticePolytope> {
    if n == 0 || k == 0 {
        return Err(Error::Invalid("simplex_sk needs n >= 1 and k >= 1".into()));
    }
    let mut pts = vec![vec![BigInt::zero(); n]];
    pts.push(unit(n, 0, k as i64));
    for i in 1..n {
        pts.push(unit(n, i, 1));
    }
    LatticePolytope::hull(&pts, Arc::new(Lattice::integer(n)))
}

/// `conv{0, e_1, ..., e_{n-1}, m v}` with `v = e_1 + ... + e_n`.
pub fn reeve_tm(n: usize, m: u64) -> Result<LatticePolytope> {
    if n <= 2 {
        return Err(Error::Invalid("reeve_tm needs n > 2".into()));
    }
    if m == 0 {
        return Err(Error::Invalid("reeve_tm needs m >= 1".into()));
    }
    let mut pts = vec![vec![BigInt::zero(); n]];
    for i in 0..n - 1 {
        pts.push(unit(n, i, 1));
    }
    pts.push(vec![BigInt::from(m); n]);
    LatticePolytope::hull(&pts, Arc::new(Lattice::integer(n)))
}

/// `t + P` after checking `t ∉ Λ`.
pub fn translate_off_lattice(p: LatticePolytope, t: Vec<Rational>) -> Result<Body> {
    if rational::is_integral(&t) {
        return Err(Error::Invalid("translate lies in the lattice".into()));
    }
    Body::translated(p, t)
}

/// `½e₁ + P`.
pub fn half_translate(p: LatticePolytope) -> Result<Body> {
    let n = p.dim();
    let mut t = vec![Rational::zero(); n];
    t[0] = rational::rat(1, 2);
    translate_off_lattice(p, t)
}

/// `½v + T_m` with `v = (1, ..., 1)`.
pub fn reeve_half_translate(n: usize, m: u64) -> Result<Body> {
    translate_off_lattice(reeve_tm(n, m)?, vec![rational::rat(1, 2); n])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[serde(alias = "simplex_Sk")]
    SimplexSk,
    #[serde(alias = "reeve_Tm")]
    ReeveTm,
    RandomHull,
    RandomLattice,
    Translated,
}

/// Description of a corpus; generation is a pure function of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub family: Family,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Items for the random families.
    pub count: usize,
    /// Inclusive range of `k` for `S_k` and of `m` for `T_m`.
    pub param_min: u64,
    pub param_max: u64,
    /// Points drawn per random hull.
    pub points: usize,
    /// Coordinates are drawn from `[0, coord_bound]`.
    pub coord_bound: i64,
    /// Target range of `|det Λ|` for random lattices.
    pub det_min: u64,
    pub det_max: u64,
    /// Largest translate denominator.
    pub max_denominator: i64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            family: Family::RandomHull,
            min_dim: 2,
            max_dim: 3,
            count: 50,
            param_min: 1,
            param_max: 10,
            points: 12,
            coord_bound: 6,
            det_min: 1,
            det_max: 8,
            max_denominator: 16,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusItem {
    pub index: usize,
    pub label: String,
    pub body: Body,
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.min_dim == 0 || self.min_dim > self.max_dim {
            return Err(Error::Invalid("dimension range must satisfy 1 <= min_dim <= max_dim".into()));
        }
        if self.param_min == 0 || self.param_min > self.param_max {
            return Err(Error::Invalid("parameter range must satisfy 1 <= param_min <= param_max".into()));
        }
        if self.coord_bound < 1 {
            return Err(Error::Invalid("coord_bound must be positive".into()));
        }
        if self.det_min == 0 || self.det_min > self.det_max {
            return Err(Error::Invalid("det range must satisfy 1 <= det_min <= det_max".into()));
        }
        if !(2..=16).contains(&self.max_denominator) {
            return Err(Error::Invalid("max_denominator must lie in 2..=16".into()));
        }
        if self.family == Family::ReeveTm && self.min_dim < 3 {
            return Err(Error::Invalid("reeve_tm needs min_dim >= 3".into()));
        }
        Ok(())
    }

    /// Generates the corpus. Identical specs give identical corpora.
    pub fn generate(&self) -> Result<Vec<CorpusItem>> {
        self.validate()?;
        let mut items = Vec::new();
        match self.family {
            Family::SimplexSk | Family::ReeveTm => {
                for n in self.min_dim..=self.max_dim {
                    for k in self.param_min..=self.param_max {
                        let (label, p) = if self.family == Family::SimplexSk {
                            (format!("S_{k} n={n}"), simplex_sk(n, k)?)
                        } else {
                            (format!("T_{k} n={n}"), reeve_tm(n, k)?)
                        };
                        items.push(CorpusItem {
                            index: items.len(),
                            label,
                            body: Body::polytope(p),
                        });
                    }
                }
            }
            Family::RandomHull | Family::RandomLattice | Family::Translated => {
                for index in 0..self.count {
                    items.push(self.random_item(index)?);
                }
            }
        }
        Ok(items)
    }

    fn random_item(&self, index: usize) -> Result<CorpusItem> {
        let mut s = Stream::for_item(self.seed, index);
        let n = s.range_usize(self.min_dim, self.max_dim);
        match self.family {
            Family::RandomHull => {
                let p = random_hull(&mut s, n, self.points, self.coord_bound, Arc::new(Lattice::integer(n)))?;
                Ok(CorpusItem {
                    index,
                    label: format!("hull #{index} n={n}"),
                    body: Body::polytope(p),
                })
            }
            Family::RandomLattice => {
                let l = Arc::new(random_lattice(&mut s, n, self.det_min, self.det_max)?);
                let p = random_hull(&mut s, n, self.points, self.coord_bound, l.clone())?;
                Ok(CorpusItem {
                    index,
                    label: format!("lattice #{index} n={n} det={}", rational::format(l.det())),
                    body: Body::polytope(p),
                })
            }
            Family::Translated => {
                let p = random_hull(&mut s, n, self.points, self.coord_bound, Arc::new(Lattice::integer(n)))?;
                let t = random_translate(&mut s, n, self.max_denominator)?;
                Ok(CorpusItem {
                    index,
                    label: format!("translate #{index} n={n}"),
                    body: translate_off_lattice(p, t)?,
                })
            }
            _ => unreachable!("deterministic families have no random items"),
        }
    }
}

/// Hull of `count` uniform points of `[0, bound]^n`, redrawn until it is
/// full-dimensional.
pub fn random_hull(
    s: &mut Stream,
    n: usize,
    count: usize,
    bound: i64,
    lattice: Arc<Lattice>,
) -> Result<LatticePolytope> {
    for _ in 0..RETRY_LIMIT {
        let pts: Vec<Vec<BigInt>> = (0..count.max(n + 1))
            .map(|_| (0..n).map(|_| BigInt::from(s.range(0, bound))).collect())
            .collect();
        match LatticePolytope::hull(&pts, lattice.clone()) {
            Ok(p) => return Ok(p),
            Err(Error::DegenerateHull) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryLimit(RETRY_LIMIT))
}

/// A random unimodular matrix: a product of elementary row operations,
/// swaps and sign changes.
pub fn random_unimodular(s: &mut Stream, n: usize) -> IntMatrix {
    let mut rows = IntMatrix::identity(n).to_rows();
    if n == 1 {
        if s.coin() {
            rows[0][0] = -BigInt::one();
        }
        return IntMatrix::from_rows(&rows).expect("square");
    }
    for _ in 0..3 * n {
        let i = s.range_usize(0, n - 1);
        let mut j = s.range_usize(0, n - 2);
        if j >= i {
            j += 1;
        }
        match s.range(0, 3) {
            0 => rows.swap(i, j),
            1 => rows[i].iter_mut().for_each(|x| *x = -x.clone()),
            _ => {
                let c = BigInt::from(s.range(-2, 2));
                let src = rows[j].clone();
                for (x, y) in rows[i].iter_mut().zip(&src) {
                    *x += &c * y;
                }
            }
        }
    }
    IntMatrix::from_rows(&rows).expect("square")
}

/// Either a unimodular image of `Z^n` (when `det_min == 1` and a coin
/// says so) or an integer basis with `|det|` in `[det_min, det_max]`.
pub fn random_lattice(s: &mut Stream, n: usize, det_min: u64, det_max: u64) -> Result<Lattice> {
    if det_min == 1 && s.coin() {
        return Lattice::from_int_rows(&random_unimodular(s, n).to_rows());
    }
    for _ in 0..RETRY_LIMIT {
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..n).map(|_| BigInt::from(s.range(-3, 3))).collect())
            .collect();
        let d = IntMatrix::from_rows(&rows)?.det()?;
        let a = d.magnitude();
        if *a >= det_min.into() && *a <= det_max.into() {
            return Lattice::from_int_rows(&rows);
        }
    }
    Err(Error::RetryLimit(RETRY_LIMIT))
}

/// `t ∈ (1/q) Z^n \ Z^n` with `2 <= q <= max_denominator`, coordinates in
/// `[0, 1)`.
pub fn random_translate(s: &mut Stream, n: usize, max_denominator: i64) -> Result<Vec<Rational>> {
    for _ in 0..RETRY_LIMIT {
        let q = s.range(2, max_denominator);
        let t: Vec<Rational> = (0..n).map(|_| rational::rat(s.range(0, q - 1), q)).collect();
        if !rational::is_integral(&t) {
            return Ok(t);
        }
    }
    Err(Error::RetryLimit(RETRY_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count, CountOptions};

    #[test]
    fn simplex_family() {
        let o = CountOptions::default();
        assert_eq!(count(&Body::polytope(simplex_sk(3, 1).unwrap()), &o).unwrap().count, BigInt::from(4));
        assert_eq!(count(&Body::polytope(simplex_sk(2, 9).unwrap()), &o).unwrap().count, BigInt::from(11));
        assert_eq!(simplex_sk(4, 3).unwrap().volume(), rational::rat(3, 24));
    }

    #[test]
    fn reeve_family() {
        let o = CountOptions::default();
        // the segment from 0 to m v carries m + 1 lattice points
        for (n, m, g) in [(3, 1, 4), (3, 7, 10), (4, 3, 7)] {
            let t = reeve_tm(n, m).unwrap();
            assert_eq!(count(&Body::polytope(t), &o).unwrap().count, BigInt::from(g));
        }
        for m in 1..=6 {
            let b = reeve_half_translate(3, m).unwrap();
            assert_eq!(count(&b, &o).unwrap().count, BigInt::from(m));
        }
        assert_eq!(reeve_tm(3, 7).unwrap().volume(), rational::rat(7, 6));
        assert!(reeve_tm(2, 3).is_err());
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let spec = CorpusSpec {
            count: 5,
            points: 20,
            coord_bound: 4,
            min_dim: 3,
            max_dim: 3,
            ..CorpusSpec::default()
        };
        let a = spec.generate().unwrap();
        let b = spec.generate().unwrap();
        assert_eq!(a, b);
        let other = CorpusSpec { seed: 8, ..spec }.generate().unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn unimodular_lattices_have_unit_determinant() {
        let mut s = Stream::new(11);
        for n in 1..=4 {
            let u = random_unimodular(&mut s, n);
            assert_eq!(u.det().unwrap().magnitude(), &num_bigint::BigUint::one());
            let l = Lattice::from_int_rows(&u.to_rows()).unwrap();
            assert!(l.same_lattice(&Lattice::integer(n)));
        }
    }

    #[test]
    fn translates_avoid_the_lattice() {
        let spec = CorpusSpec {
            family: Family::Translated,
            count: 20,
            ..CorpusSpec::default()
        };
        for item in spec.generate().unwrap() {
            match item.body.kind() {
                crate::counting::BodyKind::TranslatedPolytope { translate, .. } => {
                    assert!(!rational::is_integral(translate));
                    assert!(translate.iter().all(|x| *x.denom() <= BigInt::from(16)));
                }
                _ => panic!("expected a translate"),
            }
        }
        let half = half_translate(simplex_sk(3, 4).unwrap()).unwrap();
        assert!(matches!(half.kind(), crate::counting::BodyKind::TranslatedPolytope { .. }));
    }
}
