//! Inner parallel bodies `P ⊖ ρB` of lattice polytopes.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use super::LatticePolytope;
use crate::arith::rational::{self, Rational};
use crate::arith::{RadicalSum, RatMatrix};
use crate::error::{Error, Result};
use crate::lattice::next_combination;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerRow {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// `|a|²` of the Euclidean normal.
    pub normal_norm_sq: Rational,
    /// `offset - ρ|a|`.
    pub rhs: RadicalSum,
}

/// The half-space system `c·y <= b - ρ|a|` describing `P ⊖ ρB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerParallelSystem {
    dim: usize,
    rho_sq: Rational,
    rows: Vec<InnerRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// A vertex of the system, coordinates exact.
    NonEmpty(Vec<RadicalSum>),
}

impl LatticePolytope {
    pub fn inner_parallel_system(&self, rho_sq: &Rational) -> Result<InnerParallelSystem> {
        if rho_sq.is_negative() {
            return Err(Error::Invalid("rho_sq must be non-negative".into()));
        }
        let rows = self
            .facets()
            .iter()
            .map(|f| {
                let nsq = self.lattice().dual_norm_sq(&f.normal);
                let shift = RadicalSum::sqrt_of(&(rho_sq * &nsq));
                InnerRow {
                    normal: f.normal.clone(),
                    offset: f.offset.clone(),
                    rhs: &RadicalSum::from_rational(rational::from_big(&f.offset)) - &shift,
                    normal_norm_sq: nsq,
                }
            })
            .collect();
        Ok(InnerParallelSystem {
            dim: self.dim(),
            rho_sq: rho_sq.clone(),
            rows,
        })
    }
}

impl InnerParallelSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho_sq(&self) -> &Rational {
        &self.rho_sq
    }

    pub fn rows(&self) -> &[InnerRow] {
        &self.rows
    }

    /// Exact membership of a rational point: slack `s` must satisfy
    /// `s >= 0` and `s² >= ρ²|a|²`.
    pub fn contains(&self, y: &[Rational]) -> bool {
        self.rows.iter().all(|r| {
            let s = rational::from_big(&r.offset) - rational::dot(&rational::to_rational_vec(&r.normal), y);
            !s.is_negative() && &s * &s >= &self.rho_sq * &r.normal_norm_sq
        })
    }

    pub fn contains_int(&self, y: &[BigInt]) -> bool {
        self.rows.iter().all(|r| {
            let s = &r.offset - rational::dot_int(&r.normal, y);
            !s.is_negative() && rational::from_big(&(&s * &s)) >= &self.rho_sq * &r.normal_norm_sq
        })
    }

    /// Decides emptiness by enumerating candidate vertices (all `n`-subsets
    /// of tight constraints) with exact radical comparisons.
    pub fn emptiness(&self) -> Emptiness {
        let n = self.dim;
        let m = self.rows.len();
        if m < n {
            return Emptiness::Empty;
        }
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            if let Some(y) = self.solve(&idx) {
                if self.feasible(&y) {
                    return Emptiness::NonEmpty(y);
                }
            }
            if !next_combination(&mut idx, m) {
                return Emptiness::Empty;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.emptiness() == Emptiness::Empty
    }

    fn solve(&self, idx: &[usize]) -> Option<Vec<RadicalSum>> {
        let m = RatMatrix::new(
            idx.iter()
                .map(|&i| rational::to_rational_vec(&self.rows[i].normal))
                .collect(),
        )
        .ok()?;
        let inv = m.inverse().ok()?;
        Some(
            (0..self.dim)
                .map(|j| {
                    idx.iter().enumerate().fold(RadicalSum::zero(), |acc, (k, &i)| {
                        let c = inv.get(j, k);
                        if c.is_zero() {
                            acc
                        } else {
                            &acc + &self.rows[i].rhs.scale(c)
                        }
                    })
                })
                .collect(),
        )
    }

    fn feasible(&self, y: &[RadicalSum]) -> bool {
        self.rows.iter().all(|r| {
            let lhs = r
                .normal
                .iter()
                .zip(y)
                .fold(RadicalSum::zero(), |acc, (c, yi)| &acc + &yi.scale(&rational::from_big(c)));
            (&lhs - &r.rhs).signum(64) != Ordering::Greater
        })
    }
}
