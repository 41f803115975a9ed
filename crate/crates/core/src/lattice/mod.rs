//! Full-rank lattices given by rational bases.
//!
//! Points are handled in coefficient coordinates (`x = y * B` for a row
//! vector `y`), so counting always happens in `Z^n`; Euclidean data enters
//! only through the Gram matrix `G = B Bᵀ` and its inverse, which is the Gram
//! matrix of the dual basis.

mod enumerate;
mod voronoi;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{self, Rational};
use crate::arith::{IntMatrix, RadicalSum, RatMatrix};
use crate::error::{Error, Result};

pub(crate) use enumerate::enumerate_within;
pub use voronoi::DirichletVoronoiCell;
pub(crate) use voronoi::next_combination;

pub const MAX_SVP_DIM: usize = 6;
pub const MAX_RELEVANT_DIM: usize = 5;
pub const MAX_COVERING_DIM: usize = 4;

/// Shortest nonzero vectors of a lattice, up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestVectorResult {
    pub length_sq: Rational,
    /// Coefficient vectors with the first nonzero entry positive.
    pub minimizers: Vec<Vec<BigInt>>,
}

impl ShortestVectorResult {
    pub fn length(&self) -> RadicalSum {
        RadicalSum::sqrt_of(&self.length_sq)
    }
}

/// A primitive dual vector together with `scale` such that the input normal
/// equals `scale * vector`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPrimitive {
    pub coefficients: Vec<BigInt>,
    pub vector: Vec<Rational>,
    pub scale: Rational,
}

#[derive(Debug, Default)]
struct Caches {
    shortest: OnceLock<Result<ShortestVectorResult>>,
    dual_shortest: OnceLock<Result<ShortestVectorResult>>,
    relevant: OnceLock<Result<Vec<Vec<BigInt>>>>,
    cell: OnceLock<Result<DirichletVoronoiCell>>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches::default()
    }
}

#[derive(Clone)]
pub struct Lattice {
    basis: RatMatrix,
    det: Rational,
    gram: RatMatrix,
    dual: RatMatrix,
    dual_gram: RatMatrix,
    caches: Caches,
}

impl Lattice {
    /// Lattice spanned by the rows of `basis`.
    pub fn new(basis: Vec<Vec<Rational>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Invalid("lattice of dimension 0".into()));
        }
        let basis = RatMatrix::new(basis)?;
        if basis.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: basis.n_cols(),
            });
        }
        let d = basis.det();
        if d.is_zero() {
            return Err(Error::DegenerateBasis);
        }
        let inv = basis.inverse()?;
        let dual = inv.transpose();
        let gram = basis.mul(&basis.transpose());
        let dual_gram = dual.mul(&dual.transpose());
        Ok(Lattice {
            basis,
            det: d.abs(),
            gram,
            dual,
            dual_gram,
            caches: Caches::default(),
        })
    }

    /// The integer lattice `Z^n`.
    pub fn integer(n: usize) -> Self {
        Lattice::new(RatMatrix::identity(n).rows().to_vec()).expect("identity basis")
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        Lattice::new(rows.iter().map(|r| rational::to_rational_vec(r)).collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Lattice::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn shared(self) -> Arc<Lattice> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.n_rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// `det Λ = |det B|`.
    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn dual_basis(&self) -> &RatMatrix {
        &self.dual
    }

    pub fn dual_gram(&self) -> &RatMatrix {
        &self.dual_gram
    }

    /// Whether the lattice is `Z^n` itself (integral basis of determinant 1).
    pub fn is_standard_integer(&self) -> bool {
        self.det.is_one() && self.basis.rows().iter().all(|r| rational::is_integral(r))
    }

    pub fn to_euclidean(&self, coefficients: &[Rational]) -> Vec<Rational> {
        self.basis.vec_mul(coefficients)
    }

    pub fn to_coefficients(&self, x: &[Rational]) -> Vec<Rational> {
        self.dual.mul_vec(x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        rational::is_integral(&self.to_coefficients(x))
    }

    /// Squared Euclidean norm of the vector with coefficients `y`.
    pub fn norm_sq(&self, y: &[Rational]) -> Rational {
        self.gram.quad(y)
    }

    pub fn norm_sq_int(&self, y: &[BigInt]) -> Rational {
        self.norm_sq(&rational::to_rational_vec(y))
    }

    /// Squared norm of the dual vector with dual coefficients `c`.
    pub fn dual_norm_sq(&self, c: &[BigInt]) -> Rational {
        self.dual_gram.quad(&rational::to_rational_vec(c))
    }

    /// The polar lattice `Λ* = {y : y·b ∈ Z for all b ∈ Λ}`, with the dual
    /// basis as its basis.
    pub fn polar(&self) -> Lattice {
        Lattice::new(self.dual.rows().to_vec()).expect("dual of a nonsingular basis")
    }

    pub fn scaled(&self, c: &Rational) -> Result<Lattice> {
        Lattice::new(
            self.basis
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        )
    }

    /// Same lattice, basis `U * B` for unimodular `U`.
    pub fn rebased(&self, u: &IntMatrix) -> Result<Lattice> {
        if u.det()?.abs() != BigInt::one() {
            return Err(Error::Invalid("transform is not unimodular".into()));
        }
        Lattice::new(RatMatrix::from_int(u).mul(&self.basis).rows().to_vec())
    }

    /// Whether two bases span the same lattice.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        if self.dim() != other.dim() || self.det != other.det {
            return false;
        }
        other
            .basis
            .rows()
            .iter()
            .all(|r| rational::is_integral(&self.to_coefficients(r)))
    }

    pub fn shortest_vector(&self) -> Result<ShortestVectorResult> {
        self.caches
            .shortest
            .get_or_init(|| shortest_for_gram(&self.gram))
            .clone()
    }

    /// `λ₁(Λ*)²`, computed from the dual Gram matrix.
    pub fn dual_shortest_vector(&self) -> Result<ShortestVectorResult> {
        self.caches
            .dual_shortest
            .get_or_init(|| shortest_for_gram(&self.dual_gram))
            .clone()
    }

    /// Voronoi-relevant vectors (coefficient coordinates), both signs.
    pub fn relevant_vectors(&self) -> Result<Vec<Vec<BigInt>>> {
        self.caches
            .relevant
            .get_or_init(|| voronoi::relevant_vectors(self))
            .clone()
    }

    pub fn voronoi_cell(&self) -> Result<DirichletVoronoiCell> {
        self.caches
            .cell
            .get_or_init(|| DirichletVoronoiCell::compute(self))
            .clone()
    }

    /// `μ(Λ)²`, the squared covering radius.
    pub fn covering_radius_sq(&self) -> Result<Rational> {
        Ok(self.voronoi_cell()?.covering_radius_sq().clone())
    }

    /// The inhomogeneous minimum `μ(Λ)` as an exact radical.
    pub fn inhomogeneous_minimum(&self) -> Result<RadicalSum> {
        Ok(RadicalSum::sqrt_of(&self.covering_radius_sq()?))
    }

    /// `det Λ_{n-1} = det Λ · λ₁(Λ*)`.
    pub fn min_hyperplane_sublattice_det(&self) -> Result<RadicalSum> {
        let dual = self.dual_shortest_vector()?;
        Ok(RadicalSum::sqrt_of(&dual.length_sq).scale(&self.det))
    }

    /// The primitive vector of `Λ*` positively proportional to a Euclidean
    /// normal.
    pub fn primitive_in_dual(&self, normal: &[Rational]) -> Result<DualPrimitive> {
        if normal.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: normal.len(),
            });
        }
        // dual coordinates c_k = normal · b_k
        let c = self.basis.mul_vec(normal);
        let (coefficients, scale) =
            rational::primitive_direction(&c).ok_or(Error::IrrationalNormal)?;
        let vector = self.dual.vec_mul(&rational::to_rational_vec(&coefficients));
        Ok(DualPrimitive {
            coefficients,
            vector,
            scale,
        })
    }
}

fn shortest_for_gram(gram: &RatMatrix) -> Result<ShortestVectorResult> {
    let n = gram.n_rows();
    if n > MAX_SVP_DIM {
        return Err(Error::DimensionUnsupported {
            op: "shortest_vector",
            n,
            max: MAX_SVP_DIM,
        });
    }
    let (t, reduced) = enumerate::lll(gram);
    let radius = (0..n)
        .map(|i| reduced.get(i, i).clone())
        .min()
        .expect("n >= 1");
    let zero = vec![Rational::zero(); n];
    let found = enumerate_within(&reduced, &zero, &radius);
    let best = found
        .iter()
        .filter(|(y, _)| y.iter().any(|x| !x.is_zero()))
        .map(|(_, q)| q.clone())
        .min()
        .expect("a basis vector lies within the radius");
    let mut minimizers: Vec<Vec<BigInt>> = found
        .into_iter()
        .filter(|(y, q)| *q == best && y.iter().any(|x| !x.is_zero()))
        .map(|(y, _)| enumerate::canonical_sign(enumerate::back_transform(&t, &y)))
        .collect();
    minimizers.sort();
    minimizers.dedup();
    Ok(ShortestVectorResult {
        length_sq: best,
        minimizers,
    })
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("basis", &self.basis.rows())
            .field("det", &self.det)
            .finish()
    }
}
