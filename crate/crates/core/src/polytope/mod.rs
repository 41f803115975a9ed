//! Lattice polytopes: vertex and facet representations, triangulations,
//! volumes, facet lattice volumes and surface area.
//!
//! Vertices live in coefficient coordinates of the ambient lattice, so they
//! are integer vectors. A facet `c·y <= b` has a primitive integer normal
//! `c`, which is at the same time the dual-lattice coordinate vector of the
//! Euclidean outward normal.

pub(crate) mod hull;
mod inner;
mod intrinsic;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::{self, Rational};
use crate::arith::{IntMatrix, RadicalSum, RatMatrix};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

pub use hull::hull_volume;
pub use inner::{Emptiness, InnerParallelSystem};
pub use inner::InnerRow;
pub use intrinsic::{steiner_polynomial, Edge, IntrinsicVolumes3};

use hull::Hull;

pub const MAX_HULL_DIM: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive outward normal in dual coordinates.
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
}

/// Simplices given by `n + 1` vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetVolume {
    /// `vol_{n-1}(F) / det(aff F ∩ Λ)`.
    pub normalized: Rational,
    /// `|a|²` for the primitive Euclidean normal `a`.
    pub normal_norm_sq: Rational,
    pub euclidean: RadicalSum,
}

#[derive(Default)]
struct Caches {
    fan: OnceLock<Triangulation>,
    placing: OnceLock<Triangulation>,
    volume: OnceLock<Rational>,
    facet_volumes: OnceLock<Vec<FacetVolume>>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches::default()
    }
}

#[derive(Clone)]
pub struct LatticePolytope {
    lattice: Arc<Lattice>,
    vertices: Vec<Vec<BigInt>>,
    facets: Vec<Facet>,
    caches: Caches,
}

impl LatticePolytope {
    /// Convex hull of lattice points given in coefficient coordinates.
    pub fn hull(points: &[Vec<BigInt>], lattice: Arc<Lattice>) -> Result<Self> {
        let n = lattice.dim();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        if n > MAX_HULL_DIM {
            return Err(Error::DimensionUnsupported {
                op: "hull",
                n,
                max: MAX_HULL_DIM,
            });
        }
        let rat_points: Vec<Vec<Rational>> = points.iter().map(|p| rational::to_rational_vec(p)).collect();
        let h = Hull::build_lex(&rat_points)?;
        let merged = h.merged_facets();
        let mut vertices: Vec<Vec<BigInt>> = h
            .extreme_points(&merged)
            .into_iter()
            .map(|i| h.points[i].iter().map(|x| x.to_integer()).collect())
            .collect();
        vertices.sort();
        let facets = merged
            .into_iter()
            .map(|f| {
                let offset = f.offset.to_integer();
                let vs = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| rational::dot_int(&f.normal, v) == offset)
                    .map(|(i, _)| i)
                    .collect();
                Facet {
                    normal: f.normal,
                    offset,
                    vertices: vs,
                }
            })
            .collect();
        Ok(LatticePolytope {
            lattice,
            vertices,
            facets,
            caches: Caches::default(),
        })
    }

    pub fn hull_i64(points: &[&[i64]], lattice: Arc<Lattice>) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        LatticePolytope::hull(&pts, lattice)
    }

    /// Hull over `Z^n`.
    pub fn hull_integer(points: &[Vec<BigInt>]) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::DegenerateHull);
        }
        LatticePolytope::hull(points, Arc::new(Lattice::integer(n)))
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Vertices in coefficient coordinates, lexicographically sorted.
    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.facets.iter().all(|f| {
            rational::dot(&rational::to_rational_vec(&f.normal), y) <= rational::from_big(&f.offset)
        })
    }

    pub fn contains_int(&self, y: &[BigInt]) -> bool {
        self.facets.iter().all(|f| rational::dot_int(&f.normal, y) <= f.offset)
    }

    /// Whether facet `i` contains vertex `v` (incidence matrix entry).
    pub fn incident(&self, facet: usize, vertex: usize) -> bool {
        self.facets[facet].vertices.binary_search(&vertex).is_ok()
    }

    /// Integer bounding box `[lo, hi]` of the vertices.
    pub fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let n = self.dim();
        let lo = (0..n)
            .map(|k| self.vertices.iter().map(|v| v[k].clone()).min().expect("nonempty"))
            .collect();
        let hi = (0..n)
            .map(|k| self.vertices.iter().map(|v| v[k].clone()).max().expect("nonempty"))
            .collect();
        (lo, hi)
    }

    fn rat_vertices(&self) -> Vec<Vec<Rational>> {
        self.vertices.iter().map(|v| rational::to_rational_vec(v)).collect()
    }

    /// Fan from the lexicographically smallest vertex over a simplicial
    /// boundary subdivision of the facets avoiding it.
    pub fn fan_triangulation(&self) -> &Triangulation {
        self.caches.fan.get_or_init(|| {
            let pts = self.rat_vertices();
            let order: Vec<usize> = (0..pts.len()).collect();
            let h = Hull::build(pts.clone(), &order).expect("vertices span");
            let mut simplices: Vec<Vec<usize>> = h
                .boundary
                .iter()
                .filter(|s| !s.contains(&0))
                .map(|s| {
                    let mut t = vec![0];
                    t.extend(s.iter().copied());
                    t
                })
                .filter(|t| !hull::simplex_det_abs(&pts, t).is_zero())
                .collect();
            simplices.sort();
            Triangulation { simplices }
        })
    }

    /// Placing triangulation with vertices inserted in reverse
    /// lexicographic order.
    pub fn placing_triangulation(&self) -> &Triangulation {
        self.caches.placing.get_or_init(|| {
            let pts = self.rat_vertices();
            let order: Vec<usize> = (0..pts.len()).rev().collect();
            let h = Hull::build(pts, &order).expect("vertices span");
            let mut simplices = h.placing;
            simplices.sort();
            Triangulation { simplices }
        })
    }

    /// `Σ |det|` over a triangulation, i.e. `n!` times the coefficient volume.
    pub fn triangulation_det_sum(&self, t: &Triangulation) -> Rational {
        let pts = self.rat_vertices();
        t.simplices.iter().map(|s| hull::simplex_det_abs(&pts, s)).sum()
    }

    /// Volume in coefficient units (`vol / det Λ`).
    pub fn normalized_volume(&self) -> &Rational {
        self.caches.volume.get_or_init(|| {
            self.triangulation_det_sum(self.fan_triangulation())
                / Rational::from_integer(rational::factorial(self.dim()))
        })
    }

    /// Euclidean volume.
    pub fn volume(&self) -> Rational {
        self.normalized_volume() * self.lattice.det()
    }

    /// Unimodular transform whose first `n - 1` rows span the integer
    /// kernel of `normal`.
    fn facet_frame(normal: &[BigInt]) -> IntMatrix {
        let col: Vec<Vec<BigInt>> = normal.iter().map(|x| vec![x.clone()]).collect();
        let (_, u, _) = IntMatrix::from_rows(&col).expect("column").lower_echelon();
        u
    }

    /// Coordinates of the facet's vertices in a basis of `aff F ∩ Z^n`.
    pub fn facet_coordinates(&self, i: usize) -> Vec<Vec<Rational>> {
        let f = &self.facets[i];
        let n = self.dim();
        let u = RatMatrix::from_int(&Self::facet_frame(&f.normal));
        let uinv = u.inverse().expect("unimodular");
        let base = rational::to_rational_vec(&self.vertices[f.vertices[0]]);
        f.vertices
            .iter()
            .map(|&v| {
                let d: Vec<Rational> = rational::to_rational_vec(&self.vertices[v])
                    .iter()
                    .zip(&base)
                    .map(|(a, b)| a - b)
                    .collect();
                let s = uinv.vec_mul(&d);
                debug_assert!(s[n - 1].is_zero());
                s[..n - 1].to_vec()
            })
            .collect()
    }

    /// Basis of `aff F_i ∩ Λ` (translated to the origin) in coefficient
    /// coordinates.
    pub fn facet_sublattice_basis(&self, i: usize) -> Vec<Vec<BigInt>> {
        let u = Self::facet_frame(&self.facets[i].normal);
        (0..self.dim() - 1).map(|r| u.row(r).to_vec()).collect()
    }

    /// `det(aff F_i ∩ Λ)²` from the Gram matrix of an explicit facet
    /// sublattice basis.
    pub fn facet_sublattice_det_sq(&self, i: usize) -> Rational {
        if self.dim() == 1 {
            return Rational::one();
        }
        let k = RatMatrix::from_int(&IntMatrix::from_rows(&self.facet_sublattice_basis(i)).expect("rows"));
        k.mul(self.lattice.gram()).mul(&k.transpose()).det()
    }

    pub fn facet_volumes(&self) -> &[FacetVolume] {
        self.caches.facet_volumes.get_or_init(|| {
            (0..self.facets.len()).map(|i| self.compute_facet_volume(i)).collect()
        })
    }

    pub fn facet_lattice_volume(&self, i: usize) -> Result<&FacetVolume> {
        self.facet_volumes()
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("facet index {i} out of range")))
    }

    fn compute_facet_volume(&self, i: usize) -> FacetVolume {
        let n = self.dim();
        let normalized = if n == 1 {
            Rational::one()
        } else {
            hull::hull_volume(&self.facet_coordinates(i)).expect("facet spans its hyperplane")
        };
        let normal_norm_sq = self.lattice.dual_norm_sq(&self.facets[i].normal);
        let euclidean = RadicalSum::sqrt_of(&normal_norm_sq).scale(&(&normalized * self.lattice.det()));
        FacetVolume {
            normalized,
            normal_norm_sq,
            euclidean,
        }
    }

    /// Sum of the Euclidean facet volumes.
    pub fn surface_area(&self) -> RadicalSum {
        self.facet_volumes()
            .iter()
            .fold(RadicalSum::zero(), |acc, f| &acc + &f.euclidean)
    }

    /// Number of vertices per facet and number of facets per vertex.
    pub fn vertex_facet_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let f0 = self.facets.iter().map(|f| f.vertices.len()).collect();
        let mut g = vec![0; self.vertices.len()];
        for f in &self.facets {
            for &v in &f.vertices {
                g[v] += 1;
            }
        }
        (f0, g)
    }

    /// `c · P` for a positive integer `c`.
    pub fn scaled(&self, c: i64) -> Result<Self> {
        if c <= 0 {
            return Err(Error::Invalid("scale factor must be positive".into()));
        }
        let pts: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * c).collect())
            .collect();
        LatticePolytope::hull(&pts, self.lattice.clone())
    }

    /// `P + b` for a lattice vector `b`.
    pub fn translated(&self, b: &[BigInt]) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        LatticePolytope::hull(&pts, self.lattice.clone())
    }

    /// Image under the unimodular map `y -> y U` on coefficient vectors.
    pub fn transformed(&self, u: &IntMatrix) -> Result<Self> {
        let pts: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .map(|v| {
                (0..u.cols())
                    .map(|c| (0..u.rows()).fold(BigInt::zero(), |acc, r| acc + &v[r] * u.get(r, c)))
                    .collect()
            })
            .collect();
        LatticePolytope::hull(&pts, self.lattice.clone())
    }

    /// The same facet system as a set of `(normal, offset)` pairs.
    pub fn facet_system(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect()
    }
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        *self.lattice == *other.lattice && self.vertices == other.vertices
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePolytope")
            .field("dim", &self.dim())
            .field("vertices", &self.vertices)
            .field("facets", &self.facets.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn z(n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::integer(n))
    }

    fn cube(n: usize, s: i64) -> LatticePolytope {
        let pts: Vec<Vec<BigInt>> = (0..1u32 << n)
            .map(|m| (0..n).map(|i| BigInt::from(if m >> i & 1 == 1 { s } else { 0 })).collect())
            .collect();
        LatticePolytope::hull(&pts, z(n)).unwrap()
    }

    fn simplex(n: usize, k: i64) -> LatticePolytope {
        let mut pts = vec![vec![BigInt::zero(); n]];
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(if i == 0 { k } else { 1 });
            pts.push(e);
        }
        LatticePolytope::hull(&pts, z(n)).unwrap()
    }

    #[test]
    fn simplex_and_cube_structure() {
        let s = simplex(3, 1);
        assert_eq!(s.facets().len(), 4);
        assert_eq!(s.vertices().len(), 4);
        let c = cube(3, 1);
        assert_eq!(c.facets().len(), 6);
        for f in c.facets() {
            assert_eq!(f.normal.iter().filter(|x| !x.is_zero()).count(), 1);
            assert_eq!(f.vertices.len(), 4);
        }
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex(3, 4).volume(), rat(2, 3));
        assert_eq!(cube(3, 1).volume(), int(1));
        let reeve = LatticePolytope::hull_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[5, 5, 5]], z(3)).unwrap();
        assert_eq!(reeve.volume(), rat(5, 6));
        for p in [simplex(3, 4), cube(3, 2), reeve] {
            assert_eq!(
                p.triangulation_det_sum(p.fan_triangulation()),
                p.triangulation_det_sum(p.placing_triangulation())
            );
        }
    }

    #[test]
    fn facet_volumes_of_unit_simplex() {
        let s = simplex(3, 1);
        for (i, f) in s.facets().iter().enumerate() {
            let fv = s.facet_lattice_volume(i).unwrap();
            if f.normal.iter().all(|x| *x == BigInt::one()) {
                assert_eq!(fv.euclidean, RadicalSum::sqrt_of(&int(3)).scale(&rat(1, 2)));
                assert_eq!(fv.normalized, rat(1, 2));
            } else {
                assert_eq!(fv.euclidean.as_rational(), Some(rat(1, 2)));
                assert_eq!(fv.normalized, rat(1, 2));
            }
        }
        let f = s.surface_area();
        assert_eq!(f, &RadicalSum::from_rational(rat(3, 2)) + &RadicalSum::sqrt_of(&rat(3, 4)));
    }

    #[test]
    fn cube_surface_and_counts() {
        let c = cube(3, 1);
        assert_eq!(c.surface_area().as_rational(), Some(int(6)));
        for i in 0..6 {
            let fv = c.facet_lattice_volume(i).unwrap();
            assert_eq!(fv.normalized, int(1));
            assert_eq!(fv.euclidean.as_rational(), Some(int(1)));
        }
        let (f0, g) = c.vertex_facet_counts();
        assert!(f0.iter().all(|&x| x == 4));
        assert!(g.iter().all(|&x| x == 3));
    }

    #[test]
    fn simplex_surface_general_n() {
        for n in 2..=5usize {
            let s = simplex(n, 1);
            let fact = Rational::from_integer(rational::factorial(n - 1));
            let expect = (&RadicalSum::from_int(n as i64) + &RadicalSum::sqrt_of(&int(n as i64)))
                .scale(&(Rational::one() / fact));
            assert_eq!(s.surface_area(), expect, "n = {n}");
        }
    }

    #[test]
    fn facet_determinant_two_ways() {
        let l = Arc::new(Lattice::from_i64_rows(&[&[2, 0, 0], &[1, 3, 0], &[0, 1, 1]]).unwrap());
        let p = LatticePolytope::hull_i64(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0], &[0, 0, 3], &[1, 1, 1]], l.clone())
            .unwrap();
        for (i, f) in p.facets().iter().enumerate() {
            let direct = p.facet_sublattice_det_sq(i);
            let via_normal = l.dual_norm_sq(&f.normal) * l.det() * l.det();
            assert_eq!(direct, via_normal);
        }
    }

    #[test]
    fn homogeneity() {
        let s = simplex(3, 2);
        let s3 = s.scaled(3).unwrap();
        assert_eq!(s3.volume(), s.volume() * int(27));
        assert_eq!(s3.surface_area(), s.surface_area().scale(&int(9)));
    }

    #[test]
    fn one_dimensional_polytope() {
        let p = LatticePolytope::hull_i64(&[&[4], &[-2], &[1]], z(1)).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.volume(), int(6));
        assert_eq!(p.surface_area().as_rational(), Some(int(2)));
    }
}
