//! Incremental beneath-beyond convex hull over rational points.
//!
//! The boundary is kept as a list of simplicial facets. Each inserted point
//! that sees at least one facet (strictly) is coned over the horizon, and
//! the cones over the visible facets are recorded, which yields a placing
//! triangulation of the final hull for free.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::rational::{self, Rational};
use crate::arith::RatMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<Rational>,
    offset: Rational,
}

impl SimplexFacet {
    fn height(&self, p: &[Rational]) -> Rational {
        rational::dot(&self.normal, p) - &self.offset
    }
}

/// Result of one incremental run.
#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub points: Vec<Vec<Rational>>,
    /// Simplicial boundary facets, `n` point indices each.
    pub boundary: Vec<Vec<usize>>,
    /// Placing triangulation, `n + 1` point indices per simplex.
    pub placing: Vec<Vec<usize>>,
}

/// A facet of the hull after coplanar boundary pieces are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MergedFacet {
    /// Primitive integer outward normal.
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

fn hyperplane(points: &[Vec<Rational>], verts: &[usize], interior: &[Rational]) -> SimplexFacet {
    let n = interior.len();
    let base = &points[verts[0]];
    let normal = if n == 1 {
        vec![Rational::from_integer(1.into())]
    } else {
        let rows: Vec<Vec<Rational>> = verts[1..]
            .iter()
            .map(|&v| points[v].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let ker = RatMatrix::new(rows).expect("rectangular").kernel();
        debug_assert_eq!(ker.len(), 1);
        ker.into_iter().next().expect("facet spans a hyperplane")
    };
    let offset = rational::dot(&normal, base);
    let mut f = SimplexFacet {
        verts: verts.to_vec(),
        normal,
        offset,
    };
    if f.height(interior).is_positive() {
        f.normal.iter_mut().for_each(|x| *x = -x.clone());
        f.offset = -f.offset;
    }
    f
}

fn affine_rank(points: &[Vec<Rational>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let base = &points[idx[0]];
    let rows: Vec<Vec<Rational>> = idx[1..]
        .iter()
        .map(|&v| points[v].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    RatMatrix::new(rows).expect("rectangular").rank()
}

fn det_of_simplex(points: &[Vec<Rational>], simplex: &[usize]) -> Rational {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<Rational>> = simplex[1..]
        .iter()
        .map(|&v| points[v].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    RatMatrix::new(rows).expect("square").det()
}

/// `|det|` of the edge matrix of a full-dimensional simplex.
pub(crate) fn simplex_det_abs(points: &[Vec<Rational>], simplex: &[usize]) -> Rational {
    det_of_simplex(points, simplex).abs()
}

/// Removes duplicate points, keeping first occurrences.
pub(crate) fn dedup_points(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut seen = std::collections::BTreeSet::new();
    points
        .iter()
        .filter(|p| seen.insert((*p).clone()))
        .cloned()
        .collect()
}

impl Hull {
    /// Builds the hull of `points` (assumed distinct), inserting them in
    /// `order`.
    pub fn build(points: Vec<Vec<Rational>>, order: &[usize]) -> Result<Hull> {
        let n = points.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::DegenerateHull);
        }
        // Initial simplex: the first affinely independent points in order.
        let mut simplex = Vec::with_capacity(n + 1);
        for &i in order {
            simplex.push(i);
            if affine_rank(&points, &simplex) < simplex.len() - 1 {
                simplex.pop();
            }
            if simplex.len() == n + 1 {
                break;
            }
        }
        if simplex.len() < n + 1 {
            return Err(Error::DegenerateHull);
        }
        let interior: Vec<Rational> = (0..n)
            .map(|k| {
                simplex.iter().map(|&i| points[i][k].clone()).sum::<Rational>()
                    / Rational::from_integer(BigInt::from(n + 1))
            })
            .collect();
        let mut facets: Vec<SimplexFacet> = (0..=n)
            .map(|skip| {
                let mut verts: Vec<usize> =
                    simplex.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
                verts.sort_unstable();
                hyperplane(&points, &verts, &interior)
            })
            .collect();
        let mut placing = vec![{
            let mut s = simplex.clone();
            s.sort_unstable();
            s
        }];
        for &p in order {
            if simplex.contains(&p) {
                continue;
            }
            let pt = &points[p];
            let (visible, hidden): (Vec<SimplexFacet>, Vec<SimplexFacet>) =
                facets.into_iter().partition(|f| f.height(pt).is_positive());
            facets = hidden;
            if visible.is_empty() {
                continue;
            }
            let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
            for f in &visible {
                for skip in 0..f.verts.len() {
                    let ridge: Vec<usize> = f
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    *ridges.entry(ridge).or_insert(0) += 1;
                }
                let mut s = f.verts.clone();
                s.push(p);
                s.sort_unstable();
                placing.push(s);
            }
            let mut horizon: Vec<Vec<usize>> =
                ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
            horizon.sort();
            for mut ridge in horizon {
                ridge.push(p);
                ridge.sort_unstable();
                facets.push(hyperplane(&points, &ridge, &interior));
            }
        }
        let boundary = facets.into_iter().map(|f| f.verts).collect();
        Ok(Hull {
            points,
            boundary,
            placing,
        })
    }

    pub fn build_lex(points: &[Vec<Rational>]) -> Result<Hull> {
        let mut pts = dedup_points(points);
        pts.sort();
        let order: Vec<usize> = (0..pts.len()).collect();
        Hull::build(pts, &order)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Distinct facets as (primitive normal, offset), sorted.
    pub fn merged_facets(&self) -> Vec<MergedFacet> {
        let n = self.dim();
        let interior: Vec<Rational> = (0..n)
            .map(|k| {
                self.placing[0].iter().map(|&i| self.points[i][k].clone()).sum::<Rational>()
                    / Rational::from_integer(BigInt::from(n + 1))
            })
            .collect();
        let mut map: BTreeMap<Vec<BigInt>, Rational> = BTreeMap::new();
        for verts in &self.boundary {
            let f = hyperplane(&self.points, verts, &interior);
            let (normal, scale) = rational::primitive_direction(&f.normal).expect("nonzero normal");
            map.insert(normal, f.offset / scale);
        }
        map.into_iter()
            .map(|(normal, offset)| MergedFacet { normal, offset })
            .collect()
    }

    /// Indices of the extreme points: those whose incident facet normals
    /// span the whole space.
    pub fn extreme_points(&self, facets: &[MergedFacet]) -> Vec<usize> {
        let n = self.dim();
        (0..self.points.len())
            .filter(|&i| {
                let p = &self.points[i];
                let rows: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|f| rational::dot(&rational::to_rational_vec(&f.normal), p) == f.offset)
                    .map(|f| rational::to_rational_vec(&f.normal))
                    .collect();
                rows.len() >= n && RatMatrix::new(rows).expect("rectangular").rank() == n
            })
            .collect()
    }

    /// `Σ |det|` over the placing triangulation (n! times the volume).
    pub fn placing_det_sum(&self) -> Rational {
        self.placing
            .iter()
            .map(|s| simplex_det_abs(&self.points, s))
            .sum()
    }
}

/// Volume of the convex hull of rational points that span their space.
pub fn hull_volume(points: &[Vec<Rational>]) -> Result<Rational> {
    let n = points.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::DegenerateHull);
    }
    let hull = Hull::build_lex(points)?;
    Ok(hull.placing_det_sum() / Rational::from_integer(rational::factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn unit_square_with_edge_point() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 2], &[2, 0], &[2, 2], &[1, 1]]);
        let h = Hull::build_lex(&p).unwrap();
        let f = h.merged_facets();
        assert_eq!(f.len(), 4);
        let ext = h.extreme_points(&f);
        assert_eq!(ext.len(), 4);
        assert_eq!(h.placing_det_sum(), int(8));
    }

    #[test]
    fn one_dimensional_hull() {
        let p = pts(&[&[3], &[-1], &[0], &[2]]);
        let h = Hull::build_lex(&p).unwrap();
        assert_eq!(h.merged_facets().len(), 2);
        assert_eq!(hull_volume(&p).unwrap(), int(4));
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let p = pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[1, 0, 0]]);
        assert!(matches!(Hull::build_lex(&p), Err(Error::DegenerateHull)));
    }

    #[test]
    fn rational_octahedron_volume() {
        let h = rat(1, 2);
        let z = int(0);
        let p = vec![
            vec![h.clone(), z.clone(), z.clone()],
            vec![-h.clone(), z.clone(), z.clone()],
            vec![z.clone(), h.clone(), z.clone()],
            vec![z.clone(), -h.clone(), z.clone()],
            vec![z.clone(), z.clone(), h.clone()],
            vec![z.clone(), z.clone(), -h.clone()],
        ];
        // 4/3 r^3 with r = 1/2
        assert_eq!(hull_volume(&p).unwrap(), rat(1, 6));
    }
}
