//! Voronoi-relevant vectors and the Dirichlet-Voronoi cell.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::enumerate::{back_transform, enumerate_within, lll};
use super::{Lattice, MAX_COVERING_DIM, MAX_RELEVANT_DIM};
use crate::arith::rational::{self, Rational};
use crate::arith::RatMatrix;
use crate::error::{Error, Result};

/// Voronoi's criterion: `v` is relevant iff `±v` are the only shortest
/// vectors of the coset `v + 2Λ`. Each nonzero class of `Λ/2Λ` is searched
/// for its minimizers in an LLL-reduced basis.
pub(super) fn relevant_vectors(l: &Lattice) -> Result<Vec<Vec<BigInt>>> {
    let n = l.dim();
    if n > MAX_RELEVANT_DIM {
        return Err(Error::DimensionUnsupported {
            op: "relevant_vectors",
            n,
            max: MAX_RELEVANT_DIM,
        });
    }
    let (t, g) = lll(l.gram());
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let c: Vec<Rational> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { rational::rat(1, 2) } else { Rational::zero() })
            .collect();
        // v = 2(z + c/2), so minimize q(z + c/2) = q(z - (-c/2))
        let center: Vec<Rational> = c.iter().map(|x| -x).collect();
        let radius = g.quad(&c);
        let found = enumerate_within(&g, &center, &radius);
        let best = found.iter().map(|(_, q)| q).min().expect("z = 0 qualifies").clone();
        let minimizers: Vec<&Vec<BigInt>> =
            found.iter().filter(|(_, q)| *q == best).map(|(z, _)| z).collect();
        if minimizers.len() != 2 {
            continue;
        }
        for z in minimizers {
            let v: Vec<BigInt> = z
                .iter()
                .enumerate()
                .map(|(i, zi)| zi * 2 + BigInt::from(mask >> i & 1))
                .collect();
            out.push(back_transform(&t, &v));
        }
    }
    out.sort();
    Ok(out)
}

/// The cell `{x : v·x <= |v|²/2 for all relevant v}` in coefficient
/// coordinates. Its coefficient volume is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletVoronoiCell {
    relevant: Vec<Vec<BigInt>>,
    /// Facet system rows `(G v, |v|²/2)` acting on coefficient vectors.
    facets: Vec<(Vec<Rational>, Rational)>,
    vertices: Vec<Vec<Rational>>,
    covering_radius_sq: Rational,
}

impl DirichletVoronoiCell {
    pub(super) fn compute(l: &Lattice) -> Result<Self> {
        let n = l.dim();
        if n > MAX_COVERING_DIM {
            return Err(Error::DimensionUnsupported {
                op: "voronoi_cell",
                n,
                max: MAX_COVERING_DIM,
            });
        }
        let relevant = l.relevant_vectors()?;
        let facets: Vec<(Vec<Rational>, Rational)> = relevant
            .iter()
            .map(|v| {
                let v = rational::to_rational_vec(v);
                let normal = l.gram().mul_vec(&v);
                let rhs = l.gram().quad(&v) / rational::int(2);
                (normal, rhs)
            })
            .collect();
        let scaled = IntFacets::new(&facets);
        let mut vertices = BTreeSet::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let fast = scaled.as_ref().and_then(|f| f.vertex(&idx));
            match fast {
                Some(Some(p)) => {
                    vertices.insert(p);
                }
                Some(None) => {}
                None => {
                    if let Some(p) = solve_subset(&facets, &idx) {
                        if facets.iter().all(|(a, b)| rational::dot(a, &p) <= *b) {
                            vertices.insert(p);
                        }
                    }
                }
            }
            if !next_combination(&mut idx, facets.len()) {
                break;
            }
        }
        let vertices: Vec<Vec<Rational>> = vertices.into_iter().collect();
        let covering_radius_sq = vertices
            .iter()
            .map(|p| l.gram().quad(p))
            .max()
            .ok_or_else(|| Error::Internal("Voronoi cell without vertices".into()))?;
        Ok(DirichletVoronoiCell {
            relevant,
            facets,
            vertices,
            covering_radius_sq,
        })
    }

    pub fn relevant_vectors(&self) -> &[Vec<BigInt>] {
        &self.relevant
    }

    pub fn facets(&self) -> &[(Vec<Rational>, Rational)] {
        &self.facets
    }

    /// Vertices in coefficient coordinates, sorted.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn covering_radius_sq(&self) -> &Rational {
        &self.covering_radius_sq
    }

    /// Euclidean volume from a triangulation of the vertex hull; equals
    /// `det Λ`.
    pub fn volume(&self, l: &Lattice) -> Result<Rational> {
        Ok(crate::polytope::hull_volume(&self.vertices)? * l.det())
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.facets.iter().all(|(a, b)| rational::dot(a, y) <= *b)
    }

    /// Number of facet equalities met by `y`.
    pub fn tight_count(&self, y: &[Rational]) -> usize {
        self.facets.iter().filter(|(a, b)| rational::dot(a, y) == *b).count()
    }
}

/// The facet system scaled to integers, for a checked `i128` fast path.
struct IntFacets {
    rows: Vec<(Vec<i128>, i128)>,
}

impl IntFacets {
    fn new(facets: &[(Vec<Rational>, Rational)]) -> Option<Self> {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let mut den = BigInt::from(1);
        for (a, b) in facets {
            for x in a.iter().chain(std::iter::once(b)) {
                den = den.lcm(x.denom());
            }
        }
        let scale = |x: &Rational| (x.numer() * (&den / x.denom())).to_i128();
        let rows = facets
            .iter()
            .map(|(a, b)| Some((a.iter().map(scale).collect::<Option<Vec<_>>>()?, scale(b)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntFacets { rows })
    }

    /// `Some(Some(p))` for a feasible vertex, `Some(None)` for a singular
    /// or infeasible subset, `None` on overflow.
    fn vertex(&self, idx: &[usize]) -> Option<Option<Vec<Rational>>> {
        let n = idx.len();
        let a: Vec<Vec<i128>> = idx.iter().map(|&i| self.rows[i].0.clone()).collect();
        let d = bareiss_det(a.clone())?;
        if d == 0 {
            return Some(None);
        }
        // Cramer: p_j = det(A with column j replaced by b) / d
        let mut num = Vec::with_capacity(n);
        for j in 0..n {
            let mut aj = a.clone();
            for (r, &i) in idx.iter().enumerate() {
                aj[r][j] = self.rows[i].1;
            }
            num.push(bareiss_det(aj)?);
        }
        let (num, d) = if d < 0 { (num.iter().map(|x| -x).collect::<Vec<_>>(), -d) } else { (num, d) };
        for (row, b) in &self.rows {
            let mut lhs = 0i128;
            for (x, y) in row.iter().zip(&num) {
                lhs = lhs.checked_add(x.checked_mul(*y)?)?;
            }
            if lhs > b.checked_mul(d)? {
                return Some(None);
            }
        }
        Some(Some(num.iter().map(|x| Rational::new(BigInt::from(*x), BigInt::from(d))).collect()))
    }
}

/// Fraction-free elimination; every division is exact.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else { return Some(0) };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

fn solve_subset(facets: &[(Vec<Rational>, Rational)], idx: &[usize]) -> Option<Vec<Rational>> {
    let m = RatMatrix::new(idx.iter().map(|&i| facets[i].0.clone()).collect()).ok()?;
    let inv = m.inverse().ok()?;
    let rhs: Vec<Rational> = idx.iter().map(|&i| facets[i].1.clone()).collect();
    Some(inv.mul_vec(&rhs))
}

/// Advances `idx` to the next `k`-subset of `0..m` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimizers of the coset `c + 2Λ` by plain box search; test oracle only.
#[cfg(test)]
pub(super) fn coset_minimizers_brute(l: &Lattice, c: &[i64], bound: i64) -> Vec<Vec<BigInt>> {
    let n = l.dim();
    let mut best: Option<Rational> = None;
    let mut hits = Vec::new();
    let mut z = vec![-bound; n];
    loop {
        let v: Vec<BigInt> = z.iter().zip(c).map(|(a, b)| BigInt::from(2 * a + b)).collect();
        let q = l.norm_sq_int(&v);
        match &best {
            Some(b) if q > *b => {}
            Some(b) if q == *b => hits.push(v),
            _ => {
                best = Some(q);
                hits = vec![v];
            }
        }
        let mut i = 0;
        while i < n {
            z[i] += 1;
            if z[i] <= bound {
                break;
            }
            z[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    hits.sort();
    hits
}
