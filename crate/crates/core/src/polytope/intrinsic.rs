//! Intrinsic volumes and the Steiner polynomial of 3-polytopes.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::LatticePolytope;
use crate::arith::rational::{self, Rational};
use crate::arith::{RadicalSum, Real};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicVolumes3 {
    pub v0: Rational,
    /// Mean width scaled: `(1/2π) Σ_e |e| θ_e` over edges with exterior
    /// angle `θ_e`.
    pub v1: Real,
    pub v2: RadicalSum,
    pub v3: Rational,
}

/// An edge as its two endpoints and the two facets meeting there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub endpoints: (usize, usize),
    pub facets: (usize, usize),
}

impl LatticePolytope {
    /// Edges of a 3-polytope: pairs of facets sharing two vertices.
    pub fn edges(&self) -> Result<Vec<Edge>> {
        self.require_dim3("edges")?;
        let fs = self.facets();
        let mut out = Vec::new();
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                let shared: Vec<usize> = fs[i]
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| fs[j].vertices.binary_search(v).is_ok())
                    .collect();
                if shared.len() >= 2 {
                    debug_assert_eq!(shared.len(), 2);
                    out.push(Edge {
                        endpoints: (shared[0], shared[1]),
                        facets: (i, j),
                    });
                }
            }
        }
        Ok(out)
    }

    fn require_dim3(&self, op: &'static str) -> Result<()> {
        if self.dim() != 3 {
            return Err(Error::DimensionUnsupported {
                op,
                n: self.dim(),
                max: 3,
            });
        }
        Ok(())
    }

    pub fn intrinsic_volumes_3d(&self) -> Result<IntrinsicVolumes3> {
        self.require_dim3("intrinsic_volumes_3d")?;
        let lat = self.lattice();
        let mut terms = Vec::new();
        let mut exact = RadicalSum::zero();
        for e in self.edges()? {
            let (a, b) = e.endpoints;
            let d: Vec<BigInt> = self.vertices()[a]
                .iter()
                .zip(&self.vertices()[b])
                .map(|(x, y)| x - y)
                .collect();
            let len = RadicalSum::sqrt_of(&lat.norm_sq_int(&d));
            let c1 = rational::to_rational_vec(&self.facets()[e.facets.0].normal);
            let c2 = rational::to_rational_vec(&self.facets()[e.facets.1].normal);
            let dg = lat.dual_gram();
            let (dot, nsp) = (dg.bilinear(&c1, &c2), dg.quad(&c1) * dg.quad(&c2));
            match exact_turn(&dot, &nsp) {
                Some(f) => exact = &exact + &len.scale(&f),
                None => terms.push(Real::from(len).mul(&Real::angle(dot, nsp))),
            }
        }
        let two_pi = Real::Pi.scale(&rational::int(2));
        let v1 = if terms.is_empty() {
            Real::from(exact)
        } else {
            Real::from(exact).add(&Real::Sum(terms).div(&two_pi))
        };
        Ok(IntrinsicVolumes3 {
            v0: Rational::one(),
            v1,
            v2: self.surface_area().scale(&rational::rat(1, 2)),
            v3: self.volume(),
        })
    }

    /// `vol(P + ρB₃)` for rational `ρ >= 0`.
    pub fn steiner_volume(&self, rho: &Rational) -> Result<Real> {
        self.steiner_volume_real(&Real::rational(rho.clone()))
    }

    /// Steiner polynomial evaluated at an arbitrary real radius.
    pub fn steiner_volume_real(&self, rho: &Real) -> Result<Real> {
        let iv = self.intrinsic_volumes_3d()?;
        Ok(steiner_polynomial(&iv, rho))
    }
}

/// The angle between two normals as a fraction of a full turn, when
/// `cos²` is one of `0, 1/4, 1/2, 3/4`.
fn exact_turn(dot: &Rational, norm_sq_product: &Rational) -> Option<Rational> {
    let cos_sq = dot * dot / norm_sq_product;
    let acute = if cos_sq == rational::int(0) {
        return Some(rational::rat(1, 4));
    } else if cos_sq == rational::rat(1, 4) {
        rational::rat(1, 6)
    } else if cos_sq == rational::rat(1, 2) {
        rational::rat(1, 8)
    } else if cos_sq == rational::rat(3, 4) {
        rational::rat(1, 12)
    } else {
        return None;
    };
    Some(if dot.is_negative() {
        rational::rat(1, 2) - acute
    } else {
        acute
    })
}

/// `V3 + 2ρ V2 + πρ² V1 + (4π/3) ρ³`.
pub fn steiner_polynomial(iv: &IntrinsicVolumes3, rho: &Real) -> Real {
    let v3 = Real::rational(iv.v3.clone());
    let v2 = Real::from(iv.v2.scale(&rational::int(2))).mul(rho);
    let v1 = Real::Pi.mul(&rho.powi(2)).mul(&iv.v1);
    let v0 = Real::Pi.scale(&rational::rat(4, 3)).mul(&rho.powi(3));
    Real::Sum(vec![v3, v2, v1, v0])
}
