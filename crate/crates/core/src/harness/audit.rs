//! Boundary-layer audit of a lattice polytope over `Z^n`.
//!
//! Lattice points split into `L1` (the unit cube around the point fits in
//! `P`) and `L2`. Each facet `a·x <= b` owns a prism reaching `γ` layers
//! inward, `γ = ⌈|a|₁/2⌉ - 1`. Layer `j` holds the lattice points on
//! `a·x = b - j` whose orthogonal projection onto the facet hyperplane lies
//! in the facet.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{is_integer_lattice, Quantity};
use crate::arith::rational::{self, Rational};
use crate::arith::{certified_compare, Comparison, Precision, RadicalSum, Real};
use crate::counting::region::{bounding_box, Linear, Region};
use crate::counting::CountOptions;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::polytope::LatticePolytope;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetAudit {
    pub normal: Vec<String>,
    pub offset: String,
    pub l1_norm: String,
    pub gamma: u64,
    /// Lattice points of layer `j = 0, ..., γ`.
    pub layer_counts: Vec<String>,
    pub prism_count: String,
    /// `vol_{n-1}(F) / |a|`, exact.
    pub normalized_facet_volume: String,
    pub facet_volume: Quantity,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub dim: usize,
    pub lattice_points: String,
    pub volume: String,
    pub l1: Vec<Vec<String>>,
    pub l2_count: String,
    pub facets: Vec<FacetAudit>,
    /// Points of `L2` found in no prism.
    pub uncovered: Vec<Vec<String>>,
    /// `#L2 <= Σ G(Q_i) - m(n-1)`, recorded without being a sub-check.
    pub l2_overlap_bound: bool,
    pub checks: Vec<SubCheck>,
}

impl AuditRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&SubCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Re-expresses a polytope over a unimodular basis of `Z^n` in standard
/// coordinates.
fn standard_coordinates(p: &LatticePolytope) -> Result<LatticePolytope> {
    let l = p.lattice();
    if l.is_standard_integer() {
        return Ok(p.clone());
    }
    if !is_integer_lattice(l) {
        return Err(Error::Invalid("the boundary-layer audit needs the lattice Z^n".into()));
    }
    let pts: Vec<Vec<BigInt>> = p
        .vertices()
        .iter()
        .map(|v| {
            l.to_euclidean(&rational::to_rational_vec(v))
                .iter()
                .map(|x| x.to_integer())
                .collect()
        })
        .collect();
    LatticePolytope::hull(&pts, Arc::new(Lattice::integer(p.dim())))
}

fn check(name: &str, passed: bool, detail: String) -> SubCheck {
    SubCheck {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn boundary_layer_audit(p: &LatticePolytope, opts: &CountOptions, precision: &Precision) -> Result<AuditRecord> {
    let p = standard_coordinates(p)?;
    let n = p.dim();
    let all = super::counting::count(&super::Body::polytope(p.clone()), opts)?;
    let points = all
        .points
        .ok_or_else(|| Error::Invalid("too many lattice points to audit".into()))?;
    let vol = p.volume();

    let facets = p.facets();
    let l1_norms: Vec<BigInt> = facets.iter().map(|f| f.normal.iter().map(|x| x.abs()).sum()).collect();

    // z + C ⊆ P iff a·z + |a|₁/2 <= b for every facet
    let (l1, l2): (Vec<&Vec<BigInt>>, Vec<&Vec<BigInt>>) = points.iter().partition(|z| {
        facets
            .iter()
            .zip(&l1_norms)
            .all(|(f, s)| BigInt::from(2) * (rational::dot_int(&f.normal, z) - &f.offset) + s <= BigInt::zero())
    });

    let mut prism_points: HashSet<Vec<BigInt>> = HashSet::new();
    let mut facet_rows = Vec::new();
    let mut c_ok = true;
    let mut c_detail = String::new();
    let mut e_ok = true;
    let mut e_detail = String::new();
    let mut prism_total = BigInt::zero();
    let n1f = Rational::from_integer(rational::factorial(n - 1));
    let vols = p.facet_volumes();

    for (i, f) in facets.iter().enumerate() {
        let (ceil_half, _) = (&l1_norms[i] + BigInt::from(1)).div_rem(&BigInt::from(2));
        let gamma: u64 = (ceil_half - 1u32).try_into().unwrap_or(0);
        let a = rational::to_rational_vec(&f.normal);
        let a_sq = rational::dot(&a, &a);
        let fv = &vols[i];

        // bounding box of the prism
        let mut corners: Vec<Vec<Rational>> = Vec::new();
        for &v in &f.vertices {
            let x = rational::to_rational_vec(&p.vertices()[v]);
            let shift = rational::from_big(&BigInt::from(gamma)) / &a_sq;
            corners.push(x.iter().zip(&a).map(|(xi, ai)| xi - ai * &shift).collect());
            corners.push(x);
        }
        let (lo, hi) = bounding_box(&corners);

        let mut layer_counts = Vec::new();
        for j in 0..=gamma {
            let level = rational::from_big(&f.offset) - Rational::from_integer(j.into());
            let mut linear = vec![
                Linear {
                    normal: a.clone(),
                    rhs: level.clone(),
                    strict: false,
                },
                Linear {
                    normal: a.iter().map(|x| -x).collect(),
                    rhs: -level,
                    strict: false,
                },
            ];
            for (k, g) in facets.iter().enumerate() {
                if k == i {
                    continue;
                }
                let c = rational::to_rational_vec(&g.normal);
                let push = rational::dot(&c, &a) * Rational::from_integer(j.into()) / &a_sq;
                linear.push(Linear {
                    rhs: rational::from_big(&g.offset) - push,
                    normal: c,
                    strict: false,
                });
            }
            let region = Region {
                lo: lo.clone(),
                hi: hi.clone(),
                linear,
                quadric: None,
            };
            region.check_budget(opts.budget)?;
            let e = region.enumerate(opts.retain_limit);
            let pts = e
                .points
                .ok_or_else(|| Error::Invalid("too many lattice points in a prism layer".into()))?;
            prism_points.extend(pts);

            // (e) each layer against the translate or facet bound
            let bound = &fv.normalized * &n1f + if j == 0 { rational::int(n as i64 - 1) } else { Rational::zero() };
            if rational::from_big(&e.count) > bound {
                e_ok = false;
                e_detail += &format!("facet {i} layer {j}: {} > {}; ", e.count, rational::format(&bound));
            }
            layer_counts.push(e.count);
        }
        let prism: BigInt = layer_counts.iter().sum();
        prism_total += &prism;

        // (c) G(Q) < (sqrt(n)+1)/2 (n-1)! vol_{n-1}(F) + (n-1)
        let c = (RadicalSum::sqrt_of(&rational::int(n as i64)) + RadicalSum::from_int(1)).scale(&(rational::rat(1, 2) * &n1f));
        let rhs = &(&c * &fv.euclidean) + &RadicalSum::from_int(n as i64 - 1);
        let cmp = certified_compare(&Real::rational(rational::from_big(&prism)), &Real::from(rhs.clone()), precision);
        if cmp != Comparison::Less {
            c_ok = false;
            c_detail += &format!("facet {i}: {prism} vs {rhs} ({cmp:?}); ");
        }

        facet_rows.push(FacetAudit {
            normal: strings(&f.normal),
            offset: f.offset.to_string(),
            l1_norm: l1_norms[i].to_string(),
            gamma,
            layer_counts: strings(&layer_counts),
            prism_count: prism.to_string(),
            normalized_facet_volume: rational::format(&fv.normalized),
            facet_volume: Quantity::of(&Real::from(fv.euclidean.clone()), precision),
            vertices: f.vertices.len(),
        });
    }

    let uncovered: Vec<Vec<String>> = l2
        .iter()
        .filter(|z| !prism_points.contains(**z))
        .map(|z| strings(z))
        .collect();
    let m = facets.len();
    let k = p.vertices().len();
    let f0_sum: usize = facets.iter().map(|f| f.vertices.len()).sum();
    let l1_count = l1.len();
    let l2_count = l2.len();

    let checks = vec![
        check(
            "(a) #L1 <= vol(P)",
            rational::int(l1_count as i64) <= vol,
            format!("{l1_count} <= {}", rational::format(&vol)),
        ),
        check(
            "(b) L2 covered by prisms",
            uncovered.is_empty(),
            format!("{} of {l2_count} boundary points uncovered", uncovered.len()),
        ),
        check("(c) per-prism bound", c_ok, c_detail),
        check(
            "(d) sum of facet vertex counts >= k + m(n-1)",
            f0_sum >= k + m * (n - 1),
            format!("{f0_sum} >= {}", k + m * (n - 1)),
        ),
        check("(e) per-layer bound", e_ok, e_detail),
        check(
            "#L1 + #L2 = G(P)",
            BigInt::from(l1_count + l2_count) == all.count,
            format!("{l1_count} + {l2_count} = {}", all.count),
        ),
    ];

    Ok(AuditRecord {
        dim: n,
        lattice_points: all.count.to_string(),
        volume: rational::format(&vol),
        l1: l1.iter().map(|z| strings(z)).collect(),
        l2_count: l2_count.to_string(),
        facets: facet_rows,
        uncovered,
        l2_overlap_bound: BigInt::from(l2_count) + BigInt::from(m * (n - 1)) <= prism_total,
        checks,
    })
}
