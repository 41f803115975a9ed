//! Checkers for the lattice point inequalities, the boundary-layer audit
//! and the corpus runner.
//!
//! Every verdict comes from [`certified_compare`]; a violation is reported
//! only when the enclosures separate in the violating direction.

mod audit;
mod corpus;
mod ids;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::arith::{certified_compare, Comparison, Precision, RadicalSum, RatMatrix, Real};
use crate::counting::{self, Body, BodyKind, CountOptions};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, MAX_COVERING_DIM};
use crate::polytope::LatticePolytope;
use crate::witnesses::body_to_json;

pub use audit::{boundary_layer_audit, AuditRecord, FacetAudit, SubCheck};
pub use corpus::{
    reports_to_csv, run_corpus, run_items, CorpusReport, CorpusRow, IdSummary, REPORT_SCHEMA_VERSION,
};
pub use ids::InequalityId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    #[serde(rename = "VIOLATED")]
    Violated,
    Inconclusive,
    HypothesisUnmet,
    OutOfScope,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::Holds,
        Verdict::HoldsWithEquality,
        Verdict::Violated,
        Verdict::Inconclusive,
        Verdict::HypothesisUnmet,
        Verdict::OutOfScope,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::HoldsWithEquality => "HoldsWithEquality",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::HypothesisUnmet => "HypothesisUnmet",
            Verdict::OutOfScope => "OutOfScope",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A real number as it appears in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub expr: String,
    /// Canonical exact value when the quantity is a radical sum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// `[lo, hi]@bits` with dyadic endpoints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<f64>,
}

impl Quantity {
    pub fn of(x: &Real, p: &Precision) -> Quantity {
        let exact = x.as_radical().map(|r| match r.as_rational() {
            Some(q) => rational::format(&q),
            None => r.to_string(),
        });
        let enc = x.enclosure(p);
        Quantity {
            expr: x.to_string(),
            exact,
            enclosure: enc.as_ref().map(|e| e.to_string()),
            approx: enc.map(|e| e.midpoint_f64()),
        }
    }

    /// Best short rendering: the exact value if known, else the enclosure.
    pub fn display(&self) -> &str {
        self.exact
            .as_deref()
            .or(self.enclosure.as_deref())
            .unwrap_or(&self.expr)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: InequalityId,
    pub body: String,
    pub dim: usize,
    /// `<` or `<=`.
    pub relation: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Quantity>,
    /// `rhs - lhs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<Quantity>,
    /// `lhs / rhs` when `rhs > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Quantity>,
    /// Conjectures and observations; a violation there is a finding.
    pub observational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Failed hypothesis, scope limit or comparison precision.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    /// Counts and measures the verdict was computed from.
    pub measures: BTreeMap<String, String>,
    /// Re-loadable body spec, attached to violations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body_spec: Option<String>,
}

impl InequalityReport {
    fn new(id: InequalityId, body: &Body) -> Self {
        InequalityReport {
            id,
            body: body.describe(),
            dim: body.dim(),
            relation: if id.is_strict() { "<" } else { "<=" }.into(),
            verdict: Verdict::OutOfScope,
            lhs: None,
            rhs: None,
            slack: None,
            ratio: None,
            observational: id.is_observational(),
            label: id.label().map(str::to_string),
            detail: String::new(),
            measures: BTreeMap::new(),
            body_spec: None,
        }
    }

    fn unmet(mut self, hypothesis: &str) -> Self {
        self.verdict = Verdict::HypothesisUnmet;
        self.detail = format!("hypothesis not satisfied: {hypothesis}");
        self
    }

    fn out_of_scope(mut self, why: &str) -> Self {
        self.verdict = Verdict::OutOfScope;
        self.detail = why.into();
        self
    }

    fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.measures.insert(key.into(), value.to_string());
    }

    /// One-line human rendering.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{} {}: {}", self.id, self.body, self.verdict);
        if let (Some(l), Some(r)) = (&self.lhs, &self.rhs) {
            s += &format!(" ({} {} {})", l.display(), self.relation, r.display());
        }
        if !self.detail.is_empty() {
            s += &format!(" [{}]", self.detail);
        }
        if let Some(l) = &self.label {
            s += &format!(" <{l}>");
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub count: CountOptions,
    pub precision: Precision,
}

/// Whether `Λ = Z^n` as a point set.
pub fn is_integer_lattice(l: &Lattice) -> bool {
    l.same_lattice(&Lattice::integer(l.dim()))
}

/// Volume and surface area of a compact convex body.
struct Measures {
    vol: Real,
    surface: Real,
}

fn unit_ball_volume(n: usize) -> Real {
    let n32 = n as u32;
    if n.is_multiple_of(2) {
        let h = n / 2;
        Real::Pi
            .powi(h as u32)
            .scale(&Rational::from_integer(rational::factorial(h)).recip())
    } else {
        // 2^n π^((n-1)/2) ((n-1)/2)! / n!
        let h = (n - 1) / 2;
        let c = Rational::new(
            BigInt::from(2).pow(n32) * rational::factorial(h),
            rational::factorial(n),
        );
        Real::Pi.powi(h as u32).scale(&c)
    }
}

fn ball_measures(n: usize, radius_sq: &Rational) -> Measures {
    let r = Real::from(RadicalSum::sqrt_of(radius_sq));
    let k = unit_ball_volume(n);
    Measures {
        vol: k.mul(&r.powi(n as u32)),
        surface: k.mul(&r.powi(n as u32 - 1)).scale(&rational::int(n as i64)),
    }
}

fn polytope_measures(p: &LatticePolytope) -> Measures {
    Measures {
        vol: Real::rational(p.volume()),
        surface: Real::from(p.surface_area()),
    }
}

/// `rho_3 = kappa_3^(-1/3)`.
fn bokowski_radius() -> Real {
    Real::Pi.scale(&rational::rat(4, 3)).recip().cbrt()
}

fn affine_rank(points: &[Vec<BigInt>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| rational::from_big(&(a - b))).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    RatMatrix::new(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Lattice points of the body with their affine rank, when retained.
struct Points {
    count: BigInt,
    points: Option<Vec<Vec<BigInt>>>,
}

impl Points {
    fn full_dimensional(&self, n: usize) -> Option<bool> {
        if self.count < BigInt::from(n as u64 + 1) {
            return Some(false);
        }
        self.points.as_ref().map(|p| affine_rank(p) == n)
    }
}

fn relation_verdict(cmp: Comparison, strict: bool) -> Verdict {
    match cmp {
        Comparison::Less => Verdict::Holds,
        Comparison::Equal if strict => Verdict::Violated,
        Comparison::Equal => Verdict::HoldsWithEquality,
        Comparison::Greater => Verdict::Violated,
        Comparison::Inconclusive(_) => Verdict::Inconclusive,
    }
}

fn decide(mut r: InequalityReport, body: &Body, lhs: Real, rhs: Real, opts: &CheckOptions) -> InequalityReport {
    let p = &opts.precision;
    let cmp = certified_compare(&lhs, &rhs, p);
    r.verdict = relation_verdict(cmp, r.id.is_strict());
    if let Comparison::Inconclusive(bits) = cmp {
        r.detail = format!("enclosures still overlap at {bits} bits");
    }
    let slack = rhs.sub(&lhs);
    r.slack = Some(Quantity::of(&slack, p));
    if certified_compare(&rhs, &Real::int(0), p) == Comparison::Greater {
        r.ratio = Some(Quantity::of(&lhs.div(&rhs), p));
    }
    r.lhs = Some(Quantity::of(&lhs, p));
    r.rhs = Some(Quantity::of(&rhs, p));
    if r.verdict == Verdict::Violated {
        r.body_spec = Some(body_to_json(body));
    }
    r
}

/// Checks one inequality against one body.
pub fn check(id: InequalityId, body: &Body, opts: &CheckOptions) -> Result<InequalityReport> {
    let r = InequalityReport::new(id, body);
    let n = body.dim();
    let lattice = body.lattice().clone();

    match body.kind() {
        BodyKind::InnerParallel { .. } => {
            return Ok(r.out_of_scope("volume and surface area of inner parallel bodies are not computed"));
        }
        BodyKind::HalfOpenParallelepiped { .. } => {
            return Ok(r.unmet("body is a compact convex body"));
        }
        _ => {}
    }

    if id.needs_integer_lattice() && !is_integer_lattice(&lattice) {
        return Ok(r.unmet("lattice is Z^n"));
    }
    if let Some(d) = id.required_dim() {
        if n != d {
            return Ok(r.unmet(&format!("n = {d}")));
        }
    }
    if id == InequalityId::GeneralThm41 && n > MAX_COVERING_DIM {
        return Ok(r.unmet(&format!("n <= {MAX_COVERING_DIM}")));
    }

    // translate lemmas take t + P with t outside the lattice
    if id.needs_translate() {
        return match body.kind() {
            BodyKind::TranslatedPolytope { translate, polytope } => {
                if rational::is_integral(translate) {
                    Ok(r.unmet("t not in the lattice"))
                } else {
                    check_translate(r, body, translate, polytope, opts)
                }
            }
            BodyKind::Polytope(_) => Ok(r.unmet("t not in the lattice")),
            _ => Ok(r.unmet("body is t + P for a lattice polytope P")),
        };
    }

    let pts = {
        let c = counting::count(body, &opts.count)?;
        Points {
            count: c.count,
            points: c.points,
        }
    };
    let mut r = r;
    r.note("G", &pts.count);

    if id.needs_full_lattice_dimension() {
        match pts.full_dimensional(n) {
            Some(true) => {}
            Some(false) => return Ok(r.unmet("dim(K ∩ Λ) = n")),
            None => {
                r.verdict = Verdict::Inconclusive;
                r.detail = "too many lattice points retained to test dim(K ∩ Λ) = n".into();
                return Ok(r);
            }
        }
    }

    let m = match body.kind() {
        BodyKind::Polytope(p) | BodyKind::TranslatedPolytope { polytope: p, .. } => polytope_measures(p),
        BodyKind::Ball { radius_sq, .. } => ball_measures(n, radius_sq),
        _ => unreachable!("handled above"),
    };
    let p = &opts.precision;
    r.note("vol", Quantity::of(&m.vol, p).display());
    r.note("F", Quantity::of(&m.surface, p).display());
    let g = Real::rational(rational::from_big(&pts.count));
    let det = Real::rational(lattice.det().clone());
    let nf = Rational::from_integer(rational::factorial(n));
    let n1f = Rational::from_integer(rational::factorial(n - 1));
    let n_r = rational::int(n as i64);

    use InequalityId::*;
    let (lhs, rhs) = match id {
        Blichfeldt11 => (g, m.vol.scale(&nf).add(&Real::rational(n_r))),
        General13i => (g, m.vol.div(&det).scale(&nf).add(&Real::rational(n_r))),
        MainThm11 => {
            let c = Real::from(RadicalSum::sqrt_of(&n_r) + RadicalSum::from_int(1)).scale(&rational::rat(1, 2));
            (g, m.vol.add(&c.mul(&m.surface).scale(&n1f)))
        }
        Dim3Thm12 => (g, m.vol.add(&m.surface.scale(&rational::int(2)))),
        BhwLower12 => (m.vol.sub(&m.surface.scale(&rational::rat(1, 2))), g),
        Conjecture14 => {
            let dn1 = Real::from(lattice.min_hyperplane_sublattice_det()?);
            r.note("det_sublattice", Quantity::of(&dn1, p).display());
            (g, m.vol.div(&det).add(&m.surface.div(&dn1).scale(&n1f)))
        }
        Wills32 | Overhagen33 => {
            let iv = intrinsic_sum(body, &m)?;
            r.note("V0+V1+V2+V3", Quantity::of(&iv, p).display());
            (g, iv)
        }
        McMullenShell => return mcmullen(r, body, &pts, opts),
        Bokowski34 => {
            let rho = bokowski_radius();
            let rhs = match body.kind() {
                BodyKind::Polytope(q) | BodyKind::TranslatedPolytope { polytope: q, .. } => {
                    q.steiner_volume_real(&rho)?
                }
                BodyKind::Ball { radius_sq, .. } => {
                    let rad = Real::from(RadicalSum::sqrt_of(radius_sq)).add(&rho);
                    unit_ball_volume(3).mul(&rad.powi(3))
                }
                _ => unreachable!("handled above"),
            };
            (g, rhs)
        }
        SketchRhoHalf => {
            let c = bokowski_radius().add(&Real::rational(rational::rat(1, 2)));
            (g, m.vol.add(&c.mul(&m.surface).scale(&n1f)))
        }
        GeneralThm41 => {
            let mu = lattice.inhomogeneous_minimum()?;
            let dual = lattice.dual_shortest_vector()?;
            let mu_l = &mu * &RadicalSum::sqrt_of(&dual.length_sq);
            let dn1 = Real::from(lattice.min_hyperplane_sublattice_det()?);
            r.note("mu", Quantity::of(&Real::from(mu.clone()), p).display());
            r.note("mu*lambda1_dual/n", Quantity::of(&Real::from(mu_l.scale(&Rational::new(BigInt::one(), BigInt::from(n)))), p).display());
            r.note("det_sublattice", Quantity::of(&dn1, p).display());
            let c = Real::from(mu_l + RadicalSum::from_int(1));
            (g, m.vol.div(&det).add(&c.mul(&m.surface).div(&dn1).scale(&n1f)))
        }
        Translate13 | General13ii => unreachable!("handled above"),
    };
    Ok(decide(r, body, lhs, rhs, opts))
}

fn check_translate(
    mut r: InequalityReport,
    body: &Body,
    t: &[Rational],
    p: &LatticePolytope,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let g = counting::count_translate(t, p, &opts.count)?.count;
    r.note("G", &g);
    let nf = Rational::from_integer(rational::factorial(p.dim()));
    let rhs = match r.id {
        InequalityId::Translate13 => p.volume() * &nf,
        _ => p.normalized_volume() * &nf,
    };
    r.note("vol(P)", rational::format(&p.volume()));
    Ok(decide(r, body, Real::rational(rational::from_big(&g)), Real::rational(rhs), opts))
}

/// `V0 + V1 + V2 + V3` of a 3-dimensional body.
fn intrinsic_sum(body: &Body, m: &Measures) -> Result<Real> {
    Ok(match body.kind() {
        BodyKind::Polytope(p) | BodyKind::TranslatedPolytope { polytope: p, .. } => {
            let iv = p.intrinsic_volumes_3d()?;
            Real::rational(iv.v0 + iv.v3).add(&Real::from(iv.v2)).add(&iv.v1)
        }
        BodyKind::Ball { radius_sq, .. } => {
            // V1 = 4r, V2 = F/2
            let r = Real::from(RadicalSum::sqrt_of(radius_sq));
            Real::int(1)
                .add(&r.scale(&rational::int(4)))
                .add(&m.surface.scale(&rational::rat(1, 2)))
                .add(&m.vol)
        }
        _ => return Err(Error::Invalid("intrinsic volumes need a polytope or ball".into())),
    })
}

/// `conv(K ∩ Λ)` for a body whose lattice points were retained.
fn lattice_hull(body: &Body, pts: &Points) -> Option<LatticePolytope> {
    match body.kind() {
        BodyKind::Polytope(p) => Some(p.clone()),
        _ => LatticePolytope::hull(pts.points.as_ref()?, body.lattice().clone()).ok(),
    }
}

fn mcmullen(mut r: InequalityReport, body: &Body, pts: &Points, opts: &CheckOptions) -> Result<InequalityReport> {
    let Some(hull) = lattice_hull(body, pts) else {
        return Ok(r.unmet("dim(K ∩ Λ) = n"));
    };
    let inner = counting::count_inner_parallel(&hull, &rational::rat(1, 3), &opts.count)?.count;
    let g = counting::count(&Body::polytope(hull.clone()), &opts.count)?.count;
    r.note("G(P)", &g);
    r.note("G(P inner 1/sqrt3)", &inner);
    let f = hull.surface_area();
    r.note("F(P)", &f);
    let lhs = Real::rational(rational::from_big(&(g - inner)));
    let rhs = Real::from(f + RadicalSum::from_int(2));
    Ok(decide(r, body, lhs, rhs, opts))
}

/// Volume, surface area and (in dimension three) intrinsic volumes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BodyMeasures {
    pub kind: String,
    pub dim: usize,
    pub lattice_det: String,
    pub volume: Quantity,
    pub surface_area: Quantity,
    /// `V0, V1, V2, V3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intrinsic_volumes: Option<Vec<Quantity>>,
}

pub fn measure_body(body: &Body, precision: &Precision) -> Result<BodyMeasures> {
    let n = body.dim();
    let lattice = body.lattice();
    let (m, intrinsic) = match body.kind() {
        BodyKind::Polytope(p) | BodyKind::TranslatedPolytope { polytope: p, .. } => {
            let iv = if n == 3 {
                let iv = p.intrinsic_volumes_3d()?;
                Some(vec![
                    Real::rational(iv.v0),
                    iv.v1,
                    Real::from(iv.v2),
                    Real::rational(iv.v3),
                ])
            } else {
                None
            };
            (polytope_measures(p), iv)
        }
        BodyKind::Ball { radius_sq, .. } => {
            let m = ball_measures(n, radius_sq);
            let iv = (n == 3).then(|| {
                let r = Real::from(RadicalSum::sqrt_of(radius_sq));
                vec![Real::int(1), r.scale(&rational::int(4)), m.surface.scale(&rational::rat(1, 2)), m.vol.clone()]
            });
            (m, iv)
        }
        BodyKind::HalfOpenParallelepiped { generators, .. } => (parallelepiped_measures(lattice, generators)?, None),
        BodyKind::InnerParallel { .. } => {
            return Err(Error::Invalid("measures of inner parallel bodies are not computed".into()))
        }
    };
    Ok(BodyMeasures {
        kind: body.kind_name().into(),
        dim: n,
        lattice_det: rational::format(lattice.det()),
        volume: Quantity::of(&m.vol, precision),
        surface_area: Quantity::of(&m.surface, precision),
        intrinsic_volumes: intrinsic.map(|v| v.iter().map(|x| Quantity::of(x, precision)).collect()),
    })
}

/// Volume `|det A| det Λ` and twice the sum of the facet volumes spanned
/// by all generators but one.
fn parallelepiped_measures(lattice: &Lattice, generators: &[Vec<BigInt>]) -> Result<Measures> {
    let n = generators.len();
    let a = RatMatrix::new(generators.iter().map(|g| rational::to_rational_vec(g)).collect())?;
    let vol = a.det().abs() * lattice.det();
    let mut surface = RadicalSum::zero();
    for skip in 0..n {
        let rows: Vec<Vec<Rational>> = (0..n).filter(|&i| i != skip).map(|i| a.rows()[i].clone()).collect();
        let area_sq = if rows.is_empty() {
            Rational::one()
        } else {
            let sub = RatMatrix::new(rows)?;
            sub.mul(lattice.gram()).mul(&sub.transpose()).det()
        };
        surface = &surface + &RadicalSum::sqrt_of(&area_sq).scale(&rational::int(2));
    }
    Ok(Measures {
        vol: Real::rational(vol),
        surface: Real::from(surface),
    })
}

/// Runs every id against a body. Body errors become Inconclusive rows.
pub fn check_all(body: &Body, ids: &[InequalityId], opts: &CheckOptions) -> Vec<InequalityReport> {
    ids.iter()
        .map(|&id| {
            check(id, body, opts).unwrap_or_else(|e| {
                let mut r = InequalityReport::new(id, body);
                r.verdict = Verdict::Inconclusive;
                r.detail = format!("error: {e}");
                r
            })
        })
        .collect()
}
