//! Exact lattice point enumerators for the supported body kinds.

pub(crate) mod region;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::arith::{certified_compare, Comparison, IntMatrix, Precision, RatMatrix, Real};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::polytope::LatticePolytope;

use region::{bounding_box, ceil_sqrt, ellipsoid_box, Linear, Quadric, Region};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_RETAIN_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    /// Largest admissible number of candidate points in the bounding box.
    pub budget: u64,
    /// Points are returned only when the count is at most this.
    pub retain_limit: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            retain_limit: DEFAULT_RETAIN_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Enumeration,
    DeterminantFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigInt,
    /// Lattice points in coefficient coordinates, sorted.
    pub points: Option<Vec<Vec<BigInt>>>,
    /// Every method that produced the count; they agree.
    pub methods: Vec<CountMethod>,
}

impl CountResult {
    fn enumerated(e: region::Enumerated) -> Self {
        CountResult {
            count: e.count,
            points: e.points,
            methods: vec![CountMethod::Enumeration],
        }
    }
}

/// Radius of an inner parallel body, given by its square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusSq {
    Rational(Rational),
    /// `ρ² = 1/π`.
    InversePi,
}

impl fmt::Display for RadiusSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusSq::Rational(q) => write!(f, "{}", rational::format(q)),
            RadiusSq::InversePi => write!(f, "1/pi"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BodyKind {
    Polytope(LatticePolytope),
    /// `t + P`, closed.
    TranslatedPolytope {
        translate: Vec<Rational>,
        polytope: LatticePolytope,
    },
    /// `t + {Σ ρ_i a_i : 0 <= ρ_i < 1}` with lattice generators `a_i`.
    HalfOpenParallelepiped {
        generators: Vec<Vec<BigInt>>,
        translate: Vec<Rational>,
    },
    /// Euclidean ball; center in coefficient coordinates.
    Ball {
        center: Vec<Rational>,
        radius_sq: Rational,
    },
    /// `P ⊖ ρB`.
    InnerParallel {
        polytope: LatticePolytope,
        rho_sq: RadiusSq,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Body {
    lattice: Arc<Lattice>,
    kind: BodyKind,
}

impl Body {
    pub fn polytope(p: LatticePolytope) -> Body {
        Body {
            lattice: p.lattice().clone(),
            kind: BodyKind::Polytope(p),
        }
    }

    pub fn translated(p: LatticePolytope, translate: Vec<Rational>) -> Result<Body> {
        check_len(p.dim(), translate.len())?;
        Ok(Body {
            lattice: p.lattice().clone(),
            kind: BodyKind::TranslatedPolytope {
                translate,
                polytope: p,
            },
        })
    }

    pub fn halfopen_parallelepiped(
        lattice: Arc<Lattice>,
        generators: Vec<Vec<BigInt>>,
        translate: Vec<Rational>,
    ) -> Result<Body> {
        let n = lattice.dim();
        check_len(n, translate.len())?;
        if generators.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: generators.len(),
            });
        }
        for g in &generators {
            check_len(n, g.len())?;
        }
        if IntMatrix::from_rows(&generators)?.det()?.is_zero() {
            return Err(Error::DegenerateParallelepiped);
        }
        Ok(Body {
            lattice,
            kind: BodyKind::HalfOpenParallelepiped {
                generators,
                translate,
            },
        })
    }

    pub fn ball(lattice: Arc<Lattice>, center: Vec<Rational>, radius_sq: Rational) -> Result<Body> {
        check_len(lattice.dim(), center.len())?;
        if !radius_sq.is_positive() {
            return Err(Error::Invalid("radius_sq must be positive".into()));
        }
        Ok(Body {
            lattice,
            kind: BodyKind::Ball { center, radius_sq },
        })
    }

    pub fn inner_parallel(p: LatticePolytope, rho_sq: RadiusSq) -> Result<Body> {
        if let RadiusSq::Rational(q) = &rho_sq {
            if q.is_negative() {
                return Err(Error::Invalid("rho_sq must be non-negative".into()));
            }
        }
        Ok(Body {
            lattice: p.lattice().clone(),
            kind: BodyKind::InnerParallel { polytope: p, rho_sq },
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            BodyKind::Polytope(_) => "polytope",
            BodyKind::TranslatedPolytope { .. } => "translated_polytope",
            BodyKind::HalfOpenParallelepiped { .. } => "halfopen_parallelepiped",
            BodyKind::Ball { .. } => "ball",
            BodyKind::InnerParallel { .. } => "inner_parallel",
        }
    }

    /// The polytope underlying a polytope-based body.
    pub fn polytope_part(&self) -> Option<&LatticePolytope> {
        match &self.kind {
            BodyKind::Polytope(p)
            | BodyKind::TranslatedPolytope { polytope: p, .. }
            | BodyKind::InnerParallel { polytope: p, .. } => Some(p),
            _ => None,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.kind {
            BodyKind::Polytope(p) => format!("polytope n={} vertices={}", p.dim(), p.vertices().len()),
            BodyKind::TranslatedPolytope { translate, polytope } => format!(
                "translate [{}] + polytope n={} vertices={}",
                fmt_vec(translate),
                polytope.dim(),
                polytope.vertices().len()
            ),
            BodyKind::HalfOpenParallelepiped { translate, .. } => {
                format!("halfopen parallelepiped n={} at [{}]", self.dim(), fmt_vec(translate))
            }
            BodyKind::Ball { center, radius_sq } => format!(
                "ball n={} center [{}] radius_sq {}",
                self.dim(),
                fmt_vec(center),
                rational::format(radius_sq)
            ),
            BodyKind::InnerParallel { polytope, rho_sq } => format!(
                "inner parallel body rho_sq={} of polytope n={} vertices={}",
                rho_sq,
                polytope.dim(),
                polytope.vertices().len()
            ),
        }
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    v.iter().map(rational::format).collect::<Vec<_>>().join(", ")
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn polytope_region(p: &LatticePolytope, translate: Option<&[Rational]>) -> Region {
    let mut verts: Vec<Vec<Rational>> = p.vertices().iter().map(|v| rational::to_rational_vec(v)).collect();
    if let Some(t) = translate {
        for v in verts.iter_mut() {
            for (x, s) in v.iter_mut().zip(t) {
                *x += s;
            }
        }
    }
    let (lo, hi) = bounding_box(&verts);
    let linear = p
        .facets()
        .iter()
        .map(|f| {
            let normal = rational::to_rational_vec(&f.normal);
            let shift = translate.map_or_else(Rational::zero, |t| rational::dot(&normal, t));
            Linear {
                rhs: rational::from_big(&f.offset) + shift,
                normal,
                strict: false,
            }
        })
        .collect();
    Region {
        lo,
        hi,
        linear,
        quadric: None,
    }
}

fn run(region: &Region, opts: &CountOptions) -> Result<CountResult> {
    region.check_budget(opts.budget)?;
    Ok(CountResult::enumerated(region.enumerate(opts.retain_limit)))
}

/// `G(body)`, the number of lattice points in the body.
pub fn count(body: &Body, opts: &CountOptions) -> Result<CountResult> {
    match &body.kind {
        BodyKind::Polytope(p) => run(&polytope_region(p, None), opts),
        BodyKind::TranslatedPolytope { translate, polytope } => count_translate(translate, polytope, opts),
        BodyKind::HalfOpenParallelepiped { .. } => count_halfopen_parallelepiped(body, opts),
        BodyKind::Ball { center, radius_sq } => {
            let q = Quadric {
                gram: body.lattice.gram().clone(),
                center: center.clone(),
                radius_sq: radius_sq.clone(),
            };
            let (lo, hi) = ellipsoid_box(&q)?;
            run(
                &Region {
                    lo,
                    hi,
                    linear: vec![],
                    quadric: Some(q),
                },
                opts,
            )
        }
        BodyKind::InnerParallel { polytope, rho_sq } => match rho_sq {
            RadiusSq::Rational(q) => count_inner_parallel(polytope, q, opts),
            RadiusSq::InversePi => count_inner_parallel_inverse_pi(polytope, opts),
        },
    }
}

/// `G(t + P)` with `t + P` closed.
pub fn count_translate(t: &[Rational], p: &LatticePolytope, opts: &CountOptions) -> Result<CountResult> {
    check_len(p.dim(), t.len())?;
    run(&polytope_region(p, Some(t)), opts)
}

/// Counts the half-open parallelepiped by enumeration and checks the result
/// against `|det|` of the generators.
pub fn count_halfopen_parallelepiped(body: &Body, opts: &CountOptions) -> Result<CountResult> {
    let BodyKind::HalfOpenParallelepiped {
        generators,
        translate,
    } = &body.kind
    else {
        return Err(Error::Invalid("not a half-open parallelepiped".into()));
    };
    let n = body.dim();
    let a = IntMatrix::from_rows(generators)?;
    let det = a.det()?;
    if det.is_zero() {
        return Err(Error::DegenerateParallelepiped);
    }
    // ρ_i = w_i·(y - t) / |det| with w_i = |det| · column i of A⁻¹.
    let inv = RatMatrix::from_int(&a).inverse()?;
    let d = rational::from_big(&det.abs());
    let mut linear = Vec::with_capacity(2 * n);
    for i in 0..n {
        let w: Vec<Rational> = (0..n).map(|k| inv.get(k, i) * &d).collect();
        let wt = rational::dot(&w, translate);
        // 0 <= w·(y - t) < |det|
        linear.push(Linear {
            normal: w.iter().map(|x| -x).collect(),
            rhs: -wt.clone(),
            strict: false,
        });
        linear.push(Linear {
            normal: w,
            rhs: &wt + &d,
            strict: true,
        });
    }
    let corners: Vec<Vec<Rational>> = (0..1u32 << n)
        .map(|mask| {
            let mut c = translate.clone();
            for (i, g) in generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, gi) in c.iter_mut().zip(g) {
                        *x += rational::from_big(gi);
                    }
                }
            }
            c
        })
        .collect();
    let (lo, hi) = bounding_box(&corners);
    let mut res = run(
        &Region {
            lo,
            hi,
            linear,
            quadric: None,
        },
        opts,
    )?;
    if res.count != det.abs() {
        return Err(Error::Internal(format!(
            "parallelepiped enumeration {} disagrees with |det| {}",
            res.count,
            det.abs()
        )));
    }
    res.methods.push(CountMethod::DeterminantFormula);
    Ok(res)
}

/// Lattice points of `P ⊖ ρB`. As `c·z` is an integer, each shifted
/// constraint `c·z <= b - ρ|a|` is equivalent to `c·z <= b - ⌈ρ|a|⌉`.
pub fn count_inner_parallel(p: &LatticePolytope, rho_sq: &Rational, opts: &CountOptions) -> Result<CountResult> {
    if rho_sq.is_negative() {
        return Err(Error::Invalid("rho_sq must be non-negative".into()));
    }
    let shifts = p
        .facets()
        .iter()
        .map(|f| Ok(ceil_sqrt(&(rho_sq * p.lattice().dual_norm_sq(&f.normal)))))
        .collect::<Result<Vec<_>>>()?;
    shifted_count(p, &shifts, opts)
}

/// Lattice points of `P ⊖ π^{-1/2} B`: the shift is the least `m` with
/// `π m² >= |a|²`, decided by certified comparison (never an equality).
pub fn count_inner_parallel_inverse_pi(p: &LatticePolytope, opts: &CountOptions) -> Result<CountResult> {
    let prec = Precision::default();
    let shifts = p
        .facets()
        .iter()
        .map(|f| {
            let nsq = p.lattice().dual_norm_sq(&f.normal);
            // start below sqrt(|a|²/3) >= the answer's lower neighbour
            let mut m = ceil_sqrt(&(&nsq / rational::int(4)));
            loop {
                let lhs = Real::Pi.scale(&rational::from_big(&(&m * &m)));
                match certified_compare(&lhs, &Real::rational(nsq.clone()), &prec) {
                    Comparison::Greater | Comparison::Equal => return Ok(m),
                    Comparison::Less => m += 1,
                    Comparison::Inconclusive(bits) => {
                        return Err(Error::Internal(format!("pi comparison inconclusive at {bits} bits")))
                    }
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    shifted_count(p, &shifts, opts)
}

fn shifted_count(p: &LatticePolytope, shifts: &[BigInt], opts: &CountOptions) -> Result<CountResult> {
    let mut region = polytope_region(p, None);
    for (row, s) in region.linear.iter_mut().zip(shifts) {
        row.rhs -= rational::from_big(s);
    }
    run(&region, opts)
}

/// Pick data of a lattice polygon in lattice-normalized units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PickData {
    /// `vol / det Λ`.
    pub area: Rational,
    pub boundary: BigInt,
    pub interior: BigInt,
    pub count: BigInt,
}

impl PickData {
    /// `G = A + B/2 + 1`.
    pub fn holds(&self) -> bool {
        rational::from_big(&self.count)
            == &self.area + rational::from_big(&self.boundary) / rational::int(2) + Rational::one()
    }
}

/// Area, boundary and interior counts of a polygon, each computed on its
/// own: boundary from edge gcds, interior by strict enumeration.
pub fn pick_check(p: &LatticePolytope, opts: &CountOptions) -> Result<PickData> {
    if p.dim() != 2 {
        return Err(Error::DimensionUnsupported {
            op: "pick_check",
            n: p.dim(),
            max: 2,
        });
    }
    let boundary: BigInt = p
        .facets()
        .iter()
        .map(|f| {
            let a = &p.vertices()[f.vertices[0]];
            let b = &p.vertices()[f.vertices[1]];
            let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            rational::gcd_all(&d)
        })
        .sum();
    let mut region = polytope_region(p, None);
    for row in region.linear.iter_mut() {
        row.strict = true;
    }
    let interior = run(&region, opts)?.count;
    let count = count(&Body::polytope(p.clone()), opts)?.count;
    Ok(PickData {
        area: p.normalized_volume().clone(),
        boundary,
        interior,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn z(n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::integer(n))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn simplex_k(n: usize, k: i64) -> LatticePolytope {
        let mut pts = vec![vec![BigInt::zero(); n]];
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(if i == 0 { k } else { 1 });
            pts.push(e);
        }
        LatticePolytope::hull(&pts, z(n)).unwrap()
    }

    fn cube(n: usize, s: i64) -> LatticePolytope {
        let pts: Vec<Vec<BigInt>> = (0..1u32 << n)
            .map(|m| (0..n).map(|i| BigInt::from(if m >> i & 1 == 1 { s } else { 0 })).collect())
            .collect();
        LatticePolytope::hull(&pts, z(n)).unwrap()
    }

    fn o() -> CountOptions {
        CountOptions::default()
    }

    #[test]
    fn basic_counts() {
        assert_eq!(count(&Body::polytope(simplex_k(3, 7)), &o()).unwrap().count, BigInt::from(10));
        assert_eq!(count(&Body::polytope(cube(3, 1)), &o()).unwrap().count, BigInt::from(8));
        let ball = Body::ball(z(2), vec![int(0), int(0)], rat(9, 4)).unwrap();
        assert_eq!(count(&ball, &o()).unwrap().count, BigInt::from(9));
    }

    #[test]
    fn translates() {
        let s4 = simplex_k(3, 4);
        let r = count_translate(&[rat(1, 2), int(0), int(0)], &s4, &o()).unwrap();
        assert_eq!(r.count, BigInt::from(4));
        assert_eq!(
            r.points.unwrap(),
            vec![big(&[1, 0, 0]), big(&[2, 0, 0]), big(&[3, 0, 0]), big(&[4, 0, 0])]
        );
        let t0 = count_translate(&[int(0), int(0), int(0)], &s4, &o()).unwrap();
        assert_eq!(t0.count, BigInt::from(7));
        let reeve = LatticePolytope::hull_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[5, 5, 5]], z(3)).unwrap();
        let r = count_translate(&[rat(1, 2), rat(1, 2), rat(1, 2)], &reeve, &o()).unwrap();
        assert_eq!(r.count, BigInt::from(5));
        assert_eq!(r.points.unwrap(), (1..=5).map(|i| big(&[i, i, i])).collect::<Vec<_>>());
    }

    #[test]
    fn parallelepipeds() {
        let unit = Body::halfopen_parallelepiped(
            z(3),
            vec![big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[0, 0, 1])],
            vec![int(0); 3],
        )
        .unwrap();
        let r = count(&unit, &o()).unwrap();
        assert_eq!(r.count, BigInt::one());
        assert_eq!(r.methods, vec![CountMethod::Enumeration, CountMethod::DeterminantFormula]);
        let gens = vec![big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[5, 5, 5])];
        let b = Body::halfopen_parallelepiped(z(3), gens.clone(), vec![int(0); 3]).unwrap();
        assert_eq!(count(&b, &o()).unwrap().count, BigInt::from(5));
        let b = Body::halfopen_parallelepiped(z(3), gens, vec![rat(1, 3), rat(1, 7), rat(1, 11)]).unwrap();
        assert_eq!(count(&b, &o()).unwrap().count, BigInt::from(5));
        let neg = Body::halfopen_parallelepiped(z(2), vec![big(&[0, 1]), big(&[3, -2])], vec![rat(-1, 2), int(0)]).unwrap();
        assert_eq!(count(&neg, &o()).unwrap().count, BigInt::from(3));
        assert!(matches!(
            Body::halfopen_parallelepiped(z(2), vec![big(&[1, 2]), big(&[2, 4])], vec![int(0); 2]),
            Err(Error::DegenerateParallelepiped)
        ));
    }

    #[test]
    fn inner_parallel_counts() {
        assert_eq!(count_inner_parallel(&cube(3, 3), &int(1), &o()).unwrap().count, BigInt::from(8));
        assert_eq!(count_inner_parallel(&cube(3, 3), &int(0), &o()).unwrap().count, BigInt::from(64));
        assert_eq!(count_inner_parallel(&cube(3, 4), &rat(1, 3), &o()).unwrap().count, BigInt::from(27));
        assert_eq!(count_inner_parallel(&cube(3, 1), &int(1), &o()).unwrap().count, BigInt::zero());
    }

    #[test]
    fn inner_parallel_matches_per_point_test() {
        let p = LatticePolytope::hull_i64(
            &[&[0, 0, 0], &[6, 1, 0], &[1, 5, 1], &[2, 1, 6], &[5, 4, 4], &[0, 3, 3]],
            z(3),
        )
        .unwrap();
        for rho_sq in [rat(1, 3), rat(1, 2), int(1), rat(7, 5)] {
            let fast = count_inner_parallel(&p, &rho_sq, &o()).unwrap();
            let sys = p.inner_parallel_system(&rho_sq).unwrap();
            let all = count(&Body::polytope(p.clone()), &o()).unwrap().points.unwrap();
            let slow: Vec<Vec<BigInt>> = all.into_iter().filter(|y| sys.contains_int(y)).collect();
            assert_eq!(fast.points.unwrap(), slow);
        }
        let pi = count_inner_parallel_inverse_pi(&p, &o()).unwrap().count;
        let third = count_inner_parallel(&p, &rat(1, 3), &o()).unwrap().count;
        assert!(third <= pi);
    }

    #[test]
    fn pick_examples() {
        let tri = LatticePolytope::hull_i64(&[&[0, 0], &[2, 0], &[0, 2]], z(2)).unwrap();
        let d = pick_check(&tri, &o()).unwrap();
        assert_eq!((d.area.clone(), d.boundary.clone(), d.count.clone()), (int(2), BigInt::from(6), BigInt::from(6)));
        assert!(d.holds());
        let sq = pick_check(&cube(2, 1), &o()).unwrap();
        assert_eq!(sq.count, BigInt::from(4));
        assert!(sq.holds());
        let s9 = pick_check(&simplex_k(2, 9), &o()).unwrap();
        assert_eq!(s9.count, BigInt::from(11));
        assert!(s9.holds());
    }

    #[test]
    fn budget_is_enforced() {
        let big_cube = cube(3, 1000);
        let tight = CountOptions {
            budget: 1000,
            retain_limit: 0,
        };
        match count(&Body::polytope(big_cube), &tight) {
            Err(Error::BudgetExceeded { budget, candidates }) => {
                assert_eq!(budget, 1000);
                assert_eq!(candidates, "1003003001");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn general_lattice_ball() {
        // The fcc lattice has 12 vectors of norm² 2.
        let fcc = Arc::new(Lattice::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).unwrap());
        let b = Body::ball(fcc, vec![int(0); 3], int(2)).unwrap();
        assert_eq!(count(&b, &o()).unwrap().count, BigInt::from(13));
    }
}
