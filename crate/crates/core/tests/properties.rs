use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use blichfeldt_core::arith::rational::{self, int, rat};
use blichfeldt_core::arith::{IntMatrix, RatMatrix};
use blichfeldt_core::counting::pick_check;
use blichfeldt_core::harness::check;
use blichfeldt_core::witnesses::{body_from_json, body_to_json, random_unimodular, Stream};
use blichfeldt_core::{
    certified_compare, count, Body, CheckOptions, Comparison, CountOptions, Error, InequalityId, Lattice,
    LatticePolytope, Precision, RadicalSum, Rational, Real, Verdict,
};

fn opts() -> CountOptions {
    CountOptions::default()
}

fn g(p: &LatticePolytope) -> BigInt {
    count(&Body::polytope(p.clone()), &opts()).unwrap().count
}

fn hull(pts: &[Vec<i64>]) -> Option<LatticePolytope> {
    let n = pts[0].len();
    let big: Vec<Vec<BigInt>> = pts.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect();
    match LatticePolytope::hull(&big, Arc::new(Lattice::integer(n))) {
        Ok(p) => Some(p),
        Err(Error::DegenerateHull) => None,
        Err(e) => panic!("{e}"),
    }
}

fn point_sets(n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0..=bound, n), n + 1..n + 7)
}

/// Counts box points inside some simplex of the placing triangulation,
/// via barycentric coordinates. Shares no code with the facet-based
/// counter.
fn simplex_oracle(p: &LatticePolytope) -> BigInt {
    let n = p.dim();
    let verts: Vec<Vec<Rational>> = p.vertices().iter().map(|v| rational::to_rational_vec(v)).collect();
    let inverses: Vec<(Vec<Rational>, RatMatrix)> = p
        .placing_triangulation()
        .simplices
        .iter()
        .map(|s| {
            let v0 = verts[s[0]].clone();
            let rows: Vec<Vec<Rational>> =
                s[1..].iter().map(|&i| verts[i].iter().zip(&v0).map(|(a, b)| a - b).collect()).collect();
            (v0, RatMatrix::new(rows).unwrap().inverse().unwrap())
        })
        .collect();
    let (lo, hi) = p.bounding_box();
    let mut z = lo.clone();
    let mut total = BigInt::zero();
    loop {
        let zr = rational::to_rational_vec(&z);
        let inside = inverses.iter().any(|(v0, inv)| {
            let d: Vec<Rational> = zr.iter().zip(v0).map(|(a, b)| a - b).collect();
            let lam = inv.vec_mul(&d);
            let sum: Rational = lam.iter().sum();
            lam.iter().all(|x| !x.is_negative()) && sum <= int(1)
        });
        if inside {
            total += 1;
        }
        let mut i = 0;
        while i < n {
            z[i] += 1;
            if z[i] <= hi[i] {
                break;
            }
            z[i] = lo[i].clone();
            i += 1;
        }
        if i == n {
            return total;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_matches_simplex_oracle(pts in prop_oneof![point_sets(2, 7), point_sets(3, 5)]) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        prop_assert_eq!(g(&p), simplex_oracle(&p));
    }

    #[test]
    fn count_is_unimodular_and_translation_invariant(pts in point_sets(3, 4), seed in any::<u64>(), shift in prop::collection::vec(-9i64..9, 3)) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        let u = random_unimodular(&mut Stream::new(seed), 3);
        let q = p.transformed(&u).unwrap();
        let shift: Vec<BigInt> = shift.into_iter().map(BigInt::from).collect();
        let r = p.translated(&shift).unwrap();
        prop_assert_eq!(g(&p), g(&q));
        prop_assert_eq!(g(&p), g(&r));
        prop_assert_eq!(p.volume(), q.volume());
    }

    #[test]
    fn volume_scales_with_the_power_of_the_dimension(pts in point_sets(3, 4), c in 1i64..4) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        let cp = p.scaled(c).unwrap();
        prop_assert_eq!(cp.volume(), p.volume() * int(c * c * c));
        prop_assert_eq!(cp.surface_area(), p.surface_area().scale(&int(c * c)));
    }

    #[test]
    fn triangulations_agree(pts in prop_oneof![point_sets(2, 9), point_sets(3, 6)]) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        prop_assert_eq!(
            p.triangulation_det_sum(p.fan_triangulation()),
            p.triangulation_det_sum(p.placing_triangulation())
        );
    }

    #[test]
    fn pick_formula(pts in point_sets(2, 12)) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        let d = pick_check(&p, &opts()).unwrap();
        prop_assert!(d.holds(), "{:?}", d);
    }

    #[test]
    fn blichfeldt_bound_holds(pts in prop_oneof![point_sets(2, 6), point_sets(3, 4)]) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        let n = p.dim();
        let bound = p.volume() * Rational::from_integer(rational::factorial(n)) + int(n as i64);
        prop_assert!(rational::from_big(&g(&p)) <= bound);
        let r = check(InequalityId::Blichfeldt11, &Body::polytope(p), &CheckOptions::default()).unwrap();
        prop_assert!(matches!(r.verdict, Verdict::Holds | Verdict::HoldsWithEquality));
    }

    #[test]
    fn parallelepiped_has_det_points(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3),
        anchor in prop::collection::vec((-12i64..12, 1i64..6), 3),
    ) {
        let gens: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let det = IntMatrix::from_rows(&gens).unwrap().det().unwrap();
        prop_assume!(!det.is_zero());
        let t: Vec<Rational> = anchor.iter().map(|&(a, q)| rat(a, q)).collect();
        let b = Body::halfopen_parallelepiped(Arc::new(Lattice::integer(3)), gens, t).unwrap();
        prop_assert_eq!(count(&b, &opts()).unwrap().count, det.abs());
    }

    #[test]
    fn body_specs_round_trip(pts in point_sets(3, 5), t in prop::collection::vec((-7i64..7, 1i64..9), 3)) {
        let Some(p) = hull(&pts) else { return Ok(()) };
        let t: Vec<Rational> = t.iter().map(|&(a, q)| rat(a, q)).collect();
        for b in [Body::polytope(p.clone()), Body::translated(p, t).unwrap()] {
            prop_assert_eq!(body_from_json(&body_to_json(&b)).unwrap(), b);
        }
    }

    #[test]
    fn radical_sum_arithmetic_and_comparison(a in -30i64..30, b in 1i64..30, c in -30i64..30, d in 1i64..30) {
        let x = RadicalSum::from_int(a) + RadicalSum::sqrt_of(&int(b));
        let y = RadicalSum::from_int(c) + RadicalSum::sqrt_of(&int(d)).scale(&rat(1, 3));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        let fx = a as f64 + (b as f64).sqrt();
        let fy = c as f64 + (d as f64).sqrt() / 3.0;
        let cmp = certified_compare(&Real::from(x.clone()), &Real::from(y.clone()), &Precision::default());
        if (fx - fy).abs() > 1e-9 {
            let expect = if fx < fy { Comparison::Less } else { Comparison::Greater };
            prop_assert_eq!(cmp, expect);
        } else if x == y {
            prop_assert_eq!(cmp, Comparison::Equal);
        }
    }

    #[test]
    fn sqrt_of_square_is_absolute_value(n in -500i64..500, q in 1i64..50) {
        let r = rat(n, q);
        prop_assert_eq!(RadicalSum::sqrt_of(&(&r * &r)), RadicalSum::from_rational(r.abs()));
    }

    #[test]
    fn sublattice_determinant_formula(seed in any::<u64>()) {
        let mut s = Stream::new(seed);
        let l = blichfeldt_core::witnesses::random_lattice(&mut s, 2, 1, 6).unwrap();
        // in the plane a hyperplane sublattice is spanned by one primitive
        // vector, so the minimum is lambda1(L)
        let direct = l.min_hyperplane_sublattice_det().unwrap();
        prop_assert_eq!(direct, RadicalSum::sqrt_of(&l.shortest_vector().unwrap().length_sq));
    }
}

#[test]
fn oracle_sees_the_simplex_counts() {
    for k in 1..=6 {
        let p = blichfeldt_core::witnesses::simplex_sk(3, k).unwrap();
        assert_eq!(simplex_oracle(&p), BigInt::from(k + 3));
    }
}
