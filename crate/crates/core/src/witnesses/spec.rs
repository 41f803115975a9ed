//! Body-spec files.
//!
//! ```json
//! {"lattice": {"basis": [["1", "0"], ["1/2", "2"]]},
//!  "body": {"kind": "translated_polytope",
//!           "vertices": [["0", "0"], ["3", "0"], ["0", "3"]],
//!           "translate": ["1/2", "0"]}}
//! ```
//!
//! Coordinates are lattice coefficients. Rationals are `"p/q"` strings;
//! plain JSON integers are accepted on input. `lattice` may be omitted for
//! the standard integer lattice, in which case the dimension is taken from
//! the body.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::counting::{Body, BodyKind, RadiusSq};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::polytope::LatticePolytope;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Str(String),
    Int(i64),
}

impl Num {
    fn of(r: &Rational) -> Num {
        Num::Str(rational::format(r))
    }

    fn of_int(z: &BigInt) -> Num {
        Num::Str(z.to_string())
    }

    fn rational(&self, path: &str) -> Result<Rational> {
        match self {
            Num::Int(i) => Ok(rational::int(*i)),
            Num::Str(s) => rational::parse(s).map_err(|_| field(path, format!("not a rational number: {s:?}"))),
        }
    }

    fn integer(&self, path: &str) -> Result<BigInt> {
        let r = self.rational(path)?;
        if !r.is_integer() {
            return Err(field(path, format!("expected an integer, found {}", rational::format(&r))));
        }
        Ok(r.to_integer())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<LatticeSpec>,
    body: BodySpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeSpec {
    basis: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum BodySpec {
    Polytope {
        vertices: Vec<Vec<Num>>,
    },
    TranslatedPolytope {
        vertices: Vec<Vec<Num>>,
        translate: Vec<Num>,
    },
    HalfopenParallelepiped {
        generators: Vec<Vec<Num>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translate: Option<Vec<Num>>,
    },
    Ball {
        center: Vec<Num>,
        radius_sq: Num,
    },
    InnerParallel {
        vertices: Vec<Vec<Num>>,
        /// A rational or `"1/pi"`.
        rho_sq: Num,
    },
}

fn field(path: &str, msg: String) -> Error {
    Error::Invalid(format!("{path}: {msg}"))
}

fn int_rows(rows: &[Vec<Num>], path: &str) -> Result<Vec<Vec<BigInt>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| x.integer(&format!("{path}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn rat_vec(v: &[Num], path: &str) -> Result<Vec<Rational>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| x.rational(&format!("{path}[{i}]")))
        .collect()
}

fn check_rows(rows: &[Vec<BigInt>], n: usize, path: &str) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(field(
                &format!("{path}[{i}]"),
                format!("expected {n} coordinates, found {}", r.len()),
            ));
        }
    }
    Ok(())
}

fn check_vec(v: &[Rational], n: usize, path: &str) -> Result<()> {
    if v.len() != n {
        return Err(field(path, format!("expected {n} coordinates, found {}", v.len())));
    }
    Ok(())
}

impl BodySpec {
    fn dim_hint(&self) -> Option<usize> {
        match self {
            BodySpec::Polytope { vertices }
            | BodySpec::TranslatedPolytope { vertices, .. }
            | BodySpec::InnerParallel { vertices, .. } => vertices.first().map(Vec::len),
            BodySpec::HalfopenParallelepiped { generators, .. } => Some(generators.len()),
            BodySpec::Ball { center, .. } => Some(center.len()),
        }
    }
}

fn polytope(vertices: &[Vec<Num>], lattice: &Arc<Lattice>) -> Result<LatticePolytope> {
    let pts = int_rows(vertices, "body.vertices")?;
    check_rows(&pts, lattice.dim(), "body.vertices")?;
    LatticePolytope::hull(&pts, lattice.clone()).map_err(|e| field("body.vertices", e.to_string()))
}

fn build(file: File) -> Result<Body> {
    let lattice = match &file.lattice {
        Some(l) => {
            let rows: Vec<Vec<Rational>> = l
                .basis
                .iter()
                .enumerate()
                .map(|(i, r)| rat_vec(r, &format!("lattice.basis[{i}]")))
                .collect::<Result<_>>()?;
            let n = rows.len();
            for (i, r) in rows.iter().enumerate() {
                check_vec(r, n, &format!("lattice.basis[{i}]"))?;
            }
            Arc::new(Lattice::new(rows).map_err(|e| field("lattice.basis", e.to_string()))?)
        }
        None => {
            let n = file
                .body
                .dim_hint()
                .filter(|&n| n > 0)
                .ok_or_else(|| field("body", "cannot infer the dimension".into()))?;
            Arc::new(Lattice::integer(n))
        }
    };
    let n = lattice.dim();
    match &file.body {
        BodySpec::Polytope { vertices } => Ok(Body::polytope(polytope(vertices, &lattice)?)),
        BodySpec::TranslatedPolytope { vertices, translate } => {
            let t = rat_vec(translate, "body.translate")?;
            check_vec(&t, n, "body.translate")?;
            Body::translated(polytope(vertices, &lattice)?, t)
        }
        BodySpec::HalfopenParallelepiped { generators, translate } => {
            let g = int_rows(generators, "body.generators")?;
            if g.len() != n {
                return Err(field("body.generators", format!("expected {n} generators, found {}", g.len())));
            }
            check_rows(&g, n, "body.generators")?;
            let t = match translate {
                Some(t) => rat_vec(t, "body.translate")?,
                None => vec![Rational::from_integer(0.into()); n],
            };
            check_vec(&t, n, "body.translate")?;
            Body::halfopen_parallelepiped(lattice, g, t).map_err(|e| field("body.generators", e.to_string()))
        }
        BodySpec::Ball { center, radius_sq } => {
            let c = rat_vec(center, "body.center")?;
            check_vec(&c, n, "body.center")?;
            let r = radius_sq.rational("body.radius_sq")?;
            Body::ball(lattice, c, r).map_err(|e| field("body.radius_sq", e.to_string()))
        }
        BodySpec::InnerParallel { vertices, rho_sq } => {
            let rho = match rho_sq {
                Num::Str(s) if s.trim().eq_ignore_ascii_case("1/pi") => RadiusSq::InversePi,
                x => RadiusSq::Rational(x.rational("body.rho_sq")?),
            };
            Body::inner_parallel(polytope(vertices, &lattice)?, rho).map_err(|e| field("body.rho_sq", e.to_string()))
        }
    }
}

/// Parses a body-spec document. Syntax errors carry line and column,
/// semantic errors the path of the offending field.
pub fn body_from_json(text: &str) -> Result<Body> {
    let file: File = serde_json::from_str(text).map_err(|e| {
        Error::Invalid(format!("line {}, column {}: {}", e.line(), e.column(), e))
    })?;
    build(file)
}

fn int_nums(rows: &[Vec<BigInt>]) -> Vec<Vec<Num>> {
    rows.iter().map(|r| r.iter().map(Num::of_int).collect()).collect()
}

fn rat_nums(v: &[Rational]) -> Vec<Num> {
    v.iter().map(Num::of).collect()
}

pub fn body_to_json(body: &Body) -> String {
    let lattice = if body.lattice().is_standard_integer() {
        None
    } else {
        Some(LatticeSpec {
            basis: body.lattice().basis().rows().iter().map(|r| rat_nums(r)).collect(),
        })
    };
    let spec = match body.kind() {
        BodyKind::Polytope(p) => BodySpec::Polytope {
            vertices: int_nums(p.vertices()),
        },
        BodyKind::TranslatedPolytope { translate, polytope } => BodySpec::TranslatedPolytope {
            vertices: int_nums(polytope.vertices()),
            translate: rat_nums(translate),
        },
        BodyKind::HalfOpenParallelepiped { generators, translate } => BodySpec::HalfopenParallelepiped {
            generators: int_nums(generators),
            translate: Some(rat_nums(translate)),
        },
        BodyKind::Ball { center, radius_sq } => BodySpec::Ball {
            center: rat_nums(center),
            radius_sq: Num::of(radius_sq),
        },
        BodyKind::InnerParallel { polytope, rho_sq } => BodySpec::InnerParallel {
            vertices: int_nums(polytope.vertices()),
            rho_sq: Num::Str(rho_sq.to_string()),
        },
    };
    let file = File { lattice, body: spec };
    serde_json::to_string_pretty(&file).expect("body specs serialize")
}

pub fn read_body_spec(path: &Path) -> Result<Body> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    body_from_json(&text).map_err(|e| match e {
        Error::Invalid(m) => Error::Invalid(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_body_spec(path: &Path, body: &Body) -> Result<()> {
    std::fs::write(path, body_to_json(body) + "\n")
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}
