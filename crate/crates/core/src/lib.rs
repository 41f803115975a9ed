//! Exact lattice point counting and certified checks of lattice point
//! inequalities for convex bodies.
//!
//! Points are stored in lattice coefficients: a body over a lattice with
//! basis `B` is described by coefficient vectors `y`, the Euclidean point
//! being `y·B`. Counting is then integer enumeration and all metric
//! quantities go through the Gram matrix.

pub mod arith;
pub mod counting;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod polytope;
pub mod witnesses;

pub use arith::{certified_compare, Comparison, Interval, Precision, RadicalSum, Rational, Real};
pub use counting::{count, Body, BodyKind, CountOptions, CountResult, RadiusSq};
pub use error::{Error, Result};
pub use harness::{
    boundary_layer_audit, check, measure_body, run_corpus, AuditRecord, BodyMeasures, CheckOptions, CorpusReport, InequalityId,
    InequalityReport, Verdict,
};
pub use lattice::Lattice;
pub use polytope::LatticePolytope;
pub use witnesses::{CorpusSpec, Family};
