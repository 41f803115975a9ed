//! Shared fixtures for the benchmarks.

use blichfeldt_core::witnesses::{simplex_sk, CorpusItem};
use blichfeldt_core::{Body, CorpusSpec, Family, Lattice, Result};

/// `S_k` in dimension `n` as a body.
pub fn simplex(n: usize, k: u64) -> Result<Body> {
    Ok(Body::polytope(simplex_sk(n, k)?))
}

/// A fixed batch of random hulls.
pub fn hulls(n: usize, count: usize) -> Result<Vec<CorpusItem>> {
    CorpusSpec {
        family: Family::RandomHull,
        min_dim: n,
        max_dim: n,
        count,
        points: 12,
        coord_bound: 8,
        seed: 1,
        ..CorpusSpec::default()
    }
    .generate()
}

/// A skewed lattice whose reduced basis differs from the input one.
pub fn skewed_lattice(n: usize) -> Result<Lattice> {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if j == i { 3 + i as i64 } else if j > i { 17 * (j - i) as i64 } else { 0 }).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Lattice::from_i64_rows(&refs)
}
