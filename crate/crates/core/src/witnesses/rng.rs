//! Reproducible random streams.
//!
//! The generator is xoshiro256** seeded from a `u64` through SplitMix64.
//! Corpus item `i` draws from the base stream advanced by `i` jumps of
//! 2^128 steps, so items never share state and can be generated in any
//! order. Bounded integers use rejection sampling on whole 64-bit outputs,
//! which any language can reproduce bit for bit.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Clone, Debug)]
pub struct Stream {
    rng: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Independent stream for corpus item `index`.
    pub fn for_item(seed: u64, index: usize) -> Self {
        let mut s = Stream::new(seed);
        for _ in 0..index {
            s.rng.jump();
        }
        s
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        // accept outputs below the largest multiple of span
        let zone = u64::MAX - (u64::MAX % span + 1) % span;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return lo + (x % span) as i64;
            }
        }
    }

    pub fn range_usize(&mut self, lo: usize, hi: usize) -> usize {
        self.range(lo as i64, hi as i64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform float in `[0, 1)` from the top 53 bits.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
