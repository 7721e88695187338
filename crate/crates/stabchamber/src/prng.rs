//! Seedable deterministic random stream for sampling checks.
//!
//! SplitMix64: tiny, stable across platforms and dependency upgrades, which
//! keeps every Monte-Carlo property check byte-reproducible.

use crate::rat::{self, Rat};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in 0..bound (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform integer in -bound..=bound.
    pub fn int_in(&mut self, bound: i64) -> i64 {
        let span = 2 * bound as u64 + 1;
        self.below(span) as i64 - bound
    }

    /// Random rational n/d with |n| <= num_bound and d drawn from dens.
    pub fn rat_in(&mut self, num_bound: i64, dens: &[i64]) -> Rat {
        let n = self.int_in(num_bound);
        let d = dens[self.below(dens.len() as u64) as usize];
        rat::frac(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn f64_in_unit_interval() {
        let mut r = SplitMix64::new(7);
        for _ in 0..1000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }
}
