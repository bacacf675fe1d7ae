//! SplitMix64 generator with exact uniform range and rational coin draws.
//!
//! The draw procedures are fixed so that a seed reproduces the same stream in
//! any language: range sampling rejects raw values at or above
//! `floor(2^64 / m) * m` and then reduces modulo `m`; a coin with probability
//! `p` succeeds when the raw value is below `floor(p * 2^64)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
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

    /// Uniform value in `0..m`. Panics if `m == 0`.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "empty range");
        let limit = ((1u128 << 64) / m as u128) * m as u128;
        loop {
            let v = self.next_u64();
            if (v as u128) < limit {
                return v % m;
            }
        }
    }

    pub fn coin(&mut self, threshold: &CoinThreshold) -> bool {
        (self.next_u64() as u128) < threshold.0
    }
}

/// `floor(p * 2^64)` for a probability `p`, precomputed once per experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinThreshold(u128);

impl CoinThreshold {
    pub fn new(p: &Rational) -> Self {
        let scaled = (p.numer() << 64u32) / p.denom();
        let scaled = if scaled < BigInt::zero() {
            BigInt::zero()
        } else {
            scaled
        };
        CoinThreshold(scaled.to_u128().unwrap_or(u128::MAX).min(1u128 << 64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn reference_stream() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        let expected = [
            6457827717110365317u64,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(7);
        for m in [1u64, 2, 3, 7, 1000, u64::MAX] {
            for _ in 0..100 {
                assert!(rng.below(m) < m);
            }
        }
    }

    #[test]
    fn coin_extremes() {
        let mut rng = SplitMix64::new(3);
        let never = CoinThreshold::new(&int(0));
        let always = CoinThreshold::new(&int(1));
        for _ in 0..1000 {
            assert!(!rng.coin(&never));
            assert!(rng.coin(&always));
        }
        assert_eq!(CoinThreshold::new(&ratio(1, 4)).0, 1u128 << 62);
    }
}
