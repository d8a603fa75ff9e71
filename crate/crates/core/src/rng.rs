//! Seeded randomness shared by the generators and the estimator.
//!
//! The stream is ChaCha8 (via `rand_chacha`) seeded with `seed_from_u64`;
//! floats and bounded integers are derived from raw 64-bit outputs by the
//! fixed rules below, so sequences do not depend on `rand`'s sampling code.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub const ALGORITHM: &str = "chacha8";

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[0, 1)` with 53 random bits: `(u >> 11) * 2^-53`.
pub fn unit_f64(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `{0, .., m-1}` by multiply-shift: `(u * m) >> 64`.
pub fn below(rng: &mut Rng, m: u64) -> u64 {
    ((rng.next_u64() as u128 * m as u128) >> 64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let mut rng = seeded(1);
        for _ in 0..10_000 {
            let u = unit_f64(&mut rng);
            assert!((0.0..1.0).contains(&u));
            assert!(below(&mut rng, 7) < 7);
        }
    }

    #[test]
    fn reproducible() {
        let a: Vec<u64> = (0..5).map({
            let mut r = seeded(42);
            move |_| r.next_u64()
        }).collect();
        let b: Vec<u64> = (0..5).map({
            let mut r = seeded(42);
            move |_| r.next_u64()
        }).collect();
        assert_eq!(a, b);
    }
}
