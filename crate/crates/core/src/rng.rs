//! Seeded random streams.
//!
//! Every random computation takes a [`rand::Rng`]. [`stream_rng`] builds the
//! generator used throughout: ChaCha8 keyed from a 64-bit seed, with the
//! stream index selecting one of `2^64` independent keystreams. Parallel work
//! uses disjoint stream indices, so results depend only on `(seed, stream)`.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// The generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// An index `t ∈ [0, k)` drawn with probability `2^t / (2^k - 1)`.
///
/// Reads bits from the most significant end of a uniform `k`-bit number and
/// stops at the first one; the all-zero number is rejected.
pub fn geometric_top_bit<R: Rng + ?Sized>(rng: &mut R, k: usize) -> usize {
    assert!(k > 0, "empty range");
    loop {
        let mut t = k;
        while t > 0 {
            let chunk = t.min(64);
            let bits = rng.next_u64() >> (64 - chunk);
            if bits != 0 {
                return t - chunk + (63 - bits.leading_zeros() as usize);
            }
            t -= chunk;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: [u64; 4] = core::array::from_fn({
            let mut r = stream_rng(7, 3);
            move |_| r.next_u64()
        });
        let b: [u64; 4] = core::array::from_fn({
            let mut r = stream_rng(7, 3);
            move |_| r.next_u64()
        });
        let c: [u64; 4] = core::array::from_fn({
            let mut r = stream_rng(7, 4);
            move |_| r.next_u64()
        });
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn top_bit_frequencies() {
        let mut rng = stream_rng(1, 0);
        let k = 3;
        let mut counts = [0u32; 3];
        let draws = 70_000;
        for _ in 0..draws {
            counts[geometric_top_bit(&mut rng, k)] += 1;
        }
        // Expected 1/7, 2/7, 4/7.
        for (t, &c) in counts.iter().enumerate() {
            let expected = draws as f64 * (1 << t) as f64 / 7.0;
            assert!((c as f64 - expected).abs() < 5.0 * expected.sqrt(), "t={t} c={c}");
        }
    }

    #[test]
    fn top_bit_handles_wide_ranges() {
        let mut rng = stream_rng(2, 0);
        for k in [1, 63, 64, 65, 200] {
            for _ in 0..100 {
                assert!(geometric_top_bit(&mut rng, k) < k);
            }
        }
    }
}
