//! Deterministic random streams.
//!
//! Column generation uses ChaCha20 keyed by the master seed with the column
//! index as the stream id, so any column can be produced on its own without
//! generating its predecessors.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a tuple of words into one seed; order-sensitive.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C908u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Stream for column `index` of the code keyed by `master_seed`.
pub fn column_rng(master_seed: u64, index: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform integer in `[0, n)` by rejection sampling on 32-bit draws.
#[inline]
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, n: u32) -> u32 {
    assert!(n > 0, "empty range");
    // Largest multiple of n that fits in 2^32.
    let zone = u32::MAX - (u32::MAX - n + 1) % n;
    loop {
        let x = rng.next_u32();
        if x <= zone {
            return x % n;
        }
    }
}

/// Uniform float in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn uniform_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `count` distinct values from `[0, n)` (partial Fisher–Yates).
pub fn sample_distinct<R: RngCore + ?Sized>(rng: &mut R, n: u32, count: usize) -> alloc::vec::Vec<u32> {
    assert!(count <= n as usize);
    let mut pool: alloc::vec::Vec<u32> = (0..n).collect();
    for i in 0..count {
        let j = i + uniform_below(rng, n - i as u32) as usize;
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}
