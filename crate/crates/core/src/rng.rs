//! Deterministic random number plumbing.
//!
//! Every randomized unit of work (a study sample, a traffic request, a
//! property-test case) gets its own ChaCha8 stream derived from the run seed
//! and the unit's ordinal. Streams are independent, so work items can be
//! evaluated in any order, on any number of threads, and still reproduce
//! byte-identical results.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The concrete generator used everywhere in the workbench.
pub type StreamRng = ChaCha8Rng;

/// Identity string recorded in output manifests.
pub const RNG_ALGORITHM: &str = "chacha8 stream-per-unit";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Generator for stream `stream` of run seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Uniform f64 in [0, 1) with 53 significant bits.
pub fn uniform_f64(rng: &mut StreamRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform f64 in [lo, hi).
pub fn uniform_range(rng: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    lo + uniform_f64(rng) * (hi - lo)
}

/// Uniform index in 0..n (n > 0) via the widening-multiply method.
pub fn uniform_index(rng: &mut StreamRng, n: usize) -> usize {
    assert!(n > 0, "uniform_index over an empty range");
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Exponential variate with the given mean.
pub fn exp_variate(rng: &mut StreamRng, mean: f64) -> f64 {
    -mean * (1.0 - uniform_f64(rng)).ln()
}
