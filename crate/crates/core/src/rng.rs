//! Seeding and color sampling for Monte Carlo runs.
//!
//! Every trial draws from its own ChaCha8 stream whose seed is
//! `mix(master, trial)`, so results do not depend on how trials are
//! scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `master`.
pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub fn substream(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(master, index))
}

/// Number of base-`kappa` digits extracted from one 64-bit word while
/// keeping at least 32 bits of slack, so the per-digit bias stays below 2^-32.
fn digits_per_word(kappa: u8) -> usize {
    let bits = (kappa as f64).log2();
    ((32.0 / bits).floor() as usize).max(1)
}

/// Fill `out` with i.i.d. uniform colors in `[0, kappa)`.
///
/// Digits are peeled off the base-`kappa` expansion of `word / 2^64`.
pub fn fill_colors<R: RngCore>(rng: &mut R, kappa: u8, out: &mut [u8]) {
    let per = digits_per_word(kappa);
    let k = kappa as u128;
    for chunk in out.chunks_mut(per) {
        let mut x = rng.next_u64();
        for c in chunk.iter_mut() {
            let p = x as u128 * k;
            *c = (p >> 64) as u8;
            x = p as u64;
        }
    }
}

/// Lazily drawn colors, for walks that usually stop after a few steps.
pub struct ColorStream<R> {
    rng: R,
    kappa: u128,
    per: usize,
    word: u64,
    left: usize,
}

impl<R: RngCore> ColorStream<R> {
    pub fn new(rng: R, kappa: u8) -> Self {
        ColorStream { rng, kappa: kappa as u128, per: digits_per_word(kappa), word: 0, left: 0 }
    }

    /// The same digit sequence that `fill_colors` would produce.
    #[inline]
    pub fn next_color(&mut self) -> u8 {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = self.per;
        }
        self.left -= 1;
        let p = self.word as u128 * self.kappa;
        self.word = p as u64;
        (p >> 64) as u8
    }
}

pub fn random_colors<R: RngCore>(rng: &mut R, kappa: u8, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    fill_colors(rng, kappa, &mut v);
    v
}
