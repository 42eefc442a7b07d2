//! Fisher–Yates shuffle driven by ChaCha8 seeded from a 64-bit token.
//!
//! Index draws use rejection sampling on raw `next_u64` output, so the
//! permutation for a given seed depends only on the ChaCha8 stream and not
//! on any distribution code in `rand`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    // 2^64 mod bound; accepting x >= threshold leaves a multiple of bound values
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % bound;
        }
    }
}

pub fn seeded_shuffle<T>(items: &mut [T], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..items.len()).rev() {
        let j = below(&mut rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// `0..n` in seeded shuffled order.
pub fn seeded_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    seeded_shuffle(&mut v, seed);
    v
}
