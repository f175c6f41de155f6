//! Uniform sampling of O₂ words of a given length.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::words::{Letter, Word};

fn binomial(n: u64, k: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Number of O₂ words with `2m` letters of which `k` are `a` (and `k` are `A`):
/// `(2m)! / (k!² (m−k)!²)`, for `k = 0..=m`.
pub fn class_sizes(m: u64) -> Vec<BigUint> {
    let mut sizes = Vec::with_capacity(m as usize + 1);
    let mut cur = binomial(2 * m, m);
    for k in 0..=m {
        sizes.push(cur.clone());
        if k < m {
            cur = cur * (m - k) * (m - k) / ((k + 1) * (k + 1));
        }
    }
    sizes
}

/// Number of O₂ words of length `len`: `C(len, len/2)²` for even `len`, else 0.
pub fn count_balanced(len: usize) -> BigUint {
    if len % 2 == 1 {
        return BigUint::zero();
    }
    let c = binomial(len as u64, len as u64 / 2);
    &c * &c
}

/// A uniformly random O₂ word of length `len`, or `None` when `len` is odd.
pub fn uniform_balanced<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Option<Word> {
    if len % 2 == 1 {
        return None;
    }
    let m = len / 2;
    let sizes = class_sizes(m as u64);
    let total: BigUint = sizes.iter().sum();
    let mut pick = rng.gen_biguint_below(&total);
    let mut k = 0;
    while pick >= sizes[k] {
        pick -= &sizes[k];
        k += 1;
    }
    let mut letters = Vec::with_capacity(len);
    for (x, count) in [
        (Letter::A, k),
        (Letter::A_BAR, k),
        (Letter::B, m - k),
        (Letter::B_BAR, m - k),
    ] {
        letters.extend(std::iter::repeat_n(x, count));
    }
    letters.shuffle(rng);
    Some(Word::from_letters(letters))
}

/// The generator behind every seeded operation of this crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` uniform O₂ words of length `len` drawn from `seed`; empty for odd `len`.
pub fn sample_words(len: usize, count: usize, seed: u64) -> Vec<Word> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map_while(|_| uniform_balanced(len, &mut rng))
        .collect()
}
