//! Seed derivation and counter-based hashing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream used for instance generation and for every run.
pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a sequence of words into one 64-bit value. Order matters.
#[inline]
pub fn hash_words(words: &[u64]) -> u64 {
    let mut h = mix64(GOLDEN ^ words.len() as u64);
    for &w in words {
        h = mix64(h.rotate_left(23) ^ mix64(w.wrapping_add(GOLDEN)));
    }
    h
}

/// Maps a 64-bit word to a uniform double in `[0, 1)` (top 53 bits).
#[inline]
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Hashes a UTF-8 label into a word usable with [`hash_words`].
pub fn label_word(label: &str) -> u64 {
    // FNV-1a, then finalised.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix64(h)
}

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_range() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
    }

    #[test]
    fn order_sensitive() {
        assert_ne!(hash_words(&[1, 2]), hash_words(&[2, 1]));
        assert_ne!(hash_words(&[0]), hash_words(&[0, 0]));
        assert_eq!(hash_words(&[5, 6, 7]), hash_words(&[5, 6, 7]));
    }
}
