//! Seed derivation and stream construction.
//!
//! Every random stream in the harness is a `ChaCha8Rng` keyed by
//! `SHA-256(master ‖ 0x1f ‖ label ‖ 0x1f ‖ index)`. Modules never share a
//! stream: each caller owns a `(label, index)` pair, so adding draws in one
//! place cannot shift the values seen anywhere else. The derivation is part of
//! the reproducibility contract and must not change.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a 32-byte stream key from `(master, label, index)`.
pub fn derive_key(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update([0x1f]);
    h.update(label.as_bytes());
    h.update([0x1f]);
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// Collapse a derived key to a `u64` sub-master seed.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let key = derive_key(master, label, index);
    u64::from_le_bytes(key[..8].try_into().unwrap())
}

/// Open the stream for `(master, label, index)`.
pub fn stream(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_key(master, label, index))
}

/// One standard-normal draw via Box-Muller.
///
/// Hand-rolled so the byte-for-byte output depends only on this crate and the
/// pinned ChaCha implementation, not on a distribution crate's sampling
/// internals.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    // u1 in (0, 1]: guard the log; u2 in [0, 1).
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
