//! Deterministic seed derivation and RNG construction.
//!
//! Every randomized operation takes an explicit `u64` seed. Pipeline stages
//! derive their seeds from the master seed via [`derive_seed`], so re-running
//! one stage never perturbs the randomness of another. Operations that run
//! per-sequence (sampling, outcome generation) use one ChaCha stream per
//! sequence via [`sequence_rng`], which keeps parallel execution identical to
//! sequential execution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive a stage seed from a master seed and a stage label (FNV-1a over the
/// master seed bytes followed by the label bytes). Stable across platforms
/// and releases; the derivation is part of the on-disk contract.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = FNV_OFFSET;
    for byte in master.to_le_bytes().iter().chain(label.as_bytes()) {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// RNG for a whole operation.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent RNG substream for sequence number `index` under `seed`.
pub fn sequence_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derive_is_stable() {
        assert_eq!(derive_seed(42, "split"), derive_seed(42, "split"));
        assert_ne!(derive_seed(42, "split"), derive_seed(42, "fit-irt"));
        assert_ne!(derive_seed(42, "split"), derive_seed(43, "split"));
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let mut a = sequence_rng(7, 0);
        let mut b = sequence_rng(7, 1);
        let mut a2 = sequence_rng(7, 0);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let xs2: Vec<u64> = (0..4).map(|_| a2.next_u64()).collect();
        assert_eq!(xs, xs2);
        assert_ne!(xs, ys);
    }
}
