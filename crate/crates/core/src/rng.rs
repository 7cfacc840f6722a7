//! Seeded, counter-addressable randomness. Every stochastic routine takes a
//! base seed; work item `i` draws from ChaCha8 stream `i` of that seed, so
//! results do not depend on scheduling.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{bit, Graph};

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser applied to `seed + index`; used to give each
/// process trace its own replayable seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for runs where the caller did not supply one. It is always reported.
pub fn fresh_seed() -> u64 {
    rand::rng().random()
}

/// Uniform labelled graph on `n` vertices: each pair present independently
/// with probability 1/2.
pub fn sample_gnp_half<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut rows = vec![0u64; n];
    let mut word = 0u64;
    let mut left = 0;
    for u in 0..n {
        for v in u + 1..n {
            if left == 0 {
                word = rng.next_u64();
                left = 64;
            }
            if word & 1 == 1 {
                rows[u] |= bit(v);
                rows[v] |= bit(u);
            }
            word >>= 1;
            left -= 1;
        }
    }
    Graph::from_rows(rows).expect("sampled rows are symmetric")
}
