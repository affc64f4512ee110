//! Fixtures shared by the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgp_core::data::{gen_synthetic, SyntheticKind};
use sgp_core::tree::random_tree;
use sgp_core::{Dataset, ExprTree, GenBounds, Variant};

/// Noisy circles of the given size.
pub fn circles(n: usize) -> Dataset {
    gen_synthetic(SyntheticKind::Circles, n, 0.1, 7).expect("valid generator arguments")
}

/// `count` random trees over two features.
pub fn trees(variant: Variant, count: usize, seed: u64) -> Vec<ExprTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_tree(variant, &GenBounds::default(), 2, (-1.5, 1.5), &mut rng))
        .collect()
}
