//! Fixtures shared by the criterion benches.

use graphrj::experiments::data::{gen_labels, mask_labels};
use graphrj::experiments::rng_stream;
use graphrj::graph::build_watts_strogatz;
use graphrj::{laplacian, Graph, LabelData, SparseSymMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest component of a rewired ring and its Laplacian.
pub fn small_world(n: usize, seed: u64) -> (Graph, SparseSymMatrix) {
    let g = build_watts_strogatz(n, 0.25, &mut rng(seed))
        .expect("valid ring size")
        .graph;
    let l = laplacian(&g);
    (g, l)
}

/// Labels drawn from the latent function `f0`, 80% of them observed.
pub fn observed_labels(f0: &[f64], seed: u64) -> LabelData {
    let mut r = rng_stream(seed, 1);
    let labels = gen_labels(f0, &mut r);
    mask_labels(&labels, 0.8, &mut r)
        .expect("valid fraction")
        .data
}
