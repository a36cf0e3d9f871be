//! Seeded generators for test corpora.
//!
//! Every sampler draws from `ChaCha8Rng::seed_from_u64`, whose output stream
//! is fixed across platforms, so a seed pins the corpus. Weights are
//! multiples of `1/1000`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boxes::BoxTable;
use crate::polytope::VertexSet;
use crate::rational::Rational;

pub const WEIGHT_DENOMINATOR: i64 = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for item `i` of a corpus rooted at `base`.
pub fn derive_seed(base: u64, i: u64) -> u64 {
    base ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Uniform composition of `total` into `parts` nonnegative integers.
pub fn composition<R: Rng>(rng: &mut R, parts: usize, total: i64) -> Vec<i64> {
    assert!(parts > 0);
    let mut cuts: Vec<i64> = (0..parts - 1).map(|_| rng.random_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Random point of the probability simplex with denominator 1000.
pub fn simplex_weights<R: Rng>(rng: &mut R, parts: usize) -> Vec<Rational> {
    composition(rng, parts, WEIGHT_DENOMINATOR)
        .into_iter()
        .map(|k| Rational::new(k, WEIGHT_DENOMINATOR))
        .collect()
}

/// A mixture over a random subset of the 24 nonsignaling vertices (16
/// deterministic boxes and 8 PR boxes). The support size is uniform on
/// `1..=24`. The result is nonsignaling by convexity.
pub fn sample_nonsignaling(seed: u64) -> BoxTable {
    let mut rng = rng(seed);
    let vertices = VertexSet::nonsignaling();
    let n = vertices.len();
    let k = rng.random_range(1..=n);
    let support = index::sample(&mut rng, n, k).into_vec();
    let weights = simplex_weights(&mut rng, k);
    BoxTable::mix(weights.iter().zip(support.iter().map(|&i| vertices.vertex(i))))
        .expect("simplex weights sum to one")
}

/// `P(ab|xy) = P(a|x) P(b|y)` with independent random single-party
/// distributions.
pub fn sample_product(seed: u64) -> BoxTable {
    let mut rng = rng(seed);
    let mut draw = || Rational::new(rng.random_range(0..=WEIGHT_DENOMINATOR), WEIGHT_DENOMINATOR);
    let alice = [draw(), draw()];
    let bob = [draw(), draw()];
    product_box(alice, bob)
}

/// Product box built from two single-party response tables
/// `[P(0|0), P(0|1)]`.
pub fn product_box(alice: [Rational; 2], bob: [Rational; 2]) -> BoxTable {
    let pick = |p0: &Rational, out: u8| if out == 0 { p0.clone() } else { Rational::one() - p0 };
    BoxTable::from_fn(|x, y, a, b| pick(&alice[x as usize], a) * pick(&bob[y as usize], b))
        .expect("product of distributions is a box")
}
