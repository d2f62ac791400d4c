//! Seeded random instances.
//!
//! One master seed drives every randomized suite. Instance `i` of stream `s`
//! uses the seed `splitmix64(master ^ fnv1a(s) ^ splitmix64(i))` and its own
//! ChaCha8 generator, so instances are reproducible in isolation and in any
//! execution order.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interval::IntervalSet;
use crate::rational::{int, ratio, Rational};
use crate::stepfn::StepFunction;

pub type InstanceRng = ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

pub fn derive_seed(master: u64, stream: &str, index: u64) -> u64 {
    splitmix64(master ^ fnv1a(stream) ^ splitmix64(index))
}

pub fn instance_rng(master: u64, stream: &str, index: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

/// Random breakpoints on the grid `1/den` with `1..=max_cells` cells.
fn grid_breaks<R: Rng>(rng: &mut R, max_cells: usize, den: i64) -> Vec<Rational> {
    let cells = rng.gen_range(1..=max_cells.min(den as usize));
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(cells - 1).collect();
    cuts.sort_unstable();
    let mut breaks = vec![Rational::zero()];
    breaks.extend(cuts.into_iter().map(|c| ratio(c, den)));
    breaks.push(Rational::one());
    breaks
}

/// Random step function on a `1/den` grid with integer-over-`vden` values in
/// `[lo, hi]`.
pub fn random_step<R: Rng>(rng: &mut R, max_cells: usize, den: i64, lo: i64, hi: i64, vden: i64) -> StepFunction {
    let breaks = grid_breaks(rng, max_cells, den);
    let values = (1..breaks.len()).map(|_| ratio(rng.gen_range(lo * vden..=hi * vden), vden)).collect();
    StepFunction::new(breaks, values).expect("grid breakpoints are valid")
}

/// Non-constant variant of [`random_step`].
pub fn random_nonconstant<R: Rng>(rng: &mut R, max_cells: usize, den: i64, lo: i64, hi: i64) -> StepFunction {
    loop {
        let x = random_step(rng, max_cells.max(2), den, lo, hi, 1);
        if !x.is_constant() {
            return x;
        }
    }
}

/// `x` squeezed onto `[0, s)`: `t ↦ x(t/s)` there, zero on `[s, 1)`.
pub fn compress(x: &StepFunction, s: &Rational) -> StepFunction {
    let pieces = x.segments().map(|(a, b, v)| (a * s, b * s, v.clone())).collect();
    StepFunction::from_pieces(pieces).expect("compressed pieces stay disjoint")
}

/// A measure-preserving shuffle: every segment is cut at up to two random
/// rational points, then the pieces are permuted and packed left to right.
pub fn shuffle<R: Rng>(rng: &mut R, x: &StepFunction) -> StepFunction {
    let mut pieces: Vec<(Rational, Rational)> = Vec::new();
    for (a, b, v) in x.segments() {
        let len = b - a;
        let cuts = rng.gen_range(0..=2);
        let mut fracs: Vec<Rational> = (0..cuts).map(|_| ratio(rng.gen_range(1..8), 8)).collect();
        fracs.sort();
        fracs.dedup();
        let mut prev = Rational::zero();
        for f in fracs.into_iter().chain(std::iter::once(Rational::one())) {
            pieces.push((&len * (&f - &prev), v.clone()));
            prev = f;
        }
    }
    pieces.shuffle(rng);
    let mut cursor = Rational::zero();
    let packed = pieces
        .into_iter()
        .map(|(len, v)| {
            let start = cursor.clone();
            cursor += len;
            (start, cursor.clone(), v)
        })
        .collect();
    StepFunction::from_pieces(packed).expect("packed pieces tile [0, 1)")
}

/// Union of up to `max_parts` random grid intervals.
pub fn random_interval_set<R: Rng>(rng: &mut R, max_parts: usize, den: i64) -> IntervalSet {
    let parts = rng.gen_range(1..=max_parts);
    let raw = (0..parts)
        .map(|_| {
            let a = rng.gen_range(0..den);
            let b = rng.gen_range(a + 1..=den);
            (ratio(a, den), ratio(b, den))
        })
        .collect();
    IntervalSet::from_intervals(raw).expect("grid intervals lie in [0, 1]")
}

/// A random subset of `within` of measure at most `cap`, built from grid
/// intervals of `within` and trimmed from the right.
pub fn random_subset<R: Rng>(rng: &mut R, within: &IntervalSet, cap: &Rational, den: i64) -> IntervalSet {
    let mut pieces = Vec::new();
    for (a, b) in within.parts() {
        if rng.gen_bool(0.7) {
            let len = b - a;
            let lo = a + &len * ratio(rng.gen_range(0..den / 2), den);
            let hi = &lo + (b - &lo) * ratio(rng.gen_range(1..=den), den);
            pieces.push((lo, hi));
        }
    }
    let set = IntervalSet::from_intervals(pieces).expect("pieces lie inside `within`");
    let target = set.measure().min(cap.clone());
    set.prefix(&target).expect("target <= measure")
}

/// Strictly positive weights summing to one.
pub fn random_weights<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(lo * den..=hi * den)), BigInt::from(den))
}

pub fn random_int<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    int(rng.gen_range(lo..=hi))
}
