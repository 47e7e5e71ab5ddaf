//! Seeded random states for testing and the `gen` command.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`), so a
//! seed reproduces the same state on every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::ExactScalar;
use crate::state::{mask_positions, tensor_on_positions, width_mask, SparseState, MAX_QUBITS};

pub type GenRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Separable,
    Random,
    CompletePairs,
}

impl std::str::FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "separable" => Ok(Self::Separable),
            "random" => Ok(Self::Random),
            "complete-pairs" => Ok(Self::CompletePairs),
            other => Err(format!("unknown kind `{other}` (separable, random, complete-pairs)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
}

fn infeasible(msg: impl Into<String>) -> GenError {
    GenError::InfeasibleParams(msg.into())
}

/// A non-zero amplitude: `±a/b` with small `a`, `b`, sometimes times `√2`,
/// `√3` or `i`.
pub fn random_amplitude(rng: &mut GenRng) -> ExactScalar {
    let num = rng.random_range(1..=4i64);
    let den = rng.random_range(1..=3i64);
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    let base = ExactScalar::ratio(sign * num, den);
    match rng.random_range(0..6u32) {
        0 => base * ExactScalar::sqrt(2),
        1 => base * ExactScalar::sqrt(3),
        2 => base * ExactScalar::i(),
        _ => base,
    }
}

/// `count` distinct values below `2^width`, ascending.
fn distinct_patterns(rng: &mut GenRng, width: usize, count: usize) -> Vec<u64> {
    let mask = width_mask(width);
    let mut set = BTreeSet::new();
    while set.len() < count {
        set.insert(rng.random::<u64>() & mask);
    }
    set.into_iter().collect()
}

fn check_width(n: usize) -> Result<(), GenError> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(infeasible(format!("n must be between 2 and {MAX_QUBITS}")));
    }
    Ok(())
}

fn capacity(width: usize) -> u128 {
    1u128 << width
}

/// A product of a two-term factor (complementary patterns on `P`) and an
/// `m/2`-term factor on `Q` in which no qubit is constant.
pub fn separable(rng: &mut GenRng, n: usize, m: usize) -> Result<SparseState, GenError> {
    check_width(n)?;
    if m % 2 == 1 || m < 4 {
        return Err(infeasible("separable states need an even m of at least 4"));
    }
    let k = m / 2;
    if capacity(n - 1) < k as u128 {
        return Err(infeasible(format!(
            "{k} distinct patterns do not fit on at most {} qubits",
            n - 1
        )));
    }
    let p_mask = loop {
        let mask = rng.random::<u64>() & width_mask(n);
        let q_width = n - mask.count_ones() as usize;
        if mask != 0 && q_width >= 1 && capacity(q_width) >= k as u128 {
            break mask;
        }
    };
    let p_positions = mask_positions(n, p_mask);
    let q_positions = mask_positions(n, width_mask(n) & !p_mask);

    let p_width = p_positions.len();
    let gamma = rng.random::<u64>() & width_mask(p_width);
    let p_factor = SparseState::from_bits(
        p_width,
        vec![
            (gamma, random_amplitude(rng)),
            (gamma ^ width_mask(p_width), random_amplitude(rng)),
        ],
    )
    .expect("complementary patterns are distinct");

    let q_width = q_positions.len();
    let drawn = distinct_patterns(rng, q_width, k);
    let patterns = vary_every_bit(rng, drawn, q_width);
    let q_factor = SparseState::from_bits(
        q_width,
        patterns.into_iter().map(|q| (q, random_amplitude(rng))).collect(),
    )
    .expect("patterns are distinct");
    debug_assert!(q_factor.constant_qubits().is_empty());

    Ok(tensor_on_positions(n, &[(&p_factor, &p_positions), (&q_factor, &q_positions)]).expect("positions partition"))
}

/// Flips a constant bit in one random pattern until every bit varies. A
/// flipped pattern differs from all others at that bit, so patterns stay
/// distinct.
fn vary_every_bit(rng: &mut GenRng, mut patterns: Vec<u64>, width: usize) -> Vec<u64> {
    for bit in 0..width {
        let probe = 1u64 << bit;
        let first = patterns[0] & probe;
        if patterns.iter().all(|&p| p & probe == first) {
            let victim = rng.random_range(0..patterns.len());
            patterns[victim] ^= probe;
        }
    }
    patterns
}

/// `m` distinct basis strings with random non-zero amplitudes.
pub fn random(rng: &mut GenRng, n: usize, m: usize) -> Result<SparseState, GenError> {
    check_width(n)?;
    if m == 0 || capacity(n) < m as u128 {
        return Err(infeasible(format!(
            "{m} distinct basis strings do not fit on {n} qubits"
        )));
    }
    let terms = distinct_patterns(rng, n, m)
        .into_iter()
        .map(|b| (b, random_amplitude(rng)))
        .collect();
    Ok(SparseState::from_bits(n, terms).expect("patterns are distinct"))
}

/// Three pairs of basis strings, each pair complementary on every qubit.
pub fn complete_pairs(rng: &mut GenRng, n: usize) -> Result<SparseState, GenError> {
    check_width(n)?;
    if n < 3 {
        return Err(infeasible("three complete complementary pairs need n >= 3"));
    }
    // Low elements have qubit 1 clear, so the three pairs are disjoint.
    let lows = distinct_patterns(rng, n - 1, 3);
    let full = width_mask(n);
    let terms = lows
        .into_iter()
        .flat_map(|l| [(l, random_amplitude(rng)), (l ^ full, random_amplitude(rng))])
        .collect();
    Ok(SparseState::from_bits(n, terms).expect("pairs are disjoint"))
}

pub fn generate(rng: &mut GenRng, kind: GenKind, n: usize, m: Option<usize>) -> Result<SparseState, GenError> {
    match kind {
        GenKind::Separable => separable(rng, n, m.unwrap_or(6)),
        GenKind::Random => random(rng, n, m.unwrap_or(6)),
        GenKind::CompletePairs => match m {
            None | Some(6) => complete_pairs(rng, n),
            Some(other) => Err(infeasible(format!("complete-pairs states have m = 6, not {other}"))),
        },
    }
}

/// A uniformly random permutation of `1..=n` in the form taken by
/// `SparseState::permute_qubits`.
pub fn random_permutation(rng: &mut GenRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{classify, ClassifyOptions, VerdictKind};

    #[test]
    fn deterministic_in_seed() {
        let a = separable(&mut rng_from_seed(7), 6, 6).unwrap();
        let b = separable(&mut rng_from_seed(7), 6, 6).unwrap();
        assert_eq!(a, b);
        let c = separable(&mut rng_from_seed(8), 6, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn separable_seed_7_is_separable() {
        let s = separable(&mut rng_from_seed(7), 6, 6).unwrap();
        assert_eq!(s.m(), 6);
        assert!(s.constant_qubits().is_empty());
        assert_eq!(classify(&s, &ClassifyOptions::default()).kind, VerdictKind::Separable);
    }

    #[test]
    fn complete_pairs_seed_1_is_entangled() {
        let s = complete_pairs(&mut rng_from_seed(1), 4).unwrap();
        assert_eq!(s.m(), 6);
        assert_eq!(
            classify(&s, &ClassifyOptions::default()).kind,
            VerdictKind::GenuinelyEntangled
        );
    }

    #[test]
    fn infeasible_parameters() {
        let rng = &mut rng_from_seed(0);
        assert!(matches!(separable(rng, 2, 6), Err(GenError::InfeasibleParams(_))));
        assert!(matches!(separable(rng, 6, 5), Err(GenError::InfeasibleParams(_))));
        assert!(matches!(separable(rng, 6, 2), Err(GenError::InfeasibleParams(_))));
        assert!(matches!(random(rng, 2, 5), Err(GenError::InfeasibleParams(_))));
        assert!(matches!(complete_pairs(rng, 2), Err(GenError::InfeasibleParams(_))));
        assert!(matches!(
            generate(rng, GenKind::CompletePairs, 5, Some(8)),
            Err(GenError::InfeasibleParams(_))
        ));
        assert!(matches!(random(rng, 1, 1), Err(GenError::InfeasibleParams(_))));
    }

    #[test]
    fn wide_separable_states_have_no_constant_qubit() {
        let rng = &mut rng_from_seed(3);
        for _ in 0..50 {
            let s = separable(rng, 20, 4).unwrap();
            assert!(s.constant_qubits().is_empty());
        }
    }
}
