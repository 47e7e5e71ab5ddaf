//! Exhaustive bipartition search, independent of the pair-structure path.
//!
//! A state is a product across the cut `S | Sᶜ` iff its amplitude grid
//! (rows keyed by the `S`-restriction, columns by the `Sᶜ`-restriction) has
//! rank at most one. All decisions use exact scalars.

use thiserror::Error;

use crate::arith::{cross_minor, ExactScalar};
use crate::criterion::{classify, ClassifyOptions, Verdict};
use crate::state::{gather_bits, mask_positions, position_mask, width_mask, SparseState};
use crate::structure::FactorPair;

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} qubits exceeds the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("a bipartition needs at least two qubits")]
    TooFewQubits,
}

/// A cut `S | Sᶜ` with position 1 always in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub n: usize,
    pub s: Vec<usize>,
    pub sc: Vec<usize>,
}

impl Bipartition {
    /// The `index`-th canonical cut: bit `i` of `index` puts position
    /// `i + 2` into `S`.
    pub fn from_index(n: usize, index: u64) -> Self {
        let mask = s_mask(n, index);
        Bipartition {
            n,
            s: mask_positions(n, mask),
            sc: mask_positions(n, width_mask(n) & !mask),
        }
    }

    pub fn s_mask(&self) -> u64 {
        self.s.iter().fold(0, |acc, &p| acc | position_mask(self.n, p))
    }
}

fn s_mask(n: usize, index: u64) -> u64 {
    let mut mask = position_mask(n, 1);
    for i in 0..(n - 1) {
        if index >> i & 1 == 1 {
            mask |= position_mask(n, i + 2);
        }
    }
    mask
}

fn cut_count(n: usize) -> u64 {
    (1u64 << (n - 1)) - 1
}

fn check_n(n: usize, cap: usize) -> Result<(), OracleError> {
    if n < 2 {
        return Err(OracleError::TooFewQubits);
    }
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap });
    }
    Ok(())
}

/// All `2^(n−1) − 1` canonical bipartitions, lowest index first.
pub fn bipartitions(n: usize, cap: usize) -> Result<Vec<Bipartition>, OracleError> {
    check_n(n, cap)?;
    Ok((0..cut_count(n)).map(|i| Bipartition::from_index(n, i)).collect())
}

/// Sparse amplitude grid of a state across a cut. Keys are the compact
/// restrictions of each basis string to `S` (rows) and `Sᶜ` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideGrid<'a> {
    pub cells: Vec<(u64, u64, &'a ExactScalar)>,
}

pub fn side_coefficient_matrix<'a>(state: &'a SparseState, cut: &Bipartition) -> SideGrid<'a> {
    let n = state.n();
    let cells = state
        .terms()
        .iter()
        .map(|(b, a)| (gather_bits(b.bits(), n, &cut.s), gather_bits(b.bits(), n, &cut.sc), a))
        .collect();
    SideGrid { cells }
}

/// Dense view of a grid whose support is a full rectangle.
struct Rectangle<'a> {
    rows: Vec<u64>,
    cols: Vec<u64>,
    /// Row-major `rows.len() × cols.len()`.
    entries: Vec<&'a ExactScalar>,
}

impl<'a> Rectangle<'a> {
    fn get(&self, r: usize, c: usize) -> &'a ExactScalar {
        self.entries[r * self.cols.len() + c]
    }
}

/// Returns the dense rectangle when the non-zero support is one; `None`
/// means some row/column combination is missing and the rank is ≥ 2.
fn rectangle<'a>(cells: &[(u64, u64, &'a ExactScalar)]) -> Option<Rectangle<'a>> {
    let mut rows: Vec<u64> = cells.iter().map(|c| c.0).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut cols: Vec<u64> = cells.iter().map(|c| c.1).collect();
    cols.sort_unstable();
    cols.dedup();
    if rows.len() * cols.len() != cells.len() {
        return None;
    }
    let mut sorted: Vec<&(u64, u64, &ExactScalar)> = cells.iter().collect();
    sorted.sort_unstable_by_key(|c| (c.0, c.1));
    if sorted.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
        return None;
    }
    Some(Rectangle {
        rows,
        cols,
        entries: sorted.iter().map(|c| c.2).collect(),
    })
}

fn rectangle_is_rank1(rect: &Rectangle<'_>) -> bool {
    // All entries are non-zero, so rank ≤ 1 iff every row is a multiple of
    // row 0, i.e. the minors against the (0, 0) pivot vanish.
    let pivot = rect.get(0, 0);
    (1..rect.rows.len()).all(|r| {
        (1..rect.cols.len()).all(|c| cross_minor(pivot, rect.get(0, c), rect.get(r, 0), rect.get(r, c)).is_zero())
    })
}

/// Rank ≤ 1 test for a sparse grid: the support must be a combinatorial
/// rectangle and every 2×2 minor on it must vanish.
pub fn is_rank_le_1(grid: &SideGrid<'_>) -> bool {
    rectangle(&grid.cells).is_some_and(|rect| rectangle_is_rank1(&rect))
}

/// `(S-factor, Sᶜ-factor)` from a rank-1 rectangle: the Sᶜ factor is row 0
/// and the S factor holds each row's multiplier relative to row 0.
fn rectangle_witness(state: &SparseState, cut: &Bipartition, rect: &Rectangle<'_>) -> Option<FactorPair> {
    let row0: Vec<(u64, ExactScalar)> = rect
        .cols
        .iter()
        .enumerate()
        .map(|(c, &key)| (key, rect.get(0, c).clone()))
        .collect();
    let pivot_col = (0..rect.cols.len()).find(|&c| rect.get(0, c).inverse().is_ok())?;
    let pivot_inv = rect.get(0, pivot_col).inverse().ok()?;
    let multipliers: Vec<(u64, ExactScalar)> = rect
        .rows
        .iter()
        .enumerate()
        .map(|(r, &key)| (key, rect.get(r, pivot_col) * &pivot_inv))
        .collect();
    let witness = FactorPair {
        n: state.n(),
        p_positions: cut.s.clone(),
        p_factor: SparseState::from_bits(cut.s.len(), multipliers).ok()?,
        q_positions: cut.sc.clone(),
        q_factor: SparseState::from_bits(cut.sc.len(), row0).ok()?,
    };
    match witness.expand() {
        Ok(expanded) if &expanded == state => Some(witness),
        _ => None,
    }
}

/// Outcome of the exhaustive cut search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutSearch {
    /// First product cut in canonical order, with its factors.
    Product {
        cut: Bipartition,
        witness: FactorPair,
    },
    /// A rank-1 cut exists but no witness could be computed exactly.
    ProductWithoutWitness {
        cut: Bipartition,
    },
    NoProductCut,
}

/// Tests every canonical cut in order and stops at the first product cut.
pub fn search_cuts(state: &SparseState, cap: usize) -> Result<CutSearch, OracleError> {
    let n = state.n();
    check_n(n, cap)?;
    let mut first_unwitnessed = None;
    let mut cells: Vec<(u64, u64, &ExactScalar)> = Vec::with_capacity(state.m());
    for index in 0..cut_count(n) {
        let s = s_mask(n, index);
        cells.clear();
        cells.extend(state.terms().iter().map(|(b, a)| (b.bits() & s, b.bits() & !s, a)));
        let Some(rect) = rectangle(&cells) else { continue };
        if !rectangle_is_rank1(&rect) {
            continue;
        }
        let cut = Bipartition::from_index(n, index);
        let grid = side_coefficient_matrix(state, &cut);
        let compact = rectangle(&grid.cells).expect("compaction preserves the rectangle");
        match rectangle_witness(state, &cut, &compact) {
            Some(witness) => return Ok(CutSearch::Product { cut, witness }),
            None => {
                first_unwitnessed.get_or_insert(cut);
            }
        }
    }
    Ok(match first_unwitnessed {
        Some(cut) => CutSearch::ProductWithoutWitness { cut },
        None => CutSearch::NoProductCut,
    })
}

/// Full classification with the exhaustive search as the decision
/// procedure (constant qubits are still split off first).
pub fn oracle_classify(state: &SparseState, cap: usize) -> Verdict {
    classify(
        state,
        &ClassifyOptions {
            oracle_cap: cap,
            force_oracle: true,
        },
    )
}
