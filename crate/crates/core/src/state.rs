//! Sparse pure states over the computational basis.
//!
//! Qubit positions are 1-based and qubit 1 is the most significant bit, so
//! the integer order on basis values is the lexicographic order on bit
//! strings.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::ExactScalar;

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("qubit count {0} outside 1..=64")]
    InvalidQubitCount(usize),
    #[error("basis value {bits:#b} does not fit in {width} qubits")]
    BitsOutOfRange { width: usize, bits: u64 },
    #[error("state has no terms")]
    Empty,
    #[error("basis string {found} has width {}, expected {expected}", found.width())]
    WidthMismatch { expected: usize, found: BasisString },
    #[error("duplicate basis string {0}")]
    DuplicateBasis(BasisString),
    #[error("explicit zero amplitude on {0}")]
    ZeroAmplitude(BasisString),
    #[error("every qubit is constant; the state is a single basis state")]
    AllQubitsConstant,
    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("scale factor is zero")]
    ZeroScale,
}

/// Bit mask with the low `width` bits set.
pub fn width_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Single-bit mask of 1-based `position` in an `n`-qubit value.
pub fn position_mask(n: usize, position: usize) -> u64 {
    debug_assert!((1..=n).contains(&position));
    1u64 << (n - position)
}

/// Mask of a set of positions.
pub fn positions_mask(n: usize, positions: &[usize]) -> u64 {
    positions.iter().fold(0, |acc, &p| acc | position_mask(n, p))
}

/// Positions (ascending) whose bits are set in `mask`.
pub fn mask_positions(n: usize, mask: u64) -> Vec<usize> {
    (1..=n).filter(|&p| mask & position_mask(n, p) != 0).collect()
}

/// Restriction of `bits` to `positions`; the first listed position becomes
/// the most significant bit of the result.
pub fn gather_bits(bits: u64, n: usize, positions: &[usize]) -> u64 {
    positions
        .iter()
        .fold(0, |acc, &p| (acc << 1) | u64::from(bits & position_mask(n, p) != 0))
}

/// Inverse of [`gather_bits`]: places `pattern` onto `positions`.
pub fn scatter_bits(pattern: u64, n: usize, positions: &[usize]) -> u64 {
    let k = positions.len();
    positions.iter().enumerate().fold(0, |acc, (idx, &p)| {
        if pattern >> (k - 1 - idx) & 1 == 1 {
            acc | position_mask(n, p)
        } else {
            acc
        }
    })
}

/// An `n`-bit computational-basis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisString {
    width: u8,
    bits: u64,
}

impl BasisString {
    pub fn new(width: usize, bits: u64) -> Result<Self, StateError> {
        if !(1..=MAX_QUBITS).contains(&width) {
            return Err(StateError::InvalidQubitCount(width));
        }
        if bits & !width_mask(width) != 0 {
            return Err(StateError::BitsOutOfRange { width, bits });
        }
        Ok(Self {
            width: width as u8,
            bits,
        })
    }

    /// Parses a string of `0`/`1` characters. Returns `None` on any other
    /// character or an invalid width.
    pub fn from_bit_str(text: &str) -> Option<Self> {
        if text.is_empty() || text.len() > MAX_QUBITS {
            return None;
        }
        let mut bits = 0u64;
        for ch in text.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
        }
        Self::new(text.len(), bits).ok()
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Bit at 1-based `position`.
    pub fn bit(&self, position: usize) -> u8 {
        (self.bits & position_mask(self.width(), position) != 0) as u8
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width())
    }
}

impl Serialize for BasisString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantQubit {
    pub position: usize,
    pub bit: u8,
}

/// Positions that carry the same bit in every term, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConstantQubitReport(pub Vec<ConstantQubit>);

impl ConstantQubitReport {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.0.iter().map(|c| c.position).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstantQubit> {
        self.0.iter()
    }
}

/// A pure state `Σ b_i |B_i⟩` with every `b_i ≠ 0` and `B_1 < B_2 < …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseState {
    n: usize,
    terms: Vec<(BasisString, ExactScalar)>,
}

impl SparseState {
    pub fn new(n: usize, raw_terms: Vec<(BasisString, ExactScalar)>) -> Result<Self, StateError> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(StateError::InvalidQubitCount(n));
        }
        if raw_terms.is_empty() {
            return Err(StateError::Empty);
        }
        let mut terms = raw_terms;
        for (basis, amp) in &terms {
            if basis.width() != n {
                return Err(StateError::WidthMismatch {
                    expected: n,
                    found: *basis,
                });
            }
            if amp.is_zero() {
                return Err(StateError::ZeroAmplitude(*basis));
            }
        }
        terms.sort_by_key(|(b, _)| b.bits());
        if let Some(w) = terms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(StateError::DuplicateBasis(w[0].0));
        }
        Ok(Self { n, terms })
    }

    /// Builds from raw `u64` basis values.
    pub fn from_bits(n: usize, raw: Vec<(u64, ExactScalar)>) -> Result<Self, StateError> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(StateError::InvalidQubitCount(n));
        }
        let terms = raw
            .into_iter()
            .map(|(bits, amp)| Ok((BasisString::new(n, bits)?, amp)))
            .collect::<Result<Vec<_>, StateError>>()?;
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-zero terms.
    pub fn m(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(BasisString, ExactScalar)] {
        &self.terms
    }

    pub fn basis_strings(&self) -> Vec<BasisString> {
        self.terms.iter().map(|(b, _)| *b).collect()
    }

    pub fn amplitudes(&self) -> Vec<&ExactScalar> {
        self.terms.iter().map(|(_, a)| a).collect()
    }

    pub fn amplitude(&self, bits: u64) -> Option<&ExactScalar> {
        self.terms
            .binary_search_by_key(&bits, |(b, _)| b.bits())
            .ok()
            .map(|idx| &self.terms[idx].1)
    }

    /// `Σ |b_i|²`. Informational; states need not be normalized.
    pub fn norm_sq(&self) -> ExactScalar {
        self.terms
            .iter()
            .fold(ExactScalar::zero(), |acc, (_, a)| &acc + &a.norm_sq())
    }

    pub fn constant_qubits(&self) -> ConstantQubitReport {
        let all = width_mask(self.n);
        let (ones, zeros) = self
            .terms
            .iter()
            .fold((all, all), |(ones, zeros), (b, _)| (ones & b.bits(), zeros & !b.bits()));
        let report = (1..=self.n)
            .filter_map(|p| {
                let mask = position_mask(self.n, p);
                if ones & mask != 0 {
                    Some(ConstantQubit { position: p, bit: 1 })
                } else if zeros & mask != 0 {
                    Some(ConstantQubit { position: p, bit: 0 })
                } else {
                    None
                }
            })
            .collect();
        ConstantQubitReport(report)
    }

    pub fn is_trivially_separable(&self) -> bool {
        !self.constant_qubits().is_empty()
    }

    /// Removes every constant qubit. The reduced state lives on the
    /// remaining positions in their original order.
    pub fn strip_constant_qubits(&self) -> Result<(SparseState, ConstantQubitReport), StateError> {
        let report = self.constant_qubits();
        if report.len() == self.n {
            return Err(StateError::AllQubitsConstant);
        }
        if report.is_empty() {
            return Ok((self.clone(), report));
        }
        let kept = self.varying_positions(&report);
        let width = kept.len();
        let terms = self
            .terms
            .iter()
            .map(|(b, a)| {
                (
                    BasisString {
                        width: width as u8,
                        bits: gather_bits(b.bits(), self.n, &kept),
                    },
                    a.clone(),
                )
            })
            .collect();
        Ok((SparseState::new(width, terms)?, report))
    }

    /// Positions not listed in `report`.
    pub fn varying_positions(&self, report: &ConstantQubitReport) -> Vec<usize> {
        let constant = report.positions();
        (1..=self.n).filter(|p| !constant.contains(p)).collect()
    }

    /// Moves the bit at position `i` to position `perm[i - 1]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<SparseState, StateError> {
        let n = self.n;
        let mut seen = vec![false; n + 1];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p == 0 || p > n || std::mem::replace(&mut seen[p], true))
        {
            return Err(StateError::InvalidPermutation(n));
        }
        let terms = self
            .terms
            .iter()
            .map(|(b, a)| {
                let bits = (1..=n).fold(0u64, |acc, i| {
                    if b.bits() & position_mask(n, i) != 0 {
                        acc | position_mask(n, perm[i - 1])
                    } else {
                        acc
                    }
                });
                (BasisString { width: n as u8, bits }, a.clone())
            })
            .collect();
        SparseState::new(n, terms)
    }

    pub fn scale(&self, c: &ExactScalar) -> Result<SparseState, StateError> {
        if c.is_zero() {
            return Err(StateError::ZeroScale);
        }
        Ok(SparseState {
            n: self.n,
            terms: self.terms.iter().map(|(b, a)| (*b, a * c)).collect(),
        })
    }

    /// Flips every bit of every basis string.
    pub fn complement_all(&self) -> SparseState {
        let mask = width_mask(self.n);
        let terms = self
            .terms
            .iter()
            .map(|(b, a)| {
                (
                    BasisString {
                        width: b.width,
                        bits: b.bits() ^ mask,
                    },
                    a.clone(),
                )
            })
            .collect();
        SparseState::new(self.n, terms).expect("bit complement is a bijection")
    }
}

/// Tensor product of factor states placed on disjoint position sets of an
/// `n`-qubit register. The position lists must partition `1..=n` and each
/// list's length must equal its factor's width.
pub fn tensor_on_positions(n: usize, factors: &[(&SparseState, &[usize])]) -> Result<SparseState, StateError> {
    let mut covered = vec![false; n + 1];
    for (f, pos) in factors {
        if f.n() != pos.len() {
            return Err(StateError::InvalidPermutation(n));
        }
        for &p in pos.iter() {
            if p == 0 || p > n || std::mem::replace(&mut covered[p], true) {
                return Err(StateError::InvalidPermutation(n));
            }
        }
    }
    if covered[1..].iter().any(|c| !c) {
        return Err(StateError::InvalidPermutation(n));
    }
    let mut acc: Vec<(u64, ExactScalar)> = vec![(0, ExactScalar::one())];
    for (f, pos) in factors {
        acc = acc
            .iter()
            .flat_map(|(bits, amp)| {
                f.terms()
                    .iter()
                    .map(move |(b, a)| (bits | scatter_bits(b.bits(), n, pos), amp * a))
            })
            .collect();
    }
    SparseState::from_bits(n, acc)
}
