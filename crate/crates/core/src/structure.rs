//! Complementary-pair structures of a state's basis strings and the 2×k
//! coefficient matrices they induce.
//!
//! A structure pairs every basis string `b` with `b ⊕ d` for one fixed
//! non-zero mask `d`. The support of `d` is the position set `P`; its
//! complement is `Q`. A proper structure (non-empty `Q`) additionally needs
//! every string's `P`-restriction to be one of two complementary patterns
//! `γ` and `γ̄`, so the state reads as `(α₁|γ⟩ + α₂|γ̄⟩)_P ⊗ (Σ β_j |q_j⟩)_Q`
//! exactly when the coefficient matrix has proportional rows.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{cross_minor, ArithError, ExactScalar};
use crate::state::{
    gather_bits, mask_positions, scatter_bits, tensor_on_positions, width_mask, BasisString, SparseState, StateError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("odd number of basis strings ({0})")]
    OddCount(usize),
    #[error("need at least two pairs, got {0} basis strings")]
    TooFewTerms(usize),
    #[error("duplicate basis string {0}")]
    DuplicateBasis(BasisString),
    #[error("basis strings have mixed widths")]
    WidthMismatch,
    #[error("pair structure does not match the state's basis strings")]
    StructureMismatch,
    #[error("structure is improper (complete complementary pairs)")]
    ImproperStructure,
    #[error("coefficient matrix rows are not proportional")]
    NotRank1,
    #[error("expected {expected} terms, found {found}")]
    WrongTermCount { expected: usize, found: usize },
    #[error("factor extraction: {0}")]
    DivisionUnsupported(ArithError),
    #[error("extracted factors do not reproduce the state")]
    WitnessMismatch,
}

/// A perfect matching of basis strings into pairs with one common XOR mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStructure {
    pub n: usize,
    pub d: BasisString,
    /// `(low, high)` with `low < high`, ordered by `q_values` (proper) or by
    /// `low` (improper).
    pub pairs: Vec<(BasisString, BasisString)>,
    pub p_positions: Vec<usize>,
    pub q_positions: Vec<usize>,
    /// `P`-restriction of the first pair's low element (`|P|` bits).
    pub gamma: u64,
    /// `Q`-restriction of each pair, strictly increasing. Empty when improper.
    pub q_values: Vec<u64>,
    pub proper: bool,
}

impl PairStructure {
    pub fn p_mask(&self) -> u64 {
        self.d.bits()
    }

    pub fn q_mask(&self) -> u64 {
        width_mask(self.n) & !self.d.bits()
    }

    /// `γ̄`, the complement of `gamma` on `P`.
    pub fn gamma_bar(&self) -> u64 {
        self.gamma ^ width_mask(self.p_positions.len())
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Full basis value with `P`-pattern `p_pattern` and `Q`-pattern `q`.
    pub fn compose(&self, p_pattern: u64, q: u64) -> u64 {
        scatter_bits(p_pattern, self.n, &self.p_positions) | scatter_bits(q, self.n, &self.q_positions)
    }
}

/// All constant-XOR pair structures of `basis`, proper and improper, in
/// ascending order of `d`.
///
/// For a fixed `d` the matching is forced (`b ↦ b ⊕ d`), and any valid `d`
/// pairs the smallest string with some other string, so only the `m − 1`
/// masks `b₁ ⊕ b_j` need checking.
pub fn xor_matchings(basis: &[BasisString]) -> Result<Vec<PairStructure>, StructureError> {
    let m = basis.len();
    if m % 2 == 1 {
        return Err(StructureError::OddCount(m));
    }
    if m < 4 {
        return Err(StructureError::TooFewTerms(m));
    }
    let n = basis[0].width();
    if basis.iter().any(|b| b.width() != n) {
        return Err(StructureError::WidthMismatch);
    }
    let mut sorted: Vec<u64> = basis.iter().map(|b| b.bits()).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(StructureError::DuplicateBasis(
            BasisString::new(n, w[0]).expect("validated width"),
        ));
    }
    let contains = |v: u64| sorted.binary_search(&v).is_ok();

    let mut candidates: Vec<u64> = sorted[1..].iter().map(|b| b ^ sorted[0]).collect();
    candidates.sort_unstable();

    let full = width_mask(n);
    let mut out = Vec::new();
    for d in candidates {
        if !sorted.iter().all(|&b| contains(b ^ d)) {
            continue;
        }
        let proper = d != full;
        let p_positions = mask_positions(n, d);
        let q_positions = mask_positions(n, full & !d);
        let lows: Vec<u64> = sorted.iter().copied().filter(|&b| b < b ^ d).collect();
        if proper {
            let gamma_full = sorted[0] & d;
            if !sorted.iter().all(|&b| b & d == gamma_full || b & d == gamma_full ^ d) {
                continue;
            }
            let mut by_q: Vec<(u64, u64)> = lows.iter().map(|&l| (gather_bits(l, n, &q_positions), l)).collect();
            by_q.sort_unstable();
            let q_values: Vec<u64> = by_q.iter().map(|(q, _)| *q).collect();
            assert!(
                q_values.windows(2).all(|w| w[0] < w[1]),
                "distinct basis strings force distinct Q-patterns"
            );
            let pairs = by_q
                .iter()
                .map(|&(_, l)| (basis_of(n, l), basis_of(n, l ^ d)))
                .collect::<Vec<_>>();
            let gamma = gather_bits(by_q[0].1, n, &p_positions);
            out.push(PairStructure {
                n,
                d: basis_of(n, d),
                pairs,
                p_positions,
                q_positions,
                gamma,
                q_values,
                proper,
            });
        } else {
            let pairs: Vec<_> = lows.iter().map(|&l| (basis_of(n, l), basis_of(n, l ^ d))).collect();
            out.push(PairStructure {
                n,
                d: basis_of(n, d),
                gamma: lows[0],
                pairs,
                p_positions,
                q_positions,
                q_values: Vec::new(),
                proper,
            });
        }
    }
    Ok(out)
}

fn basis_of(n: usize, bits: u64) -> BasisString {
    BasisString::new(n, bits).expect("bits derived from valid basis strings")
}

/// A 2×k grid of amplitudes. Row 0 is the `γ` side, row 1 the `γ̄` side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    rows: [Vec<ExactScalar>; 2],
}

impl CoeffMatrix {
    pub fn new(top: Vec<ExactScalar>, bottom: Vec<ExactScalar>) -> Self {
        assert_eq!(top.len(), bottom.len(), "rows must have equal length");
        Self { rows: [top, bottom] }
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, row: usize, col: usize) -> &ExactScalar {
        &self.rows[row][col]
    }

    pub fn row(&self, row: usize) -> &[ExactScalar] {
        &self.rows[row]
    }

    /// Every 2×2 minor `M(0,i)·M(1,j) − M(0,j)·M(1,i)` for `i < j`.
    pub fn minors(&self) -> Vec<((usize, usize), ExactScalar)> {
        let k = self.cols();
        let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                let minor = cross_minor(self.get(0, i), self.get(0, j), self.get(1, i), self.get(1, j));
                out.push(((i, j), minor));
            }
        }
        out
    }

    /// The two rows as display strings.
    pub fn display_rows(&self) -> [Vec<String>; 2] {
        [
            self.rows[0].iter().map(|e| e.to_string()).collect(),
            self.rows[1].iter().map(|e| e.to_string()).collect(),
        ]
    }
}

pub fn build_coefficient_matrix(state: &SparseState, s: &PairStructure) -> Result<CoeffMatrix, StructureError> {
    if !s.proper {
        return Err(StructureError::ImproperStructure);
    }
    if state.n() != s.n || state.m() != 2 * s.k() {
        return Err(StructureError::StructureMismatch);
    }
    let lookup = |p: u64, q: u64| {
        state
            .amplitude(s.compose(p, q))
            .cloned()
            .ok_or(StructureError::StructureMismatch)
    };
    let mut top = Vec::with_capacity(s.k());
    let mut bottom = Vec::with_capacity(s.k());
    for &q in &s.q_values {
        top.push(lookup(s.gamma, q)?);
        bottom.push(lookup(s.gamma_bar(), q)?);
    }
    Ok(CoeffMatrix::new(top, bottom))
}

/// Whether the two rows are proportional, i.e. every 2×2 minor vanishes.
pub fn rank1_rows(matrix: &CoeffMatrix) -> bool {
    matrix.minors().iter().all(|(_, minor)| minor.is_zero())
}

/// A witness `|φ⟩_P ⊗ |χ⟩_Q` for a separable cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPair {
    pub n: usize,
    pub p_positions: Vec<usize>,
    pub p_factor: SparseState,
    pub q_positions: Vec<usize>,
    pub q_factor: SparseState,
}

impl FactorPair {
    /// The tensor product placed back on the original positions.
    pub fn expand(&self) -> Result<SparseState, StateError> {
        tensor_on_positions(
            self.n,
            &[(&self.p_factor, &self.p_positions), (&self.q_factor, &self.q_positions)],
        )
    }

    /// Relabels positions through `map` (`map[i - 1]` is the new label of
    /// position `i`) into a register of `n` qubits.
    pub fn relabel(&self, n: usize, map: &[usize]) -> FactorPair {
        FactorPair {
            n,
            p_positions: self.p_positions.iter().map(|&p| map[p - 1]).collect(),
            p_factor: self.p_factor.clone(),
            q_positions: self.q_positions.iter().map(|&q| map[q - 1]).collect(),
            q_factor: self.q_factor.clone(),
        }
    }
}

/// Solves `M = (α₁, α₂)ᵀ (β₁ … β_k)` with `α₁ = 1`, `β_j = M(0, j)` and
/// `α₂ = M(1, c) / M(0, c)` for the first column `c` whose quotient is
/// computable, then checks the expansion against `state`.
pub fn extract_factors(
    state: &SparseState,
    s: &PairStructure,
    matrix: &CoeffMatrix,
) -> Result<FactorPair, StructureError> {
    if !s.proper {
        return Err(StructureError::ImproperStructure);
    }
    if !rank1_rows(matrix) {
        return Err(StructureError::NotRank1);
    }
    let mut alpha2 = Err(ArithError::DivisionByZero);
    for c in 0..matrix.cols() {
        alpha2 = matrix.get(1, c).checked_div(matrix.get(0, c));
        if alpha2.is_ok() {
            break;
        }
    }
    let alpha2 = alpha2.map_err(StructureError::DivisionUnsupported)?;

    let p_width = s.p_positions.len();
    let p_factor = SparseState::from_bits(p_width, vec![(s.gamma, ExactScalar::one()), (s.gamma_bar(), alpha2)])
        .map_err(|_| StructureError::StructureMismatch)?;
    let q_terms = s
        .q_values
        .iter()
        .zip(matrix.row(0))
        .map(|(&q, b)| (q, b.clone()))
        .collect();
    let q_factor =
        SparseState::from_bits(s.q_positions.len(), q_terms).map_err(|_| StructureError::StructureMismatch)?;
    let witness = FactorPair {
        n: s.n,
        p_positions: s.p_positions.clone(),
        p_factor,
        q_positions: s.q_positions.clone(),
        q_factor,
    };
    match witness.expand() {
        Ok(expanded) if &expanded == state => Ok(witness),
        _ => Err(StructureError::WitnessMismatch),
    }
}

/// Fixed placements of the sorted amplitudes `b₁ < … < b_m` into a 2×k
/// matrix. Indices below are 0-based (`b₁` is index 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CanonicalForm {
    /// `(b₁ b₂ b₅ / b₃ b₄ b₆)`
    #[serde(rename = "mt-1")]
    Mt1,
    /// `(b₁ b₃ b₅ / b₂ b₄ b₆)`
    #[serde(rename = "mt-2")]
    Mt2,
    /// `(b₁ b₂ b₃ / b₄ b₅ b₆)`
    #[serde(rename = "mt-3")]
    Mt3,
    /// `(b₁ b₃ b₄ / b₂ b₅ b₆)`
    #[serde(rename = "mt-5")]
    Mt5,
    /// Four terms, `(b₁ b₃ / b₂ b₄)`
    #[serde(rename = "m4-1")]
    FourA,
    /// Four terms, `(b₁ b₂ / b₃ b₄)`
    #[serde(rename = "m4-2")]
    FourB,
}

impl CanonicalForm {
    pub const SIX_TERM: [CanonicalForm; 4] = [Self::Mt1, Self::Mt2, Self::Mt3, Self::Mt5];
    pub const FOUR_TERM: [CanonicalForm; 2] = [Self::FourA, Self::FourB];

    pub fn rows(&self) -> [&'static [usize]; 2] {
        match self {
            Self::Mt1 => [&[0, 1, 4], &[2, 3, 5]],
            Self::Mt2 => [&[0, 2, 4], &[1, 3, 5]],
            Self::Mt3 => [&[0, 1, 2], &[3, 4, 5]],
            Self::Mt5 => [&[0, 2, 3], &[1, 4, 5]],
            Self::FourA => [&[0, 2], &[1, 3]],
            Self::FourB => [&[0, 1], &[2, 3]],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Mt1 => "mt-1",
            Self::Mt2 => "mt-2",
            Self::Mt3 => "mt-3",
            Self::Mt5 => "mt-5",
            Self::FourA => "m4-1",
            Self::FourB => "m4-2",
        }
    }

    pub fn term_count(&self) -> usize {
        self.rows()[0].len() * 2
    }

    /// The form whose index placement equals `pattern`, if any.
    pub fn from_pattern(pattern: &[Vec<usize>; 2]) -> Option<CanonicalForm> {
        Self::SIX_TERM
            .into_iter()
            .chain(Self::FOUR_TERM)
            .find(|f| f.rows()[0] == pattern[0].as_slice() && f.rows()[1] == pattern[1].as_slice())
    }

    /// The amplitudes of `state` placed according to this form.
    pub fn matrix(&self, state: &SparseState) -> Result<CoeffMatrix, StructureError> {
        if state.m() != self.term_count() {
            return Err(StructureError::WrongTermCount {
                expected: self.term_count(),
                found: state.m(),
            });
        }
        let amps = state.amplitudes();
        let [top, bottom] = self.rows();
        Ok(CoeffMatrix::new(
            top.iter().map(|&i| amps[i].clone()).collect(),
            bottom.iter().map(|&i| amps[i].clone()).collect(),
        ))
    }
}

fn proportional_forms(state: &SparseState, forms: &[CanonicalForm]) -> Result<Vec<CanonicalForm>, StructureError> {
    let mut out = Vec::new();
    for form in forms {
        if rank1_rows(&form.matrix(state)?) {
            out.push(*form);
        }
    }
    Ok(out)
}

/// Which of the four six-term placements have proportional rows.
pub fn canonical_form_index(state: &SparseState) -> Result<Vec<CanonicalForm>, StructureError> {
    proportional_forms(state, &CanonicalForm::SIX_TERM)
}

/// Which of the two four-term placements have proportional rows.
pub fn four_term_form_index(state: &SparseState) -> Result<Vec<CanonicalForm>, StructureError> {
    proportional_forms(state, &CanonicalForm::FOUR_TERM)
}

/// Sorted-term indices occupied by the structure's coefficient matrix.
pub fn structure_index_pattern(state: &SparseState, s: &PairStructure) -> Result<[Vec<usize>; 2], StructureError> {
    if !s.proper {
        return Err(StructureError::ImproperStructure);
    }
    let index_of = |bits: u64| {
        state
            .terms()
            .binary_search_by_key(&bits, |(b, _)| b.bits())
            .map_err(|_| StructureError::StructureMismatch)
    };
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for &q in &s.q_values {
        top.push(index_of(s.compose(s.gamma, q))?);
        bottom.push(index_of(s.compose(s.gamma_bar(), q))?);
    }
    Ok([top, bottom])
}

/// Whether the six basis strings split into three pairs that are
/// complementary on every position.
pub fn corollary3_check(state: &SparseState) -> Result<bool, StructureError> {
    if state.m() != 6 {
        return Err(StructureError::WrongTermCount {
            expected: 6,
            found: state.m(),
        });
    }
    let full = width_mask(state.n());
    Ok(xor_matchings(&state.basis_strings())?
        .iter()
        .any(|s| s.d.bits() == full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ketparse::parse_state;

    fn basis(strings: &[&str]) -> Vec<BasisString> {
        strings.iter().map(|s| BasisString::from_bit_str(s).unwrap()).collect()
    }

    fn bit_strs(values: &[u64], width: usize) -> Vec<String> {
        values.iter().map(|v| format!("{v:0width$b}")).collect()
    }

    #[test]
    fn eta_has_one_structure() {
        let found = xor_matchings(&basis(&["0000", "0001", "0101", "1010", "1011", "1111"])).unwrap();
        assert_eq!(found.len(), 1);
        let s = &found[0];
        assert_eq!(s.d.to_string(), "1010");
        assert_eq!(s.p_positions, vec![1, 3]);
        assert_eq!(s.q_positions, vec![2, 4]);
        let pairs: Vec<(String, String)> = s.pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(
            pairs,
            [("0000", "1010"), ("0001", "1011"), ("0101", "1111")].map(|(a, b)| (a.to_string(), b.to_string()))
        );
        assert_eq!(bit_strs(&s.q_values, 2), ["00", "01", "11"]);
        assert!(s.proper);
    }

    #[test]
    fn psi6_has_no_structure() {
        let found = xor_matchings(&basis(&["00001", "00010", "00100", "01000", "10000", "11111"])).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn g_abcd_delta_zero_is_improper_only() {
        let found = xor_matchings(&basis(&["0000", "0011", "0101", "1010", "1100", "1111"])).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].d.to_string(), "1111");
        assert!(!found[0].proper);
        assert!(found[0].q_positions.is_empty());
    }

    #[test]
    fn matching_errors() {
        assert_eq!(
            xor_matchings(&basis(&["00", "01", "10"])),
            Err(StructureError::OddCount(3))
        );
        assert_eq!(
            xor_matchings(&basis(&["00", "11"])),
            Err(StructureError::TooFewTerms(2))
        );
        assert!(matches!(
            xor_matchings(&basis(&["00", "01", "10", "01"])),
            Err(StructureError::DuplicateBasis(_))
        ));
    }

    #[test]
    fn eta_matrix_and_factors() {
        let eta = parse_state("|0000>+|0001>+|0101>+|1010>+|1011>+|1111>").unwrap();
        let s = &xor_matchings(&eta.basis_strings()).unwrap()[0];
        let m = build_coefficient_matrix(&eta, s).unwrap();
        let one = ExactScalar::one();
        assert_eq!(m, CoeffMatrix::new(vec![one.clone(); 3], vec![one.clone(); 3]));
        assert!(rank1_rows(&m));
        let w = extract_factors(&eta, s, &m).unwrap();
        assert_eq!(w.p_positions, vec![1, 3]);
        assert_eq!(w.p_factor, parse_state("|00>+|11>").unwrap());
        assert_eq!(w.q_positions, vec![2, 4]);
        assert_eq!(w.q_factor, parse_state("|00>+|01>+|11>").unwrap());
        assert_eq!(w.expand().unwrap(), eta);
    }

    #[test]
    fn theta_matrix_is_not_rank1() {
        let theta = parse_state("|0000>+|0010>+|0101>+|0111>+|1010>-|1111>")
            .unwrap()
            .scale(&ExactScalar::sqrt(6).inverse().unwrap())
            .unwrap();
        let found = xor_matchings(&theta.basis_strings()).unwrap();
        assert_eq!(found.len(), 1);
        let s = &found[0];
        assert_eq!(s.d.to_string(), "0101");
        assert_eq!(s.p_positions, vec![2, 4]);
        let m = build_coefficient_matrix(&theta, s).unwrap();
        let c = &ExactScalar::sqrt(6) * &ExactScalar::ratio(1, 6);
        assert_eq!(
            m,
            CoeffMatrix::new(vec![c.clone(), c.clone(), c.clone()], vec![c.clone(), c.clone(), -&c])
        );
        assert!(!rank1_rows(&m));
        assert_eq!(extract_factors(&theta, s, &m), Err(StructureError::NotRank1));
        let minors: Vec<ExactScalar> = m.minors().into_iter().map(|(_, v)| v).collect();
        assert_eq!(minors[1], ExactScalar::ratio(-1, 3));
    }

    #[test]
    fn psi6_forms_none_proportional() {
        let psi6 = parse_state("sqrt(3)|11111>+|10000>+|01000>+|00100>+|00010>+|00001>").unwrap();
        assert!(canonical_form_index(&psi6).unwrap().is_empty());
        for form in CanonicalForm::SIX_TERM {
            let m = form.matrix(&psi6).unwrap();
            let mut entries: Vec<String> = m.row(0).iter().chain(m.row(1)).map(|e| e.to_string()).collect();
            entries.sort();
            assert_eq!(entries, ["1", "1", "1", "1", "1", "sqrt(3)"]);
        }
        assert_eq!(
            canonical_form_index(&parse_state("|00>+|11>").unwrap()),
            Err(StructureError::WrongTermCount { expected: 6, found: 2 })
        );
    }

    #[test]
    fn eta_forms() {
        let eta = parse_state("|0000>+|0001>+|0101>+|1010>+|1011>+|1111>").unwrap();
        let forms = canonical_form_index(&eta).unwrap();
        assert_eq!(forms, CanonicalForm::SIX_TERM.to_vec());
        let s = &xor_matchings(&eta.basis_strings()).unwrap()[0];
        let pattern = structure_index_pattern(&eta, s).unwrap();
        assert_eq!(CanonicalForm::from_pattern(&pattern), Some(CanonicalForm::Mt3));
    }

    #[test]
    fn corollary3_examples() {
        let g = parse_state("|0000>+|1111>+|0011>+|1100>+|0101>+|1010>").unwrap();
        assert!(corollary3_check(&g).unwrap());
        let eta = parse_state("|0000>+|0001>+|0101>+|1010>+|1011>+|1111>").unwrap();
        assert!(!corollary3_check(&eta).unwrap());
        let theta = parse_state("|0000>+|0010>+|0101>+|0111>+|1010>-|1111>").unwrap();
        assert!(!corollary3_check(&theta).unwrap());
    }

    #[test]
    fn improper_structure_rejected_by_matrix_builder() {
        let g = parse_state("|0000>+|1111>+|0011>+|1100>+|0101>+|1010>").unwrap();
        let s = &xor_matchings(&g.basis_strings()).unwrap()[0];
        assert_eq!(build_coefficient_matrix(&g, s), Err(StructureError::ImproperStructure));
    }
}
