//! The classification pipeline.
//!
//! Order of checks: single-term states, constant qubits (split off, then the
//! rest is classified recursively), the pair-structure path for
//! `m ∈ {4, 6}` and `m = 2p` with `p` prime, and finally the exhaustive cut
//! search for every other `m`.
//!
//! The pair-structure path is complete for `m = 2p`: a product across any
//! cut multiplies the term counts of its factors, and neither factor can
//! have a single term once constant qubits are gone, so one factor has
//! exactly two terms with complementary patterns on its qubits.

use serde::Serialize;

use crate::arith::ExactScalar;
use crate::oracle::{search_cuts, CutSearch, DEFAULT_ORACLE_CAP};
use crate::state::{ConstantQubitReport, SparseState};
use crate::structure::{
    build_coefficient_matrix, extract_factors, rank1_rows, xor_matchings, CoeffMatrix, FactorPair, PairStructure,
};

pub use crate::structure::corollary3_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    TriviallySeparable,
    Separable,
    GenuinelyEntangled,
    Unknown,
}

impl VerdictKind {
    /// CLI exit status: 0 separable (either kind), 1 entangled, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::TriviallySeparable | Self::Separable => 0,
            Self::GenuinelyEntangled => 1,
            Self::Unknown => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TriviallySeparable => "TriviallySeparable",
            Self::Separable => "Separable",
            Self::GenuinelyEntangled => "GenuinelyEntangled",
            Self::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Structural,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    /// No proper pair structure among the basis strings.
    NoPairStructure,
    /// Proper structures exist but no coefficient matrix has proportional rows.
    NoRank1Structure,
    /// Six terms forming three pairs complementary on every qubit.
    Corollary3,
    /// No cut has a rank-1 amplitude grid.
    OracleExhaustive,
    /// The exhaustive search was needed but `n` is above the cap.
    OracleCapExceeded,
    /// A product cut exists but its factors could not be computed exactly.
    WitnessUnavailable,
}

/// One pair structure together with its matrix (proper structures only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFinding {
    pub structure: PairStructure,
    pub matrix: Option<CoeffMatrix>,
    pub rank1: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub constant_qubits: ConstantQubitReport,
    pub structures: Vec<StructureFinding>,
    /// For `Separable`, a factorization across one cut. For
    /// `TriviallySeparable`, the constant qubits split from the rest.
    pub witness: Option<FactorPair>,
    pub reason: Option<Reason>,
    /// Positions of the original register kept after stripping constant
    /// qubits; `reduced` is expressed on these, renumbered from 1.
    pub reduced_positions: Vec<usize>,
    pub reduced: Option<Box<Verdict>>,
}

impl Verdict {
    fn bare(state: &SparseState, kind: VerdictKind, method: Method) -> Self {
        Verdict {
            kind,
            method,
            n: state.n(),
            m: state.m(),
            constant_qubits: ConstantQubitReport::default(),
            structures: Vec::new(),
            witness: None,
            reason: None,
            reduced_positions: Vec::new(),
            reduced: None,
        }
    }

    /// The kind reached after stripping constant qubits, following nested
    /// verdicts to the innermost one.
    pub fn refined_kind(&self) -> VerdictKind {
        match &self.reduced {
            Some(inner) => inner.refined_kind(),
            None => self.kind,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub oracle_cap: usize,
    pub force_oracle: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            oracle_cap: DEFAULT_ORACLE_CAP,
            force_oracle: false,
        }
    }
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Term counts decided by the pair-structure path alone.
pub fn is_structural_m(m: usize) -> bool {
    m.is_multiple_of(2) && is_prime(m / 2)
}

pub fn classify(state: &SparseState, opts: &ClassifyOptions) -> Verdict {
    let method = if opts.force_oracle {
        Method::Oracle
    } else {
        Method::Structural
    };
    if state.m() == 1 {
        let mut v = Verdict::bare(state, VerdictKind::TriviallySeparable, method);
        v.constant_qubits = state.constant_qubits();
        return v;
    }
    let (reduced, report) = state
        .strip_constant_qubits()
        .expect("two or more distinct terms leave a varying qubit");
    if !report.is_empty() {
        return trivially_separable(state, reduced, report, opts, method);
    }
    if state.n() == 1 {
        // |0⟩ and |1⟩ both present: a single-qubit state has no cut.
        return Verdict::bare(state, VerdictKind::TriviallySeparable, method);
    }
    if !opts.force_oracle && is_structural_m(state.m()) {
        return structural(state);
    }
    oracle_path(state, opts.oracle_cap)
}

fn trivially_separable(
    state: &SparseState,
    reduced: SparseState,
    report: ConstantQubitReport,
    opts: &ClassifyOptions,
    method: Method,
) -> Verdict {
    let kept = state.varying_positions(&report);
    let constant_bits = report.iter().fold(0u64, |acc, c| acc << 1 | u64::from(c.bit));
    let constant_factor = SparseState::from_bits(report.len(), vec![(constant_bits, ExactScalar::one())])
        .expect("constant pattern fits its width");
    let witness = FactorPair {
        n: state.n(),
        p_positions: report.positions(),
        p_factor: constant_factor,
        q_positions: kept.clone(),
        q_factor: reduced.clone(),
    };
    debug_assert_eq!(witness.expand().as_ref(), Ok(state));
    let inner = classify(&reduced, opts);
    let mut v = Verdict::bare(state, VerdictKind::TriviallySeparable, method);
    v.constant_qubits = report;
    v.witness = Some(witness);
    v.reason = inner.reason;
    v.reduced_positions = kept;
    v.reduced = Some(Box::new(inner));
    v
}

fn structural(state: &SparseState) -> Verdict {
    let mut v = Verdict::bare(state, VerdictKind::GenuinelyEntangled, Method::Structural);
    let found = xor_matchings(&state.basis_strings()).expect("validated states have distinct, equal-width strings");
    let mut any_proper = false;
    let mut any_improper = false;
    let mut rank1_without_witness = false;
    for s in found {
        if !s.proper {
            any_improper = true;
            v.structures.push(StructureFinding {
                structure: s,
                matrix: None,
                rank1: None,
            });
            continue;
        }
        any_proper = true;
        let matrix = build_coefficient_matrix(state, &s).expect("structure came from this state");
        let rank1 = rank1_rows(&matrix);
        if rank1 && v.witness.is_none() {
            match extract_factors(state, &s, &matrix) {
                Ok(w) => v.witness = Some(w),
                Err(_) => rank1_without_witness = true,
            }
        }
        v.structures.push(StructureFinding {
            structure: s,
            matrix: Some(matrix),
            rank1: Some(rank1),
        });
    }
    if v.witness.is_some() {
        v.kind = VerdictKind::Separable;
    } else if rank1_without_witness {
        v.kind = VerdictKind::Unknown;
        v.reason = Some(Reason::WitnessUnavailable);
    } else if any_proper {
        v.reason = Some(Reason::NoRank1Structure);
    } else if any_improper && state.m() == 6 {
        v.reason = Some(Reason::Corollary3);
    } else {
        v.reason = Some(Reason::NoPairStructure);
    }
    v
}

fn oracle_path(state: &SparseState, cap: usize) -> Verdict {
    let mut v = Verdict::bare(state, VerdictKind::Unknown, Method::Oracle);
    match search_cuts(state, cap) {
        Err(_) => v.reason = Some(Reason::OracleCapExceeded),
        Ok(CutSearch::Product { witness, .. }) => {
            v.kind = VerdictKind::Separable;
            v.witness = Some(witness);
        }
        Ok(CutSearch::ProductWithoutWitness { .. }) => v.reason = Some(Reason::WitnessUnavailable),
        Ok(CutSearch::NoProductCut) => {
            v.kind = VerdictKind::GenuinelyEntangled;
            v.reason = Some(Reason::OracleExhaustive);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ketparse::parse_state;

    fn run(text: &str) -> Verdict {
        classify(&parse_state(text).unwrap(), &ClassifyOptions::default())
    }

    #[test]
    fn primes() {
        let small: Vec<usize> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let structural: Vec<usize> = (1..=30).filter(|&m| is_structural_m(m)).collect();
        assert_eq!(structural, [4, 6, 10, 14, 22, 26]);
    }

    #[test]
    fn psi6_has_no_pair_structure() {
        let v = run("sqrt(3)|11111>+|10000>+|01000>+|00100>+|00010>+|00001>");
        assert_eq!(v.kind, VerdictKind::GenuinelyEntangled);
        assert_eq!(v.reason, Some(Reason::NoPairStructure));
        assert_eq!(v.method, Method::Structural);
        assert!(v.structures.is_empty());
    }

    #[test]
    fn theta_has_no_rank1_structure() {
        let v = run("|0000>+|0010>+|0101>+|0111>+|1010>-|1111>");
        assert_eq!(v.kind, VerdictKind::GenuinelyEntangled);
        assert_eq!(v.reason, Some(Reason::NoRank1Structure));
        assert_eq!(v.structures.len(), 1);
        assert_eq!(v.structures[0].rank1, Some(false));
    }

    #[test]
    fn eta_is_separable_on_13() {
        let eta = parse_state("|0000>+|0001>+|0101>+|1010>+|1011>+|1111>").unwrap();
        let v = classify(&eta, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::Separable);
        let w = v.witness.unwrap();
        assert_eq!(w.p_positions, vec![1, 3]);
        assert_eq!(w.q_positions, vec![2, 4]);
        assert_eq!(w.expand().unwrap(), eta);
    }

    #[test]
    fn constant_qubit_is_trivial_and_refined() {
        let state = parse_state("|000>+|011>").unwrap();
        let v = classify(&state, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::TriviallySeparable);
        assert_eq!(v.constant_qubits.positions(), vec![1]);
        assert_eq!(v.reduced_positions, vec![2, 3]);
        assert_eq!(v.witness.as_ref().unwrap().expand().unwrap(), state);
        let inner = v.reduced.unwrap();
        assert_eq!(inner.kind, VerdictKind::GenuinelyEntangled);
        assert_eq!(inner.method, Method::Oracle);
        assert_eq!(v.reason, Some(Reason::OracleExhaustive));
    }

    #[test]
    fn single_terms_and_single_qubits() {
        let v = run("|0110>");
        assert_eq!(v.kind, VerdictKind::TriviallySeparable);
        assert_eq!(v.constant_qubits.len(), 4);
        let v = run("|0>-i|1>");
        assert_eq!(v.kind, VerdictKind::TriviallySeparable);
        assert!(v.constant_qubits.is_empty());
    }

    #[test]
    fn g_abcd_complete_pairs() {
        let g = parse_state("|0000>+|1111>+|0011>+|1100>+|0101>+|1010>").unwrap();
        assert!(corollary3_check(&g).unwrap());
        let v = classify(&g, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::GenuinelyEntangled);
        assert_eq!(v.reason, Some(Reason::Corollary3));
        assert_eq!(
            classify(
                &g,
                &ClassifyOptions {
                    force_oracle: true,
                    ..Default::default()
                }
            )
            .kind,
            v.kind
        );
    }

    #[test]
    fn uniform_three_qubits_goes_to_oracle() {
        let s = parse_state("|000>+|001>+|010>+|011>+|100>+|101>+|110>+|111>").unwrap();
        let v = classify(&s, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::Separable);
        assert_eq!(v.method, Method::Oracle);
        assert_eq!(v.witness.unwrap().expand().unwrap(), s);
    }

    #[test]
    fn cap_exceeded_is_unknown() {
        // 8 terms on 25 qubits, no constant qubit.
        let mut terms = Vec::new();
        for j in 0..8u64 {
            let bits = (0..25).fold(0u64, |acc, b| acc | (((j >> (b % 3)) & 1) << b));
            terms.push((bits, ExactScalar::one()));
        }
        let s = SparseState::from_bits(25, terms).unwrap();
        assert!(s.constant_qubits().is_empty());
        let v = classify(&s, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::Unknown);
        assert_eq!(v.reason, Some(Reason::OracleCapExceeded));
    }

    #[test]
    fn ten_term_product_is_structural_separable() {
        let p = parse_state("|0>+2|1>").unwrap();
        let q = parse_state("|000>+|001>+|011>+sqrt(2)|101>-i|110>").unwrap();
        let s = crate::state::tensor_on_positions(4, &[(&p, &[2]), (&q, &[1, 3, 4])]).unwrap();
        let v = classify(&s, &ClassifyOptions::default());
        assert_eq!(v.kind, VerdictKind::Separable);
        assert_eq!(v.method, Method::Structural);
        assert_eq!(v.witness.unwrap().expand().unwrap(), s);
        assert_eq!(
            classify(
                &s,
                &ClassifyOptions {
                    force_oracle: true,
                    ..Default::default()
                }
            )
            .kind,
            v.kind
        );
    }
}
