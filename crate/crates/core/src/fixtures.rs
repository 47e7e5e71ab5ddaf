//! Named reference states with their known classifications.

use crate::arith::ExactScalar;
use crate::criterion::{Reason, VerdictKind};
use crate::ketparse::parse_state;
use crate::state::{tensor_on_positions, SparseState};
use crate::structure::CanonicalForm;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub state: SparseState,
    pub expect: Expectation,
}

/// What a fixture must classify as. `None` fields are not checked.
#[derive(Clone, Debug, Default)]
pub struct Expectation {
    pub kind: Option<VerdictKind>,
    pub reason: Option<Reason>,
    /// Only the exhaustive search is run.
    pub oracle_only: bool,
    /// Witness cut as `(P, Q)` positions.
    pub cut: Option<(Vec<usize>, Vec<usize>)>,
    /// Must appear in the proportional canonical forms.
    pub form: Option<CanonicalForm>,
    /// Expected rows of the first structure's coefficient matrix, rendered.
    pub matrix: Option<[Vec<String>; 2]>,
    pub corollary3: Option<bool>,
}

fn state(text: &str) -> SparseState {
    parse_state(text).expect("fixture text is valid")
}

fn product(n: usize, p: &str, p_positions: &[usize], q: &str, q_positions: &[usize]) -> SparseState {
    tensor_on_positions(n, &[(&state(p), p_positions), (&state(q), q_positions)]).expect("fixture positions partition")
}

const TWO_TERM: &str = "sqrt(3)/2|000> + 1/2|111>";
const FLAT_A: &str = "sqrt(3)/3|000> + sqrt(3)/3|100> + sqrt(3)/3|111>";
const FLAT_B: &str = "sqrt(3)/3|000> + sqrt(3)/3|110> + sqrt(3)/3|111>";
const FLAT_C: &str = "sqrt(3)/3|000> + sqrt(3)/3|010> + sqrt(3)/3|111>";

pub fn eta() -> SparseState {
    state("|0000>+|0001>+|0101>+|1010>+|1011>+|1111>")
}

pub fn pi1() -> SparseState {
    product(6, TWO_TERM, &[3, 4, 6], FLAT_A, &[1, 2, 5])
}

pub fn pi2() -> SparseState {
    product(6, TWO_TERM, &[1, 2, 3], FLAT_B, &[4, 5, 6])
}

pub fn pi3() -> SparseState {
    product(6, TWO_TERM, &[2, 3, 4], FLAT_B, &[1, 5, 6])
}

pub fn gamma1() -> SparseState {
    product(6, TWO_TERM, &[2, 3, 4], FLAT_C, &[1, 5, 6])
}

pub fn gamma2() -> SparseState {
    product(6, TWO_TERM, &[4, 5, 6], FLAT_C, &[1, 2, 3])
}

pub fn gamma3() -> SparseState {
    product(6, TWO_TERM, &[1, 2, 3], FLAT_C, &[4, 5, 6])
}

pub fn psi6() -> SparseState {
    let c = "sqrt(2)/4";
    state(&format!(
        "sqrt(6)/4|11111> + {c}|10000> + {c}|01000> + {c}|00100> + {c}|00010> + {c}|00001>"
    ))
}

pub fn xi6() -> SparseState {
    let c = "sqrt(2)/4";
    state(&format!(
        "sqrt(6)/4|111111> + {c}|110000> + {c}|001000> + {c}|000100> + {c}|000010> + {c}|000001>"
    ))
}

pub fn theta() -> SparseState {
    let c = "sqrt(6)/6";
    state(&format!(
        "{c}|0000> + {c}|0010> + {c}|0101> + {c}|0111> + {c}|1010> - {c}|1111>"
    ))
}

/// `α(|0000⟩+|1111⟩) + β(|0011⟩+|1100⟩) + γ(|0101⟩+|1010⟩) + δ(|0110⟩+|1001⟩)`
/// with the coefficient at `zero` (0 = α … 3 = δ) set to zero and the others
/// set to `1/√6`.
pub fn g_abcd(zero: usize) -> SparseState {
    let pairs = [(0b0000, 0b1111), (0b0011, 0b1100), (0b0101, 0b1010), (0b0110, 0b1001)];
    let c = ExactScalar::sqrt(6) * ExactScalar::ratio(1, 6);
    let terms = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != zero)
        .flat_map(|(_, &(a, b))| [(a, c.clone()), (b, c.clone())])
        .collect();
    SparseState::from_bits(4, terms).expect("distinct basis strings")
}

pub fn uniform3() -> SparseState {
    state("|000>+|001>+|010>+|011>+|100>+|101>+|110>+|111>")
}

fn rows(top: [&str; 3], bottom: [&str; 3]) -> [Vec<String>; 2] {
    [top.map(String::from).to_vec(), bottom.map(String::from).to_vec()]
}

fn separable_with_form(name: &'static str, state: SparseState, form: CanonicalForm) -> Fixture {
    Fixture {
        name,
        state,
        expect: Expectation {
            kind: Some(VerdictKind::Separable),
            form: Some(form),
            ..Default::default()
        },
    }
}

/// The full reference suite.
pub fn all() -> Vec<Fixture> {
    let entangled = |reason| Expectation {
        kind: Some(VerdictKind::GenuinelyEntangled),
        reason: Some(reason),
        ..Default::default()
    };
    let mut out = vec![
        Fixture {
            name: "eta",
            state: eta(),
            expect: Expectation {
                kind: Some(VerdictKind::Separable),
                cut: Some((vec![1, 3], vec![2, 4])),
                form: Some(CanonicalForm::Mt3),
                matrix: Some(rows(["1", "1", "1"], ["1", "1", "1"])),
                corollary3: Some(false),
                ..Default::default()
            },
        },
        separable_with_form("pi1", pi1(), CanonicalForm::Mt2),
        separable_with_form("pi2", pi2(), CanonicalForm::Mt3),
        separable_with_form("pi3", pi3(), CanonicalForm::Mt5),
        separable_with_form("gamma1", gamma1(), CanonicalForm::Mt1),
        separable_with_form("gamma2", gamma2(), CanonicalForm::Mt2),
        separable_with_form("gamma3", gamma3(), CanonicalForm::Mt3),
        Fixture {
            name: "psi6",
            state: psi6(),
            expect: entangled(Reason::NoPairStructure),
        },
        Fixture {
            name: "xi6",
            state: xi6(),
            expect: entangled(Reason::NoPairStructure),
        },
        Fixture {
            name: "theta",
            state: theta(),
            expect: Expectation {
                matrix: Some(rows(
                    ["sqrt(6)/6", "sqrt(6)/6", "sqrt(6)/6"],
                    ["sqrt(6)/6", "sqrt(6)/6", "-sqrt(6)/6"],
                )),
                corollary3: Some(false),
                ..entangled(Reason::NoRank1Structure)
            },
        },
    ];
    for (zero, name) in ["g_abcd_alpha0", "g_abcd_beta0", "g_abcd_gamma0", "g_abcd_delta0"]
        .into_iter()
        .enumerate()
    {
        out.push(Fixture {
            name,
            state: g_abcd(zero),
            expect: Expectation {
                kind: Some(VerdictKind::GenuinelyEntangled),
                corollary3: Some(true),
                ..Default::default()
            },
        });
    }
    out.push(Fixture {
        name: "uniform3",
        state: uniform3(),
        expect: Expectation {
            kind: Some(VerdictKind::Separable),
            oracle_only: true,
            ..Default::default()
        },
    });
    out
}
