//! JSON documents and plain-text renderings of verdicts and explanations.

use std::fmt::Write as _;

use serde::Serialize;

use crate::criterion::{classify, ClassifyOptions, Method, Reason, StructureFinding, Verdict, VerdictKind};
use crate::ketparse::render_state;
use crate::state::{ConstantQubitReport, SparseState};
use crate::structure::{
    build_coefficient_matrix, structure_index_pattern, xor_matchings, CanonicalForm, CoeffMatrix, FactorPair,
    PairStructure,
};

type Rows = [Vec<String>; 2];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessDoc {
    pub p_positions: Vec<usize>,
    pub p_factor: String,
    pub q_positions: Vec<usize>,
    pub q_factor: String,
}

impl From<&FactorPair> for WitnessDoc {
    fn from(w: &FactorPair) -> Self {
        WitnessDoc {
            p_positions: w.p_positions.clone(),
            p_factor: render_state(&w.p_factor),
            q_positions: w.q_positions.clone(),
            q_factor: render_state(&w.q_factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureDoc {
    pub d: String,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub proper: bool,
    pub pairs: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank1: Option<bool>,
}

impl StructureDoc {
    fn new(s: &PairStructure, matrix: Option<&CoeffMatrix>, rank1: Option<bool>) -> Self {
        StructureDoc {
            d: s.d.to_string(),
            p: s.p_positions.clone(),
            q: s.q_positions.clone(),
            proper: s.proper,
            pairs: s.pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            matrix: matrix.map(CoeffMatrix::display_rows),
            rank1,
        }
    }
}

impl From<&StructureFinding> for StructureDoc {
    fn from(f: &StructureFinding) -> Self {
        StructureDoc::new(&f.structure, f.matrix.as_ref(), f.rank1)
    }
}

/// The stable verdict schema shared by every front-end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictDoc {
    pub kind: VerdictKind,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub constant_qubits: ConstantQubitReport,
    pub structures: Vec<StructureDoc>,
    pub witness: Option<WitnessDoc>,
    pub reason: Option<Reason>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reduced_positions: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Box<VerdictDoc>>,
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        VerdictDoc {
            kind: v.kind,
            method: v.method,
            n: v.n,
            m: v.m,
            constant_qubits: v.constant_qubits.clone(),
            structures: v.structures.iter().map(StructureDoc::from).collect(),
            witness: v.witness.as_ref().map(WitnessDoc::from),
            reason: v.reason,
            reduced_positions: v.reduced_positions.clone(),
            reduced: v.reduced.as_deref().map(|r| Box::new(VerdictDoc::from(r))),
        }
    }
}

pub fn verdict_json(v: &Verdict) -> serde_json::Value {
    serde_json::to_value(VerdictDoc::from(v)).expect("verdict documents serialize")
}

fn positions(p: &[usize]) -> String {
    let inner: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn constant_text(report: &ConstantQubitReport) -> String {
    if report.is_empty() {
        return "none".to_string();
    }
    let parts: Vec<String> = report.iter().map(|c| format!("q{}={}", c.position, c.bit)).collect();
    parts.join(" ")
}

fn rows_text(rows: &Rows) -> String {
    format!("[{} / {}]", rows[0].join(" "), rows[1].join(" "))
}

fn reason_text(reason: Reason) -> &'static str {
    match reason {
        Reason::NoPairStructure => "no partially complementary pair structure",
        Reason::NoRank1Structure => "no pair structure has a coefficient matrix with proportional rows",
        Reason::Corollary3 => "three complete complementary pairs",
        Reason::OracleExhaustive => "no bipartition has a rank-1 amplitude grid",
        Reason::OracleCapExceeded => "qubit count above the oracle cap",
        Reason::WitnessUnavailable => "product cut found but factors are not exactly computable",
    }
}

fn write_verdict(out: &mut String, doc: &VerdictDoc, indent: &str) {
    let method = match doc.method {
        Method::Structural => "structural",
        Method::Oracle => "oracle",
    };
    let _ = writeln!(out, "{indent}verdict: {} ({method})", doc.kind.as_str());
    let _ = writeln!(out, "{indent}qubits: {}  terms: {}", doc.n, doc.m);
    let _ = writeln!(out, "{indent}constant qubits: {}", constant_text(&doc.constant_qubits));
    for s in &doc.structures {
        let kind = if s.proper { "proper" } else { "complete" };
        let _ = writeln!(
            out,
            "{indent}structure d={} P={} Q={} {kind}",
            s.d,
            positions(&s.p),
            positions(&s.q)
        );
        let pairs: Vec<String> = s.pairs.iter().map(|[a, b]| format!("({a},{b})")).collect();
        let _ = writeln!(out, "{indent}  pairs: {}", pairs.join(" "));
        if let Some(m) = &s.matrix {
            let tag = if s.rank1 == Some(true) {
                "proportional"
            } else {
                "not proportional"
            };
            let _ = writeln!(out, "{indent}  matrix: {} {tag}", rows_text(m));
        }
    }
    if let Some(w) = &doc.witness {
        let _ = writeln!(
            out,
            "{indent}witness: ({}){} x ({}){}",
            w.p_factor,
            positions(&w.p_positions),
            w.q_factor,
            positions(&w.q_positions)
        );
    }
    if let (Some(r), None) = (doc.reason, &doc.reduced) {
        let _ = writeln!(out, "{indent}reason: {}", reason_text(r));
    }
    if let Some(inner) = &doc.reduced {
        let _ = writeln!(out, "{indent}reduced state on {}:", positions(&doc.reduced_positions));
        write_verdict(out, inner, &format!("{indent}  "));
    }
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    write_verdict(&mut out, &VerdictDoc::from(v), "");
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorDoc {
    pub columns: [usize; 2],
    pub value: String,
}

fn minors_of(m: &CoeffMatrix) -> Vec<MinorDoc> {
    m.minors()
        .into_iter()
        .map(|((i, j), v)| MinorDoc {
            columns: [i, j],
            value: v.to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplainedStructure {
    #[serde(flatten)]
    pub structure: StructureDoc,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub minors: Vec<MinorDoc>,
    /// Canonical placement matching this structure, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<CanonicalForm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormDoc {
    pub form: CanonicalForm,
    pub matrix: Rows,
    pub minors: Vec<MinorDoc>,
    pub proportional: bool,
}

/// Everything the classifier looked at, for one state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Explanation {
    pub n: usize,
    pub m: usize,
    pub norm_sq: String,
    pub constant_qubits: ConstantQubitReport,
    /// Positions of the state the structures below refer to (all positions
    /// unless constant qubits were stripped).
    pub analysed_positions: Vec<usize>,
    pub structures: Vec<ExplainedStructure>,
    /// Present for four- and six-term states.
    pub canonical_forms: Option<Vec<FormDoc>>,
    pub verdict: VerdictDoc,
}

pub fn explain(state: &SparseState, opts: &ClassifyOptions) -> Explanation {
    let verdict = classify(state, opts);
    let (analysed, report) = match state.strip_constant_qubits() {
        Ok(pair) => pair,
        Err(_) => (state.clone(), state.constant_qubits()),
    };
    let analysed_positions = if state.m() == 1 {
        Vec::new()
    } else {
        state.varying_positions(&report)
    };
    let mut structures = Vec::new();
    if analysed.m() >= 4 && analysed.m() % 2 == 0 && state.m() > 1 {
        for s in xor_matchings(&analysed.basis_strings()).unwrap_or_default() {
            if !s.proper {
                structures.push(ExplainedStructure {
                    structure: StructureDoc::new(&s, None, None),
                    minors: Vec::new(),
                    form: None,
                });
                continue;
            }
            let matrix = build_coefficient_matrix(&analysed, &s).expect("structure came from this state");
            let rank1 = matrix.minors().iter().all(|(_, v)| v.is_zero());
            let form = structure_index_pattern(&analysed, &s)
                .ok()
                .and_then(|p| CanonicalForm::from_pattern(&p));
            structures.push(ExplainedStructure {
                structure: StructureDoc::new(&s, Some(&matrix), Some(rank1)),
                minors: minors_of(&matrix),
                form,
            });
        }
    }
    let forms: &[CanonicalForm] = match analysed.m() {
        6 => &CanonicalForm::SIX_TERM,
        4 => &CanonicalForm::FOUR_TERM,
        _ => &[],
    };
    let canonical_forms = (!forms.is_empty() && state.m() > 1).then(|| {
        forms
            .iter()
            .map(|f| {
                let m = f.matrix(&analysed).expect("term count checked");
                let minors = minors_of(&m);
                let proportional = m.minors().iter().all(|(_, v)| v.is_zero());
                FormDoc {
                    form: *f,
                    matrix: m.display_rows(),
                    minors,
                    proportional,
                }
            })
            .collect()
    });
    Explanation {
        n: state.n(),
        m: state.m(),
        norm_sq: state.norm_sq().to_string(),
        constant_qubits: state.constant_qubits(),
        analysed_positions,
        structures,
        canonical_forms,
        verdict: VerdictDoc::from(&verdict),
    }
}

pub fn explanation_json(e: &Explanation) -> serde_json::Value {
    serde_json::to_value(e).expect("explanations serialize")
}

pub fn explanation_text(e: &Explanation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits: {}  terms: {}  norm^2: {}", e.n, e.m, e.norm_sq);
    let _ = writeln!(out, "constant qubits: {}", constant_text(&e.constant_qubits));
    if !e.constant_qubits.is_empty() && !e.analysed_positions.is_empty() {
        let _ = writeln!(out, "analysing positions {}", positions(&e.analysed_positions));
    }
    let _ = writeln!(out, "pair structures: {}", e.structures.len());
    for s in &e.structures {
        let st = &s.structure;
        let kind = if st.proper { "proper" } else { "complete" };
        let _ = writeln!(out, "  d={} P={} Q={} {kind}", st.d, positions(&st.p), positions(&st.q));
        let pairs: Vec<String> = st.pairs.iter().map(|[a, b]| format!("({a},{b})")).collect();
        let _ = writeln!(out, "    pairs: {}", pairs.join(" "));
        if let Some(m) = &st.matrix {
            let _ = writeln!(out, "    matrix: {}", rows_text(m));
        }
        for minor in &s.minors {
            let _ = writeln!(
                out,
                "    minor ({},{}): {}",
                minor.columns[0], minor.columns[1], minor.value
            );
        }
        if let Some(f) = s.form {
            let _ = writeln!(out, "    placement: {}", f.label());
        }
    }
    if let Some(forms) = &e.canonical_forms {
        let _ = writeln!(out, "canonical forms:");
        for f in forms {
            let tag = if f.proportional {
                "proportional"
            } else {
                "not proportional"
            };
            let _ = writeln!(out, "  {}: {} {tag}", f.form.label(), rows_text(&f.matrix));
        }
    }
    write_verdict(&mut out, &e.verdict, "");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn verdict_json_fields() {
        let v = classify(&fixtures::eta(), &ClassifyOptions::default());
        let json = verdict_json(&v);
        for key in [
            "kind",
            "method",
            "m",
            "constant_qubits",
            "structures",
            "witness",
            "reason",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["kind"], "Separable");
        assert_eq!(json["method"], "Structural");
        assert_eq!(json["witness"]["p_positions"], serde_json::json!([1, 3]));
        assert_eq!(json["witness"]["p_factor"], "|00>+|11>");
        assert_eq!(json["witness"]["q_factor"], "|00>+|01>+|11>");
        assert_eq!(json["structures"][0]["d"], "1010");
        assert_eq!(
            json["structures"][0]["matrix"],
            serde_json::json!([["1", "1", "1"], ["1", "1", "1"]])
        );
    }

    #[test]
    fn theta_explanation_lists_structure_and_minor() {
        let e = explain(&fixtures::theta(), &ClassifyOptions::default());
        assert_eq!(e.structures.len(), 1);
        assert_eq!(e.structures[0].structure.p, vec![2, 4]);
        let values: Vec<&str> = e.structures[0].minors.iter().map(|m| m.value.as_str()).collect();
        assert_eq!(values, ["0", "-1/3", "-1/3"]);
        assert_eq!(e.verdict.reason, Some(Reason::NoRank1Structure));
        let text = explanation_text(&e);
        assert!(text.contains("P={2,4}"), "{text}");
        assert!(text.contains("minor (0,2): -1/3"), "{text}");
    }

    #[test]
    fn psi6_explanation_has_forms_but_no_structures() {
        let e = explain(&fixtures::psi6(), &ClassifyOptions::default());
        assert!(e.structures.is_empty());
        let forms = e.canonical_forms.as_ref().unwrap();
        assert_eq!(forms.len(), 4);
        assert!(forms.iter().all(|f| !f.proportional));
        assert_eq!(e.norm_sq, "1");
    }

    #[test]
    fn eta_text_shows_witness() {
        let text = verdict_text(&classify(&fixtures::eta(), &ClassifyOptions::default()));
        assert!(
            text.contains("witness: (|00>+|11>){1,3} x (|00>+|01>+|11>){2,4}"),
            "{text}"
        );
    }

    #[test]
    fn trivially_separable_nests_reduced_verdict() {
        let s = crate::ketparse::parse_state("|000>+|011>").unwrap();
        let json = verdict_json(&classify(&s, &ClassifyOptions::default()));
        assert_eq!(json["kind"], "TriviallySeparable");
        assert_eq!(json["constant_qubits"], serde_json::json!([{"position": 1, "bit": 0}]));
        assert_eq!(json["reduced_positions"], serde_json::json!([2, 3]));
        assert_eq!(json["reduced"]["kind"], "GenuinelyEntangled");
    }
}
