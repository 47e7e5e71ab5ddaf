//! Runs the reference fixtures and checks every documented property.

use std::fmt::Write as _;

use serde::Serialize;

use crate::criterion::{classify, corollary3_check, ClassifyOptions, Verdict, VerdictKind};
use crate::fixtures::Fixture;
use crate::oracle::oracle_classify;
use crate::structure::{canonical_form_index, structure_index_pattern, CanonicalForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub kind: VerdictKind,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub results: Vec<FixtureResult>,
}

impl SelftestReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(4).max(7);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>2}  {:>2}  {:<20}  result",
            "fixture", "n", "m", "kind"
        );
        for r in &self.results {
            let status = if r.passed {
                "ok".to_string()
            } else {
                format!("FAIL: {}", r.failures.join("; "))
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>2}  {:>2}  {:<20}  {status}",
                r.name,
                r.n,
                r.m,
                r.kind.as_str()
            );
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        let _ = writeln!(out, "{} fixtures, {failed} failed", self.results.len());
        out
    }
}

fn forms_of(f: &Fixture, v: &Verdict) -> Vec<CanonicalForm> {
    // Placements of the proportional structures, followed by every
    // proportional canonical form.
    let mut out = Vec::new();
    for finding in &v.structures {
        if finding.rank1 == Some(true) {
            if let Some(form) = structure_index_pattern(&f.state, &finding.structure)
                .ok()
                .and_then(|p| CanonicalForm::from_pattern(&p))
            {
                out.push(form);
            }
        }
    }
    out
}

pub fn check_fixture(f: &Fixture, opts: &ClassifyOptions) -> FixtureResult {
    let e = &f.expect;
    let mut failures = Vec::new();
    let oracle = oracle_classify(&f.state, opts.oracle_cap);
    let verdict = if e.oracle_only {
        oracle.clone()
    } else {
        classify(&f.state, opts)
    };

    if let Some(kind) = e.kind {
        if verdict.kind != kind {
            failures.push(format!("kind {} != {}", verdict.kind.as_str(), kind.as_str()));
        }
    }
    if oracle.kind != VerdictKind::Unknown && oracle.kind != verdict.kind {
        failures.push(format!("oracle says {}", oracle.kind.as_str()));
    }
    if e.reason.is_some() && verdict.reason != e.reason {
        failures.push(format!("reason {:?} != {:?}", verdict.reason, e.reason));
    }
    if let Some(w) = &verdict.witness {
        if w.expand().as_ref() != Ok(&f.state) {
            failures.push("witness does not expand to the state".to_string());
        }
    } else if verdict.kind == VerdictKind::Separable {
        failures.push("separable without witness".to_string());
    }
    if let Some((p, q)) = &e.cut {
        match &verdict.witness {
            Some(w) if &w.p_positions == p && &w.q_positions == q => {}
            _ => failures.push(format!("witness cut is not {p:?}|{q:?}")),
        }
    }
    if let Some(form) = e.form {
        let proportional = canonical_form_index(&f.state).unwrap_or_default();
        if !proportional.contains(&form) {
            failures.push(format!("{} not proportional", form.label()));
        }
        if !forms_of(f, &verdict).contains(&form) {
            failures.push(format!("no proportional structure sits at {}", form.label()));
        }
    }
    if let Some(rows) = &e.matrix {
        match verdict.structures.iter().find_map(|s| s.matrix.as_ref()) {
            Some(m) if &m.display_rows() == rows => {}
            Some(m) => failures.push(format!("matrix {:?}", m.display_rows())),
            None => failures.push("no coefficient matrix".to_string()),
        }
    }
    if let Some(expected) = e.corollary3 {
        match corollary3_check(&f.state) {
            Ok(found) if found == expected => {}
            other => failures.push(format!("corollary 3 check gave {other:?}")),
        }
    }
    FixtureResult {
        name: f.name.to_string(),
        n: f.state.n(),
        m: f.state.m(),
        kind: verdict.kind,
        passed: failures.is_empty(),
        failures,
    }
}

pub fn run(fixtures: &[Fixture], opts: &ClassifyOptions) -> SelftestReport {
    let results: Vec<FixtureResult> = fixtures.iter().map(|f| check_fixture(f, opts)).collect();
    SelftestReport {
        passed: results.iter().all(|r| r.passed),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ketparse::parse_state;

    #[test]
    fn reference_suite_passes() {
        let report = run(&fixtures::all(), &ClassifyOptions::default());
        assert!(report.passed, "{}", report.to_text());
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn corrupted_fixture_fails() {
        let mut suite = fixtures::all();
        let theta = suite.iter_mut().find(|f| f.name == "theta").unwrap();
        theta.state = parse_state("|0000>+|0010>+|0101>+|0111>+|1010>+|1111>").unwrap();
        let report = run(&suite, &ClassifyOptions::default());
        assert!(!report.passed);
        assert_eq!(report.exit_code(), 1);
        let bad: Vec<&str> = report
            .results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(bad, ["theta"]);
        assert!(report.to_text().contains("FAIL"));
    }
}
