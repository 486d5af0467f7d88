//! Hand-checked expectations for worked examples.

use super::runner::{run_text, RunOptions, Status};

pub struct GoldenEntry {
    pub anchor: &'static str,
    pub script: &'static str,
    pub summary: &'static str,
    pub status: Status,
}

const fn ok(anchor: &'static str, script: &'static str, summary: &'static str) -> GoldenEntry {
    GoldenEntry { anchor, script, summary, status: Status::Ok }
}

pub const CORPUS: &[GoldenEntry] = &[
    ok("two-rational-layers/group", "drk_group(lex(Q, Q))", "{{0}}"),
    ok("two-rational-layers/value-set", "drk_order(lex(Q, Q))", "{∅, {2}}"),
    ok("two-rational-layers/field", "drk_field(ps(rcf, lex(Q, Q)))", "∅"),
    ok("rational-residue/field", "drk_field(ps(Q, lex(Z)))", "{O_vnat}"),
    ok("real-closed/field", "drk_field(ps(rcf, lex(Q)))", "∅"),
    ok("dense-then-integers/condense", "condense(dense + zeta)", "dense + 1[zeta]"),
    ok(
        "replicated-halves/condense",
        "condense(repl(dense; omega*) + repl(dense; omega))",
        "dense[omega*] + dense[omega]",
    ),
    ok("dense-then-integers/classify", "classify_final_segment(dense + zeta, upper(2))", "definable by HasPredecessor [schema]"),
    ok(
        "replicated-halves/classify",
        "classify_final_segment(repl(dense; omega*) + repl(dense; omega), upper(2))",
        "definable by AllLaterHaveSuccessor [schema]",
    ),
    ok("dense-then-integers/extension", "schema_extension(dense + zeta, HasPredecessor)", "upper(2)"),
    ok("integer-layers/spine", "decide_definable(lex(Z, Z), upper(2))", "definable (rigid-quotient-with-max, n = 2)"),
    ok("rational-layers/obstruction", "decide_definable(lex(Q, Q), upper(2))", "not definable (divisible-quotients-divisible-layer)"),
    ok("rank-two/local", "drk_group(lex(Z, Z_(2)))", "{{0}, upper(2)}"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub anchor: String,
    pub expected: String,
    pub actual: String,
}

/// Runs every entry; returns the ones that disagree.
pub fn verify() -> Vec<Mismatch> {
    let mut out = Vec::new();
    for e in CORPUS {
        let (summary, status) = match run_text(e.script, &RunOptions::default()) {
            Ok(rep) => match rep.records.last() {
                Some(r) => (r.summary.clone(), r.status),
                None => ("no record".into(), Status::Error),
            },
            Err(err) => (format!("parse error {err}"), Status::Error),
        };
        if summary != e.summary || status != e.status {
            out.push(Mismatch {
                anchor: e.anchor.into(),
                expected: format!("[{}] {}", e.status.as_str(), e.summary),
                actual: format!("[{}] {summary}", status.as_str()),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn corpus_passes() {
        let bad = super::verify();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
