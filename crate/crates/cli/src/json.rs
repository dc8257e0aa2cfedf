use serde_json::{json, Value};
use smb_core::smb::Violation;
use smb_core::{Partition, Verdict};

/// Classes as arrays, ordered by least element.
pub fn classes(p: &Partition) -> Value {
    json!(p.classes())
}

pub fn verdict(holds: bool) -> Value {
    json!(if holds { "holds" } else { "fails" })
}

pub fn violation(rule: &str, witness: &[usize]) -> Value {
    json!({ "rule": rule, "witness": witness })
}

pub fn violations(vs: &[Violation]) -> Value {
    Value::Array(vs.iter().map(|v| violation(v.rule, &v.witness)).collect())
}

/// Failing named verdicts as violations.
pub fn verdict_violations<'a>(vs: impl IntoIterator<Item = &'a (&'a str, Verdict)>) -> Value {
    Value::Array(
        vs.into_iter()
            .filter_map(|(rule, v)| v.counterexample().map(|w| violation(rule, w)))
            .collect(),
    )
}

/// `(0,2)` style tuple text.
pub fn tuple_text(t: &[usize]) -> String {
    let cells: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", cells.join(","))
}
