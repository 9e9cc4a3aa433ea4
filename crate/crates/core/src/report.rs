//! Deterministic JSON report assembly.
//!
//! Every report carries the tool name/version, a SHA-256 digest of the exact
//! input bytes, the command and effective options, the per-operation results,
//! and a consistency-flag summary. Field order is fixed by insertion order
//! (serde_json is built with `preserve_order`), so identical inputs produce
//! byte-identical reports.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{rat_to_string, Mat, MatQ, Rat, RatFunc};

pub const TOOL_NAME: &str = "isodef";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn input_digest(input: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(input);
    let out = h.finalize();
    out.iter().map(|b| format!("{:02x}", b)).collect()
}

/// JSON value for an exact rational: always a string.
pub fn rat_value(x: &Rat) -> Value {
    Value::String(rat_to_string(x))
}

pub fn rat_vec_value(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_value).collect())
}

pub fn matq_value(m: &MatQ) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| Value::Array((0..m.cols).map(|j| rat_value(m.at(i, j))).collect()))
            .collect(),
    )
}

pub fn matrf_value(m: &Mat<RatFunc>) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| {
                Value::Array(
                    (0..m.cols)
                        .map(|j| Value::String(m.at(i, j).to_text()))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Assemble the full report object and render it as canonical pretty JSON
/// terminated by a newline.
pub fn render_report(
    command: &str,
    input: &[u8],
    options: Value,
    results: Value,
    flags: &[String],
) -> String {
    let mut root = Map::new();
    root.insert(
        "tool".into(),
        json!({ "name": TOOL_NAME, "version": TOOL_VERSION }),
    );
    root.insert("command".into(), Value::String(command.into()));
    root.insert("input_digest".into(), Value::String(input_digest(input)));
    root.insert("options".into(), options);
    root.insert("results".into(), results);
    root.insert(
        "consistency".into(),
        json!({
            "flags": flags,
            "ok": flags.is_empty(),
        }),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(root))
        .expect("report serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn digest_is_stable_sha256() {
        // echo -n "abc" | sha256sum
        assert_eq!(
            input_digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn reports_are_byte_identical_for_identical_inputs() {
        let mk = || {
            render_report(
                "cohomology",
                b"{}",
                json!({"truncation": null}),
                json!({"h1": 2, "value": rat_value(&rat(1, 3))}),
                &[],
            )
        };
        assert_eq!(mk(), mk());
        assert!(mk().contains("\"1/3\""));
    }

    #[test]
    fn flags_drive_the_ok_bit() {
        let with = render_report("x", b"", json!({}), json!({}), &["bad".into()]);
        assert!(with.contains("\"ok\": false"));
        let without = render_report("x", b"", json!({}), json!({}), &[]);
        assert!(without.contains("\"ok\": true"));
    }
}
