//! Problem-file parsing: JSON descriptors with all rationals as strings.
//!
//! Four kinds are recognized. The `kind` field is optional; when absent the
//! kind is inferred from the payload shape:
//!   * `connection`: `{"rank": n, "points": [..], "matrix": [[..]]}`
//!   * `tuple`:      `{"matrices": [[[..]], ..]}`
//!   * `dgla`:       `{"dims": [..], "differentials": [..], "brackets": [..]}`
//!   * `deform`:     connection payload plus `{"ring": {"vars": [..], "order": k}}`
//!     and an optional `"mu"` list (one matrix of rational-function strings per
//!     maximal-ideal basis monomial).

use std::collections::BTreeMap;

use serde_json::Value;

use crate::algebra::{rat_from_string, rf_parse, Mat, MatQ, Pt, Rat, RatFunc};
use crate::artin::{ArtinLocalRing, RMatRF};
use crate::connection::ConnectionModule;
use crate::deform::DeformationJet;
use crate::dgla::FiniteDGLA;
use crate::errors::{Error, Result};
use crate::rigidity::LocalSystemTuple;

/// A parsed problem, ready for the command layer.
pub enum Problem {
    Connection(ConnectionModule),
    Tuple(LocalSystemTuple),
    Dgla(FiniteDGLA),
    Deform(DeformProblem),
}

/// A deformation problem: base connection, coefficient ring, and the starting
/// jet (trivial when no explicit perturbation was given).
pub struct DeformProblem {
    pub base: ConnectionModule,
    pub ring: ArtinLocalRing,
    pub jet: DeformationJet,
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Connection(_) => "connection",
            Problem::Tuple(_) => "tuple",
            Problem::Dgla(_) => "dgla",
            Problem::Deform(_) => "deform",
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn as_object(v: &Value) -> Result<&serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema("problem file must be a JSON object"))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(format!("{} must be a JSON array", what)))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| schema(format!("{} must be a string (rationals are strings)", what)))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("{} must be a nonnegative integer", what)))
}

fn parse_rat(v: &Value, what: &str) -> Result<Rat> {
    let s = as_str(v, what)?;
    rat_from_string(s).map_err(|msg| Error::Syntax { pos: 0, msg })
}

fn parse_rf(v: &Value, what: &str) -> Result<RatFunc> {
    rf_parse(as_str(v, what)?)
}

fn parse_point(v: &Value) -> Result<Pt> {
    let s = as_str(v, "point")?;
    if s == "inf" || s == "infinity" {
        Ok(Pt::Infinity)
    } else {
        Ok(Pt::Finite(
            rat_from_string(s).map_err(|msg| Error::Syntax { pos: 0, msg })?,
        ))
    }
}

/// Parse a rectangular matrix of rational strings.
fn parse_matq(v: &Value, what: &str) -> Result<MatQ> {
    let rows = as_array(v, what)?;
    if rows.is_empty() {
        return Ok(MatQ::zero(0, 0));
    }
    let mut data = Vec::new();
    let cols = as_array(&rows[0], what)?.len();
    for row in rows {
        let row = as_array(row, what)?;
        if row.len() != cols {
            return Err(schema(format!("{} has ragged rows", what)));
        }
        for entry in row {
            data.push(parse_rat(entry, what)?);
        }
    }
    Ok(MatQ::new(rows.len(), cols, data))
}

/// Parse a square matrix of rational-function strings.
fn parse_matrf(v: &Value, n: usize, what: &str) -> Result<Mat<RatFunc>> {
    let rows = as_array(v, what)?;
    if rows.len() != n {
        return Err(schema(format!("{} must have {} rows", what, n)));
    }
    let mut data = Vec::new();
    for row in rows {
        let row = as_array(row, what)?;
        if row.len() != n {
            return Err(schema(format!("{} must have {} columns", what, n)));
        }
        for entry in row {
            data.push(parse_rf(entry, what)?);
        }
    }
    Ok(Mat::new(n, n, data))
}

fn parse_connection(obj: &serde_json::Map<String, Value>) -> Result<ConnectionModule> {
    let rank = as_usize(
        obj.get("rank").ok_or_else(|| schema("missing field `rank`"))?,
        "rank",
    )?;
    let points = as_array(
        obj.get("points")
            .ok_or_else(|| schema("missing field `points`"))?,
        "points",
    )?
    .iter()
    .map(parse_point)
    .collect::<Result<Vec<_>>>()?;
    let matrix = parse_matrf(
        obj.get("matrix")
            .ok_or_else(|| schema("missing field `matrix`"))?,
        rank,
        "matrix",
    )?;
    ConnectionModule::new(rank, points, matrix)
}

fn parse_tuple(obj: &serde_json::Map<String, Value>) -> Result<LocalSystemTuple> {
    let mats = as_array(
        obj.get("matrices")
            .ok_or_else(|| schema("missing field `matrices`"))?,
        "matrices",
    )?
    .iter()
    .map(|m| parse_matq(m, "matrix entry"))
    .collect::<Result<Vec<_>>>()?;
    LocalSystemTuple::new(mats)
}

fn parse_ring(v: &Value) -> Result<ArtinLocalRing> {
    let obj = as_object(v)?;
    let vars = as_array(
        obj.get("vars").ok_or_else(|| schema("ring needs `vars`"))?,
        "vars",
    )?
    .iter()
    .map(|s| as_str(s, "variable name").map(str::to_owned))
    .collect::<Result<Vec<_>>>()?;
    let order = as_usize(
        obj.get("order")
            .ok_or_else(|| schema("ring needs `order`"))?,
        "order",
    )?;
    if vars.is_empty() || order < 1 {
        return Err(schema("ring needs at least one variable and order >= 1"));
    }
    Ok(ArtinLocalRing::truncated(vars, order as u32))
}

fn parse_deform(obj: &serde_json::Map<String, Value>) -> Result<DeformProblem> {
    let base = parse_connection(obj)?;
    let ring = parse_ring(
        obj.get("ring").ok_or_else(|| schema("missing field `ring`"))?,
    )?;
    let jet = match obj.get("mu") {
        None => DeformationJet::trivial(base.clone(), ring.clone()),
        Some(v) => {
            let mats = as_array(v, "mu")?;
            if mats.len() != ring.dim() - 1 {
                return Err(schema(format!(
                    "`mu` needs one matrix per maximal-ideal basis monomial ({} expected)",
                    ring.dim() - 1
                )));
            }
            let mut full = vec![Mat::<RatFunc>::zero(base.n, base.n)];
            for m in mats {
                full.push(parse_matrf(m, base.n, "mu entry")?);
            }
            DeformationJet::new(
                base.clone(),
                ring.clone(),
                RMatRF {
                    n: base.n,
                    mats: full,
                },
            )?
        }
    };
    Ok(DeformProblem { base, ring, jet })
}

fn parse_dgla(obj: &serde_json::Map<String, Value>) -> Result<FiniteDGLA> {
    let dims = as_array(
        obj.get("dims").ok_or_else(|| schema("missing field `dims`"))?,
        "dims",
    )?
    .iter()
    .map(|v| as_usize(v, "dimension"))
    .collect::<Result<Vec<_>>>()?;
    if dims.is_empty() {
        return Err(schema("`dims` must be nonempty"));
    }
    let diffs = as_array(
        obj.get("differentials")
            .ok_or_else(|| schema("missing field `differentials`"))?,
        "differentials",
    )?;
    if diffs.len() + 1 != dims.len() {
        return Err(schema("need one differential per adjacent degree pair"));
    }
    let mut d = Vec::new();
    for (i, m) in diffs.iter().enumerate() {
        let mat = parse_matq(m, "differential")?;
        if (mat.rows, mat.cols) != (dims[i + 1], dims[i]) {
            // allow an empty placeholder for zero maps into/out of dim 0
            if dims[i + 1] == 0 || dims[i] == 0 {
                d.push(MatQ::zero(dims[i + 1], dims[i]));
                continue;
            }
            return Err(schema(format!("differential {} has wrong shape", i)));
        }
        d.push(mat);
    }
    let mut bracket = BTreeMap::new();
    for entry in as_array(
        obj.get("brackets")
            .ok_or_else(|| schema("missing field `brackets`"))?,
        "brackets",
    )? {
        let entry = as_object(entry)?;
        let degs = as_array(
            entry
                .get("degrees")
                .ok_or_else(|| schema("bracket entry needs `degrees`"))?,
            "degrees",
        )?;
        if degs.len() != 2 {
            return Err(schema("`degrees` must be a pair"));
        }
        let i = as_usize(&degs[0], "degree")?;
        let j = as_usize(&degs[1], "degree")?;
        let tensor = parse_matq(
            entry
                .get("tensor")
                .ok_or_else(|| schema("bracket entry needs `tensor`"))?,
            "bracket tensor",
        )?;
        bracket.insert((i, j), tensor);
    }
    FiniteDGLA::new(dims, d, bracket)
}

/// Embedded problem-file schemas, shipped with the tool for reference and
/// verified parseable by the self-test (an unparseable schema means a
/// corrupted install).
pub fn builtin_schemas() -> [(&'static str, &'static str); 4] {
    [
        ("connection", include_str!("../schemas/connection.schema.json")),
        ("tuple", include_str!("../schemas/tuple.schema.json")),
        ("dgla", include_str!("../schemas/dgla.schema.json")),
        ("deform", include_str!("../schemas/deform.schema.json")),
    ]
}

/// Verify the embedded schemas are intact; a failure indicates a corrupted
/// install.
pub fn verify_install() -> Result<()> {
    for (name, text) in builtin_schemas() {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::ConfigError(format!("schema `{}` is corrupted: {}", name, e)))?;
        if v.get("title").and_then(Value::as_str).is_none() {
            return Err(Error::ConfigError(format!(
                "schema `{}` is missing its title",
                name
            )));
        }
    }
    Ok(())
}

/// Parse problem text. When `expect` is given, the file must be of that kind.
pub fn parse_problem(text: &str, expect: Option<&str>) -> Result<Problem> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        pos: e.column(),
        msg: e.to_string(),
    })?;
    let obj = as_object(&value)?;
    let declared = match obj.get("kind") {
        None => None,
        Some(v) => Some(as_str(v, "kind")?.to_owned()),
    };
    let inferred = if obj.contains_key("matrices") {
        "tuple"
    } else if obj.contains_key("dims") {
        "dgla"
    } else if obj.contains_key("ring") {
        "deform"
    } else if obj.contains_key("matrix") {
        "connection"
    } else {
        return Err(schema(
            "cannot determine problem kind (no matrix/matrices/dims/ring field)",
        ));
    };
    let kind = declared.as_deref().unwrap_or(inferred);
    if let Some(want) = expect {
        // a connection payload is acceptable wherever a deform problem is
        // expected only if it carries a ring; other mismatches are schema errors
        if kind != want {
            return Err(schema(format!(
                "expected a {} problem, found {}",
                want, kind
            )));
        }
    }
    match kind {
        "connection" => Ok(Problem::Connection(parse_connection(obj)?)),
        "tuple" => Ok(Problem::Tuple(parse_tuple(obj)?)),
        "dgla" => Ok(Problem::Dgla(parse_dgla(obj)?)),
        "deform" => Ok(Problem::Deform(parse_deform(obj)?)),
        other => Err(schema(format!("unknown problem kind `{}`", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    #[test]
    fn connection_round_trip() {
        let text = r#"{"rank": 2, "points": ["0", "1", "inf"],
            "matrix": [["0","1"],["(-1/4)/(t^2-t)","-(2*t-1)/(t^2-t)"]]}"#;
        let p = parse_problem(text, Some("connection")).unwrap();
        match p {
            Problem::Connection(e) => {
                assert_eq!(e.n, 2);
                assert_eq!(e.points.len(), 3);
                assert_eq!(e.points[2], Pt::Infinity);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn tuple_round_trip() {
        let text = r#"{"matrices": [[["2","1"],["-1","0"]], [["1","0"],["-3","1"]]]}"#;
        match parse_problem(text, None).unwrap() {
            Problem::Tuple(t) => {
                assert_eq!(t.n, 2);
                assert_eq!(t.matrices.len(), 2);
                assert_eq!(*t.matrices[0].at(0, 1), rat_int(1));
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn deform_round_trip_with_mu() {
        let text = r#"{"rank": 1, "points": ["0", "inf"],
            "matrix": [["(1/3)/t"]],
            "ring": {"vars": ["e"], "order": 3},
            "mu": [[["1/t^2"]], [["0"]]]}"#;
        match parse_problem(text, Some("deform")).unwrap() {
            Problem::Deform(d) => {
                assert_eq!(d.ring.dim(), 3);
                assert!(!d.jet.mu.is_zero());
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn malformed_entry_is_a_syntax_error() {
        let text = r#"{"rank": 1, "points": ["0", "inf"], "matrix": [["1//t"]]}"#;
        match parse_problem(text, None) {
            Err(Error::Syntax { .. }) => {}
            other => panic!("expected syntax error, got {:?}", other.map(|p| p.kind())),
        }
    }

    #[test]
    fn non_square_tuple_is_a_schema_error() {
        let text = r#"{"matrices": [[["1","0","0"],["0","1","0"]]]}"#;
        assert!(matches!(
            parse_problem(text, None),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn kind_mismatch_is_a_schema_error() {
        let text = r#"{"matrices": [[["1"]]]}"#;
        assert!(matches!(
            parse_problem(text, Some("connection")),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn dgla_round_trip() {
        // abelian two-term complex 0 -> K -> K -> 0 with zero differential
        let text = r#"{"dims": [1, 1], "differentials": [[["0"]]], "brackets": []}"#;
        match parse_problem(text, Some("dgla")).unwrap() {
            Problem::Dgla(l) => assert_eq!(l.dims, vec![1, 1]),
            _ => panic!("wrong kind"),
        }
    }
}
