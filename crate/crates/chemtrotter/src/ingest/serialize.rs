//! Canonical JSON document for a [`SpinOrbitalHamiltonian`].
//!
//! ```text
//! {
//! "format": "chemtrotter-hamiltonian",
//! "version": 1,
//! "n_orbitals": 4,
//! "n_electrons": 2,
//! "core_energy": 0.7,
//! "one_body": [
//! [0,0,-1.25],
//! ...
//! ],
//! "two_body": [
//! [0,1,1,0,0.33],
//! ...
//! ]
//! }
//! ```
//!
//! `one_body` lists the nonzero upper triangle `p <= q`; `two_body` lists every
//! stored quartet `[p, q, r, s, value]`. Indices are 0-based spin orbitals.
//! Floats use shortest round-trip formatting, so reading back is bit-exact.

use std::fmt::Write;

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::hamiltonian::{SpinOrbitalHamiltonian, TwoBody};

pub const FORMAT_NAME: &str = "chemtrotter-hamiltonian";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SerializeError {
    #[error("document version {found}, this build reads version {expected}")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("schema violation: {0}")]
    SchemaViolation(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[allow(dead_code)]
    format: String,
    #[allow(dead_code)]
    version: u64,
    n_orbitals: usize,
    n_electrons: Option<usize>,
    core_energy: f64,
    one_body: Vec<(usize, usize, f64)>,
    two_body: Vec<(usize, usize, usize, usize, f64)>,
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn serialize(h: &SpinOrbitalHamiltonian) -> String {
    let n = h.n_orbitals();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "\"format\": {},", json(&FORMAT_NAME));
    let _ = writeln!(out, "\"version\": {FORMAT_VERSION},");
    let _ = writeln!(out, "\"n_orbitals\": {n},");
    let _ = writeln!(out, "\"n_electrons\": {},", json(&h.n_electrons()));
    let _ = writeln!(out, "\"core_energy\": {},", json(&h.core_energy()));
    let one: Vec<String> = (0..n)
        .flat_map(|p| (p..n).map(move |q| (p, q)))
        .filter(|&(p, q)| h.one_body()[(p, q)] != 0.0)
        .map(|(p, q)| json(&(p, q, h.one_body()[(p, q)])))
        .collect();
    let two: Vec<String> = h
        .two_body()
        .iter()
        .map(|(&[p, q, r, s], &v)| json(&(p, q, r, s, v)))
        .collect();
    for (name, rows, last) in [("one_body", one, false), ("two_body", two, true)] {
        if rows.is_empty() {
            let _ = writeln!(out, "\"{name}\": []{}", if last { "" } else { "," });
        } else {
            let _ = writeln!(
                out,
                "\"{name}\": [\n{}\n]{}",
                rows.join(",\n"),
                if last { "" } else { "," }
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn deserialize(text: &str) -> Result<SpinOrbitalHamiltonian, SerializeError> {
    let schema = |m: String| SerializeError::SchemaViolation(m);
    let value: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    match value.get("format").and_then(Value::as_str) {
        Some(FORMAT_NAME) => {}
        other => {
            return Err(schema(format!(
                "format is {other:?}, expected {FORMAT_NAME:?}"
            )))
        }
    }
    let version = value
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("missing version".into()))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(SerializeError::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let doc: Document = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
    let n = doc.n_orbitals;
    let mut one = DMatrix::zeros(n, n);
    for (p, q, v) in doc.one_body {
        if p > q || q >= n {
            return Err(schema(format!(
                "one_body entry ({p}, {q}) is not in the upper triangle of {n} orbitals"
            )));
        }
        one[(p, q)] = v;
        one[(q, p)] = v;
    }
    let mut two = TwoBody::new();
    for (p, q, r, s, v) in doc.two_body {
        if two.insert([p, q, r, s], v).is_some() {
            return Err(schema(format!(
                "duplicate two_body entry [{p}, {q}, {r}, {s}]"
            )));
        }
    }
    let h = SpinOrbitalHamiltonian::new(n, one, two, doc.core_energy)
        .map_err(|e| schema(e.to_string()))?;
    match doc.n_electrons {
        Some(k) => h.with_n_electrons(k).map_err(|e| schema(e.to_string())),
        None => Ok(h),
    }
}
