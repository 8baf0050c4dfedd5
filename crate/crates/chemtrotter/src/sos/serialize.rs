//! JSON document for a [`SosDecomposition`]; matrices are row-major lists of
//! `[re, im]` pairs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ingest::{SerializeError, FORMAT_VERSION};

use super::decompose::{SosDecomposition, Square};
use super::free_fermion::FreeFermionOp;

pub const SOS_FORMAT_NAME: &str = "chemtrotter-sos";

type Rows = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    n_modes: usize,
    scalar_offset: f64,
    free_part: Rows,
    squares: Vec<(f64, Rows)>,
}

fn rows(op: &FreeFermionOp) -> Rows {
    let g = op.coefficients();
    (0..g.nrows())
        .map(|i| {
            (0..g.ncols())
                .map(|j| [g[(i, j)].re, g[(i, j)].im])
                .collect()
        })
        .collect()
}

fn op(rows: &Rows, n: usize) -> Result<FreeFermionOp, SerializeError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(SerializeError::SchemaViolation(format!(
            "matrix is not {n} x {n}"
        )));
    }
    FreeFermionOp::new(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
    .map_err(|e| SerializeError::SchemaViolation(e.to_string()))
}

pub fn serialize_sos(d: &SosDecomposition) -> String {
    let doc = Document {
        format: SOS_FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        n_modes: d.n_modes(),
        scalar_offset: d.scalar_offset,
        free_part: rows(&d.free_part),
        squares: d
            .squares
            .iter()
            .map(|s| (s.sign, rows(&s.generator)))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn deserialize_sos(text: &str) -> Result<SosDecomposition, SerializeError> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| SerializeError::SchemaViolation(e.to_string()))?;
    if doc.format != SOS_FORMAT_NAME {
        return Err(SerializeError::SchemaViolation(format!(
            "format is {:?}, expected {SOS_FORMAT_NAME:?}",
            doc.format
        )));
    }
    if doc.version != FORMAT_VERSION {
        return Err(SerializeError::VersionMismatch {
            found: doc.version.into(),
            expected: FORMAT_VERSION,
        });
    }
    let n = doc.n_modes;
    let squares = doc
        .squares
        .iter()
        .map(|(sign, g)| {
            if sign.abs() != 1.0 {
                return Err(SerializeError::SchemaViolation(format!(
                    "square sign {sign} is not ±1"
                )));
            }
            Ok(Square {
                sign: *sign,
                generator: op(g, n)?,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(SosDecomposition {
        free_part: op(&doc.free_part, n)?,
        squares,
        scalar_offset: doc.scalar_offset,
    })
}
