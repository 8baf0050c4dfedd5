//! FCIDUMP integral files.
//!
//! Spin orbital `2i` is spatial orbital `i` (0-based) with spin up and `2i+1`
//! the same orbital with spin down.

use std::collections::HashMap;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::hamiltonian::{symmetrize_two_body, SpinOrbitalHamiltonian, TwoBody};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FcidumpError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: index {index} outside 0..={norb}")]
    IndexOutOfRange {
        line: usize,
        index: i64,
        norb: usize,
    },
    #[error("line {line}: cannot read {token:?} as a number")]
    NonNumericValue { line: usize, token: String },
    #[error("line {line}: expected `value i j k l`, found {found} fields")]
    MalformedRecord { line: usize, found: usize },
}

/// One `value i j k l` line, indices as written (1-based, 0 = unused).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralRecord {
    pub value: f64,
    pub indices: [usize; 4],
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcidumpFile {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub ms2: Option<i64>,
    /// Records in file order, core-energy record excluded.
    pub records: Vec<IntegralRecord>,
    pub core_energy: f64,
}

fn header_value(header: &str, key: &str) -> Option<String> {
    let upper = header.to_ascii_uppercase();
    let mut from = 0;
    while let Some(pos) = upper[from..].find(key) {
        let start = from + pos;
        let before_ok = start == 0 || !upper.as_bytes()[start - 1].is_ascii_alphanumeric();
        let rest = upper[start + key.len()..].trim_start();
        if before_ok {
            if let Some(rest) = rest.strip_prefix('=') {
                let value: String = rest
                    .trim_start()
                    .chars()
                    .take_while(|c| c.is_ascii_digit() || *c == '-' || *c == '+')
                    .collect();
                return Some(value);
            }
        }
        from = start + key.len();
    }
    None
}

fn parse_number(token: &str, line: usize) -> Result<f64, FcidumpError> {
    token
        .replace(['D', 'd'], "E")
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| FcidumpError::NonNumericValue {
            line,
            token: token.to_string(),
        })
}

fn is_header_end(line: &str) -> bool {
    let upper = line.trim().to_ascii_uppercase();
    upper.contains("&END") || upper.contains("$END") || upper.ends_with('/')
}

pub fn parse_fcidump(text: &str) -> Result<FcidumpFile, FcidumpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = String::new();
    let mut started = false;
    let mut terminated = false;
    let mut end_line = 1;
    for (no, line) in lines.by_ref() {
        if !started {
            if line.trim().is_empty() {
                continue;
            }
            if !line.trim_start().to_ascii_uppercase().starts_with("&FCI") {
                return Err(FcidumpError::MalformedHeader {
                    line: no,
                    reason: "expected &FCI".into(),
                });
            }
            started = true;
        }
        header.push_str(line);
        header.push(' ');
        end_line = no;
        if is_header_end(line) {
            terminated = true;
            break;
        }
    }
    if !terminated {
        return Err(FcidumpError::MalformedHeader {
            line: end_line,
            reason: "unterminated namelist".into(),
        });
    }
    let number = |key: &str| -> Result<i64, FcidumpError> {
        let raw = header_value(&header, key).ok_or_else(|| FcidumpError::MalformedHeader {
            line: end_line,
            reason: format!("missing {key}"),
        })?;
        raw.parse::<i64>()
            .map_err(|_| FcidumpError::MalformedHeader {
                line: end_line,
                reason: format!("bad {key} value {raw:?}"),
            })
    };
    let norb = number("NORB")?;
    let nelec = number("NELEC")?;
    if norb <= 0 || nelec < 0 || nelec > 2 * norb {
        return Err(FcidumpError::MalformedHeader {
            line: end_line,
            reason: format!("NORB={norb}, NELEC={nelec} is inconsistent"),
        });
    }
    let ms2 = number("MS2").ok();
    let norb = norb as usize;

    let mut records = Vec::new();
    let mut core_energy = 0.0;
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(FcidumpError::MalformedRecord {
                line: no,
                found: fields.len(),
            });
        }
        let value = parse_number(fields[0], no)?;
        let mut indices = [0usize; 4];
        for (slot, tok) in indices.iter_mut().zip(&fields[1..]) {
            let index: i64 = tok.parse().map_err(|_| FcidumpError::NonNumericValue {
                line: no,
                token: tok.to_string(),
            })?;
            if index < 0 || index as usize > norb {
                return Err(FcidumpError::IndexOutOfRange {
                    line: no,
                    index,
                    norb,
                });
            }
            *slot = index as usize;
        }
        let [i, j, k, l] = indices.map(|x| x > 0);
        let known = (i && j && k && l)
            || (i && j && !k && !l)
            || (i && !j && !k && !l)
            || indices == [0; 4];
        if !known {
            return Err(FcidumpError::MalformedRecord { line: no, found: 5 });
        }
        if indices == [0; 4] {
            core_energy = value;
        } else {
            records.push(IntegralRecord {
                value,
                indices,
                line: no,
            });
        }
    }
    Ok(FcidumpFile {
        n_spatial: norb,
        n_electrons: nelec as usize,
        ms2,
        records,
        core_energy,
    })
}

/// Expands spatial chemists'-notation integrals to spin orbitals:
/// `h_pqrs = ½ (ps|qr)` with `spin(p) = spin(s)`, `spin(q) = spin(r)`.
///
/// Records `(i, 0, 0, 0)` (orbital energies) are ignored. Records overlapping
/// through the eightfold permutational symmetry resolve to the last one read.
pub fn to_spin_orbital(f: &FcidumpFile) -> Result<SpinOrbitalHamiltonian, FcidumpError> {
    let norb = f.n_spatial;
    let n = 2 * norb;
    let mut one_spatial: HashMap<(usize, usize), f64> = HashMap::new();
    let mut chem: HashMap<[usize; 4], f64> = HashMap::new();
    for rec in &f.records {
        let [i, j, k, l] = rec.indices;
        match (i > 0, j > 0, k > 0, l > 0) {
            (true, true, true, true) => {
                let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
                for key in [
                    [i, j, k, l],
                    [j, i, k, l],
                    [i, j, l, k],
                    [j, i, l, k],
                    [k, l, i, j],
                    [l, k, i, j],
                    [k, l, j, i],
                    [l, k, j, i],
                ] {
                    chem.insert(key, rec.value);
                }
            }
            (true, true, false, false) => {
                one_spatial.insert((i - 1, j - 1), rec.value);
                one_spatial.insert((j - 1, i - 1), rec.value);
            }
            (true, false, false, false) => {}
            _ => {
                return Err(FcidumpError::MalformedRecord {
                    line: rec.line,
                    found: 5,
                })
            }
        }
    }

    let mut one = DMatrix::zeros(n, n);
    for (&(i, j), &v) in &one_spatial {
        for spin in 0..2 {
            one[(2 * i + spin, 2 * j + spin)] = v;
        }
    }
    let mut two = TwoBody::new();
    for (&[i, j, k, l], &v) in &chem {
        if v == 0.0 {
            continue;
        }
        for sigma in 0..2 {
            for tau in 0..2 {
                let (p, s, q, r) = (2 * i + sigma, 2 * j + sigma, 2 * k + tau, 2 * l + tau);
                if p != q && r != s {
                    two.insert([p, q, r, s], v / 2.0);
                }
            }
        }
    }
    let h = SpinOrbitalHamiltonian::new(n, one, symmetrize_two_body(&two), f.core_energy)
        .and_then(|h| h.with_n_electrons(f.n_electrons))
        .expect("spin-orbital expansion of real integrals is symmetric");
    Ok(h)
}
