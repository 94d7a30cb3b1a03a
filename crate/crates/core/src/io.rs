//! File formats. Matrices and states are exchanged as JSON with complex
//! entries spelled as [re, im] pairs; all floats are written with 17
//! significant digits so identical runs produce identical bytes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Operator, StateVector};

/// 17 significant digits, scientific; enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Order-preserving JSON document builder with deterministic float formatting.
#[derive(Clone, Debug)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn complex(z: Complex64) -> JsonValue {
        JsonValue::Array(vec![JsonValue::Float(z.re), JsonValue::Float(z.im)])
    }

    pub fn floats(xs: &[f64]) -> JsonValue {
        JsonValue::Array(xs.iter().map(|&x| JsonValue::Float(x)).collect())
    }

    fn write(&self, out: &mut String) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => out.push_str(&i.to_string()),
            JsonValue::Float(x) => out.push_str(&fmt_f64(*x)),
            JsonValue::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            JsonValue::Array(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JsonValue::Object(fields) => {
                out.push('{');
                for (k, (key, value)) in fields.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    JsonValue::Str(key.clone()).write(out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out.push('\n');
        out
    }
}

pub fn operator_to_json(op: &Operator) -> JsonValue {
    let dim = op.dim();
    let mat = op.matrix();
    let entries = JsonValue::Array(
        (0..dim)
            .map(|i| JsonValue::Array((0..dim).map(|j| JsonValue::complex(mat[(i, j)])).collect()))
            .collect(),
    );
    JsonValue::Object(vec![
        ("parties".into(), JsonValue::Int(op.shape().parties as i64)),
        ("local_dim".into(), JsonValue::Int(op.shape().local_dim as i64)),
        ("entries".into(), entries),
    ])
}

pub fn state_to_json(psi: &StateVector) -> JsonValue {
    let amps = JsonValue::Array(psi.amplitudes().iter().map(|&a| JsonValue::complex(a)).collect());
    JsonValue::Object(vec![
        ("parties".into(), JsonValue::Int(psi.shape().parties as i64)),
        ("local_dim".into(), JsonValue::Int(psi.shape().local_dim as i64)),
        ("amplitudes".into(), amps),
    ])
}

fn get_usize(v: &serde_json::Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(|x| x.as_u64())
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidInput(format!("missing or non-integer \"{key}\"")))
}

fn parse_complex(v: &serde_json::Value, what: &str) -> Result<Complex64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidInput(format!("{what}: expected [re, im]")))?;
    let re = pair[0].as_f64().ok_or_else(|| Error::InvalidInput(format!("{what}: bad re")))?;
    let im = pair[1].as_f64().ok_or_else(|| Error::InvalidInput(format!("{what}: bad im")))?;
    Ok(Complex64::new(re, im))
}

pub fn operator_from_json(v: &serde_json::Value) -> Result<Operator> {
    let parties = get_usize(v, "parties")?;
    let local_dim = get_usize(v, "local_dim")?;
    let rows = v
        .get("entries")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::InvalidInput("missing \"entries\"".into()))?;
    let dim = local_dim.checked_pow(parties as u32).unwrap_or(usize::MAX);
    if rows.len() != dim {
        return Err(Error::DimensionMismatch(format!("{} rows for dimension {dim}", rows.len())));
    }
    let mut mat = CMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| Error::InvalidInput(format!("row {i}: expected {dim} entries")))?;
        for (j, entry) in cols.iter().enumerate() {
            mat[(i, j)] = parse_complex(entry, &format!("entry ({i},{j})"))?;
        }
    }
    Operator::new(parties, local_dim, mat)
}

pub fn state_from_json(v: &serde_json::Value) -> Result<StateVector> {
    let parties = get_usize(v, "parties")?;
    let local_dim = get_usize(v, "local_dim")?;
    let amps = v
        .get("amplitudes")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::InvalidInput("missing \"amplitudes\"".into()))?;
    let parsed: Vec<Complex64> = amps
        .iter()
        .enumerate()
        .map(|(k, a)| parse_complex(a, &format!("amplitude {k}")))
        .collect::<Result<_>>()?;
    // keep already-normalized amplitudes bit-exact, renormalize otherwise
    StateVector::new(parties, local_dim, parsed.clone())
        .or_else(|_| StateVector::from_unnormalized(parties, local_dim, parsed))
}

pub fn read_operator(path: &std::path::Path) -> Result<Operator> {
    let text = std::fs::read_to_string(path)?;
    operator_from_json(&serde_json::from_str(&text)?)
}

pub fn read_state(path: &std::path::Path) -> Result<StateVector> {
    let text = std::fs::read_to_string(path)?;
    state_from_json(&serde_json::from_str(&text)?)
}
