//! JSON forms of quintuples, gate lists, matrices and distribution tables.

use serde_json::{json, Map, Value};
use stabform_core::bounds::{DistEntry, DistTable};
use stabform_core::canon::{Gate, Quintuple};
use stabform_core::moves::{Mode, PivotProfile};
use stabform_core::rational::parse_rational;
use stabform_core::{Gf2Matrix, Gf2Vector};

use crate::error::{CliError, CliResult};

fn malformed(what: impl Into<String>) -> CliError {
    CliError::domain("malformed_input", what)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(format!("{what} must be a JSON object")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> CliResult<usize> {
    field(obj, key)?
        .as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| malformed(format!("field {key:?} must be a non-negative integer")))
}

fn index_list(obj: &Map<String, Value>, key: &str) -> CliResult<Vec<usize>> {
    let bad = || malformed(format!("field {key:?} must be an array of non-negative integers"));
    field(obj, key)?
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|x| x.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(bad))
        .collect()
}

fn string_list<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<Vec<&'a str>> {
    let bad = || malformed(format!("field {key:?} must be an array of bit strings"));
    field(obj, key)?
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|x| x.as_str().ok_or_else(bad))
        .collect()
}

/// Decodes a row-string array, checking the row count as well as the width.
fn matrix_field(obj: &Map<String, Value>, key: &str, rows: usize, cols: usize) -> CliResult<Gf2Matrix> {
    let strings = string_list(obj, key)?;
    let m = Gf2Matrix::from_row_strings(&strings, cols)?;
    if m.shape() != (rows, cols) {
        return Err(CliError::invariant(
            &format!("{key} is {rows} x {cols}"),
            format!("field {key:?} is {} x {}, expected {rows} x {cols}", m.rows(), m.cols()),
        ));
    }
    Ok(m)
}

pub fn matrix_json(a: &Gf2Matrix) -> Value {
    json!({ "rows": a.rows(), "cols": a.cols(), "matrix": a.row_strings() })
}

pub fn quintuple_json(q: &Quintuple) -> Value {
    let p = &q.profile;
    json!({
        "mode": p.mode.name(),
        "m": p.rows,
        "n2": p.cols,
        "r": p.rank(),
        "alpha": p.alpha,
        "beta": p.beta,
        "L": q.l.row_strings(),
        "R": q.r.row_strings(),
    })
}

pub fn quintuple_from_json(v: &Value) -> CliResult<Quintuple> {
    let obj = as_object(v, "quintuple")?;
    let mode: Mode = field(obj, "mode")?
        .as_str()
        .ok_or_else(|| malformed("field \"mode\" must be a string"))?
        .parse()?;
    let rows = usize_field(obj, "m")?;
    let cols = usize_field(obj, "n2")?;
    let r = usize_field(obj, "r")?;
    let alpha = index_list(obj, "alpha")?;
    let beta = index_list(obj, "beta")?;
    if alpha.len() != r || beta.len() != r {
        return Err(CliError::invariant(
            "|alpha| = |beta| = r",
            format!("r = {r} but alpha has {} and beta has {} entries", alpha.len(), beta.len()),
        ));
    }
    let profile = PivotProfile::new(mode, rows, cols, alpha, beta)?;
    let l = matrix_field(obj, "L", rows, rows)?;
    let r = matrix_field(obj, "R", cols, cols)?;
    Ok(Quintuple { profile, l, r })
}

pub fn gates_json(gates: &[Gate]) -> Value {
    Value::Array(
        gates
            .iter()
            .map(|g| json!({ "gate": g.name(), "qubits": g.qubits() }))
            .collect(),
    )
}

pub fn dist_table_from_json(v: &Value) -> CliResult<DistTable> {
    let obj = as_object(v, "distribution table")?;
    let n = usize_field(obj, "n")?;
    let entries = field(obj, "entries")?
        .as_array()
        .ok_or_else(|| malformed("field \"entries\" must be an array"))?;
    let entries = entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let e = as_object(e, "table entry")?;
            let text = |key: &str| {
                field(e, key)?
                    .as_str()
                    .ok_or_else(|| malformed(format!("entry {k}: field {key:?} must be a string")))
            };
            let u = Gf2Vector::parse_bit_string(text("u")?)?;
            let p = match field(e, "p")? {
                Value::String(s) => parse_rational(s)?,
                // Plain JSON numbers are read through their decimal text.
                Value::Number(x) => parse_rational(&x.to_string())?,
                _ => return Err(malformed(format!("entry {k}: field \"p\" must be a rational"))),
            };
            Ok(DistEntry {
                u,
                v: text("v")?.to_owned(),
                p,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(DistTable::new(n, entries)?)
}

#[cfg(test)]
fn dist_table_json(t: &DistTable) -> Value {
    use stabform_core::rational::format_rational;
    let entries: Vec<Value> = t
        .entries()
        .iter()
        .map(|e| json!({ "u": e.u.to_bit_string(), "v": e.v, "p": format_rational(&e.p) }))
        .collect();
    json!({ "n": t.n(), "entries": entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabform_core::canon::decompose;

    #[test]
    fn quintuple_round_trips() {
        let a = Gf2Matrix::parse_text("1100\n0110\n").unwrap();
        let q = decompose(Mode::Unrestricted, &a).unwrap();
        let back = quintuple_from_json(&quintuple_json(&q)).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn quintuple_shape_is_checked() {
        let a = Gf2Matrix::parse_text("11\n").unwrap();
        let q = decompose(Mode::Unrestricted, &a).unwrap();
        let mut v = quintuple_json(&q);
        v["L"] = json!(["1", "0"]);
        assert!(quintuple_from_json(&v).is_err());
        v["L"] = json!(["1"]);
        v["r"] = json!(0);
        assert!(quintuple_from_json(&v).is_err());
    }

    #[test]
    fn dist_table_round_trips() {
        let v = json!({ "n": 1, "entries": [
            { "u": "00", "v": "", "p": "7/10" },
            { "u": "10", "v": "", "p": "0.3" },
        ]});
        let t = dist_table_from_json(&v).unwrap();
        let again = dist_table_from_json(&dist_table_json(&t)).unwrap();
        assert_eq!(t, again);
        assert_eq!(dist_table_json(&t)["entries"][1]["p"], "3/10");
    }
}
