//! Frame instance files.
//!
//! An instance is a JSON document carrying one weighted operator family,
//! an optional K operator, and optional named extra families sharing the
//! measure:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "algebra_dim": 1,
//!   "module_rank": 2,
//!   "measure": [
//!     {"weight": 1.0, "operator": [[[1,0],[0,0]],[[0,0],[2,0]]]}
//!   ],
//!   "k_operator": [[[1,0],[0,0]],[[0,0],[1,0]]],
//!   "families": {"r": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs; operator matrices are
//! (n·d)×(n·d) row-major arrays of such pairs. Emission is canonical:
//! sorted keys and fixed 17-significant-digit floats, so equal instances
//! serialize to equal bytes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use opframe::{KOperator, MeasureSpace, ModuleOperator, OperatorFrame};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::report::fmt_f64;

pub const FORMAT_VERSION: u64 = 1;

/// Parsed instance: validated domain objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub frame: OperatorFrame,
    pub k: Option<KOperator>,
    pub families: BTreeMap<String, OperatorFrame>,
}

impl Instance {
    pub fn algebra_dim(&self) -> usize {
        self.frame.algebra_dim()
    }

    pub fn module_rank(&self) -> usize {
        self.frame.module_rank()
    }

    /// Named extra family, or a path-anchored error naming what is there.
    pub fn family(&self, name: &str) -> CliResult<&OperatorFrame> {
        self.families.get(name).ok_or_else(|| CliError::Validation {
            path: format!("families.{name}"),
            msg: format!(
                "missing required family; present: [{}]",
                self.families.keys().cloned().collect::<Vec<_>>().join(", ")
            ),
        })
    }
}

fn validation(path: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Validation {
        path: path.into(),
        msg: msg.into(),
    }
}

fn as_object<'v>(v: &'v Value, path: &str) -> CliResult<&'v serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| validation(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> CliResult<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| validation(path, "expected an array"))
}

fn as_finite_f64(v: &Value, path: &str) -> CliResult<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| validation(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(validation(path, "number must be finite"));
    }
    Ok(x)
}

fn as_positive_usize(v: &Value, path: &str) -> CliResult<usize> {
    let x = v
        .as_u64()
        .ok_or_else(|| validation(path, "expected a positive integer"))?;
    if x == 0 {
        return Err(validation(path, "must be at least 1"));
    }
    Ok(x as usize)
}

fn parse_complex(v: &Value, path: &str) -> CliResult<Complex64> {
    let pair = as_array(v, path)?;
    if pair.len() != 2 {
        return Err(validation(
            path,
            format!("complex entry needs [re, im], got {} items", pair.len()),
        ));
    }
    let re = as_finite_f64(&pair[0], &format!("{path}[0]"))?;
    let im = as_finite_f64(&pair[1], &format!("{path}[1]"))?;
    Ok(Complex64::new(re, im))
}

fn parse_operator(v: &Value, path: &str, side: usize, d: usize) -> CliResult<ModuleOperator> {
    let rows = as_array(v, path)?;
    if rows.len() != side {
        return Err(validation(
            path,
            format!("expected {side} rows, found {}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(side * side);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let cols = as_array(row, &row_path)?;
        if cols.len() != side {
            return Err(validation(
                &row_path,
                format!("expected {side} columns, found {}", cols.len()),
            ));
        }
        for (j, cell) in cols.iter().enumerate() {
            entries.push(parse_complex(cell, &format!("{row_path}[{j}]"))?);
        }
    }
    let matrix = nalgebra_from_rows(side, entries);
    ModuleOperator::new(matrix, d).map_err(|e| validation(path, e.to_string()))
}

fn nalgebra_from_rows(side: usize, entries: Vec<Complex64>) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_row_slice(side, side, &entries)
}

/// Parse and validate an instance document.
pub fn parse_instance(text: &str) -> CliResult<Instance> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let obj = as_object(&root, "$")?;

    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "format_version"
                | "algebra_dim"
                | "module_rank"
                | "measure"
                | "k_operator"
                | "families"
        ) {
            return Err(validation(key, "unknown field"));
        }
    }

    let version = obj
        .get("format_version")
        .ok_or_else(|| validation("format_version", "missing field"))?
        .as_u64()
        .ok_or_else(|| validation("format_version", "expected an integer"))?;
    if version != FORMAT_VERSION {
        return Err(validation(
            "format_version",
            format!("unsupported version {version}, expected {FORMAT_VERSION}"),
        ));
    }

    let d = as_positive_usize(
        obj.get("algebra_dim")
            .ok_or_else(|| validation("algebra_dim", "missing field"))?,
        "algebra_dim",
    )?;
    let n = as_positive_usize(
        obj.get("module_rank")
            .ok_or_else(|| validation("module_rank", "missing field"))?,
        "module_rank",
    )?;
    let side = n * d;

    let measure_items = as_array(
        obj.get("measure")
            .ok_or_else(|| validation("measure", "missing field"))?,
        "measure",
    )?;
    if measure_items.is_empty() {
        return Err(validation("measure", "needs at least one point"));
    }
    let mut weights = Vec::with_capacity(measure_items.len());
    let mut operators = Vec::with_capacity(measure_items.len());
    for (j, item) in measure_items.iter().enumerate() {
        let path = format!("measure[{j}]");
        let entry = as_object(item, &path)?;
        let w = as_finite_f64(
            entry
                .get("weight")
                .ok_or_else(|| validation(format!("{path}.weight"), "missing field"))?,
            &format!("{path}.weight"),
        )?;
        if w <= 0.0 {
            return Err(validation(
                format!("{path}.weight"),
                format!("weight must be positive, got {w}"),
            ));
        }
        weights.push(w);
        let op = entry
            .get("operator")
            .ok_or_else(|| validation(format!("{path}.operator"), "missing field"))?;
        operators.push(parse_operator(op, &format!("{path}.operator"), side, d)?);
    }
    let measure = MeasureSpace::new(weights).map_err(|e| validation("measure", e.to_string()))?;
    let frame = OperatorFrame::new(measure.clone(), operators)
        .map_err(|e| validation("measure", e.to_string()))?;

    let k = match obj.get("k_operator") {
        None | Some(Value::Null) => None,
        Some(v) => Some(KOperator::new(parse_operator(v, "k_operator", side, d)?)),
    };

    let mut families = BTreeMap::new();
    if let Some(v) = obj.get("families") {
        if !v.is_null() {
            let map = as_object(v, "families")?;
            for (name, ops_v) in map {
                let path = format!("families.{name}");
                let items = as_array(ops_v, &path)?;
                if items.len() != frame.point_count() {
                    return Err(validation(
                        &path,
                        format!(
                            "expected {} operators (one per measure point), found {}",
                            frame.point_count(),
                            items.len()
                        ),
                    ));
                }
                let ops = items
                    .iter()
                    .enumerate()
                    .map(|(j, item)| parse_operator(item, &format!("{path}[{j}]"), side, d))
                    .collect::<CliResult<Vec<_>>>()?;
                let fam = OperatorFrame::new(measure.clone(), ops)
                    .map_err(|e| validation(&path, e.to_string()))?;
                families.insert(name.clone(), fam);
            }
        }
    }

    Ok(Instance { frame, k, families })
}

fn emit_complex(out: &mut String, c: Complex64) {
    out.push('[');
    out.push_str(&fmt_f64(c.re));
    out.push(',');
    out.push_str(&fmt_f64(c.im));
    out.push(']');
}

fn emit_operator(out: &mut String, op: &ModuleOperator) {
    let m = op.matrix();
    out.push('[');
    for i in 0..m.nrows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            emit_complex(out, m[(i, j)]);
        }
        out.push(']');
    }
    out.push(']');
}

/// Canonical serialization: sorted keys, fixed float formatting. Parsing
/// the output reproduces the instance exactly.
pub fn emit_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push('{');
    out.push_str(&format!("\"algebra_dim\":{}", instance.algebra_dim()));
    if !instance.families.is_empty() {
        out.push_str(",\"families\":{");
        for (i, (name, fam)) in instance.families.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{}:[",
                serde_json::to_string(name).expect("string")
            ));
            for (j, op) in fam.operators().iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                emit_operator(&mut out, op);
            }
            out.push(']');
        }
        out.push('}');
    }
    out.push_str(&format!(",\"format_version\":{FORMAT_VERSION}"));
    if let Some(k) = &instance.k {
        out.push_str(",\"k_operator\":");
        emit_operator(&mut out, &k.op);
    }
    out.push_str(",\"measure\":[");
    for (j, (op, &w)) in instance
        .frame
        .operators()
        .iter()
        .zip(instance.frame.measure().weights())
        .enumerate()
    {
        if j > 0 {
            out.push(',');
        }
        out.push_str("{\"operator\":");
        emit_operator(&mut out, op);
        out.push_str(",\"weight\":");
        out.push_str(&fmt_f64(w));
        out.push('}');
    }
    out.push(']');
    out.push_str(&format!(",\"module_rank\":{}", instance.module_rank()));
    out.push('}');
    out
}
