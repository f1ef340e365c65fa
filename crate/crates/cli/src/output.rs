use levref_core::numkit::fmt_rational;
use levref_core::refine::BoundValue;
use levref_core::report::SCHEMA_VERSION;
use serde_json::{json, Value};

use crate::commands::CliError;

pub fn json_doc(command: &str, body: Value) -> Result<String, CliError> {
    let doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "results": body });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(format!("json: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn to_json<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(format!("json: {e}")))
}

pub fn csv_doc(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Exact values print as `p/q` (with the floor when not integral);
/// floating values with their certification status.
pub fn fmt_value(v: &BoundValue) -> String {
    match v {
        BoundValue::Exact(r) if r.is_integer() => fmt_rational(r),
        BoundValue::Exact(r) => format!("{} (floor {})", fmt_rational(r), v.floor()),
        BoundValue::Approx { certified, .. } => {
            format!("{:.6e} (floor {}, {})", v.to_f64(), v.floor(), if *certified { "certified" } else { "uncertified" })
        }
    }
}

/// Plain value for CSV cells: `p/q` when exact, a float otherwise.
pub fn value_cell(v: &BoundValue) -> String {
    match v {
        BoundValue::Exact(r) => fmt_rational(r),
        BoundValue::Approx { .. } => format!("{:e}", v.to_f64()),
    }
}

pub fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}
