//! JSON-lines input and output.

use std::io::{BufRead, Write};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mobius::MobiusTransform;

/// One compact JSON document per line.
pub fn write_jsonl<T: Serialize, W: Write>(mut w: W, items: impl IntoIterator<Item = T>) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Generator groups from JSON lines.
///
/// A file of object lines `{"a_re", "a_im", "c_re", "c_im"}` is a single
/// group. A file of array lines holds one group per line. Blank lines are
/// skipped; mixing the two shapes is an error.
pub fn read_generator_groups<R: BufRead>(r: R) -> Result<Vec<Vec<MobiusTransform>>> {
    let mut single = Vec::new();
    let mut groups = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |e: &dyn std::fmt::Display| Error::Parse(format!("line {}: {e}", k + 1));
        let v: Value = serde_json::from_str(&line).map_err(|e| at(&e))?;
        match v {
            Value::Array(_) => groups.push(serde_json::from_value::<Vec<MobiusTransform>>(v).map_err(|e| at(&e))?),
            Value::Object(_) => single.push(serde_json::from_value::<MobiusTransform>(v).map_err(|e| at(&e))?),
            _ => return Err(at(&"expected an object or an array")),
        }
    }
    match (single.is_empty(), groups.is_empty()) {
        (false, true) => Ok(vec![single]),
        (true, _) => Ok(groups),
        (false, false) => Err(Error::Parse("mixed object and array lines".into())),
    }
}
