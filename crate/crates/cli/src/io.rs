//! Reading inputs and writing JSON and CSV outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Number, Value};

use crate::error::{CliError, CliResult};

const SIGNIFICANT_DIGITS: usize = 12;

/// Parses a JSON file, reporting the failing field path and position.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        // The inner message already ends with the line and column.
        CliError::Input(format!("{}: field '{}': {}", path.display(), e.path(), e.inner()))
    })?;
    de.end()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(value)
}

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let text = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let rounded: f64 = text.parse().expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Rounds every float in the tree to 12 significant digits.
pub fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            *n = Number::from_f64(x).expect("finite after rounding");
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

pub fn render(mut value: Value) -> String {
    round_numbers(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Writes a CSV with a header row; `None` cells are left empty.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<Option<f64>>>,
) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .into_iter()
            .map(|cell| cell.map(|x| round_significant(x).to_string()).unwrap_or_default())
            .collect();
        let _ = writeln!(text, "{}", cells.join(","));
    }
    let path = dir.join(name);
    fs::write(&path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}
