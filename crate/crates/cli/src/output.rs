use serde_json::{Map, Number, Value};

use crate::config::Format;

/// A rendered result: a single object, or a table whose rows share one schema.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Single(Value),
    Rows(Vec<Value>),
}

/// Rounds `x` to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Rounds every float to 12 significant digits and drops fields that are null
/// or non-finite.
pub fn normalise(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalise).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, normalise(v)))
                .filter(|(_, v)| !v.is_null())
                .collect(),
        ),
        other => other,
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let value = match report {
                Report::Single(v) => v.clone(),
                Report::Rows(rows) => {
                    let mut map = Map::new();
                    map.insert("rows".into(), Value::Array(rows.clone()));
                    Value::Object(map)
                }
            };
            let mut text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => match report {
            Report::Single(v) => csv_table(std::slice::from_ref(v)),
            Report::Rows(rows) => csv_table(rows),
        },
    }
}

/// CSV with one row per object; array and object fields stay JSON-only.
fn csv_table(rows: &[Value]) -> Result<String, String> {
    // merge the key orders of all rows, so an optional field absent from the
    // first row still lands next to its neighbours
    let mut header: Vec<&str> = Vec::new();
    for row in rows {
        let mut cursor = 0;
        for (key, value) in row.as_object().into_iter().flatten() {
            if value.is_array() || value.is_object() {
                continue;
            }
            match header.iter().position(|h| h == key) {
                Some(i) => cursor = i + 1,
                None => {
                    header.insert(cursor, key);
                    cursor += 1;
                }
            }
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&header).map_err(|e| e.to_string())?;
    for row in rows {
        let cells = header.iter().map(|key| match row.get(*key) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(other) => other.to_string(),
        });
        writer.write_record(cells).map_err(|e| e.to_string())?;
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}
