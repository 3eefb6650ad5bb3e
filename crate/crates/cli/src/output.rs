use std::io::Write;

use serde_json::{Map, Value};

pub const SCHEMA: &str = "quatcm/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a subcommand produces.
pub enum Output {
    /// A single value printed as-is.
    Bare(String),
    /// Named fields; nested values are allowed in JSON and flattened in CSV.
    Record(Vec<(&'static str, Value)>),
    /// A table with a fixed header; `None` cells are blank in CSV and null in JSON.
    Table { columns: Vec<&'static str>, rows: Vec<Vec<Option<String>>> },
}

pub fn int(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn ints<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(int).collect())
}

fn flatten(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(flatten).collect::<Vec<_>>().join(";"),
        Value::Object(m) => m.values().map(flatten).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    let mut line = cells.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Bare(s), _) => format!("{s}\n"),
        (Output::Record(fields), Format::Json) => {
            let mut m = Map::new();
            m.insert("schema".into(), Value::String(SCHEMA.into()));
            for (k, v) in fields {
                m.insert((*k).into(), v.clone());
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
            s.push('\n');
            s
        }
        (Output::Record(fields), Format::Csv) => {
            let mut s = csv_line(fields.iter().map(|(k, _)| k.to_string()));
            s += &csv_line(fields.iter().map(|(_, v)| flatten(v)));
            s
        }
        (Output::Table { columns, rows }, Format::Json) => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> = columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), v.clone().map_or(Value::Null, Value::String)))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let mut m = Map::new();
            m.insert("schema".into(), Value::String(SCHEMA.into()));
            m.insert("columns".into(), Value::Array(columns.iter().map(|c| Value::String(c.to_string())).collect()));
            m.insert("rows".into(), Value::Array(rows));
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
            s.push('\n');
            s
        }
        (Output::Table { columns, rows }, Format::Csv) => {
            let mut s = csv_line(columns.iter().map(|c| c.to_string()));
            for r in rows {
                s += &csv_line(r.iter().map(|c| c.clone().unwrap_or_default()));
            }
            s
        }
    }
}

pub fn emit(text: &str, path: Option<&std::path::Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
