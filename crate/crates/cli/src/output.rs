//! Table emission: CSV with a `#` provenance line, or JSON.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Ordered `key=value` facts about how a table was produced.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Provenance::default();
        p.push("ccdm", env!("CARGO_PKG_VERSION"));
        p.push("command", command);
        p
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn line(&self) -> String {
        let body: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("# {}", body.join(" "))
    }

    fn json(&self) -> Value {
        Value::Object(
            self.entries
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        )
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

pub fn render<T: Serialize>(
    rows: &[T],
    prov: &Provenance,
    format: Format,
) -> anyhow::Result<String> {
    let values: Vec<Map<String, Value>> = rows
        .iter()
        .map(|r| match serde_json::to_value(r) {
            Ok(Value::Object(m)) => Ok(m),
            Ok(other) => anyhow::bail!("row is not a record: {other}"),
            Err(e) => Err(e.into()),
        })
        .collect::<anyhow::Result<_>>()?;
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "provenance": prov.json(),
                "rows": values,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut out = prov.line();
            out.push('\n');
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = values.first() {
                w.write_record(first.keys())?;
            }
            for row in &values {
                w.write_record(row.values().map(cell))?;
            }
            out.push_str(std::str::from_utf8(&w.into_inner()?)?);
            Ok(out)
        }
    }
}

/// Where a table goes: an explicit file, a file named after the command in
/// the default output directory, or stdout.
pub fn destination(
    out: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    stem: &str,
    format: Format,
) -> Option<PathBuf> {
    out.or_else(|| out_dir.map(|d| d.join(format!("{stem}.{}", format.extension()))))
}

pub fn emit(text: &str, dest: Option<PathBuf>) -> anyhow::Result<()> {
    match dest {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        n: usize,
        counts: Vec<usize>,
        label: &'static str,
    }

    #[test]
    fn csv_has_provenance_header_and_flattened_lists() {
        let rows = [Row {
            n: 4,
            counts: vec![2, 1, 1],
            label: "a,b",
        }];
        let mut p = Provenance::new("test");
        p.push("seed", 7);
        let text = render(&rows, &p, Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# ccdm="));
        assert!(lines[0].ends_with("command=test seed=7"));
        assert_eq!(lines[1], "n,counts,label");
        assert_eq!(lines[2], "4,2 1 1,\"a,b\"");
    }

    #[test]
    fn json_keeps_rows() {
        let rows = [Row {
            n: 1,
            counts: vec![],
            label: "x",
        }];
        let text = render(&rows, &Provenance::new("t"), Format::Json).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["n"], 1);
        assert_eq!(v["provenance"]["command"], "t");
    }
}
