use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};

pub const SCHEMA_VERSION: u32 = 1;

/// A CSV table inside a report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }

    /// Adds a `quantity,value` row.
    pub fn kv(&mut self, key: &str, value: impl ToString) {
        self.push([key.to_string(), value.to_string()]);
    }
}

/// Everything a command produces: JSON data, the same content as CSV
/// tables, and warnings.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub data: Value,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    schema: u32,
    command: &'a str,
    threads: Option<usize>,
    config: &'a ExperimentConfig,
}

pub fn render(
    report: &Report,
    command: &str,
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> String {
    let meta = Meta {
        tool: "cmloops",
        version: env!("CARGO_PKG_VERSION"),
        schema: SCHEMA_VERSION,
        command,
        threads,
        config,
    };
    match config.format {
        Format::Json => {
            let mut data = report.data.clone();
            if let Value::Object(map) = &mut data {
                map.insert("warnings".into(), json!(report.warnings));
            }
            let doc = json!({ "meta": meta, "data": data });
            let mut s = serde_json::to_string_pretty(&doc).expect("reports are valid JSON");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# tool: cmloops {}", meta.version);
            let _ = writeln!(s, "# schema: {SCHEMA_VERSION}");
            let _ = writeln!(s, "# command: {command}");
            match threads {
                Some(t) => {
                    let _ = writeln!(s, "# threads: {t}");
                }
                None => s.push_str("# threads: default\n"),
            }
            let _ = writeln!(s, "# config: {}", serde_json::to_string(config).expect("config is valid JSON"));
            for w in &report.warnings {
                let _ = writeln!(s, "# warning: {w}");
            }
            for (i, t) in report.tables.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                let _ = writeln!(s, "[{}]", t.name);
                let _ = writeln!(s, "{}", t.header.join(","));
                for row in &t.rows {
                    let _ = writeln!(s, "{}", row.join(","));
                }
            }
            s
        }
    }
}

/// The part of an output that must not depend on anything but the config
/// and seed: the `data` object for JSON, every non-comment line for CSV.
pub fn data_section(output: &str, format: Format) -> String {
    match format {
        Format::Json => {
            let v: Value = serde_json::from_str(output).unwrap_or(Value::Null);
            serde_json::to_string(&v["data"]).unwrap_or_default()
        }
        Format::Csv => output
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}
