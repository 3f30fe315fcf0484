use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Items plus an optional flat table for CSV.
pub struct Report {
    command: String,
    pub seed: u64,
    items: Vec<Value>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: String, header: Vec<&'static str>) -> Self {
        Report {
            command,
            seed: 0,
            items: Vec::new(),
            header,
            rows: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn push(&mut self, item: Value, row: Vec<String>) {
        self.items.push(item);
        self.rows.push(row);
    }

    pub fn push_item(&mut self, item: Value) {
        self.items.push(item);
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn summary(&mut self, key: &str, n: usize) {
        self.extra.insert(key.to_string(), json!(n));
    }

    pub fn attach(&mut self, key: &str, v: Value) {
        self.extra.insert(key.to_string(), v);
    }

    fn count(&self, status: &str) -> usize {
        self.items.iter().filter(|i| i["status"] == status).count()
    }

    pub fn failed(&self) -> bool {
        self.count("fail") > 0
    }

    fn to_json(&self) -> Value {
        let mut m = self.extra.clone();
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(self.command));
        m.insert("seed".into(), json!(self.seed));
        m.insert("items".into(), Value::Array(self.items.clone()));
        m.insert(
            "totals".into(),
            json!({
                "pass": self.count("pass"),
                "fail": self.count("fail"),
                "undetermined": self.count("undetermined"),
                "items": self.items.len(),
            }),
        );
        Value::Object(m)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                // serde_json maps are ordered by key
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Text => {
                writeln!(out, "srg {} : {}", env!("CARGO_PKG_VERSION"), self.command)?;
                if !self.rows.is_empty() {
                    writeln!(out, "{}", self.header.join("\t"))?;
                    for r in &self.rows {
                        writeln!(out, "{}", r.join("\t"))?;
                    }
                } else {
                    for i in &self.items {
                        let line: Vec<String> = i
                            .as_object()
                            .into_iter()
                            .flatten()
                            .filter(|(_, v)| v.is_string() || v.is_number() || v.is_boolean())
                            .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                            .collect();
                        writeln!(out, "{}", line.join(" "))?;
                    }
                }
                writeln!(
                    out,
                    "pass {} fail {} undetermined {}",
                    self.count("pass"),
                    self.count("fail"),
                    self.count("undetermined")
                )
            }
        }
    }
}
