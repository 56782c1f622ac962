//! Record emission with a provenance header, as CSV (default) or JSON.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to regenerate an output file: tool version, command and config echo.
#[derive(Debug, Clone)]
pub struct Provenance {
    command: String,
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), entries: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn csv_header(&self) -> String {
        let mut s = format!("# {} {}\n# command: {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.entries {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s
    }

    fn json(&self) -> serde_json::Value {
        let config: serde_json::Map<String, serde_json::Value> =
            self.entries.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": config,
        })
    }
}

pub fn render<R: Serialize>(prov: &Provenance, records: &[R], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut buf = prov.csv_header().into_bytes();
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            drop(w);
            Ok(buf)
        }
        Format::Json => {
            let doc = serde_json::json!({ "provenance": prov.json(), "records": records });
            let mut buf = serde_json::to_vec_pretty(&doc)?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

pub fn emit<R: Serialize>(prov: &Provenance, records: &[R], format: Format, out: Option<&Path>) -> CliResult<()> {
    let bytes = render(prov, records, format)?;
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
