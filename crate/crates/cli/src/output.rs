use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::args::{Cli, Format};

/// What a command produced: the JSON result, a flat table for CSV, and
/// whether every check passed.
pub struct Output {
    pub command: &'static str,
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(out: &Output) -> String {
    let mut text = out.header.join(",");
    text.push('\n');
    for row in &out.rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

fn render_json(cli: &Cli, out: &Output) -> Result<String> {
    let mut doc = json!({
        "tool": "lcdk",
        "version": env!("CARGO_PKG_VERSION"),
        "command": out.command,
        "seed": cli.seed,
        "passed": out.passed,
        "result": out.result,
    });
    if let Some(t) = cli.tolerance {
        doc["tolerance"] = json!(t);
    }
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc["timestamp"] = json!(secs);
    }
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Writes the report; returns whether the run passed.
pub fn emit(cli: &Cli, out: Output) -> Result<bool> {
    let text = match cli.format {
        Format::Json => render_json(cli, &out)?,
        Format::Csv => render_csv(&out),
    };
    match &cli.report {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(out.passed)
}
