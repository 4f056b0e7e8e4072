//! Rendering of command results as JSON, CSV or plain text.

use std::io::Write;

use anyhow::{Context, Result};

use crate::config::{Format, RunConfig};

/// A command result that knows how to render itself in each format.
pub trait Render {
    fn json(&self) -> String;
    fn csv(&self) -> Result<String>;
    fn pretty(&self) -> String;
}

/// A flat table, rendered as CSV directly.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

pub fn render(format: Format, r: &impl Render) -> Result<String> {
    Ok(match format {
        Format::Json => r.json(),
        Format::Csv => r.csv()?,
        Format::Pretty => r.pretty(),
    })
}

/// Writes the rendered result to `--out` or stdout.
pub fn emit(cfg: &RunConfig, r: &impl Render) -> Result<()> {
    let mut text = render(cfg.format, r)?;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}
