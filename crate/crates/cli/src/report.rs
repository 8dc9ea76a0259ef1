use andre_core::Check;
use serde::Serialize;

use crate::args::Format;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub q: u32,
    pub subcommand: &'static str,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    pub runtime_seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let rows: Vec<[String; 4]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    c.expected.to_string(),
                    c.actual.to_string(),
                    if c.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let header = ["check", "expected", "actual", "status"].map(String::from);
        let mut widths = header.clone().map(|h| h.len());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String; 4]| {
            format!(
                "{:<w0$}  {:>w1$}  {:>w2$}  {}",
                cells[0],
                cells[1],
                cells[2],
                cells[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
            )
        };
        let mut out = format!(
            "{} q={} (schema {})\n",
            self.subcommand, self.q, self.schema
        );
        out.push_str(&line(&header));
        out.push('\n');
        for row in &rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        if !self.data.is_null() {
            out.push_str(&format!("data: {}\n", self.data));
        }
        out.push_str(&format!(
            "{}: {}/{} checks passed in {:.3} s\n",
            if self.passed() { "OK" } else { "FAILED" },
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            self.runtime_seconds
        ));
        out
    }
}
