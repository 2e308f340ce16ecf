//! CSV ingestion and emission.
//!
//! Input files are UTF-8 CSV with a header row and two columns `label,value`.
//! All numeric output uses Rust's shortest round-trip float formatting, so
//! every emitted value parses back to the identical f64.

use crate::error::{CliError, CliResult};
use greyinn::TimeSeries;
use std::path::Path;

pub struct SeriesFile {
    pub labels: Vec<String>,
    pub series: TimeSeries,
}

pub fn read_series(path: &Path) -> CliResult<SeriesFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Usage(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != 2 {
        return Err(CliError::Usage(format!(
            "{}: expected a two-column `label,value` header, got {header:?}",
            path.display()
        )));
    }
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (label, value) = line.split_once(',').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: missing comma", path.display(), lineno + 2))
        })?;
        let v: f64 = value.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{}:{}: cannot parse {value:?} as a real number",
                path.display(),
                lineno + 2
            ))
        })?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!(
                "{}:{}: non-finite value",
                path.display(),
                lineno + 2
            )));
        }
        labels.push(label.trim().to_string());
        values.push(v);
    }
    let series = TimeSeries::new(values)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(SeriesFile { labels, series })
}

/// Shortest decimal representation that round-trips to the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Labels for forecast rows continuing the input labels: numeric labels are
/// incremented, anything else falls back to `t<index>`.
pub fn continue_labels(labels: &[String], total_len: usize, horizon: usize) -> Vec<String> {
    let numeric_base = labels.last().and_then(|l| l.parse::<i64>().ok());
    (1..=horizon)
        .map(|i| match numeric_base {
            Some(base) => (base + i as i64).to_string(),
            None => format!("t{}", total_len + i),
        })
        .collect()
}

/// An in-memory output file, written only after the whole command succeeds.
pub struct OutFile {
    pub name: String,
    pub content: String,
}

pub fn write_all(out_dir: &Path, files: &[OutFile]) -> CliResult<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
    for f in files {
        std::fs::write(out_dir.join(&f.name), &f.content)?;
    }
    Ok(())
}

/// Render rows as an aligned plain-text table.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    out.push_str(&fmt_row(&head, &widths));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}
