//! Result files: results.csv, results.md, trials.jsonl, run-manifest.json.
//!
//! Everything written here is a pure function of the sweep results, which
//! are themselves a pure function of the config — wall-clock numbers stay on
//! stdout so reruns produce bit-identical files.

use super::config::{ExperimentConfig, RunManifest};
use super::sweep::{SweepCell, SweepRun, TrialRecord};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub const CSV_HEADER: &str = "n,L,k,T,successRate,avgErrorLength,seed";

/// Shortest decimal that round-trips; Rust's float Display already does
/// this, we just pin the choice in one place.
fn fmt_rate(x: f64) -> String {
    format!("{x}")
}

pub fn render_csv(cells: &[SweepCell], seed: u64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.n,
            c.l,
            c.k,
            c.trials,
            fmt_rate(c.success_rate()),
            fmt_rate(c.avg_error_length()),
            seed
        )
        .expect("string write");
    }
    out
}

/// One parsed data row of results.csv.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub n: u32,
    pub l: u32,
    pub k: u32,
    pub trials: u32,
    pub success_rate: f64,
    pub avg_error_length: f64,
    pub seed: u64,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::Config(format!(
                "bad results.csv header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Config(format!("csv row {}: want 7 fields", i + 2)));
        }
        let parse_err = |what: &str| Error::Config(format!("csv row {}: bad {what}", i + 2));
        rows.push(CsvRow {
            n: fields[0].parse().map_err(|_| parse_err("n"))?,
            l: fields[1].parse().map_err(|_| parse_err("L"))?,
            k: fields[2].parse().map_err(|_| parse_err("k"))?,
            trials: fields[3].parse().map_err(|_| parse_err("T"))?,
            success_rate: fields[4].parse().map_err(|_| parse_err("successRate"))?,
            avg_error_length: fields[5]
                .parse()
                .map_err(|_| parse_err("avgErrorLength"))?,
            seed: fields[6].parse().map_err(|_| parse_err("seed"))?,
        });
    }
    Ok(rows)
}

/// "(P%, E)": integer percent, error to two decimals with trailing zeros
/// trimmed.
pub fn format_cell(success_rate: f64, avg_error_length: f64) -> String {
    let mut e = format!("{avg_error_length:.2}");
    while e.ends_with('0') {
        e.pop();
    }
    if e.ends_with('.') {
        e.pop();
    }
    format!("({:.0}%, {})", success_rate * 100.0, e)
}

/// Markdown summary table: rows = L, columns = k, plus a per-row
/// monotonicity flag (reported, not asserted).
pub fn render_markdown(config: &ExperimentConfig, cells: &[SweepCell]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# Attack sweep: {:?}, n={}, T={} trials/cell, seed={}",
        config.group, config.n, config.trials, config.seed
    )
    .expect("string write");
    out.push('\n');
    writeln!(
        out,
        "Cells are (success %, avg error length); success counts exact secret recovery only."
    )
    .expect("string write");
    out.push('\n');

    let mut header: Vec<String> = vec!["L\\k".into()];
    header.extend(config.k_grid.iter().map(|k| k.to_string()));
    header.push("k-monotone".into());

    let mut body: Vec<Vec<String>> = Vec::new();
    for &l in &config.l_grid {
        let mut row = vec![l.to_string()];
        let mut rates = Vec::new();
        for &k in &config.k_grid {
            let cell = cells
                .iter()
                .find(|c| c.l == l && c.k == k)
                .expect("cell for every grid point");
            rates.push(cell.success_rate());
            row.push(format_cell(cell.success_rate(), cell.avg_error_length()));
        }
        let monotone = rates.windows(2).all(|w| w[0] <= w[1]);
        row.push(if monotone { "yes" } else { "no" }.into());
        body.push(row);
    }

    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let fmt_row = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        format!("| {} |", padded.join(" | "))
    };
    writeln!(out, "{}", fmt_row(&header)).expect("string write");
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    writeln!(out, "|-{}-|", rule.join("-|-")).expect("string write");
    for row in &body {
        writeln!(out, "{}", fmt_row(row)).expect("string write");
    }
    out
}

pub fn render_trials_jsonl(records: &[TrialRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn read_trials_jsonl(reader: impl Read) -> Result<Vec<TrialRecord>> {
    let mut records = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}

/// Write the four artifacts; returns the file names written.
pub fn write_run(dir: &Path, config: &ExperimentConfig, run: &SweepRun) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let manifest = RunManifest::for_config(config);
    let files = [
        ("results.csv", render_csv(&run.cells, config.seed)),
        ("results.md", render_markdown(config, &run.cells)),
        ("trials.jsonl", render_trials_jsonl(&run.records)?),
        (
            "run-manifest.json",
            format!("{}\n", serde_json::to_string_pretty(&manifest)?),
        ),
    ];
    let mut written = Vec::new();
    for (name, contents) in files {
        let mut f = std::fs::File::create(dir.join(name))?;
        f.write_all(contents.as_bytes())?;
        written.push(name.to_string());
    }
    Ok(written)
}
