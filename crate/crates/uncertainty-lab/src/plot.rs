//! Columnar plot data derived from run reports: plain numeric columns,
//! rendering left to external tools.

use std::path::{Path, PathBuf};

use torus_lab::error::{Error, Result};

#[derive(Debug)]
pub struct PlotArtifacts {
    pub files: Vec<PathBuf>,
}

/// Reads a run report, loads its CSV, and emits one data file per figure:
/// `(log(1/γ), log(1/λ_min))` pairs for density sweeps, `(L, value)` pairs
/// for scale sweeps, and a slack histogram for lemma suites.
pub fn emit_plot_data(report_path: &Path, out_dir: &Path) -> Result<PlotArtifacts> {
    let report = std::fs::read_to_string(report_path)
        .map_err(|e| Error::Parse(format!("cannot read report {}: {e}", report_path.display())))?;
    let mut kind = None;
    let mut csv_name = None;
    for line in report.lines() {
        if let Some(rest) = line.strip_prefix("kind ") {
            kind = Some(rest.trim().to_string());
        }
        if let Some(rest) = line.strip_prefix("csv ") {
            csv_name = Some(rest.trim().to_string());
        }
    }
    let kind = kind.ok_or_else(|| Error::Parse("report has no `kind` line".into()))?;
    let csv_name = csv_name.ok_or_else(|| Error::Parse("report has no `csv` line".into()))?;
    let csv_path = report_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&csv_name);
    let csv = std::fs::read_to_string(&csv_path)
        .map_err(|e| Error::Parse(format!("cannot read csv {}: {e}", csv_path.display())))?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Parse(format!("cannot create output dir: {e}")))?;
    let mut files = Vec::new();
    match kind.as_str() {
        "gamma-sweep" => {
            let body = columns(&csv, &[1, 2])?
                .iter()
                .map(|cols| {
                    format!("{:?} {:?}\n", (1.0 / cols[0]).ln(), (1.0 / cols[1]).ln())
                })
                .collect::<String>();
            files.push(write_file(out_dir, "gamma_fit.dat", &body)?);
        }
        "scale-sweep" => {
            let body = columns(&csv, &[0, 1])?
                .iter()
                .map(|cols| format!("{:?} {:?}\n", cols[0], cols[1]))
                .collect::<String>();
            files.push(write_file(out_dir, "scale.dat", &body)?);
        }
        "lemma-suite" => {
            let slacks: Vec<f64> = columns(&csv, &[7])?.iter().map(|c| c[0]).collect();
            files.push(write_file(out_dir, "lemma_slack_hist.dat", &histogram(&slacks, 20))?);
        }
        other => {
            return Err(Error::Parse(format!("no plot data defined for kind `{other}`")));
        }
    }
    Ok(PlotArtifacts { files })
}

/// Extracts numeric columns from a CSV body (header skipped); an empty body
/// yields no rows.
fn columns(csv: &str, indices: &[usize]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let mut row = Vec::with_capacity(indices.len());
        for &idx in indices {
            let field = fields.get(idx).ok_or_else(|| {
                Error::Parse(format!("csv row {} lacks column {idx}", i + 1))
            })?;
            row.push(
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("csv row {}: bad number `{field}`", i + 1)))?,
            );
        }
        out.push(row);
    }
    Ok(out)
}

fn histogram(values: &[f64], bins: usize) -> String {
    if values.is_empty() {
        return String::new();
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(1e-12);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{:?} {}\n", lo + i as f64 * width, c))
        .collect()
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, body)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
