use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{RunOutput, Summary, TrialReport};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 16] = [
    "algorithm",
    "n",
    "k",
    "eps0",
    "eps1",
    "eps2",
    "eps_edge_total",
    "eps_entire_total",
    "d_tilde_policy",
    "d_tilde_used",
    "trial",
    "truth",
    "estimate",
    "l2",
    "relative_error",
    "seconds",
];

/// Writes one row per report. `seconds` is 0 unless `timings` is set, so
/// that identical runs produce identical bytes.
pub fn write_reports_csv<W: Write>(out: W, reports: &[TrialReport], policy: &str, timings: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(fail)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in reports {
        let b = &r.budget;
        w.write_record([
            r.algorithm.to_string(),
            r.n.to_string(),
            opt(r.k.map(|k| k.to_string())),
            b.eps0.to_string(),
            b.eps1.to_string(),
            b.eps2.to_string(),
            b.edge_ldp_total().to_string(),
            b.entire_edge_ldp_total().to_string(),
            if r.d_tilde_used.is_some() { policy.to_string() } else { String::new() },
            opt(r.d_tilde_used.map(|d| d.to_string())),
            r.trial.to_string(),
            r.truth.to_string(),
            r.estimate.to_string(),
            r.l2.to_string(),
            r.relative_error.to_string(),
            if timings { r.wall_time.to_string() } else { "0".to_string() },
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))
}

fn summary_json(s: &Summary) -> serde_json::Value {
    serde_json::to_value(s).expect("summary is plain data")
}

/// Writes `PREFIX.csv` and `PREFIX.summary.json`, plus the per-estimator
/// CSVs of a clustering run. Returns the paths written.
pub fn write_outputs(prefix: &Path, run: &RunOutput, timings: bool) -> Result<Vec<PathBuf>> {
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    let with_suffix = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let policy = run.config.d_tilde.label();
    let mut written = Vec::new();
    let mut csv_file = |suffix: &str, reports: &[TrialReport]| -> Result<()> {
        let path = with_suffix(suffix);
        let file = File::create(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
        write_reports_csv(BufWriter::new(file), reports, policy, timings)?;
        written.push(path);
        Ok(())
    };
    csv_file(".csv", &run.reports)?;
    if let Some(parts) = &run.parts {
        csv_file(".triangles.csv", &parts.triangles)?;
        csv_file(".two_stars.csv", &parts.two_stars)?;
    }

    let mut summary = json!({
        "config": run.config.echo(),
        "trials": run.summary.trials,
        "mean_l2": run.summary.mean_l2,
        "mean_relative_error": run.summary.mean_relative_error,
        "stddev_l2": run.summary.stddev_l2,
        "mean_estimate": run.summary.mean_estimate,
        "truth_mean": run.summary.truth_mean,
        "l2_bound_order_only": run.order_only_l2_bound,
        "wall_seconds": run.wall_seconds,
    });
    if let Some(parts) = &run.parts {
        summary["parts"] = json!({
            "triangles": summary_json(&Summary::of(&parts.triangles)),
            "two_stars": summary_json(&Summary::of(&parts.two_stars)),
        });
    }
    let path = with_suffix(".summary.json");
    let io = |source| Error::Io { path: path.clone(), source };
    let mut file = BufWriter::new(File::create(&path).map_err(io)?);
    serde_json::to_writer_pretty(&mut file, &summary).map_err(|e| Error::Output(e.to_string()))?;
    file.write_all(b"\n").and_then(|_| file.flush()).map_err(io)?;
    written.push(path);
    Ok(written)
}
