//! Deterministic serialization of trajectories, geometry summaries and
//! connection samples.
//!
//! Numeric CSV payloads are written with 17 significant digits and LF line
//! endings, so re-running an identical configuration reproduces byte-identical
//! files. Reports are JSON with the key order fixed by struct declaration
//! order; floats use round-trip precision.

use crate::connection::{ConnectionParams, ConnectionSample, ResidualSummary, StopReason};
use crate::geometry::{GeometryReport, PssParams};
use crate::solver::{BlowupInfo, MonitorReport, Trajectory};
use crate::spectral::Field;
use crate::verify::CheckResult;
use serde::Serialize;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| ReportError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// 17-significant-digit decimal form used in every numeric CSV payload.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write one field as CSV with columns `x,value`.
pub fn write_field_csv(path: &Path, field: &Field) -> Result<(), ReportError> {
    let mut out = String::with_capacity(field.len() * 48);
    out.push_str("x,value\n");
    for (j, v) in field.values().iter().enumerate() {
        out.push_str(&fmt_g17(field.grid().point(j)));
        out.push(',');
        out.push_str(&fmt_g17(*v));
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

/// Write a whole trajectory: one `x,value` file per frame plus an index file
/// with columns `frame,t,file`. Returns the written paths.
pub fn write_trajectory(dir: &Path, trajectory: &Trajectory) -> Result<Vec<PathBuf>, ReportError> {
    let mut written = Vec::new();
    let mut index = String::from("frame,t,file\n");
    for (i, frame) in trajectory.frames.iter().enumerate() {
        let name = format!("frame_{i:06}.csv");
        let path = dir.join(&name);
        write_field_csv(&path, &frame.u)?;
        index.push_str(&format!("{i},{},{name}\n", fmt_g17(frame.t)));
        written.push(path);
    }
    let index_path = dir.join("index.csv");
    write_file(&index_path, index.as_bytes())?;
    written.push(index_path);
    Ok(written)
}

/// Fixed-bin histogram of a scalar sample set, for external plotting.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_samples(samples: impl Iterator<Item = f64>, bins: usize, lo: f64, hi: f64) -> Self {
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for s in samples {
            if s.is_finite() && s >= lo && s <= hi {
                let mut b = ((s - lo) / width) as usize;
                if b >= bins {
                    b = bins - 1;
                }
                counts[b] += 1;
            }
        }
        Self { lo, hi, counts }
    }

    /// CSV with columns `bin_lo,bin_hi,count`.
    pub fn write_csv(&self, path: &Path) -> Result<(), ReportError> {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        for (i, c) in self.counts.iter().enumerate() {
            let lo = self.lo + i as f64 * width;
            out.push_str(&format!("{},{},{c}\n", fmt_g17(lo), fmt_g17(lo + width)));
        }
        write_file(path, out.as_bytes())
    }
}

/// Scalar summary of one geometry branch on one frame.
#[derive(Debug, Clone, Serialize)]
pub struct GeometrySummary {
    pub t: f64,
    pub params: PssParams,
    pub generic_fraction: f64,
    pub wedge_max: f64,
    /// `max |K + 1|` over the generic mask, absent on fully non-generic frames.
    pub curvature_max_dev: Option<f64>,
    /// `max |r1 - E|` against the flow residual.
    pub r1_vs_e: f64,
    /// `max |r2 - mu E|`.
    pub r2_vs_mu_e: f64,
    /// `max |r3 - s sqrt(1+mu^2) r1|`.
    pub r3_vs_scaled_r1: f64,
    /// `max |Sigma11 + Sigma22|` (the matrix is trace-free identically).
    pub sigma_trace_max: f64,
    pub notice: Option<String>,
}

impl GeometrySummary {
    pub fn from_report(report: &GeometryReport, flow_residual: &Field) -> Self {
        let p = report.params;
        let sq = p.sign.value() * p.q();
        let r = &report.residuals;
        let curvature_max_dev = report.curvature.max_deviation_from_minus_one();
        let generic_fraction = report.curvature.genericity.generic_fraction;
        let notice = if generic_fraction == 0.0 {
            Some("non-generic frame: wedge vanishes, no curvature defined".to_string())
        } else {
            None
        };
        Self {
            t: report.t,
            params: p,
            generic_fraction,
            wedge_max: report.wedge.max_abs(),
            curvature_max_dev,
            r1_vs_e: r.r1.sub(flow_residual).max_abs(),
            r2_vs_mu_e: r.r2.sub(&flow_residual.scale(p.mu)).max_abs(),
            r3_vs_scaled_r1: r.r3.sub(&r.r1.scale(sq)).max_abs(),
            sigma_trace_max: report.sigma[0][0].add(&report.sigma[1][1]).max_abs(),
            notice,
        }
    }
}

/// Connection-branch summary: the parameters, where the samples came from and
/// how well they satisfy the compatibility system.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionReport {
    pub params: ConnectionParams,
    pub z0: f64,
    pub z_end: f64,
    pub step: f64,
    pub n_samples: usize,
    pub stop: Option<StopReason>,
    pub residuals: ResidualSummary,
    pub samples_file: String,
}

/// Write connection samples as CSV with columns `z,a,b,c`.
pub fn write_samples_csv(path: &Path, samples: &[ConnectionSample]) -> Result<(), ReportError> {
    let mut out = String::from("z,a,b,c\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g17(s.z),
            fmt_g17(s.a),
            fmt_g17(s.b),
            fmt_g17(s.c)
        ));
    }
    write_file(path, out.as_bytes())
}

/// Identifies the code and configuration that produced a report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echo of the exact configuration, in config-file syntax.
    pub config: String,
    pub wall_ms: u128,
}

impl Provenance {
    pub fn new(command: String, config_echo: String, wall_ms: u128) -> Self {
        Self {
            tool: "psslab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: config_echo,
            wall_ms,
        }
    }
}

/// Everything one command run reports, in one JSON document.
#[derive(Debug, Serialize)]
pub struct ReportBundle {
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monitor: Option<MonitorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Vec<GeometrySummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckResult>>,
}

impl ReportBundle {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            provenance,
            monitor: None,
            blowup: None,
            geometry: None,
            connection: None,
            checks: None,
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<(), ReportError> {
        let mut buf = serde_json::to_vec_pretty(self)?;
        buf.push(b'\n');
        write_file(path, &buf)
    }
}

/// Write the configuration echo next to the report.
pub fn write_config_echo(path: &Path, toml_text: &str) -> Result<(), ReportError> {
    write_file(path, toml_text.as_bytes())
}

/// Append one line to a plain-text log, creating it if needed.
pub fn append_line(path: &Path, line: &str) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| ReportError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    writeln!(file, "{line}").map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}
