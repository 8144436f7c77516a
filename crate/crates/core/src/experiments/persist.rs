//! CSV + JSON sidecar storage for trial results.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which round-trips
//! every finite `f64` exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, TrialResult};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 6] = ["trial", "T", "centered", "alpha_star", "v_sq_sorted", "wall_time_s"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema_version: u32,
    pub n: u64,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub y_grid: Vec<f64>,
    pub workers: usize,
    /// RFC 3339 start time; `None` unless timings were recorded.
    pub started_at: Option<String>,
    pub code_version: String,
}

impl Sidecar {
    pub fn from_config(cfg: &ExperimentConfig, started_at: Option<String>) -> Self {
        Sidecar {
            schema_version: SCHEMA_VERSION,
            n: cfg.n,
            m: cfg.m,
            trials: cfg.trials,
            seed: cfg.seed,
            y_grid: cfg.y_grid.clone(),
            workers: cfg.workers.0,
            started_at,
            code_version: crate::CODE_VERSION.to_string(),
        }
    }
}

/// Path of the sidecar belonging to `csv_path`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn join<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(";")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("{kind:?}"),
        },
    }
}

/// Render `results` as CSV text.
pub fn to_csv(results: &[TrialResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing to a Vec cannot fail
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in results {
        w.write_record([
            r.trial.to_string(),
            fmt_real(r.t),
            fmt_real(r.centered),
            join(&r.alpha_star, |i| i.to_string()),
            join(&r.v_sq_sorted, |v| fmt_real(*v)),
            fmt_real(r.wall_time),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Write `results` to `csv_path` and `sidecar` next to it.
pub fn persist(results: &[TrialResult], sidecar: &Sidecar, csv_path: &Path) -> Result<()> {
    fs::write(csv_path, to_csv(results)).map_err(io_err(csv_path))?;
    let json_path = sidecar_path(csv_path);
    let mut json = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    json.push('\n');
    fs::write(&json_path, json).map_err(io_err(&json_path))
}

/// Inverse of [`persist`].
pub fn load(csv_path: &Path) -> Result<(Vec<TrialResult>, Sidecar)> {
    let json_path = sidecar_path(csv_path);
    if !json_path.exists() {
        return Err(Error::invalid(format!(
            "sidecar {} not found next to {}",
            json_path.display(),
            csv_path.display()
        )));
    }
    let text = fs::read_to_string(&json_path).map_err(io_err(&json_path))?;
    let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: json_path.clone(),
        line: e.line(),
        msg: e.to_string(),
    })?;

    let mut rdr = csv::Reader::from_path(csv_path).map_err(|e| csv_err(csv_path, e))?;
    let header = rdr.headers().map_err(|e| csv_err(csv_path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            path: csv_path.to_path_buf(),
            line: 1,
            msg: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(csv_path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |msg: String| Error::Parse {
            path: csv_path.to_path_buf(),
            line,
            msg,
        };
        let real = |field: usize| -> Result<f64> {
            rec[field]
                .parse()
                .map_err(|_| bad(format!("column {} is not a number: {:?}", CSV_HEADER[field], &rec[field])))
        };
        let list = |field: usize| rec[field].split(';').filter(|s| !s.is_empty());
        let alpha_star = list(3)
            .map(|s| s.parse::<usize>().map_err(|_| bad(format!("bad index {s:?} in alpha_star"))))
            .collect::<Result<Vec<_>>>()?;
        let v_sq_sorted = list(4)
            .map(|s| s.parse::<f64>().map_err(|_| bad(format!("bad value {s:?} in v_sq_sorted"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(TrialResult {
            trial: rec[0].parse().map_err(|_| bad(format!("bad trial index {:?}", &rec[0])))?,
            t: real(1)?,
            centered: real(2)?,
            alpha_star,
            v_sq_sorted,
            wall_time: real(5)?,
        });
    }
    Ok((out, sidecar))
}
