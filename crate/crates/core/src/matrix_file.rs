//! Plain-text matrix files: the dimension `d` on the first line, then `d`
//! lines of `d` whitespace-separated decimals. Blank lines are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Largest accepted `|a_ij − a_ji|`.
pub const SYMMETRY_TOL: f64 = 1e-12;

pub fn parse_matrix(text: &str, path: &Path) -> Result<SymMatrix> {
    let bad = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or_else(|| bad(1, "empty matrix file".into()))?;
    let d: usize = header
        .parse()
        .map_err(|_| bad(first, format!("expected the dimension, got {header:?}")))?;
    if d == 0 {
        return Err(bad(first, "dimension must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(d);
    for (line, l) in lines {
        if rows.len() == d {
            return Err(bad(line, format!("more than {d} rows")));
        }
        let row = l
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad(line, format!("not a finite number: {tok:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != d {
            return Err(bad(line, format!("expected {d} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != d {
        return Err(bad(text.lines().count(), format!("expected {d} rows, found {}", rows.len())));
    }
    SymMatrix::from_rows(&rows, SYMMETRY_TOL)
}

pub fn read_matrix(path: &Path) -> Result<SymMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text, path)
}
