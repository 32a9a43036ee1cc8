//! Plain-text matrix format.
//!
//! ```text
//! 2 3
//! 1 0 0.5
//! -2 1e-3 4
//! ```
//!
//! The header holds `rows cols`; each following line holds one row of
//! whitespace-separated decimals. Values are written with 17 significant
//! digits so a write/read cycle is lossless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Format a real with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| fmt_real(m[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_matrix(text: &str, source_name: &str) -> Result<Matrix> {
    let err = |line: usize, column: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        column,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, 1, "empty input, expected `rows cols` header".into()))?;
    let hdr = tokens(header);
    if hdr.len() != 2 {
        return Err(err(
            hline + 1,
            1,
            format!("header must be `rows cols`, found {} fields", hdr.len()),
        ));
    }
    let mut dims = [0usize; 2];
    for (k, (col, tok)) in hdr.iter().enumerate() {
        dims[k] = tok
            .parse()
            .map_err(|_| err(hline + 1, col + 1, format!("bad dimension `{tok}`")))?;
        if dims[k] == 0 {
            return Err(err(hline + 1, col + 1, "dimensions must be positive".into()));
        }
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (lno, line) = lines.next().ok_or_else(|| {
            err(
                text.lines().count() + 1,
                1,
                format!("expected {rows} rows, found {r}"),
            )
        })?;
        let toks = tokens(line);
        if toks.len() != cols {
            return Err(err(
                lno + 1,
                1,
                format!("expected {cols} values, found {}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            let v: f64 = tok
                .parse()
                .map_err(|_| err(lno + 1, col + 1, format!("bad number `{tok}`")))?;
            if !v.is_finite() {
                return Err(err(lno + 1, col + 1, format!("non-finite value `{tok}`")));
            }
            data.push(v);
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(err(lno + 1, 1, format!("trailing data after {rows} rows")));
    }
    Ok(Matrix::from_row_slice(rows, cols, &data))
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

pub fn read_matrix_file(path: &Path) -> Result<Matrix> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        source_name: name.clone(),
        line: 0,
        column: 0,
        message: format!("cannot read file: {e}"),
    })?;
    parse_matrix(&text, &name)
}

pub fn write_matrix_file(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, write_matrix(m))
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}
