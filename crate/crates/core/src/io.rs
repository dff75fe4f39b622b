//! Matrix serialization.
//!
//! Two interchangeable forms:
//!
//! * **text** — first line `d m`, then `d` lines of `m` space-separated
//!   decimals. Values are written with 17 significant digits, which
//!   round-trips every finite `f64` exactly.
//! * **JSON** — `{"rows": d, "cols": m, "entries": [...]}` (row-major),
//!   via serde.
//!
//! Parsers report the 1-based line number of the first offending line.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Format a float with 17 significant digits (exact `f64` round-trip).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render the text form.
pub fn render_matrix_text(m: &DenseMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|&v| format_f64(v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the text form. Line 1 is the header; data rows follow.
pub fn parse_matrix_text(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "empty input".to_string(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            reason: format!("header must be `rows cols`, got {} tokens", dims.len()),
        });
    }
    let rows: usize = dims[0].parse().map_err(|_| Error::Parse {
        line: 1,
        reason: format!("bad row count `{}`", dims[0]),
    })?;
    let cols: usize = dims[1].parse().map_err(|_| Error::Parse {
        line: 1,
        reason: format!("bad column count `{}`", dims[1]),
    })?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: 1,
            reason: format!("dimensions must be positive, got {rows}x{cols}"),
        });
    }

    let mut entries = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if seen_rows == rows {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("more than {rows} data rows"),
            });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected {cols} values, found {}", tokens.len()),
            });
        }
        for tok in tokens {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("bad float `{tok}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("non-finite value `{tok}`"),
                });
            }
            entries.push(v);
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(Error::Parse {
            line: seen_rows + 1,
            reason: format!("expected {rows} data rows, found {seen_rows}"),
        });
    }
    DenseMatrix::new(rows, cols, entries)
}
