//! Filesystem wrappers around the matrix formats: `.json` paths use the
//! JSON form, everything else the text form. Both round-trip exactly.

use std::path::Path;

use superpose_core::io::{parse_matrix_text, render_matrix_text};
use superpose_core::DenseMatrix;

use crate::errors::CliError;

fn is_json(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false)
}

pub fn load_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    } else {
        parse_matrix_text(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

pub fn save_matrix(m: &DenseMatrix, path: &Path) -> Result<(), CliError> {
    let text = if is_json(path) {
        let mut s = serde_json::to_string(m)
            .map_err(|e| CliError::Runtime(format!("serialization failed: {e}")))?;
        s.push('\n');
        s
    } else {
        render_matrix_text(m)
    };
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Plain list of floats, whitespace-separated, any number of lines.
pub fn load_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| {
                CliError::Parse(format!(
                    "{}: bad float `{tok}` at line {}",
                    path.display(),
                    idx + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Parse(format!(
                    "{}: non-finite value at line {}",
                    path.display(),
                    idx + 1
                )));
            }
            out.push(v);
        }
    }
    Ok(out)
}
