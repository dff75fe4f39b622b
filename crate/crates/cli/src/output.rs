//! Artifact emission: JSON and CSV to stdout or a file, with an optional
//! generation-time metadata line suppressed by `--deterministic`.
//!
//! JSON objects are emitted with sorted keys; CSV rows are emitted in the
//! order produced by the library. Neither depends on thread schedule, so
//! reruns with the same seed are byte-identical (up to the metadata line).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::errors::CliError;

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn write_artifact(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// Emit a serializable value as pretty JSON (sorted keys).
pub fn emit_json<T: Serialize>(
    value: &T,
    out: Option<&Path>,
    deterministic: bool,
) -> Result<(), CliError> {
    let mut v = serde_json::to_value(value)
        .map_err(|e| CliError::Runtime(format!("serialization failed: {e}")))?;
    if !deterministic {
        if let Value::Object(map) = &mut v {
            map.insert("generated_at_unix".to_string(), Value::from(unix_now()));
        }
    }
    let mut text = serde_json::to_string_pretty(&v)
        .map_err(|e| CliError::Runtime(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_artifact(out, &text)
}

/// Emit CSV text, appending a `# generated_at_unix=...` trailer unless
/// running deterministically.
pub fn emit_csv(csv: &str, out: Option<&Path>, deterministic: bool) -> Result<(), CliError> {
    if deterministic {
        write_artifact(out, csv)
    } else {
        let text = format!("{csv}# generated_at_unix={}\n", unix_now());
        write_artifact(out, &text)
    }
}

/// Derive the two output paths for a matrix pair: the suffix goes before
/// the extension when one exists (`pair.json` -> `pair.A.json`), after the
/// name otherwise (`pair` -> `pair.A`).
pub fn pair_paths(out: &Path) -> (PathBuf, PathBuf) {
    match (out.file_stem(), out.extension()) {
        (Some(stem), Some(ext)) => {
            let stem = stem.to_string_lossy();
            let ext = ext.to_string_lossy();
            (
                out.with_file_name(format!("{stem}.A.{ext}")),
                out.with_file_name(format!("{stem}.B.{ext}")),
            )
        }
        _ => {
            let name = out.to_string_lossy();
            (
                PathBuf::from(format!("{name}.A")),
                PathBuf::from(format!("{name}.B")),
            )
        }
    }
}
