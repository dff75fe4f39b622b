//! Optional JSON config files: `--config run.json` supplies parameter
//! values by name, and explicit flags override them.

use std::path::Path;

use serde_json::{Map, Value};

use crate::errors::CliError;

/// Parameter values loaded from `--config`, keyed by flag name.
#[derive(Debug, Default)]
pub struct ConfigMap(Map<String, Value>);

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        match value {
            Value::Object(map) => Ok(Self(map)),
            _ => Err(CliError::Parse(format!(
                "{}: config must be a JSON object",
                path.display()
            ))),
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn usize_value(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| bad_type(key, "a non-negative integer", v)),
        }
    }

    pub fn u64_value(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| bad_type(key, "a non-negative integer", v)),
        }
    }

    pub fn f64_value(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| bad_type(key, "a number", v)),
        }
    }

    pub fn string_value(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| bad_type(key, "a string", v)),
        }
    }

    pub fn bool_value(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_bool()
                .map(Some)
                .ok_or_else(|| bad_type(key, "a boolean", v)),
        }
    }
}

fn bad_type(key: &str, expected: &str, got: &Value) -> CliError {
    CliError::Parse(format!("config key `{key}` must be {expected}, got {got}"))
}

/// Flag value if given, else config value, else a usage error naming the
/// missing parameter.
pub fn require<T>(flag: Option<T>, from_config: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(from_config)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter `--{name}`")))
}
