//! `--config` files: a flat JSON object whose keys mirror the long options
//! (snake_case). Command-line values override file values.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{read_file, CliError, CliResult};

pub type ConfigMap = Map<String, Value>;

pub fn load(path: &Path) -> CliResult<ConfigMap> {
    let text = read_file(path)?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::parse(path.display().to_string(), "config must be a JSON object")),
        Err(e) => Err(CliError::parse(path.display().to_string(), e.to_string())),
    }
}

/// Overlays the explicitly given options of `cli` (non-null, non-false) on
/// the config defaults.
pub fn merge<T: Serialize + DeserializeOwned>(cli: &T, config: &ConfigMap) -> CliResult<T> {
    let mut merged = config.clone();
    if let Value::Object(given) = serde_json::to_value(cli).expect("options serialize") {
        for (key, value) in given {
            if !(value.is_null() || value == Value::Bool(false)) {
                merged.insert(key, value);
            }
        }
    }
    serde_json::from_value(Value::Object(merged.clone())).map_err(|e| {
        // Find the key responsible; every option is optional on its own.
        let culprit = merged
            .iter()
            .find(|(k, v)| {
                let single: ConfigMap = [((*k).clone(), (*v).clone())].into_iter().collect();
                serde_json::from_value::<T>(Value::Object(single)).is_err()
            })
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| "<config>".to_string());
        CliError::config(culprit, e.to_string())
    })
}
