//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &["nt", "nr", "eta", "ps", "corr", "snr_db", "modes", "mc_n", "seed", "out"];

/// Parsed file contents; keys use underscores, `-` is accepted as a synonym.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are skipped; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
            let key = k.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key '{}'", n + 1, k.trim())));
            }
            if values.insert(key, v.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("config line {}: key '{}' repeated", n + 1, k.trim())));
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parses `key` with `parse`, reporting failures as configuration errors.
    pub fn parsed<T, F>(&self, key: &str, parse: F) -> CliResult<Option<T>>
    where
        F: Fn(&str) -> Result<T, String>,
    {
        self.get(key)
            .map(|v| parse(v).map_err(|e| CliError::Config(format!("config key {key}: {e}"))))
            .transpose()
    }
}
