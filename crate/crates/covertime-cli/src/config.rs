//! Key=value experiment manifests.
//!
//! A manifest holds the same settings as the command-line flags, one
//! `key=value` pair per line, with `#` comments and blank lines allowed.
//! Flags always override manifest entries, so a checked-in manifest can
//! pin an experiment while the command line tweaks one knob at a time.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use covertime::{Error, Result};

/// Every key any subcommand understands. Unknown keys are rejected at
/// load time so a typo cannot silently fall back to a default.
const KNOWN_KEYS: &[&str] = &[
    "graph", "gen", "strategies", "tau-min", "tau-max", "tau-step", "trials",
    "budget", "budgets", "rwc-d", "starts", "seed", "threads", "out",
    "strategy", "tau", "start", "weight", "theta", "n",
];

/// A parsed manifest: raw values by key, with source line numbers for
/// error reporting.
#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: HashMap<String, (String, usize)>,
}

impl ConfigMap {
    /// A manifest with no entries; every lookup misses.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Loads and validates a manifest file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(Error::Parse {
                line,
                message: format!("expected key=value, got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown config key {key:?}"),
                });
            }
            if let Some((_, first)) = entries.insert(key.to_owned(), (value.to_owned(), line))
            {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key {key:?}, first set on line {first}"),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Raw value of `key` when present.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(value, _)| value.as_str())
    }

    /// Parses the value of `key` when present.
    pub fn get_parsed<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((value, line)) => value.parse().map(Some).map_err(|e: T::Err| Error::Parse {
                line: *line,
                message: format!("{key}={value}: {e}"),
            }),
        }
    }
}
