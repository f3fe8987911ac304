//! Flat `key = value` run files. Keys are the long flag names; a flag on the
//! command line (or its environment variable) beats the file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Every key any command understands.
pub const KNOWN_KEYS: &[&str] = &[
    "beta",
    "class",
    "dim",
    "format",
    "max-rank",
    "modes",
    "nu0",
    "nu1",
    "omega",
    "out-dir",
    "p",
    "points",
    "rank",
    "sample",
    "samples",
    "seed",
    "sequential",
    "steps",
    "support",
    "t-max",
];

pub fn parse_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(format!("line {}: unknown key `{key}`", lineno + 1));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key `{key}`", lineno + 1));
        }
    }
    Ok(out)
}

/// Merges command-line values, the run file and defaults, recording the
/// resolved value of every option a command consumed.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
    rejected: BTreeSet<&'static str>,
}

impl Resolver {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Self {
            file,
            ..Self::default()
        }
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}` = `{v}`: {e}"))),
        }
    }

    pub fn optional<T: FromStr + Display>(&mut self, key: &'static str, cli: Option<T>) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        let v = match cli {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &v {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn value<T: FromStr + Display>(&mut self, key: &'static str, cli: Option<T>, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        let v = self.optional(key, cli)?.unwrap_or(default);
        self.echo.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    pub fn flag(&mut self, key: &'static str, cli: bool) -> Result<bool, CliError> {
        let v = cli || self.file_value::<bool>(key)?.unwrap_or(false);
        self.echo.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Comma-separated list. An explicitly empty list is a usage error.
    pub fn list<T: FromStr + Display + Clone>(
        &mut self,
        key: &'static str,
        cli: Option<String>,
        default: &[T],
    ) -> Result<Vec<T>, CliError>
    where
        T::Err: Display,
    {
        let raw = cli.or_else(|| self.file.get(key).cloned());
        let values = match raw {
            None => default.to_vec(),
            Some(raw) => parse_list(&raw).map_err(|e| CliError::Usage(format!("--{key} `{raw}`: {e}")))?,
        };
        if values.is_empty() {
            return Err(CliError::Usage(format!("--{key}: empty grid")));
        }
        let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        self.echo.insert(key.to_string(), shown.join(","));
        Ok(values)
    }

    /// Command-line option that the selected command does not take.
    pub fn reject(&mut self, key: &'static str, given: bool) {
        if given {
            self.rejected.insert(key);
        }
    }

    pub fn finish(self, command: &str) -> Result<BTreeMap<String, String>, CliError> {
        if !self.rejected.is_empty() {
            let keys: Vec<String> = self.rejected.iter().map(|k| format!("--{k}")).collect();
            return Err(CliError::Usage(format!(
                "{} not accepted by `{command}`",
                keys.join(", ")
            )));
        }
        Ok(self.echo)
    }
}

pub fn parse_list<T: FromStr>(raw: &str) -> Result<Vec<T>, String>
where
    T::Err: Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}
