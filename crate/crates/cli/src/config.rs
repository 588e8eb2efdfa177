//! Flat key=value scenario configuration.
//!
//! One scenario per file: a `scenario=` line selects the runner and every
//! other line sets one parameter. Values are plain strings, reals, complex
//! literals in `re+imj` form, or bracketed lists; `#` starts a comment.
//! The same `key=value` grammar is used for command-line overrides, so a
//! config file and a preset invocation resolve through one code path.

use std::collections::BTreeMap;
use std::path::Path;

use collective_decay::hilbert::parse_complex_list;
use collective_decay::{C64, Error, Result};

/// A parsed scenario configuration: the scenario name plus raw key=value
/// pairs. Typed access happens through the getters, which also record
/// resolved values for the run manifest.
#[derive(Clone, Debug)]
pub struct Config {
    pub scenario: String,
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read `{}`: {e}", path.display())))?;
        let mut values = parse_pairs(text.lines())?;
        let scenario = values
            .remove("scenario")
            .ok_or_else(|| Error::Parse("config file needs a `scenario=` line".into()))?;
        Ok(Config { scenario, values })
    }

    pub fn from_preset(name: &str, overrides: &[String]) -> Result<Config> {
        let values = parse_pairs(overrides.iter().map(String::as_str))?;
        if values.contains_key("scenario") {
            return Err(Error::Parse(
                "the scenario is fixed by the preset name; drop the `scenario=` override".into(),
            ));
        }
        Ok(Config {
            scenario: name.to_string(),
            values,
        })
    }

    /// Reject keys outside the scenario's schema, so typos fail loudly
    /// instead of silently running with defaults.
    pub fn restrict_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Parse(format!(
                    "unknown key `{key}` for scenario `{}`; allowed keys: {}",
                    self.scenario,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str_or(&self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(text) => text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("key `{key}`: `{text}` is not a real number"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(text) => text.parse::<usize>().map_err(|_| {
                Error::Parse(format!("key `{key}`: `{text}` is not a non-negative integer"))
            }),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.raw(key) {
            None => Ok(default),
            Some(text) => text.parse::<u64>().map_err(|_| {
                Error::Parse(format!("key `{key}`: `{text}` is not a non-negative integer"))
            }),
        }
    }

    /// Bracketed list of complex literals.
    pub fn complex_list(&self, key: &str) -> Result<Option<Vec<C64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => parse_complex_list(text)
                .map(Some)
                .map_err(|e| Error::Parse(format!("key `{key}`: {e}"))),
        }
    }

    /// Bracketed list of reals (a complex list whose entries must all have
    /// zero imaginary part).
    pub fn real_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.complex_list(key)? {
            None => Ok(default.to_vec()),
            Some(values) => values
                .iter()
                .map(|z| {
                    if z.im != 0.0 {
                        Err(Error::Parse(format!(
                            "key `{key}`: expected real entries, found {z}"
                        )))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect(),
        }
    }
}

fn parse_pairs<'a>(lines: impl Iterator<Item = &'a str>) -> Result<BTreeMap<String, String>> {
    let mut values = BTreeMap::new();
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key=value`, got `{line}`", lineno + 1))
        })?;
        let key = key.trim();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(Error::Parse(format!("line {}: bad key `{key}`", lineno + 1)));
        }
        if values.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate key `{key}`")));
        }
    }
    Ok(values)
}
