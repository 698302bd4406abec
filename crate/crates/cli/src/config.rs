//! `key=value` config files. Keys are flag names without the leading dashes;
//! repeatable flags may appear on several lines or as a comma list. Blank
//! lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

const KEYS: &[&str] = &[
    "n",
    "mc-reps",
    "bootstrap-reps",
    "subsample-size",
    "alpha",
    "seed",
    "grid",
    "dimension",
    "workers",
    "lambda-lo",
    "lambda-hi",
    "eta",
    "out",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, Vec<String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key `{key}`", lineno + 1));
            }
            values.entry(key).or_default().push(value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// Last value given for `key`.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.values.get(key).and_then(|v| v.last()) {
            Some(raw) => parse_value(key, raw).map(Some),
            None => Ok(None),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, Failure> {
        let Some(lines) = self.values.get(key) else {
            return Ok(Vec::new());
        };
        lines.iter().flat_map(|l| l.split(',')).map(|raw| parse_value(key, raw.trim())).collect()
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, Failure> {
    raw.parse().map_err(|_| Failure::Usage(format!("config key `{key}`: cannot parse `{raw}`")))
}
