//! `key = value` configuration files. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::str::FromStr;

pub const KEYS: [&str; 7] = ["tol", "level", "kernel", "branch", "out", "rho", "step"];

#[derive(Debug, Default, Clone)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(format!("config line {}: unknown key '{k}'", n + 1));
            }
            entries.insert(k.to_string(), v.trim_matches('"').to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| format!("config key '{key}': bad value '{v}'")),
        }
    }
}
