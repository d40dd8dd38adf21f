//! Optional `key = value` config files: one assignment per line, `#` starts
//! a comment. Values fill in flags the command line left unset; explicit
//! flags always win.

use std::collections::HashMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

const KNOWN_KEYS: &[&str] = &[
    "alpha", "alpha_im", "m", "n", "gamma_t", "t", "sweep_n", "phi", "cutoff", "grid", "out",
    "format", "tol",
];

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut values = HashMap::new();
        let Some(path) = path else {
            return Ok(Config { values });
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected key = value, got {:?}",
                    path.display(),
                    lineno + 1,
                    raw
                );
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("{}:{}: unknown key {:?}", path.display(), lineno + 1, key);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// CLI value if present, else the parsed config value.
    pub fn resolve<T: std::str::FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            Some(raw) => match raw.parse::<T>() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key {}: {}", key, e),
            },
            None => Ok(None),
        }
    }
}
