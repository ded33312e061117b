//! Flat key-value experiment configuration with dotted sections.
//!
//! The format is diff-friendly plain text: one `key = value` pair per line,
//! `#` starts a comment, keys use dotted sections (`geometry.d`), values are
//! scalars or comma-separated lists. Unknown keys are rejected so typos
//! surface as configuration errors with the offending field path.

use std::collections::BTreeMap;

use torus_lab::error::{Error, Result};

/// Environment variable overriding the root seed.
pub const SEED_ENV_VAR: &str = "UNCERTAINTY_LAB_SEED";

/// Parsed configuration: raw key-value pairs plus typed accessors.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    entries: BTreeMap<String, String>,
    consumed: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse(format!("line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Parse(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { entries, consumed: Default::default() })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let v = self.entries.get(key).map(|s| s.as_str());
        if v.is_some() {
            self.consumed.borrow_mut().insert(key.to_string());
        }
        v
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| Error::Parse(format!("missing required config key `{key}`")))
    }

    pub fn optional(&self, key: &str) -> Option<&str> {
        self.raw(key)
    }

    pub fn get_string(&self, key: &str) -> Result<String> {
        Ok(self.require(key)?.to_string())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        parse_scalar(key, self.require(key)?)
    }

    pub fn get_f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            Some(v) => parse_scalar(key, v),
            None => Ok(default),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        let v = self.require(key)?;
        v.parse().map_err(|_| Error::Parse(format!("config key `{key}`: bad integer `{v}`")))
    }

    pub fn get_usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            Some(v) => {
                v.parse().map_err(|_| Error::Parse(format!("config key `{key}`: bad integer `{v}`")))
            }
            None => Ok(default),
        }
    }

    pub fn get_u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.raw(key) {
            Some(v) => {
                v.parse().map_err(|_| Error::Parse(format!("config key `{key}`: bad integer `{v}`")))
            }
            None => Ok(default),
        }
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|s| parse_scalar(key, s.trim()))
            .collect()
    }

    pub fn get_f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(key) {
            Some(raw) => raw.split(',').map(|s| parse_scalar(key, s.trim())).collect(),
            None => Ok(default.to_vec()),
        }
    }

    /// Root seed: the environment variable wins over the config value.
    pub fn root_seed(&self) -> Result<u64> {
        let configured = self.get_u64_or("run.seed", 42)?;
        if let Ok(env) = std::env::var(SEED_ENV_VAR) {
            return env
                .parse()
                .map_err(|_| Error::Parse(format!("{SEED_ENV_VAR}: bad integer `{env}`")));
        }
        Ok(configured)
    }

    /// Keys that were never read by the dispatching experiment.
    pub fn unknown_keys(&self) -> Vec<String> {
        let consumed = self.consumed.borrow();
        self.entries.keys().filter(|k| !consumed.contains(*k)).cloned().collect()
    }

    /// Deterministic echo of the configuration for report headers.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

fn parse_scalar(key: &str, v: &str) -> Result<f64> {
    let replaced = match v {
        "pi" => std::f64::consts::PI.to_string(),
        "2pi" => (2.0 * std::f64::consts::PI).to_string(),
        other => other.to_string(),
    };
    replaced
        .parse()
        .map_err(|_| Error::Parse(format!("config key `{key}`: bad number `{v}`")))
}

/// Instance seeds derived from the root seed by a splitmix64 counter:
/// `seed_i = mix(root + (i+1)·0x9E3779B97F4A7C15)`.
pub fn instance_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add((index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
