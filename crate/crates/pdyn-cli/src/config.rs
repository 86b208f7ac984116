//! Key-value configuration read from the file named by `PDYN_CONFIG`.
//!
//! One `key = value` pair per line; `#` starts a comment.

use std::fmt;

use pdyn::bridge::BridgeConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Default series precision, as an exponent of t.
    pub precision: i64,
    pub depth_budget: usize,
    pub bridge: BridgeConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision: 24, depth_budget: 12, bridge: BridgeConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError { line, message: format!("`{key}` has invalid value `{v}`") })
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| ConfigError { line, message: format!("expected `key = value`, found `{body}`") })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "precision" => c.precision = num(line, k, v)?,
                "depth_budget" => c.depth_budget = num(line, k, v)?,
                "epsilon" => {
                    let e: f64 = num(line, k, v)?;
                    if !(e > 0.0 && e < 1.0) {
                        return Err(ConfigError { line, message: "`epsilon` must lie in (0, 1)".into() });
                    }
                    c.bridge.epsilon = e;
                }
                "float_precision" => {
                    let b: u32 = num(line, k, v)?;
                    if !(53..=4096).contains(&b) {
                        return Err(ConfigError { line, message: "`float_precision` must be between 53 and 4096 bits".into() });
                    }
                    c.bridge.embed_bits = b;
                }
                "max_iterations" => c.bridge.max_iterations = num(line, k, v)?,
                "big_float" => c.bridge.big_float = num(line, k, v)?,
                "resolution" => {
                    let r: usize = num(line, k, v)?;
                    if !(2..=4096).contains(&r) {
                        return Err(ConfigError { line, message: "`resolution` must be between 2 and 4096".into() });
                    }
                    c.bridge.resolution = r;
                }
                _ => return Err(ConfigError { line, message: format!("unknown key `{k}`") }),
            }
        }
        Ok(c)
    }
}
