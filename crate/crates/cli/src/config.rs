//! Flat `key = value` run configuration shared by all subcommands.

use std::fmt;
use std::path::Path;

/// Empirical regression constants, fitted once over the reference sweep and
/// frozen. They are defaults for the corresponding config keys, not
/// universal values.
pub const C1_DEFAULT: f64 = 0.9;
pub const C2_DEFAULT: f64 = 0.6;
pub const C_DEFAULT: f64 = 1.0;
pub const CN_DEFAULT: f64 = 0.8094;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub d: f64,
    pub delta: f64,
    pub v1: f64,
    pub v2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub r: f64,
    pub n_theta: usize,
    pub n_r: usize,
    pub transition: bool,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub cn: f64,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v1 = 2.25 * std::f64::consts::PI / 1.3;
        RunConfig {
            d: 1.0,
            delta: 0.4,
            v1,
            v2: 0.3 * v1,
            eps1: 0.01,
            eps2: 0.01,
            r: 3.0,
            n_theta: 512,
            n_r: 32,
            transition: false,
            c1: C1_DEFAULT,
            c2: C2_DEFAULT,
            c: C_DEFAULT,
            cn: CN_DEFAULT,
            output: None,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Parse a flat `key = value` file; `#` starts a comment, keys are
    /// lower_snake, unknown keys are errors.
    pub fn from_file(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            cfg.set(key.trim(), value.trim())
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let real = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>().map_err(|_| ConfigError(format!("key '{key}': bad number '{v}'")))
        };
        let int = |v: &str| -> Result<usize, ConfigError> {
            v.parse::<usize>().map_err(|_| ConfigError(format!("key '{key}': bad integer '{v}'")))
        };
        match key {
            "d" => self.d = real(value)?,
            "delta" => self.delta = real(value)?,
            "v1" => self.v1 = real(value)?,
            "v2" => self.v2 = real(value)?,
            "eps1" => self.eps1 = real(value)?,
            "eps2" => self.eps2 = real(value)?,
            "r" => self.r = real(value)?,
            "n_theta" => self.n_theta = int(value)?,
            "n_r" => self.n_r = int(value)?,
            "transition" => {
                self.transition = match value {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    other => return Err(ConfigError(format!("key 'transition': bad bool '{other}'"))),
                }
            }
            "c1" => self.c1 = real(value)?,
            "c2" => self.c2 = real(value)?,
            "c" => self.c = real(value)?,
            "cn" => self.cn = real(value)?,
            "output" => self.output = Some(value.to_string()),
            other => return Err(ConfigError(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.d > 0.0) {
            return Err(ConfigError(format!("d = {} must be positive", self.d)));
        }
        if self.d <= self.eps1 + self.eps2 {
            return Err(ConfigError(format!(
                "d = {} must exceed eps1 + eps2 = {}",
                self.d,
                self.eps1 + self.eps2
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(ConfigError(format!("delta = {} outside [0, 1]", self.delta)));
        }
        if self.v2 > self.v1 || self.v2 < 0.0 {
            return Err(ConfigError(format!(
                "volumes must satisfy v1 >= v2 >= 0, got v1 = {}, v2 = {}",
                self.v1, self.v2
            )));
        }
        if !(self.eps1 > 0.0) || !(self.eps2 > 0.0) {
            return Err(ConfigError("hole radii must be positive".into()));
        }
        if !(self.r > 0.0) {
            return Err(ConfigError(format!("r = {} must be positive", self.r)));
        }
        if self.n_theta < 16 || self.n_r < 4 {
            return Err(ConfigError("quadrature grid too small".into()));
        }
        Ok(())
    }
}
