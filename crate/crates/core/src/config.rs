//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! omega_int = 5.0
//! hist_times = 0.31, 0.62
//! photonic.enabled = true
//! photonic.T_H = 0.985
//! ```
//!
//! Unknown keys, repeated keys and malformed values are errors.

use std::collections::HashSet;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, ThermalSpec};
use crate::photonic::OpticalParams;
use crate::sampler::{DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonicConfig {
    pub enabled: bool,
    #[serde(rename = "T_H")]
    pub t_h: f64,
    #[serde(rename = "T_V")]
    pub t_v: f64,
    #[serde(rename = "atten_H")]
    pub atten_h: f64,
    pub eps: f64,
}

impl Default for PhotonicConfig {
    fn default() -> Self {
        let o = OpticalParams::default();
        Self {
            enabled: false,
            t_h: o.t_h,
            t_v: o.t_v,
            atten_h: o.atten_h,
            eps: o.accidental_eps,
        }
    }
}

impl PhotonicConfig {
    pub fn optical(&self) -> OpticalParams {
        OpticalParams {
            t_h: self.t_h,
            t_v: self.t_v,
            atten_h: self.atten_h,
            accidental_eps: self.eps,
        }
    }
}

/// All times are dimensionless `omega_L t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "omega_L")]
    pub omega_l: f64,
    pub omega_int: f64,
    pub alpha: f64,
    #[serde(rename = "beta_B")]
    pub beta_b: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub moments_max: usize,
    pub hist_times: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    pub photonic: PhotonicConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega_l: 1.0,
            omega_int: 5.0,
            alpha: 0.2,
            beta_b: 0.5,
            t_min: 0.0,
            t_max: 3.0 * std::f64::consts::PI / 26f64.sqrt(),
            n_points: 200,
            moments_max: 5,
            hist_times: vec![0.31, 0.62],
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            photonic: PhotonicConfig::default(),
        }
    }
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| cfg_err(format!("`{key}`: expected a finite number, got `{v}`")))
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    v.replace('_', "")
        .parse::<u64>()
        .or_else(|_| {
            // allow 1e6 style counts when exactly integral
            let x: f64 = v.parse().map_err(|_| ())?;
            if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
                Ok(x as u64)
            } else {
                Err(())
            }
        })
        .map_err(|_| cfg_err(format!("`{key}`: expected a non-negative integer, got `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(cfg_err(format!("`{key}`: expected true or false, got `{v}`"))),
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses the flat text format on top of the defaults and validates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(cfg_err(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            cfg.set(key, value)
                .map_err(|e| cfg_err(format!("line {}: {}", lineno + 1, strip(e))))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "omega_L" => self.omega_l = parse_f64(key, v)?,
            "omega_int" => self.omega_int = parse_f64(key, v)?,
            "alpha" => self.alpha = parse_f64(key, v)?,
            "beta_B" => self.beta_b = parse_f64(key, v)?,
            "t_min" => self.t_min = parse_f64(key, v)?,
            "t_max" => self.t_max = parse_f64(key, v)?,
            "n_points" => self.n_points = parse_u64(key, v)? as usize,
            "moments_max" => self.moments_max = parse_u64(key, v)? as usize,
            "hist_times" => {
                self.hist_times = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_f64(key, s))
                    .collect::<Result<_>>()?
            }
            "samples" => self.samples = parse_u64(key, v)?,
            "seed" => self.seed = parse_u64(key, v)?,
            "photonic.enabled" => self.photonic.enabled = parse_bool(key, v)?,
            "photonic.T_H" => self.photonic.t_h = parse_f64(key, v)?,
            "photonic.T_V" => self.photonic.t_v = parse_f64(key, v)?,
            "photonic.atten_H" => self.photonic.atten_h = parse_f64(key, v)?,
            "photonic.eps" => self.photonic.eps = parse_f64(key, v)?,
            _ => return Err(cfg_err(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let field = |e: Error| match e {
            Error::InvalidParam { name, reason } => cfg_err(format!("`{name}`: {reason}")),
            other => other,
        };
        self.model().map_err(field)?;
        self.thermal().map_err(field)?;
        if !(self.beta_b > 0.0) {
            return Err(cfg_err(format!("`beta_B`: must be > 0, got {}", self.beta_b)));
        }
        if !(self.t_min < self.t_max) {
            return Err(cfg_err(format!(
                "`t_min`: must be below t_max ({} >= {})",
                self.t_min, self.t_max
            )));
        }
        if self.n_points < 2 {
            return Err(cfg_err("`n_points`: must be at least 2"));
        }
        if self.moments_max < 1 {
            return Err(cfg_err("`moments_max`: must be at least 1"));
        }
        if self.samples < 1 {
            return Err(cfg_err("`samples`: must be at least 1"));
        }
        if let Some(t) = self
            .hist_times
            .iter()
            .find(|&&t| t < self.t_min || t > self.t_max)
        {
            return Err(cfg_err(format!(
                "`hist_times`: {t} outside [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        self.photonic.optical().validate().map_err(field)?;
        Ok(())
    }

    pub fn model(&self) -> Result<ModelParams> {
        ModelParams::new(self.omega_l, self.omega_int)
    }

    pub fn thermal(&self) -> Result<ThermalSpec> {
        ThermalSpec::new(self.alpha, self.beta_b)
    }

    /// Evenly spaced `omega_L t` grid, endpoints included.
    pub fn time_grid(&self) -> Vec<f64> {
        let step = (self.t_max - self.t_min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.t_max
                } else {
                    self.t_min + step * i as f64
                }
            })
            .collect()
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}
