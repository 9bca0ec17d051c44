//! Run configuration: horizons, tolerances, grid sizes and detector parameters.
//!
//! Config files use a flat `key = value` grammar. Blank lines and lines
//! starting with `#` are ignored; values are plain numbers.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabConfig {
    /// Absolute zero tolerance.
    pub zero_tol: f64,
    /// Default scan horizon.
    pub horizon: usize,
    /// Grid points per axis for region snapshots.
    pub grid: usize,
    /// Half-width of the square grid window.
    pub extent: f64,
    /// Largest fraction of the horizon at which a clean tail still counts as InTail.
    pub clean_fraction: f64,
    pub opial_window: usize,
    pub opial_tol: f64,
    pub opial_separation: f64,
    pub cluster_eps: f64,
    pub min_count: usize,
    /// Partial-sum level past which a divergent comparator is corroborated.
    pub divergence_bound: f64,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            zero_tol: 1e-12,
            horizon: 64,
            grid: 41,
            extent: 2.0,
            clean_fraction: 0.5,
            opial_window: 32,
            opial_tol: 1e-8,
            opial_separation: 1e-3,
            cluster_eps: 0.05,
            min_count: 3,
            divergence_bound: 1.0,
            seed: 0x5eed_f00d,
            jobs: 4,
        }
    }
}

impl LabConfig {
    /// Parses `key = value` text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = LabConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                LabError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                LabError::Config(msg) => LabError::Config(format!("line {}: {msg}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| LabError::Config(format!("bad value `{value}` for `{key}`")))
        }
        match key {
            "zero_tol" => self.zero_tol = num(key, value)?,
            "horizon" => self.horizon = num(key, value)?,
            "grid" => self.grid = num(key, value)?,
            "extent" => self.extent = num(key, value)?,
            "clean_fraction" => self.clean_fraction = num(key, value)?,
            "opial_window" => self.opial_window = num(key, value)?,
            "opial_tol" => self.opial_tol = num(key, value)?,
            "opial_separation" => self.opial_separation = num(key, value)?,
            "cluster_eps" => self.cluster_eps = num(key, value)?,
            "min_count" => self.min_count = num(key, value)?,
            "divergence_bound" => self.divergence_bound = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "jobs" => self.jobs = num(key, value)?,
            _ => return Err(LabError::Config(format!("unknown key `{key}`"))),
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 2 {
            return Err(LabError::Config("horizon must be at least 2".into()));
        }
        if self.grid < 2 {
            return Err(LabError::Config("grid must be at least 2".into()));
        }
        if !(self.cluster_eps > 0.0 && self.cluster_eps < 0.5) {
            return Err(LabError::Config("cluster_eps must lie in (0, 1/2)".into()));
        }
        if !(0.0..=1.0).contains(&self.clean_fraction) {
            return Err(LabError::Config("clean_fraction must lie in [0, 1]".into()));
        }
        if self.jobs == 0 {
            return Err(LabError::Config("jobs must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_comments() {
        let cfg = LabConfig::parse("# comment\nhorizon = 128\n\ncluster_eps=0.1\n").unwrap();
        assert_eq!(cfg.horizon, 128);
        assert_eq!(cfg.cluster_eps, 0.1);
        assert_eq!(cfg.grid, 41);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(LabConfig::parse("nope = 1").is_err());
        assert!(LabConfig::parse("horizon 3").is_err());
        assert!(LabConfig::parse("horizon = x").is_err());
        assert!(LabConfig::parse("horizon = 1").is_err());
    }
}
