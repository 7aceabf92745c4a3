//! Run configuration: command-line values, optionally seeded from a flat
//! key-value file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{select_battery, BuildConfig, Subgroup, Target};
use crate::group::GroupSpec;
use crate::lines::AxesChoice;
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for {key}: {msg}")]
    Value { key: String, msg: String },
}

fn bad(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Value { key: key.to_string(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub group: String,
    pub window: Q,
    pub axes_bound: Q,
    pub depth: u32,
    pub sphere_dim: usize,
    pub axes_choice: AxesChoice,
    pub battery: String,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "p1".into(),
            window: Q::from_integer(2.into()),
            axes_bound: Q::from_integer(1.into()),
            depth: 6,
            sphere_dim: 3,
            axes_choice: AxesChoice::Full,
            battery: "default".into(),
            out: PathBuf::from("out"),
            seed: 0,
        }
    }
}

/// Lengths are in model units; a trailing `u` or `units` is accepted.
fn parse_length(key: &str, v: &str) -> Result<Q, ConfigError> {
    let v = v.trim();
    let v = v.strip_suffix("units").or_else(|| v.strip_suffix('u')).unwrap_or(v).trim();
    parse_q(v).map_err(|e| bad(key, e.to_string()))
}

impl RunConfig {
    /// Applies one `key value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "group" => self.group = value.to_string(),
            "window" | "R" => self.window = parse_length(key, value)?,
            "axes-bound" => self.axes_bound = parse_length(key, value)?,
            "depth" => self.depth = value.parse().map_err(|_| bad(key, "expected a positive integer"))?,
            "sphere-dim" => self.sphere_dim = value.parse().map_err(|_| bad(key, "expected a positive integer"))?,
            "axes-choice" => self.axes_choice = value.parse().map_err(|e: String| bad(key, e))?,
            "battery" => self.battery = value.to_string(),
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| bad(key, "expected an unsigned integer"))?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Reads `key = value` or `key value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .or_else(|| line.split_once(char::is_whitespace))
                .ok_or(ConfigError::Syntax { line: i + 1, msg: "expected `key value`".into() })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.window.is_positive() {
            return Err(bad("window", "must be positive"));
        }
        if !self.axes_bound.is_positive() {
            return Err(bad("axes-bound", "must be positive"));
        }
        if !(1..=20).contains(&self.depth) {
            return Err(bad("depth", "must be between 1 and 20"));
        }
        if !(1..=8).contains(&self.sphere_dim) {
            return Err(bad("sphere-dim", "must be between 1 and 8"));
        }
        let g = self.group_spec()?;
        self.subgroups(&g)?;
        Ok(())
    }

    pub fn group_spec(&self) -> Result<GroupSpec, ConfigError> {
        GroupSpec::preset(&self.group, self.depth).map_err(|e| bad("group", e.to_string()))
    }

    pub fn subgroups(&self, g: &GroupSpec) -> Result<Vec<Subgroup>, ConfigError> {
        select_battery(g, &self.battery).map_err(|e| bad("battery", e))
    }

    pub fn build_config(&self) -> Result<BuildConfig, ConfigError> {
        let mut b = BuildConfig::new(self.group_spec()?, self.window.clone());
        b.axes_bound = self.axes_bound.clone();
        b.axes_choice = self.axes_choice;
        b.sphere_dim = self.sphere_dim;
        b.seed = self.seed;
        Ok(b)
    }

    /// Settings as written into file headers and reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("axes-bound".to_string(), fmt_q(&self.axes_bound)),
            ("axes-choice".to_string(), axes_choice_name(self.axes_choice).to_string()),
            ("battery".to_string(), self.battery.clone()),
            ("depth".to_string(), self.depth.to_string()),
            ("group".to_string(), self.group.clone()),
            ("seed".to_string(), self.seed.to_string()),
            ("sphere-dim".to_string(), self.sphere_dim.to_string()),
            ("window".to_string(), fmt_q(&self.window)),
        ])
    }

    /// Rebuilds a configuration from a file header written by [`RunConfig::echo`].
    pub fn from_header(header: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut c = RunConfig::default();
        for (k, v) in header {
            match k.as_str() {
                "kind" | "schema" | "family" | "factor" => {}
                _ => c.set(k, v)?,
            }
        }
        Ok(c)
    }
}

pub fn axes_choice_name(c: AxesChoice) -> &'static str {
    match c {
        AxesChoice::Full => "full",
        AxesChoice::Root => "root",
    }
}

/// Configuration echo for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub settings: BTreeMap<String, String>,
    pub family: Option<Target>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn file_settings_apply_in_order() {
        let mut c = RunConfig::default();
        c.apply_file("# demo\ngroup = pmm\nwindow 3/2 units\naxes-bound = 1u\nseed 7\n").unwrap();
        assert_eq!(c.group, "pmm");
        assert_eq!(c.window, q(3, 2));
        assert_eq!(c.axes_bound, q(1, 1));
        assert_eq!(c.seed, 7);
        assert!(c.validate().is_ok());
        assert_eq!(RunConfig::from_header(&c.echo()).unwrap(), c);
    }

    #[test]
    fn invalid_settings_are_reported() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_file("colour blue"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(c.apply_file("justakey"), Err(ConfigError::Syntax { line: 1, .. })));
        c.set("window", "-1").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("group", "p7").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("battery", "nonsense").unwrap();
        assert!(c.validate().is_err());
    }
}
