//! JSON configuration for the command-line tool.
//!
//! Keys are flat and named after the tracker fields. Every key is optional;
//! missing keys take the tracker defaults.

use std::path::{Path, PathBuf};

use handgest_core::{ColorRange, Connectivity, TrackerConfig};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Parses `"4"`, `"8"`, `"four"` or `"eight"`.
pub fn parse_connectivity(s: &str) -> Option<Connectivity> {
    match s.trim().to_ascii_lowercase().as_str() {
        "4" | "four" => Some(Connectivity::Four),
        "8" | "eight" => Some(Connectivity::Eight),
        _ => None,
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ConnectivityField {
    Number(u64),
    Text(String),
}

fn de_connectivity<'de, D>(d: D) -> Result<Connectivity, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let parsed = match ConnectivityField::deserialize(d)? {
        ConnectivityField::Number(4) => Some(Connectivity::Four),
        ConnectivityField::Number(8) => Some(Connectivity::Eight),
        ConnectivityField::Number(_) => None,
        ConnectivityField::Text(s) => parse_connectivity(&s),
    };
    parsed.ok_or_else(|| serde::de::Error::custom("connectivity must be 4 or 8"))
}

fn de_color_range<'de, D>(d: D) -> Result<Option<ColorRange>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let Some(s) = Option::<String>::deserialize(d)? else {
        return Ok(None);
    };
    s.parse().map(Some).map_err(serde::de::Error::custom)
}

/// Tracker settings plus optional input/output paths.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    /// `"rmin:rmax,gmin:gmax,bmin:bmax"`, required for PPM input.
    #[serde(deserialize_with = "de_color_range")]
    pub color_range: Option<ColorRange>,
    #[serde(deserialize_with = "de_connectivity")]
    pub connectivity: Connectivity,
    pub stationary_frame_limit: u32,
    pub stationary_epsilon: f64,
    pub vertical_threshold: f64,
    pub horizontal_threshold: f64,
    pub zoom_threshold: u64,
    pub rotation_min_radius: f64,
    pub rotation_max_radius: f64,
    pub alignment_threshold: f64,
    /// Frame file or directory used when none is given on the command line.
    pub input: Option<PathBuf>,
    /// Event output file; standard output when absent.
    pub output: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        let t = TrackerConfig::default();
        Self {
            color_range: t.color_range,
            connectivity: t.connectivity,
            stationary_frame_limit: t.stationary_frame_limit,
            stationary_epsilon: t.stationary_epsilon,
            vertical_threshold: t.vertical_threshold,
            horizontal_threshold: t.horizontal_threshold,
            zoom_threshold: t.zoom_threshold,
            rotation_min_radius: t.rotation_min_radius,
            rotation_max_radius: t.rotation_max_radius,
            alignment_threshold: t.alignment_threshold,
            input: None,
            output: None,
        }
    }
}

impl CliConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: CliConfig = serde_json::from_str(text)?;
        config.tracker_config()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn tracker_config(&self) -> Result<TrackerConfig, ConfigError> {
        let t = TrackerConfig {
            color_range: self.color_range,
            connectivity: self.connectivity,
            stationary_frame_limit: self.stationary_frame_limit,
            stationary_epsilon: self.stationary_epsilon,
            vertical_threshold: self.vertical_threshold,
            horizontal_threshold: self.horizontal_threshold,
            zoom_threshold: self.zoom_threshold,
            rotation_min_radius: self.rotation_min_radius,
            rotation_max_radius: self.rotation_max_radius,
            alignment_threshold: self.alignment_threshold,
        };
        t.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(t)
    }
}
