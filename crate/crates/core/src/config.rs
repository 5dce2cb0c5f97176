//! Pipeline settings, loadable from a TOML key-value file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    CleaningConfig, HeadingPatterns, MarkerConfig, NormalizeOptions, DEFAULT_END_MARKER,
    DEFAULT_HEADING_PATTERNS, DEFAULT_START_MARKER,
};
use crate::error::{Error, Result};
use crate::fitting::{FitWindow, DEFAULT_R_MIN};
use crate::segmentation::MarkClass;

/// Environment variable naming a default configuration file.
pub const CONFIG_ENV: &str = "PUNKT_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Windows {
    pub dot: FitWindow,
    pub comma: FitWindow,
    pub colon: FitWindow,
    pub semicolon: FitWindow,
    pub exclam: FitWindow,
    pub question: FitWindow,
    pub unit: FitWindow,
    pub words: FitWindow,
}

impl Default for Windows {
    fn default() -> Self {
        let d = FitWindow::default_for;
        Windows {
            dot: d(MarkClass::Dot),
            comma: d(MarkClass::Comma),
            colon: d(MarkClass::Colon),
            semicolon: d(MarkClass::Semicolon),
            exclam: d(MarkClass::Exclamation),
            question: d(MarkClass::Question),
            unit: d(MarkClass::UnitOfThought),
            words: FitWindow::zipf_default(),
        }
    }
}

impl Windows {
    pub fn get(&self, class: MarkClass) -> FitWindow {
        match class {
            MarkClass::Dot => self.dot,
            MarkClass::Comma => self.comma,
            MarkClass::Colon => self.colon,
            MarkClass::Semicolon => self.semicolon,
            MarkClass::Exclamation => self.exclam,
            MarkClass::Question => self.question,
            MarkClass::UnitOfThought => self.unit,
        }
    }

    pub fn get_mut(&mut self, class: MarkClass) -> &mut FitWindow {
        match class {
            MarkClass::Dot => &mut self.dot,
            MarkClass::Comma => &mut self.comma,
            MarkClass::Colon => &mut self.colon,
            MarkClass::Semicolon => &mut self.semicolon,
            MarkClass::Exclamation => &mut self.exclam,
            MarkClass::Question => &mut self.question,
            MarkClass::UnitOfThought => &mut self.unit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub strip_boilerplate: bool,
    pub start_marker: String,
    pub end_marker: String,
    pub strip_heads: bool,
    pub heading_patterns: Vec<String>,
    pub stretched: bool,
    pub breaks: bool,
    pub break_r_min: usize,
    pub normalize: NormalizeOptions,
    pub windows: Windows,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            strip_boilerplate: true,
            start_marker: DEFAULT_START_MARKER.to_owned(),
            end_marker: DEFAULT_END_MARKER.to_owned(),
            strip_heads: true,
            heading_patterns: DEFAULT_HEADING_PATTERNS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            stretched: false,
            breaks: false,
            break_r_min: DEFAULT_R_MIN,
            normalize: NormalizeOptions::default(),
            windows: Windows::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
}

impl Config {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Config, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Config::from_toml_str(&text, &path.display().to_string())
    }

    /// Explicit path first, then `PUNKT_CONFIG`, then built-in defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Config, ConfigError> {
        match explicit {
            Some(path) => Config::load(path),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(path) if !path.is_empty() => Config::load(Path::new(&path)),
                _ => Ok(Config::default()),
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn cleaning(&self) -> Result<CleaningConfig> {
        let markers = if self.strip_boilerplate {
            Some(MarkerConfig::new(&self.start_marker, &self.end_marker)?)
        } else {
            None
        };
        let headings = if self.strip_heads {
            HeadingPatterns::new(&self.heading_patterns)?
        } else {
            HeadingPatterns::none()
        };
        Ok(CleaningConfig {
            markers,
            headings,
            normalize: self.normalize,
        })
    }

    /// Check every window before any work starts.
    pub fn validate(&self) -> Result<()> {
        let w = &self.windows;
        for window in [
            w.dot,
            w.comma,
            w.colon,
            w.semicolon,
            w.exclam,
            w.question,
            w.unit,
            w.words,
        ] {
            FitWindow::new(window.r_min, window.r_max)?;
        }
        if self.break_r_min == 0 {
            return Err(Error::InvalidWindow {
                r_min: 0,
                r_max: 0,
                reason: "break_r_min must be at least 1",
            });
        }
        self.cleaning().map(|_| ())
    }
}
