//! Run configuration read from TOML.
//!
//! ```toml
//! data_dir = "data"
//! schema_dir = "schemas"
//! years = { start = 2008, end = 2013 }
//! universe_policy = "special-needs"      # or "all-participants"
//! connection_split = "stem-class"        # or "field"
//! geo_table = "geo/institutions.csv"     # optional
//! population_table = "population.csv"    # optional
//! output_dir = "out"
//! rounding = 4
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::format::DEFAULT_PLACES;
use crate::network::{ConnectionSplit, UniversePolicy};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {cause}")]
    Io { path: String, cause: String },
    #[error("invalid configuration {path}: {cause}")]
    Parse { path: String, cause: String },
    #[error("empty year range {start}..={end}")]
    EmptyYears { start: i32, end: i32 },
    #[error("{what} {path} does not exist")]
    MissingPath { what: &'static str, path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn range(&self) -> RangeInclusive<i32> {
        self.start..=self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        self.range().contains(&year)
    }
}

fn default_places() -> usize {
    DEFAULT_PLACES
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub schema_dir: PathBuf,
    pub years: YearRange,
    #[serde(default)]
    pub universe_policy: UniversePolicy,
    #[serde(default)]
    pub connection_split: ConnectionSplit,
    pub geo_table: Option<PathBuf>,
    pub population_table: Option<PathBuf>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_places")]
    pub rounding: usize,
}

impl RunConfig {
    pub fn from_toml_str(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut config: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: base.display().to_string(),
            cause: e.to_string(),
        })?;
        if config.years.start > config.years.end {
            return Err(ConfigError::EmptyYears {
                start: config.years.start,
                end: config.years.end,
            });
        }
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut config.data_dir);
        resolve(&mut config.schema_dir);
        resolve(&mut config.output_dir);
        config.geo_table.as_mut().map(resolve);
        config.population_table.as_mut().map(resolve);
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            cause: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    /// Every configured input path must exist.
    pub fn check_paths(&self) -> Result<(), ConfigError> {
        let inputs = [
            ("data_dir", Some(&self.data_dir)),
            ("schema_dir", Some(&self.schema_dir)),
            ("geo_table", self.geo_table.as_ref()),
            ("population_table", self.population_table.as_ref()),
        ];
        for (what, path) in inputs {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(ConfigError::MissingPath {
                        what,
                        path: p.display().to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve() {
        let text = r#"
            data_dir = "data"
            schema_dir = "/abs/schemas"
            years = { start = 2008, end = 2013 }
            universe_policy = "all-participants"
            geo_table = "geo.csv"
        "#;
        let c = RunConfig::from_toml_str(text, Path::new("/cfg")).unwrap();
        assert_eq!(c.data_dir, PathBuf::from("/cfg/data"));
        assert_eq!(c.schema_dir, PathBuf::from("/abs/schemas"));
        assert_eq!(c.geo_table, Some(PathBuf::from("/cfg/geo.csv")));
        assert_eq!(c.universe_policy, UniversePolicy::AllParticipants);
        assert_eq!(c.connection_split, ConnectionSplit::StemClass);
        assert_eq!(c.rounding, 4);
        assert!(c.years.contains(2010) && !c.years.contains(2014));
    }

    #[test]
    fn rejects_bad_input() {
        let empty = "data_dir = \"d\"\nschema_dir = \"s\"\nyears = { start = 2013, end = 2008 }\n";
        assert!(matches!(
            RunConfig::from_toml_str(empty, Path::new(".")),
            Err(ConfigError::EmptyYears { .. })
        ));
        let unknown = "data_dir = \"d\"\nschema_dir = \"s\"\nyears = { start = 1, end = 2 }\ncolour = 1\n";
        assert!(RunConfig::from_toml_str(unknown, Path::new(".")).is_err());
    }
}
