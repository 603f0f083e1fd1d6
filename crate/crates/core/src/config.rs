//! Run configuration shared by the library pipeline and the command-line tool.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 12;
pub const DEFAULT_GUARD: usize = 64;
pub const MIN_ORDER: usize = 4;
pub const MIN_GUARD: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Series truncation order `D`: coefficients of `z^0 .. z^(D-1)` are exact.
    pub order: usize,
    /// Laurent guard length for the localization sums.
    pub guard: usize,
    /// Worker threads; `None` lets the thread pool decide.
    pub threads: Option<usize>,
    /// Cross-check the truncated Laurent mode with exact rational functions.
    pub exact_holo: bool,
    /// Verify saturation of every restricted Newton polytope.
    pub check_saturation: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: DEFAULT_ORDER,
            guard: DEFAULT_GUARD,
            threads: None,
            exact_holo: false,
            check_saturation: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < MIN_ORDER {
            return Err(Error::Config(format!(
                "order {} is below {MIN_ORDER}",
                self.order
            )));
        }
        if self.guard < MIN_GUARD {
            return Err(Error::Config(format!(
                "guard {} is below {MIN_GUARD}",
                self.guard
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(())
    }

    /// Reads a JSON configuration; absent fields keep their defaults.
    pub fn from_json(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_bounds() {
        let c = RunConfig::default();
        assert!(c.validate().is_ok());
        assert_eq!((c.order, c.guard), (12, 64));
        assert!(RunConfig {
            order: 3,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            guard: 15,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            threads: Some(0),
            ..c
        }
        .validate()
        .is_err());
    }

    #[test]
    fn partial_json() {
        let c = RunConfig::from_json(r#"{"order": 8}"#).unwrap();
        assert_eq!(c.order, 8);
        assert_eq!(c.guard, DEFAULT_GUARD);
        assert!(RunConfig::from_json(r#"{"order": 2}"#).is_err());
        assert!(RunConfig::from_json("not json").is_err());
    }
}
