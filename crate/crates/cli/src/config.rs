//! Run configuration. Precedence: command-line flags, then environment
//! variables, then the TOML config file, then built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use singmod::analytic::PrecisionContext;
use singmod::quadarith::ClassGroupCache;
use singmod::{Error, Result};

pub const DEFAULT_PREC_BITS: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

/// Keys accepted in the config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub prec_bits: Option<u32>,
    pub trunc: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Values already resolved by the argument parser (flag or environment).
#[derive(Debug, Default)]
pub struct Overrides {
    pub prec_bits: Option<u32>,
    pub trunc: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Invariant: `prec_bits ≥ 64`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prec_bits: u32,
    /// Maximum number of q-series terms in analytic evaluations.
    pub trunc: usize,
    /// Created on first use.
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(over: Overrides, file: Option<FileConfig>) -> Result<Self> {
        let file = file.unwrap_or_default();
        let cfg = Self {
            prec_bits: over
                .prec_bits
                .or(file.prec_bits)
                .unwrap_or(DEFAULT_PREC_BITS),
            trunc: over
                .trunc
                .or(file.trunc)
                .unwrap_or(PrecisionContext::DEFAULT_MAX_TERMS),
            cache_dir: over.cache_dir.or(file.cache_dir),
            format: over.format.or(file.format).unwrap_or(Format::Json),
        };
        if cfg.trunc == 0 {
            return Err(Error::Invalid("truncation must be positive".into()));
        }
        cfg.precision()?;
        Ok(cfg)
    }

    pub fn precision(&self) -> Result<PrecisionContext> {
        Ok(PrecisionContext::new(self.prec_bits)?.with_max_terms(self.trunc))
    }

    pub fn cache(&self) -> ClassGroupCache {
        ClassGroupCache::new(self.cache_dir.clone())
    }
}
