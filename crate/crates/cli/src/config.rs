// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::time::Duration;

use clap::ValueEnum;
use formclass::numerics::{DEFAULT_DIGITS, DEFAULT_MAX_DIGITS, MIN_DIGITS};
use formclass::{Error, PrecCtx, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub digits: u32,
    pub guard: u32,
    /// `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub factor_budget_seconds: u64,
}

impl RunConfig {
    pub fn from_flags(
        digits: Option<u32>,
        guard: u32,
        cache_dir: Option<PathBuf>,
        no_cache: bool,
        output_format: OutputFormat,
        factor_budget_seconds: u64,
    ) -> Result<Self> {
        let digits = digits.unwrap_or(DEFAULT_DIGITS);
        if !(MIN_DIGITS..=DEFAULT_MAX_DIGITS).contains(&digits) {
            return Err(Error::InvalidArgument(format!(
                "digits must lie in [{MIN_DIGITS}, {DEFAULT_MAX_DIGITS}], got {digits}"
            )));
        }
        let cache_dir = if no_cache { None } else { cache_dir.or_else(default_cache_dir) };
        Ok(RunConfig { digits, guard, cache_dir, output_format, factor_budget_seconds })
    }

    pub fn ctx(&self) -> PrecCtx {
        PrecCtx::new(self.digits, self.guard).expect("digits validated").with_max_digits(DEFAULT_MAX_DIGITS)
    }

    pub fn factor_budget(&self) -> Duration {
        Duration::from_secs(self.factor_budget_seconds)
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(xdg).join("formclass"));
    }
    std::env::var_os("HOME").filter(|v| !v.is_empty()).map(|h| PathBuf::from(h).join(".cache").join("formclass"))
}
