//! Experiment runners and command-line front end for `rgg-core`.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod report;

use std::time::Instant;

use rayon::prelude::*;

pub use cli::run_cli;
pub use config::{Experiment, ExperimentConfig, Format, RSpec};
pub use report::Report;

/// Environment variable giving the default worker count.
pub const JOBS_ENV: &str = "RGG_JOBS";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rgg_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl HarnessError {
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            HarnessError::Usage(_) | HarnessError::Core(rgg_core::Error::InvalidParameter { .. })
        )
    }
}

/// Worker count: explicit value, then `RGG_JOBS`, then rayon's default.
pub fn resolve_jobs(jobs: Option<usize>) -> Result<Option<usize>, HarnessError> {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(HarnessError::Usage("--jobs must be at least 1".into()));
        }
        return Ok(Some(j));
    }
    match std::env::var(JOBS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(j) if j > 0 => Ok(Some(j)),
            _ => Err(HarnessError::Usage(format!("{JOBS_ENV}={v} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `task(i)` for `i in 0..count` on `jobs` workers and returns the
/// results in index order.
pub fn fan_out<T, F>(jobs: Option<usize>, count: u64, task: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(u64) -> Result<T, HarnessError> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = resolve_jobs(jobs)? {
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    pool.install(|| (0..count).into_par_iter().map(&task).collect())
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
