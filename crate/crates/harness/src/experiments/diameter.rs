use std::time::Instant;

use serde::Serialize;

use rgg_core::bounds::{diameter_bound, reference_prior_diameter};
use rgg_core::sampler::SeedSpec;
use rgg_core::spatial_graph::{diameter, DiameterMode};
use rgg_core::Error;

use super::{sample_graph, seed_columns};
use crate::config::{ExperimentConfig, AUTO_EXACT_LIMIT};
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiameterStatus {
    Ok,
    Disconnected,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterRow {
    pub experiment: &'static str,
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub master_seed: u64,
    pub trial_index: u64,
    pub trial_seed: u64,
    pub status: DiameterStatus,
    pub mode: DiameterMode,
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    pub sweeps: u32,
    pub bound_applicable: bool,
    pub bound_value: f64,
    pub bound_ceiling: u64,
    pub gamma: f64,
    pub reference_prior: Option<f64>,
    /// `upper ≤ ⌈bound⌉` (when applicable) and `lower ≤ upper`.
    pub pass: bool,
    pub wall_ms: f64,
}

/// Exact diameter or a BFS bracket per trial, against `⌈√(2n)/r·(1+γr^{−4/3})⌉`.
pub fn diameter_experiment(
    cfg: &ExperimentConfig,
    jobs: Option<usize>,
) -> Result<Report<DiameterRow, serde_json::Value>, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rows = Vec::new();
    for (n, spec, r) in cfg.cells()? {
        let bound = diameter_bound(n as f64, r)?;
        let reference = reference_prior_diameter(n as f64, r, cfg.reference_c).ok();
        let trial_rows = fan_out(jobs, cfg.trials, |t| {
            let t0 = Instant::now();
            let seed = SeedSpec::new(cfg.master_seed, t);
            let g = sample_graph(n, r, seed)?;
            let mode = cfg.diameter_mode.unwrap_or(if g.vertex_count() <= AUTO_EXACT_LIMIT {
                DiameterMode::Exact
            } else {
                DiameterMode::Bounded
            });
            let (status, lower, upper, sweeps) = match diameter(&g, mode) {
                Ok(d) => (DiameterStatus::Ok, Some(d.lower), Some(d.upper), d.sweeps),
                Err(Error::Disconnected) => (DiameterStatus::Disconnected, None, None, 0),
                Err(e) => return Err(e.into()),
            };
            let pass = match (lower, upper) {
                (Some(lo), Some(hi)) => lo <= hi && (!bound.applicable || u64::from(hi) <= bound.ceiling),
                _ => !bound.applicable,
            };
            let (trial_index, trial_seed) = seed_columns(seed);
            Ok(DiameterRow {
                experiment: cfg.experiment.id(),
                n,
                r,
                r_spec: spec.to_string(),
                master_seed: cfg.master_seed,
                trial_index,
                trial_seed,
                status,
                mode,
                lower,
                upper,
                sweeps,
                bound_applicable: bound.applicable,
                bound_value: bound.value,
                bound_ceiling: bound.ceiling,
                gamma: bound.gamma.gamma,
                reference_prior: reference,
                pass,
                wall_ms: elapsed_ms(t0),
            })
        })?;
        rows.extend(trial_rows);
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    let disconnected = rows.iter().filter(|r| r.status == DiameterStatus::Disconnected).count();
    let max_upper = rows.iter().filter_map(|r| r.upper).max();
    let summary = serde_json::json!({
        "rows": rows.len(),
        "failures": failures,
        "disconnected": disconnected,
        "max_upper": max_upper,
    });
    Report::new(cfg.clone(), rows, summary, failures == 0, elapsed_ms(start))
}
