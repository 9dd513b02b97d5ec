use std::time::Instant;

use serde::Serialize;

use rgg_core::concentration::failure_probability_upper_unchecked;
use rgg_core::geometry::{dist_sq, fit_strip};
use rgg_core::sampler::SeedSpec;
use rgg_core::strip_path::{alpha_unchecked, exploratory_delta, greedy_strip_path, PathStatus, ProofConstants};

use super::{random_pairs, sample_graph, seed_columns};
use super::verify::pair_distances;
use crate::config::{ExperimentConfig, RSpec};
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StripRowStatus {
    Success,
    FailedSynthetic,
    FailedShort,
    /// No strip of the required width fits inside the square.
    NoFit,
}

impl From<PathStatus> for StripRowStatus {
    fn from(s: PathStatus) -> Self {
        match s {
            PathStatus::Success => StripRowStatus::Success,
            PathStatus::FailedSynthetic => StripRowStatus::FailedSynthetic,
            PathStatus::FailedShort => StripRowStatus::FailedShort,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StripRow {
    pub experiment: &'static str,
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub master_seed: u64,
    pub trial_index: u64,
    pub trial_seed: u64,
    pub u: usize,
    pub v: usize,
    pub t: f64,
    pub delta: f64,
    pub delta_in_range: bool,
    pub alpha: f64,
    pub rho: Option<f64>,
    pub budget_k: Option<u64>,
    pub status: StripRowStatus,
    pub hops: Option<u64>,
    pub bfs_hops: Option<u64>,
    /// Every hop at most `r` and `hops ≤ budget_k`.
    pub path_valid: Option<bool>,
    pub failure_bound: f64,
    pub failure_bound_log: f64,
    pub pass: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StripCell {
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub attempts: u64,
    pub successes: u64,
    pub success_frequency: f64,
    pub delta_in_range: u64,
    pub mean_failure_bound: f64,
    pub violations: u64,
}

fn run_trial(
    cfg: &ExperimentConfig,
    consts: &ProofConstants,
    n: u64,
    spec: RSpec,
    r: f64,
    trial: u64,
) -> Result<Vec<StripRow>, HarnessError> {
    let seed = SeedSpec::new(cfg.master_seed, trial);
    let g = sample_graph(n, r, seed)?;
    let r_sq = r * r;
    let pairs = random_pairs(&g, seed, cfg.pairs_per_trial, |u, v| dist_sq(g.point(u), g.point(v)) > r_sq);
    let bfs = pair_distances(&g, &pairs)?;
    let (trial_index, trial_seed) = seed_columns(seed);
    let nf = n as f64;

    let mut rows = Vec::with_capacity(pairs.len());
    for (&(u, v), bfs_hops) in pairs.iter().zip(bfs) {
        let t0 = Instant::now();
        let t = (g.point(u) - g.point(v)).norm();
        let delta = match cfg.delta {
            Some(d) => d,
            None => exploratory_delta(nf, r, t, consts)?,
        };
        let (lo, hi) = consts.delta_range(r);
        let alpha = alpha_unchecked(delta, r, consts);
        let failure = failure_probability_upper_unchecked(t, r, nf, delta, consts)?;
        let mut row = StripRow {
            experiment: cfg.experiment.id(),
            n,
            r,
            r_spec: spec.to_string(),
            master_seed: cfg.master_seed,
            trial_index,
            trial_seed,
            u,
            v,
            t,
            delta,
            delta_in_range: delta >= lo && delta <= hi,
            alpha,
            rho: None,
            budget_k: None,
            status: StripRowStatus::NoFit,
            hops: None,
            bfs_hops,
            path_valid: None,
            failure_bound: failure.value(),
            failure_bound_log: failure.log_value,
            pass: true,
            wall_ms: 0.0,
        };
        if let Ok(placement) = fit_strip(g.point(u), g.point(v), alpha, nf) {
            let res = greedy_strip_path(&g, &placement, u, v, delta, consts)?;
            row.rho = Some(res.rho);
            row.budget_k = Some(res.budget_k);
            row.status = res.status.into();
            row.hops = res.hops;
            if res.status == PathStatus::Success {
                let hops = res.hops.expect("successful path has hops");
                let valid = hops <= res.budget_k
                    && res.path.first() == Some(&u)
                    && res.path.last() == Some(&v)
                    && res.path.windows(2).all(|w| dist_sq(g.point(w[0]), g.point(w[1])) <= r_sq);
                row.path_valid = Some(valid);
                row.pass = valid && bfs_hops.is_some_and(|d| d <= hops);
            }
        }
        row.wall_ms = elapsed_ms(t0);
        rows.push(row);
    }
    Ok(rows)
}

/// Greedy strip paths between random pairs with `t > r`, checked against
/// BFS and reported next to the failure bound for the same `(t, r, n, δ)`.
pub fn strip_path_experiment(
    cfg: &ExperimentConfig,
    jobs: Option<usize>,
) -> Result<Report<StripRow, Vec<StripCell>>, HarnessError> {
    cfg.validate()?;
    let consts = ProofConstants::default();
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (n, spec, r) in cfg.cells()? {
        let cell_rows: Vec<StripRow> = fan_out(jobs, cfg.trials, |t| run_trial(cfg, &consts, n, spec, r, t))?
            .into_iter()
            .flatten()
            .collect();
        let attempts = cell_rows.len() as u64;
        let successes = cell_rows.iter().filter(|r| r.status == StripRowStatus::Success).count() as u64;
        cells.push(StripCell {
            n,
            r,
            r_spec: spec.to_string(),
            attempts,
            successes,
            success_frequency: if attempts > 0 { successes as f64 / attempts as f64 } else { 0.0 },
            delta_in_range: cell_rows.iter().filter(|r| r.delta_in_range).count() as u64,
            mean_failure_bound: cell_rows.iter().map(|r| r.failure_bound).sum::<f64>() / attempts.max(1) as f64,
            violations: cell_rows.iter().filter(|r| !r.pass).count() as u64,
        });
        rows.extend(cell_rows);
    }
    let pass = rows.iter().all(|r| r.pass);
    Report::new(cfg.clone(), rows, cells, pass, elapsed_ms(start))
}
