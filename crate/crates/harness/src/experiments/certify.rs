use std::time::Instant;

use serde::Serialize;

use rgg_core::geometry::{dist_sq, strip_precondition, StripPlacement};
use rgg_core::sampler::SeedSpec;
use rgg_core::spatial_graph::{min_hops_lower, GeoGraph};
use rgg_core::strip_path::{default_lower_alpha, lower_chain_certificate};

use super::verify::pair_distances;
use super::{random_pairs, sample_graph, seed_columns};
use crate::config::{ExperimentConfig, RSpec};
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Debug, Serialize)]
pub struct CertifyRow {
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
    /// `⌈t/r⌉`.
    pub min_hops: u64,
    /// Largest `k` with a certified chain under the strip precondition.
    pub certified_k: Option<u64>,
    /// Width used for `certified_k`.
    pub alpha: Option<f64>,
    pub last_x: Option<f64>,
    pub bfs_hops: Option<u64>,
    /// BFS distance exceeds `certified_k`.
    pub sound: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyCell {
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub pairs: u64,
    pub certified: u64,
    /// Pairs whose certificate beats `⌈t/r⌉ − 1`.
    pub improved: u64,
    pub unsound: u64,
}

struct Best {
    k: u64,
    alpha: f64,
    last_x: f64,
}

/// Walks `k = ⌈t/r⌉, ⌈t/r⌉+1, …` while the strip precondition holds and the
/// chain keeps certifying.
fn best_certificate(g: &GeoGraph, u: usize, v: usize, t: f64, k_min: u64) -> Result<Option<Best>, HarnessError> {
    let r = g.r();
    let mut best = None;
    let mut k = k_min.max(1);
    loop {
        let alpha = default_lower_alpha(k, r, t);
        if !strip_precondition(t, k as u32, r, alpha) {
            break;
        }
        let placement = StripPlacement::between(g.point(u), g.point(v), alpha)?;
        let (chain, certified) = lower_chain_certificate(g, &placement, u, v, k)?;
        if !certified {
            break;
        }
        best = Some(Best {
            k,
            alpha,
            last_x: chain.last_x(),
        });
        k += 1;
    }
    Ok(best)
}

fn run_trial(cfg: &ExperimentConfig, n: u64, spec: RSpec, r: f64, trial: u64) -> Result<Vec<CertifyRow>, HarnessError> {
    let seed = SeedSpec::new(cfg.master_seed, trial);
    let g = sample_graph(n, r, seed)?;
    let r_sq = r * r;
    let pairs = random_pairs(&g, seed, cfg.pairs_per_trial, |u, v| dist_sq(g.point(u), g.point(v)) > r_sq);
    let bfs = pair_distances(&g, &pairs)?;
    let (trial_index, trial_seed) = seed_columns(seed);
    let mut rows = Vec::with_capacity(pairs.len());
    for (&(u, v), bfs_hops) in pairs.iter().zip(bfs) {
        let t0 = Instant::now();
        let t = (g.point(u) - g.point(v)).norm();
        let min_hops = min_hops_lower(g.point(u), g.point(v), r);
        let best = best_certificate(&g, u, v, t, min_hops)?;
        let certified_k = best.as_ref().map(|b| b.k);
        rows.push(CertifyRow {
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
            min_hops,
            certified_k,
            alpha: best.as_ref().map(|b| b.alpha),
            last_x: best.as_ref().map(|b| b.last_x),
            bfs_hops,
            sound: match (certified_k, bfs_hops) {
                (Some(k), Some(d)) => d > k,
                _ => true,
            },
            wall_ms: elapsed_ms(t0),
        });
    }
    Ok(rows)
}

/// Lower-chain certificates for random pairs, cross-checked against BFS.
pub fn certify_experiment(
    cfg: &ExperimentConfig,
    jobs: Option<usize>,
) -> Result<Report<CertifyRow, Vec<CertifyCell>>, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (n, spec, r) in cfg.cells()? {
        let cell_rows: Vec<CertifyRow> = fan_out(jobs, cfg.trials, |t| run_trial(cfg, n, spec, r, t))?
            .into_iter()
            .flatten()
            .collect();
        cells.push(CertifyCell {
            n,
            r,
            r_spec: spec.to_string(),
            pairs: cell_rows.len() as u64,
            certified: cell_rows.iter().filter(|r| r.certified_k.is_some()).count() as u64,
            improved: cell_rows.iter().filter(|r| r.certified_k.is_some_and(|k| k >= r.min_hops)).count() as u64,
            unsound: cell_rows.iter().filter(|r| !r.sound).count() as u64,
        });
        rows.extend(cell_rows);
    }
    let pass = rows.iter().all(|r| r.sound);
    Report::new(cfg.clone(), rows, cells, pass, elapsed_ms(start))
}
