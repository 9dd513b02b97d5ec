use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use rgg_core::bounds::{BoundParams, BoundReport};
use rgg_core::sampler::SeedSpec;
use rgg_core::spatial_graph::{bfs_tree, min_hops_lower, GeoGraph};

use super::{corner_pairs, random_pairs, sample_graph, seed_columns};
use crate::config::{ExperimentConfig, RSpec};
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    Random,
    Corner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairStatus {
    Ok,
    Unreachable,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub experiment: &'static str,
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub master_seed: u64,
    pub trial_index: u64,
    pub trial_seed: u64,
    pub pair_kind: PairKind,
    pub u: usize,
    pub v: usize,
    #[serde(rename = "d_E")]
    pub d_e: f64,
    #[serde(rename = "d_G")]
    pub d_g: Option<u64>,
    pub status: PairStatus,
    /// `⌈d_E/r⌉`.
    pub min_hops: u64,
    pub deterministic_ok: Option<bool>,
    pub gamma: f64,
    pub gamma_log: f64,
    pub gamma_poly: f64,
    pub gamma_const: f64,
    pub lower_applicable: bool,
    pub lower_value: f64,
    pub lower_satisfied: Option<bool>,
    pub upper_applicable: bool,
    pub upper_value: u64,
    pub upper_satisfied: Option<bool>,
    pub pass: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyCell {
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub trials: u64,
    pub pairs: u64,
    pub reachable: u64,
    pub unreachable: u64,
    pub deterministic_violations: u64,
    pub lower_applicable: u64,
    pub lower_violations: u64,
    /// Violations over applicable reachable pairs; absent when none apply.
    pub lower_violation_rate: Option<f64>,
    pub upper_applicable: u64,
    pub upper_violations: u64,
    pub upper_violation_rate: Option<f64>,
}

/// Graph distances for `pairs`, one BFS per distinct source that stops
/// once its targets are settled.
pub(crate) fn pair_distances(g: &GeoGraph, pairs: &[(usize, usize)]) -> Result<Vec<Option<u64>>, HarnessError> {
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in pairs {
        by_source.entry(u).or_default().push(v);
    }
    let mut dist = BTreeMap::new();
    for (u, targets) in by_source {
        let tree = bfs_tree(g, u, &targets)?;
        for v in targets {
            dist.insert((u, v), tree.hops(v).map(u64::from));
        }
    }
    Ok(pairs.iter().map(|p| dist[p]).collect())
}

fn run_trial(
    cfg: &ExperimentConfig,
    n: u64,
    spec: RSpec,
    r: f64,
    trial: u64,
) -> Result<Vec<VerifyRow>, HarnessError> {
    let start = Instant::now();
    let seed = SeedSpec::new(cfg.master_seed, trial);
    let g = sample_graph(n, r, seed)?;
    let mut pairs: Vec<(PairKind, (usize, usize))> = random_pairs(&g, seed, cfg.pairs_per_trial, |_, _| true)
        .into_iter()
        .map(|p| (PairKind::Random, p))
        .collect();
    pairs.extend(corner_pairs(&g).into_iter().map(|p| (PairKind::Corner, p)));
    let plain: Vec<_> = pairs.iter().map(|&(_, p)| p).collect();
    let dists = pair_distances(&g, &plain)?;
    let wall = elapsed_ms(start) / pairs.len().max(1) as f64;
    let (trial_index, trial_seed) = seed_columns(seed);

    let mut rows = Vec::with_capacity(pairs.len());
    for (&(kind, (u, v)), d_g) in pairs.iter().zip(dists) {
        let (pu, pv) = (g.point(u), g.point(v));
        let d_e = (pu - pv).norm();
        let params = BoundParams::new(n as f64, r, d_e)?;
        let rep = BoundReport::evaluate(&params, d_g);
        let min_hops = min_hops_lower(pu, pv, r);
        let deterministic_ok = d_g.map(|d| d >= min_hops);
        rows.push(VerifyRow {
            experiment: cfg.experiment.id(),
            n,
            r,
            r_spec: spec.to_string(),
            master_seed: cfg.master_seed,
            trial_index,
            trial_seed,
            pair_kind: kind,
            u,
            v,
            d_e,
            d_g,
            status: if d_g.is_some() { PairStatus::Ok } else { PairStatus::Unreachable },
            min_hops,
            deterministic_ok,
            gamma: rep.gamma.gamma,
            gamma_log: rep.gamma.term_log,
            gamma_poly: rep.gamma.term_poly,
            gamma_const: rep.gamma.term_const,
            lower_applicable: rep.lower.applicable,
            lower_value: rep.lower.value,
            lower_satisfied: rep.lower.satisfied,
            upper_applicable: rep.upper.applicable,
            upper_value: rep.upper.value,
            upper_satisfied: rep.upper.satisfied,
            pass: deterministic_ok != Some(false) && !rep.violated(),
            wall_ms: wall,
        });
    }
    Ok(rows)
}

fn summarize(n: u64, spec: RSpec, r: f64, trials: u64, rows: &[VerifyRow]) -> VerifyCell {
    let mut c = VerifyCell {
        n,
        r,
        r_spec: spec.to_string(),
        trials,
        ..Default::default()
    };
    for row in rows {
        c.pairs += 1;
        match row.status {
            PairStatus::Ok => c.reachable += 1,
            PairStatus::Unreachable => c.unreachable += 1,
        }
        c.deterministic_violations += u64::from(row.deterministic_ok == Some(false));
        if let Some(ok) = row.lower_satisfied {
            c.lower_applicable += 1;
            c.lower_violations += u64::from(!ok);
        }
        if let Some(ok) = row.upper_satisfied {
            c.upper_applicable += 1;
            c.upper_violations += u64::from(!ok);
        }
    }
    let rate = |v: u64, a: u64| (a > 0).then(|| v as f64 / a as f64);
    c.lower_violation_rate = rate(c.lower_violations, c.lower_applicable);
    c.upper_violation_rate = rate(c.upper_violations, c.upper_applicable);
    c
}

/// Random pairs plus corner pairs in every trial of every `(n, r)` cell,
/// each checked against `⌈d_E/r⌉` and the two hop bounds.
pub fn verify_bounds(
    cfg: &ExperimentConfig,
    jobs: Option<usize>,
) -> Result<Report<VerifyRow, Vec<VerifyCell>>, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (n, spec, r) in cfg.cells()? {
        let per_trial = fan_out(jobs, cfg.trials, |t| run_trial(cfg, n, spec, r, t))?;
        let cell_rows: Vec<VerifyRow> = per_trial.into_iter().flatten().collect();
        cells.push(summarize(n, spec, r, cfg.trials, &cell_rows));
        rows.extend(cell_rows);
    }
    let pass = rows.iter().all(|r| r.pass);
    Report::new(cfg.clone(), rows, cells, pass, elapsed_ms(start))
}
