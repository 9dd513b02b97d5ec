use std::time::Instant;

use serde::Serialize;

use rgg_core::concentration::{monte_carlo_tail, TailQuery, TailSide};
use rgg_core::sampler::SeedSpec;

use super::seed_columns;
use crate::config::ExperimentConfig;
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Debug, Serialize)]
pub struct TailsRow {
    pub experiment: &'static str,
    #[serde(rename = "N")]
    pub count: u64,
    pub delta: f64,
    pub side: TailSide,
    pub rate: f64,
    pub master_seed: u64,
    pub trial_index: u64,
    pub trial_seed: u64,
    pub trials: u64,
    pub hits: u64,
    pub empirical: f64,
    pub analytic_bound: f64,
    pub ci_radius: f64,
    pub pass: bool,
    pub wall_ms: f64,
}

/// Monte Carlo tails of sums of `N` unit exponentials over the grid
/// `N × δ`: upper tail always, lower tail when `δ < 1`. `trials` is the
/// number of sums per cell; cell `i` uses trial index `i`.
pub fn tails_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Report<TailsRow, serde_json::Value>, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut queries = Vec::new();
    for &count in &cfg.n_list {
        for &delta in &cfg.delta_list {
            queries.push(TailQuery {
                count,
                delta,
                rate: 1.0,
                side: TailSide::Upper,
            });
            if delta < 1.0 {
                queries.push(TailQuery {
                    count,
                    delta,
                    rate: 1.0,
                    side: TailSide::Lower,
                });
            }
        }
    }
    let rows = fan_out(jobs, queries.len() as u64, |i| {
        let t0 = Instant::now();
        let seed = SeedSpec::new(cfg.master_seed, i);
        let q = queries[i as usize];
        let res = monte_carlo_tail(q, cfg.trials as usize, seed)?;
        let (trial_index, trial_seed) = seed_columns(seed);
        Ok(TailsRow {
            experiment: cfg.experiment.id(),
            count: q.count,
            delta: q.delta,
            side: q.side,
            rate: q.rate,
            master_seed: cfg.master_seed,
            trial_index,
            trial_seed,
            trials: res.trials,
            hits: res.hits,
            empirical: res.empirical,
            analytic_bound: res.analytic_bound,
            ci_radius: res.ci_radius,
            pass: res.pass,
            wall_ms: elapsed_ms(t0),
        })
    })?;
    let failures = rows.iter().filter(|r| !r.pass).count();
    let summary = serde_json::json!({ "cells": rows.len(), "failures": failures });
    Report::new(cfg.clone(), rows, summary, failures == 0, elapsed_ms(start))
}
