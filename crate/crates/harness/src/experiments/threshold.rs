use std::time::Instant;

use serde::Serialize;

use rgg_core::bounds::connectivity_threshold;
use rgg_core::sampler::SeedSpec;
use rgg_core::spatial_graph::is_connected;

use super::{sample_graph, seed_columns};
use crate::config::ExperimentConfig;
use crate::report::Report;
use crate::{elapsed_ms, fan_out, HarnessError};

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdRow {
    pub experiment: &'static str,
    pub n: u64,
    pub r: f64,
    pub r_spec: String,
    pub r_over_rc: f64,
    pub master_seed: u64,
    pub trial_index: u64,
    pub trial_seed: u64,
    pub connected: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdPoint {
    pub r: f64,
    pub r_spec: String,
    pub r_over_rc: f64,
    pub trials: u64,
    pub connected: u64,
    pub frequency: f64,
    /// Binomial standard error at `(k+1)/(trials+2)`.
    pub sigma: f64,
    pub isotonic: f64,
    pub within_noise: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCurve {
    pub n: u64,
    pub r_c: f64,
    pub points: Vec<ThresholdPoint>,
    /// Every frequency within `3σ` of the non-decreasing least-squares fit.
    pub monotone: bool,
}

/// Non-decreasing least-squares fit by pool-adjacent-violators.
pub fn isotonic_fit(values: &[f64], weights: &[f64]) -> Vec<f64> {
    // (mean, weight, run length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
            let (m2, w2, l2) = blocks.pop().unwrap();
            let (m1, w1, l1) = blocks.pop().unwrap();
            let w = w1 + w2;
            blocks.push(((m1 * w1 + m2 * w2) / w, w, l1 + l2));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, _, l)| std::iter::repeat_n(m, l))
        .collect()
}

/// Connectivity frequency over `trials` samples per radius. Trial `i` uses
/// the same point set at every radius of a given `n`.
pub fn threshold_sweep(
    cfg: &ExperimentConfig,
    jobs: Option<usize>,
) -> Result<Report<ThresholdRow, Vec<ThresholdCurve>>, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &n in &cfg.n_list {
        let rc = connectivity_threshold(n as f64)?;
        let mut points = Vec::new();
        for &spec in &cfg.r_list {
            let r = spec.resolve(n)?;
            let trial_rows = fan_out(jobs, cfg.trials, |t| {
                let t0 = Instant::now();
                let seed = SeedSpec::new(cfg.master_seed, t);
                let connected = is_connected(&sample_graph(n, r, seed)?);
                let (trial_index, trial_seed) = seed_columns(seed);
                Ok(ThresholdRow {
                    experiment: cfg.experiment.id(),
                    n,
                    r,
                    r_spec: spec.to_string(),
                    r_over_rc: r / rc,
                    master_seed: cfg.master_seed,
                    trial_index,
                    trial_seed,
                    connected,
                    wall_ms: elapsed_ms(t0),
                })
            })?;
            let hits = trial_rows.iter().filter(|r| r.connected).count() as u64;
            let trials = cfg.trials as f64;
            let smoothed = (hits as f64 + 1.0) / (trials + 2.0);
            points.push(ThresholdPoint {
                r,
                r_spec: spec.to_string(),
                r_over_rc: r / rc,
                trials: cfg.trials,
                connected: hits,
                frequency: hits as f64 / trials,
                sigma: (smoothed * (1.0 - smoothed) / trials).sqrt(),
                isotonic: 0.0,
                within_noise: true,
            });
            rows.extend(trial_rows);
        }
        points.sort_by(|a, b| a.r.total_cmp(&b.r));
        let freq: Vec<f64> = points.iter().map(|p| p.frequency).collect();
        let fit = isotonic_fit(&freq, &vec![1.0; freq.len()]);
        for (p, f) in points.iter_mut().zip(fit) {
            p.isotonic = f;
            p.within_noise = (p.frequency - f).abs() <= 3.0 * p.sigma;
        }
        curves.push(ThresholdCurve {
            n,
            r_c: rc,
            monotone: points.iter().all(|p| p.within_noise),
            points,
        });
    }
    let pass = curves.iter().all(|c| c.monotone);
    Report::new(cfg.clone(), rows, curves, pass, elapsed_ms(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_examples() {
        let w = [1.0; 5];
        assert_eq!(isotonic_fit(&[0.0, 0.2, 0.5, 0.9, 1.0], &w), vec![0.0, 0.2, 0.5, 0.9, 1.0]);
        let fit = isotonic_fit(&[0.0, 0.6, 0.4, 0.9, 0.8], &w);
        let expect = [0.0, 0.5, 0.5, 0.85, 0.85];
        for (a, b) in fit.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(isotonic_fit(&[3.0, 2.0, 1.0], &[1.0; 3]), vec![2.0; 3]);
        assert!(isotonic_fit(&[], &[]).is_empty());
    }
}
