//! One runner per experiment type. Each trial is a pure function of
//! `(config, cell, trial_index)`; results are merged in trial order.

mod certify;
mod diameter;
mod strip;
mod tails;
mod threshold;
mod verify;

pub use certify::{certify_experiment, CertifyCell, CertifyRow};
pub use diameter::{diameter_experiment, DiameterRow, DiameterStatus};
pub use strip::{strip_path_experiment, StripCell, StripRow, StripRowStatus};
pub use tails::{tails_experiment, TailsRow};
pub use threshold::{isotonic_fit, threshold_sweep, ThresholdCurve, ThresholdPoint, ThresholdRow};
pub use verify::{verify_bounds, PairKind, PairStatus, VerifyCell, VerifyRow};

use rand::Rng;

use rgg_core::sampler::{sample_uniform, stream, SeedSpec};
use rgg_core::spatial_graph::{build_graph, corner_vertices, GeoGraph};

use crate::HarnessError;

pub(crate) fn sample_graph(n: u64, r: f64, seed: SeedSpec) -> Result<GeoGraph, HarnessError> {
    Ok(build_graph(sample_uniform(n, r, seed)?)?)
}

/// Up to `count` ordered pairs `u ≠ v` drawn uniformly, keeping those that
/// pass `accept`; gives up after `100·count` draws.
pub(crate) fn random_pairs(
    g: &GeoGraph,
    seed: SeedSpec,
    count: u64,
    accept: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(count as usize);
    if n < 2 {
        return out;
    }
    let mut rng = seed.rng(stream::PAIRS);
    for _ in 0..count.saturating_mul(100) {
        if out.len() as u64 == count {
            break;
        }
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && accept(u, v) {
            out.push((u, v));
        }
    }
    out
}

/// Every pair among the distinct corner-square vertices.
pub(crate) fn corner_pairs(g: &GeoGraph) -> Vec<(usize, usize)> {
    let mut corners: Vec<usize> = corner_vertices(g).into_iter().flatten().collect();
    corners.dedup();
    let mut out = Vec::new();
    for (i, &a) in corners.iter().enumerate() {
        for &b in &corners[i + 1..] {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

/// `(trial_index, trial_seed)` columns shared by every row.
pub(crate) fn seed_columns(seed: SeedSpec) -> (u64, u64) {
    (seed.trial_index, seed.trial_seed())
}
