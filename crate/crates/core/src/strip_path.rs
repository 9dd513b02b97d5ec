//! The two chain constructions along the segment `u → v`.
//!
//! Both walk a sequence of rectangles along the strip axis and pick the
//! vertex with the largest strip coordinate in each. The greedy builder
//! (one-sided strip `[0, α]`, step `ρ = r − α²/r`) yields a real path when it
//! succeeds. The lower chain (two-sided strip `|y| ≤ α`, step `r`) bounds the
//! progress any path of `k` hops can make, so `x_k < t` certifies
//! `d_G(u, v) > k` whenever short paths are confined to the strip.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::bounds::{gamma_with, BoundParams};
use crate::error::{invalid, Error, Result};
use crate::geometry::{dist_sq, rect_connectivity_width, Point, StripPlacement, GEOM_TOL};
use crate::sampler::{sample_poissonized, SeedSpec};
use crate::spatial_graph::GeoGraph;

/// Slack by which the lower chain must fall short of `t` to certify.
pub const CERTIFICATE_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofConstants {
    pub b: f64,
    pub c: f64,
    pub f: f64,
    pub d: f64,
    pub e: f64,
    pub j: f64,
}

impl Default for ProofConstants {
    fn default() -> Self {
        ProofConstants {
            b: 47.0 / 50.0,
            c: 1e-2,
            f: 23.0 / 200.0,
            d: 70.0,
            e: 31.0,
            // 10^{4/3}: the value for which C = J^{−3/2} and 3^{2/3}J = 300^{2/3}.
            j: 10f64.powf(4.0 / 3.0),
        }
    }
}

impl ProofConstants {
    /// `B² + C/B ≤ 1/(F+1)`, `J > 3(F+1)/2^{2/3}` and `C = J^{−3/2}`.
    pub fn check(&self) -> Result<()> {
        let lhs = self.b * self.b + self.c / self.b;
        if !(lhs <= 1.0 / (self.f + 1.0)) {
            return Err(invalid("B", format!("B² + C/B = {lhs} exceeds 1/(F+1)")));
        }
        let floor = 3.0 * (self.f + 1.0) / 2f64.cbrt().powi(2);
        if !(self.j > floor) {
            return Err(invalid("J", format!("{} must exceed 3(F+1)/2^(2/3) = {floor}", self.j)));
        }
        let c = self.j.powf(-1.5);
        if (self.c - c).abs() > 1e-12 * c {
            return Err(invalid("C", format!("{} differs from J^(-3/2) = {c}", self.c)));
        }
        Ok(())
    }

    /// `[J, F·r^{4/3}]`.
    pub fn delta_range(&self, r: f64) -> (f64, f64) {
        (self.j, self.f * r.powf(4.0 / 3.0))
    }
}

/// `α = B δ^{1/2} r^{1/3}` for `δ` in `[J, F r^{4/3}]`.
pub fn choose_alpha(delta: f64, r: f64, consts: &ProofConstants) -> Result<f64> {
    let (lo, hi) = consts.delta_range(r);
    if !(delta >= lo && delta <= hi) {
        return Err(invalid("delta", format!("{delta} outside [J, F·r^(4/3)] = [{lo}, {hi}]")));
    }
    Ok(alpha_unchecked(delta, r, consts))
}

pub fn alpha_unchecked(delta: f64, r: f64, consts: &ProofConstants) -> f64 {
    consts.b * delta.sqrt() * r.cbrt()
}

/// Hop budget `⌈(t/r)(1 + δ r^{−4/3})⌉`.
pub fn hop_budget(t: f64, r: f64, delta: f64) -> u64 {
    ((t / r) * (1.0 + delta * r.powf(-4.0 / 3.0))).ceil() as u64
}

/// `max(J, γ(n, r, t))`, the choice that makes the budget equal the upper
/// hop bound.
pub fn default_delta(n: f64, r: f64, t: f64, consts: &ProofConstants) -> Result<f64> {
    let params = BoundParams::new(n, r, t)?;
    Ok(consts.j.max(gamma_with(&params, consts).gamma))
}

/// [`default_delta`] capped at `F r^{4/3}` so that `α < r` also below the
/// radius where the range `[J, F r^{4/3}]` is non-empty.
pub fn exploratory_delta(n: f64, r: f64, t: f64, consts: &ProofConstants) -> Result<f64> {
    Ok(default_delta(n, r, t, consts)?.min(consts.delta_range(r).1))
}

/// Lower-chain width `√(δ/2)·(k³r²/t)^{1/3}` with `δ = 1/2`.
pub fn default_lower_alpha(k: u64, r: f64, t: f64) -> f64 {
    0.5 * ((k as f64).powi(3) * r * r / t).cbrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainVertex {
    Real(usize),
    Synthetic,
}

impl Serialize for ChainVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ChainVertex::Real(i) => s.serialize_u64(*i as u64),
            ChainVertex::Synthetic => s.serialize_str("SYNTHETIC"),
        }
    }
}

/// Step `i`: the rectangle `(lo, hi]` in strip coordinates, the chosen
/// vertex, its coordinate `xᵢ` and the shortfall `aᵢ = hi − xᵢ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainEntry {
    pub vertex: ChainVertex,
    pub x: f64,
    pub a: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Serialize for ChainEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ChainEntry", 3)?;
        st.serialize_field("vertex", &self.vertex)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("a", &self.a)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRecord {
    pub k: u64,
    pub alpha: f64,
    pub rho: f64,
    pub entries: Vec<ChainEntry>,
}

impl ChainRecord {
    pub fn last_x(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.x)
    }

    pub fn has_synthetic(&self) -> bool {
        self.entries.iter().any(|e| e.vertex == ChainVertex::Synthetic)
    }

    /// `|x_m − (m·ρ − Σ aᵢ)|` for the `m` recorded steps.
    pub fn telescoping_error(&self) -> f64 {
        let m = self.entries.len() as f64;
        let total: f64 = self.entries.iter().map(|e| e.a).sum();
        (self.last_x() - (m * self.rho - total)).abs()
    }

    /// Consecutive rectangles abut exactly and every shortfall is within
    /// `[0, ρ − a_{i−1}]`.
    pub fn is_well_formed(&self, tol: f64) -> bool {
        let mut prev_a = 0.0;
        let mut prev_hi: Option<f64> = None;
        for e in &self.entries {
            if let Some(h) = prev_hi {
                if e.lo != h {
                    return false;
                }
            }
            if e.a < -tol || e.a > self.rho - prev_a + tol || e.lo > e.hi {
                return false;
            }
            prev_a = e.a;
            prev_hi = Some(e.hi);
        }
        true
    }
}

/// Vertices of the strip sorted by strip coordinate, equal coordinates
/// ordered so that the smallest index comes last.
struct StripIndex {
    items: Vec<(f64, usize)>,
}

impl StripIndex {
    fn build(g: &GeoGraph, placement: &StripPlacement, keep: impl Fn(Point) -> bool, skip: &[usize]) -> Self {
        let mut items: Vec<(f64, usize)> = (0..g.vertex_count())
            .filter(|i| !skip.contains(i))
            .filter_map(|i| {
                let p = placement.to_strip_frame(g.point(i));
                keep(p).then_some((p.x, i))
            })
            .collect();
        items.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        StripIndex { items }
    }

    /// Rightmost vertex with `lo < x ≤ hi` (or `lo ≤ x` when `closed`).
    fn rightmost(&self, lo: f64, hi: f64, closed: bool) -> Option<(f64, usize)> {
        let pos = self.items.partition_point(|&(x, _)| x <= hi);
        let &(x, i) = self.items[..pos].last()?;
        let inside = if closed { x >= lo } else { x > lo };
        inside.then_some((x, i))
    }
}

/// One chain step over `(lo, hi]`; empty rectangles place a synthetic
/// vertex at `lo`.
fn step(index: &StripIndex, lo: f64, hi: f64, closed: bool) -> ChainEntry {
    let (vertex, x) = match index.rightmost(lo, hi, closed) {
        Some((x, i)) => (ChainVertex::Real(i), x),
        None => (ChainVertex::Synthetic, lo),
    };
    ChainEntry {
        vertex,
        x,
        a: hi - x,
        lo,
        hi,
    }
}

fn check_endpoints(g: &GeoGraph, placement: &StripPlacement, u: usize, v: usize) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let scale = placement.length.max(1.0);
    let pu = placement.to_strip_frame(g.point(u));
    let pv = placement.to_strip_frame(g.point(v));
    if pu.norm() > 1e-9 * scale || dist_sq(pv, Point::new(placement.length, 0.0)).sqrt() > 1e-9 * scale {
        return Err(invalid("placement", "strip frame does not map u, v to (0,0), (t,0)"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    Success,
    FailedSynthetic,
    FailedShort,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripPathResult {
    pub status: PathStatus,
    pub hops: Option<u64>,
    pub budget_k: u64,
    pub delta: f64,
    pub alpha: f64,
    pub rho: f64,
    /// Whether `δ` lies in `[J, F r^{4/3}]`.
    pub delta_in_range: bool,
    pub chain: Vec<ChainEntry>,
    pub path: Vec<usize>,
}

impl StripPathResult {
    pub fn chain_record(&self) -> ChainRecord {
        ChainRecord {
            k: self.budget_k,
            alpha: self.alpha,
            rho: self.rho,
            entries: self.chain.clone(),
        }
    }
}

/// Greedy `u`–`v` path through the one-sided strip `[0, t] × [0, α]` of
/// `placement`, `α = B δ^{1/2} r^{1/3}`.
///
/// `δ` outside `[J, F r^{4/3}]` is accepted as long as `α ≤ r` and is
/// flagged in the result.
pub fn greedy_strip_path(
    g: &GeoGraph,
    placement: &StripPlacement,
    u: usize,
    v: usize,
    delta: f64,
    consts: &ProofConstants,
) -> Result<StripPathResult> {
    check_endpoints(g, placement, u, v)?;
    let r = g.r();
    let t = placement.length;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    let (lo, hi) = consts.delta_range(r);
    let delta_in_range = delta >= lo && delta <= hi;
    let alpha = alpha_unchecked(delta, r, consts);
    let rho = rect_connectivity_width(r, alpha)?;
    let budget_k = hop_budget(t, r, delta);

    let mut result = StripPathResult {
        status: PathStatus::Success,
        hops: Some(1),
        budget_k,
        delta,
        alpha,
        rho,
        delta_in_range,
        chain: Vec::new(),
        path: vec![u, v],
    };
    if t <= r {
        return Ok(result);
    }

    let index = StripIndex::build(g, placement, |p| p.y >= 0.0 && p.y <= alpha, &[u, v]);
    let mut x_prev = 0.0;
    let mut lo = 0.0;
    let mut reached = false;
    for j in 0..budget_k {
        if x_prev + rho >= t {
            reached = true;
            break;
        }
        if j + 1 == budget_k {
            break;
        }
        let hi = x_prev + rho;
        let entry = step(&index, lo, hi, false);
        lo = hi;
        x_prev = entry.x;
        result.chain.push(entry);
    }

    let record = result.chain_record();
    result.status = if record.has_synthetic() {
        PathStatus::FailedSynthetic
    } else if !reached {
        PathStatus::FailedShort
    } else {
        PathStatus::Success
    };
    if result.status != PathStatus::Success {
        result.hops = None;
        result.path.clear();
        return Ok(result);
    }

    let mut path = vec![u];
    path.extend(result.chain.iter().map(|e| match e.vertex {
        ChainVertex::Real(i) => i,
        ChainVertex::Synthetic => unreachable!("status is success"),
    }));
    path.push(v);
    if let Some(w) = path.windows(2).find(|w| !g.is_edge(w[0], w[1])) {
        return Err(Error::Infeasible(format!(
            "greedy hop {} -> {} exceeds the radius",
            w[0], w[1]
        )));
    }
    result.hops = Some(path.len() as u64 - 1);
    result.path = path;
    Ok(result)
}

/// The lower chain over the two-sided strip `|y| ≤ α` of `placement`
/// (`α = placement.alpha`), run for `k` steps. Returns the chain and
/// whether `x_k < t`.
///
/// When in addition `strip_precondition(t, k, r, α)` holds, a certified
/// chain proves that no `u`–`v` path has `k` or fewer hops.
pub fn lower_chain_certificate(
    g: &GeoGraph,
    placement: &StripPlacement,
    u: usize,
    v: usize,
    k: u64,
) -> Result<(ChainRecord, bool)> {
    check_endpoints(g, placement, u, v)?;
    if k == 0 {
        return Err(invalid("k", "hop budget must be positive"));
    }
    let r = g.r();
    let alpha = placement.alpha;
    let t = placement.length;
    let index = StripIndex::build(g, placement, |p| p.x >= 0.0 && p.y.abs() <= alpha + GEOM_TOL, &[]);
    let mut record = ChainRecord {
        k,
        alpha,
        rho: r,
        entries: Vec::with_capacity(k as usize),
    };
    let mut x_prev = 0.0;
    let mut lo = 0.0;
    for i in 0..k {
        let hi = x_prev + r;
        let entry = step(&index, lo, hi, i == 0);
        lo = hi;
        x_prev = entry.x;
        record.entries.push(entry);
    }
    let certified = record.last_x() < t - CERTIFICATE_MARGIN;
    Ok((record, certified))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShortfallLaw {
    pub alpha: f64,
    pub r: f64,
    pub trials: u64,
    pub beta: Vec<f64>,
    pub empirical: Vec<f64>,
    /// `e^{−2αβ}` for `β ≤ r`, else 0.
    pub theory: Vec<f64>,
    /// Three binomial standard errors at the theoretical value.
    pub ci_radius: Vec<f64>,
}

impl ShortfallLaw {
    pub fn within_ci(&self) -> bool {
        self.empirical
            .iter()
            .zip(&self.theory)
            .zip(&self.ci_radius)
            .all(|((e, t), c)| (e - t).abs() <= *c)
    }
}

/// Empirical survival function of the first lower-chain shortfall `a₁` in
/// the Poissonized model, with `u = (−r/2, 0)` and `v` on the right edge.
pub fn empirical_shortfall_law(
    n: u64,
    r: f64,
    alpha: f64,
    beta: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<ShortfallLaw> {
    let half = (n as f64).sqrt() / 2.0;
    if !(r > 0.0 && r < 2.0 * half * 0.999) {
        return Err(invalid("r", format!("must be positive and below the side {}", 2.0 * half)));
    }
    if !(alpha > 0.0 && alpha <= half) {
        return Err(invalid("alpha", format!("must lie in (0, {half}]")));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    let u = Point::new(-r / 2.0, 0.0);
    let v = Point::new(half, 0.0);
    let placement = StripPlacement::between(u, v, alpha)?;
    let mut hits = vec![0u64; beta.len()];
    for trial in 0..trials {
        let inst = sample_poissonized(n, r, SeedSpec::new(master_seed, trial), Some(u), Some(v))?;
        let ui = inst.labelled_u.expect("poissonized instance labels u");
        let vi = inst.labelled_v.expect("poissonized instance labels v");
        let rightmost = inst
            .points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != vi)
            .map(|(i, &p)| (i, placement.to_strip_frame(p)))
            .filter(|&(i, p)| i == ui || (p.x >= 0.0 && p.x <= r && p.y.abs() <= alpha))
            .map(|(i, p)| if i == ui { 0.0 } else { p.x })
            .fold(0.0f64, f64::max);
        let a1 = r - rightmost;
        for (h, &b) in hits.iter_mut().zip(beta) {
            *h += u64::from(a1 >= b);
        }
    }
    let tf = trials as f64;
    let theory: Vec<f64> = beta
        .iter()
        .map(|&b| if b <= r { (-2.0 * alpha * b.max(0.0)).exp() } else { 0.0 })
        .collect();
    Ok(ShortfallLaw {
        alpha,
        r,
        trials,
        beta: beta.to_vec(),
        empirical: hits.iter().map(|&h| h as f64 / tf).collect(),
        ci_radius: theory.iter().map(|&p| 3.0 * (p * (1.0 - p) / tf).sqrt()).collect(),
        theory,
    })
}
