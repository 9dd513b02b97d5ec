//! Chernoff-type tail bounds for sums of i.i.d. exponentials, their Monte
//! Carlo validation, and the two-term failure probabilities of the strip
//! constructions. Everything is evaluated in log space.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sampler::{stream, SeedSpec};
use crate::strip_path::ProofConstants;

/// Below `e^{−700}` a probability is reported by its logarithm only.
pub const UNDERFLOW_LOG: f64 = -700.0;

/// Minimum Monte Carlo sample size.
pub const MIN_TRIALS: usize = 1000;

/// A probability held as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogProb {
    pub log_value: f64,
}

impl LogProb {
    pub fn from_log(log_value: f64) -> Self {
        LogProb { log_value }
    }

    pub fn zero() -> Self {
        LogProb {
            log_value: f64::NEG_INFINITY,
        }
    }

    /// `min(1, e^{log})`, clamped only here at the representation boundary.
    pub fn value(&self) -> f64 {
        self.log_value.min(0.0).exp()
    }

    pub fn underflow(&self) -> bool {
        self.log_value < UNDERFLOW_LOG
    }

    /// `log(e^a + e^b)` without leaving log space.
    pub fn sum(self, other: LogProb) -> LogProb {
        let (hi, lo) = if self.log_value >= other.log_value {
            (self.log_value, other.log_value)
        } else {
            (other.log_value, self.log_value)
        };
        if hi == f64::NEG_INFINITY {
            return LogProb::zero();
        }
        LogProb::from_log(hi + (lo - hi).exp().ln_1p())
    }

    pub fn report(&self) -> ProbabilityReport {
        ProbabilityReport {
            value: self.value(),
            log_value: self.log_value,
            underflow: self.underflow(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub value: f64,
    pub log_value: f64,
    pub underflow: bool,
}

fn check_terms(count: u64) -> Result<()> {
    if count == 0 {
        return Err(invalid("N", "need at least one summand"));
    }
    Ok(())
}

/// `((1+δ)/e^δ)^N`.
pub fn upper_tail_bound(count: u64, delta: f64) -> Result<LogProb> {
    check_terms(count)?;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    Ok(LogProb::from_log(count as f64 * (delta.ln_1p() - delta)))
}

/// `((1−δ)e^δ)^N` for `0 < δ < 1`.
pub fn lower_tail_bound(count: u64, delta: f64) -> Result<LogProb> {
    check_terms(count)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    Ok(LogProb::from_log(count as f64 * ((-delta).ln_1p() + delta)))
}

/// `g(x) = x − ln(1+x)`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x > -1.0) {
        return Err(invalid("x", format!("g is defined for x > −1, got {x}")));
    }
    Ok(x - x.ln_1p())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailSide {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailQuery {
    #[serde(rename = "N")]
    pub count: u64,
    pub delta: f64,
    pub rate: f64,
    pub side: TailSide,
}

impl TailQuery {
    pub fn analytic_bound(&self) -> Result<LogProb> {
        match self.side {
            TailSide::Upper => upper_tail_bound(self.count, self.delta),
            TailSide::Lower => lower_tail_bound(self.count, self.delta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheckResult {
    pub query: TailQuery,
    pub analytic_bound: f64,
    pub empirical: f64,
    pub hits: u64,
    pub trials: u64,
    /// Three binomial standard errors, `3·√(p̂(1−p̂)/trials)`.
    pub ci_radius: f64,
    pub pass: bool,
}

/// Draws `trials` sums of `N` exponentials and counts how often the sum
/// crosses `(1 ± δ)·N/rate`.
pub fn monte_carlo_tail(query: TailQuery, trials: usize, seed: SeedSpec) -> Result<TailCheckResult> {
    if trials < MIN_TRIALS {
        return Err(invalid("trials", format!("need at least {MIN_TRIALS}, got {trials}")));
    }
    if !(query.rate.is_finite() && query.rate > 0.0) {
        return Err(invalid("rate", format!("must be positive, got {}", query.rate)));
    }
    let bound = query.analytic_bound()?.value();
    let exp = Exp::new(query.rate).map_err(|e| invalid("rate", e.to_string()))?;
    let mean = query.count as f64 / query.rate;
    let mut rng = seed.rng(stream::AUX);
    let mut hits = 0u64;
    for _ in 0..trials {
        let sum: f64 = (0..query.count).map(|_| exp.sample(&mut rng)).sum();
        let hit = match query.side {
            TailSide::Upper => sum >= (1.0 + query.delta) * mean,
            TailSide::Lower => sum <= (1.0 - query.delta) * mean,
        };
        hits += u64::from(hit);
    }
    let p = hits as f64 / trials as f64;
    let ci_radius = 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(TailCheckResult {
        query,
        analytic_bound: bound,
        empirical: p,
        hits,
        trials: trials as u64,
        ci_radius,
        pass: p <= bound + ci_radius,
    })
}

/// Two-term bound on the greedy construction failing, valid for
/// `J ≤ δ ≤ F r^{4/3}`:
/// `n·exp(−(F+1)δ^{1/2}r^{4/3}/(2J^{3/2})) + exp(−g((δ/J)^{3/2})·t/r)`.
pub fn failure_probability_upper(
    t: f64,
    r: f64,
    n: f64,
    delta: f64,
    consts: &ProofConstants,
) -> Result<LogProb> {
    let hi = consts.f * r.powf(4.0 / 3.0);
    if !(delta >= consts.j && delta <= hi) {
        return Err(invalid(
            "delta",
            format!("must lie in [J, F·r^(4/3)] = [{}, {hi}], got {delta}", consts.j),
        ));
    }
    failure_probability_upper_unchecked(t, r, n, delta, consts)
}

/// The same expression without the range restriction on `δ`, for
/// exploratory rows outside the proven regime.
pub fn failure_probability_upper_unchecked(
    t: f64,
    r: f64,
    n: f64,
    delta: f64,
    consts: &ProofConstants,
) -> Result<LogProb> {
    check_positive("t", t)?;
    check_positive("r", r)?;
    check_positive("n", n)?;
    check_positive("delta", delta)?;
    let j32 = consts.j.powf(1.5);
    let first = n.ln() - (consts.f + 1.0) * delta.sqrt() * r.powf(4.0 / 3.0) / (2.0 * j32);
    let second = -g_function((delta / consts.j).powf(1.5))? * t / r;
    Ok(LogProb::from_log(first).sum(LogProb::from_log(second)))
}

/// Two-term bound on the hop count falling below `(t/r)(1 + δ/(tr)^{2/3})`,
/// valid for `0 < δ < 2^{−1/3}`:
/// `(t/r)·exp(−√(δ/2)(tr)^{2/3}) + exp(−(1−√(2δ³))²·t/(2r))`.
pub fn failure_probability_lower(t: f64, r: f64, delta: f64) -> Result<LogProb> {
    check_positive("t", t)?;
    check_positive("r", r)?;
    let hi = 0.5f64.cbrt();
    if !(delta > 0.0 && delta < hi) {
        return Err(invalid("delta", format!("must lie in (0, 2^(-1/3)), got {delta}")));
    }
    let first = (t / r).ln() - (delta / 2.0).sqrt() * (t * r).cbrt().powi(2);
    let shrink = 1.0 - (2.0 * delta.powi(3)).sqrt();
    let second = -shrink * shrink * t / (2.0 * r);
    Ok(LogProb::from_log(first).sum(LogProb::from_log(second)))
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {v}")))
    }
}

/// One step of a coupled shortfall chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledShortfall {
    /// `ãᵢ ~ Exp(rate)`.
    pub dominating: f64,
    /// `aᵢ = min(ãᵢ, ρ − aᵢ₋₁)`.
    pub realized: f64,
}

/// The coupling under which the chain shortfalls are dominated by i.i.d.
/// exponentials.
pub fn coupled_shortfalls(
    rate: f64,
    rho: f64,
    steps: usize,
    rng: &mut impl Rng,
) -> Result<Vec<CoupledShortfall>> {
    check_positive("rho", rho)?;
    let exp = Exp::new(rate).map_err(|e| invalid("rate", e.to_string()))?;
    let mut prev = 0.0;
    Ok((0..steps)
        .map(|_| {
            let dominating = exp.sample(rng);
            let realized = dominating.min(rho - prev);
            prev = realized;
            CoupledShortfall {
                dominating,
                realized,
            }
        })
        .collect())
}
