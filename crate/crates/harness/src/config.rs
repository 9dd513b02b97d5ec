use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use rgg_core::bounds::{connectivity_threshold, upper_applicability_radius};
use rgg_core::spatial_graph::DiameterMode;

use crate::HarnessError;

/// A radius given either as a length or relative to `n`: `2.5`, `rc`,
/// `rc*1.5`, `1.5*rc`, `70sqrtlog`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RSpec {
    Absolute(f64),
    Rc(f64),
    SeventySqrtLog,
}

impl RSpec {
    pub fn resolve(&self, n: u64) -> Result<f64, HarnessError> {
        let r = match *self {
            RSpec::Absolute(r) => r,
            RSpec::Rc(x) => x * connectivity_threshold(n as f64)?,
            RSpec::SeventySqrtLog => upper_applicability_radius(n as f64),
        };
        if !(r.is_finite() && r > 0.0) {
            return Err(HarnessError::Usage(format!("--r {self} resolves to {r} at n = {n}")));
        }
        Ok(r)
    }
}

impl fmt::Display for RSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RSpec::Absolute(r) => write!(f, "{r}"),
            RSpec::Rc(x) if *x == 1.0 => f.write_str("rc"),
            RSpec::Rc(x) => write!(f, "rc*{x}"),
            RSpec::SeventySqrtLog => f.write_str("70sqrtlog"),
        }
    }
}

impl FromStr for RSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let number = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x > 0.0)
                .ok_or_else(|| format!("invalid radius '{s}'"))
        };
        if s == "rc" {
            return Ok(RSpec::Rc(1.0));
        }
        if s == "70sqrtlog" {
            return Ok(RSpec::SeventySqrtLog);
        }
        if let Some(x) = s.strip_prefix("rc*") {
            return number(x).map(RSpec::Rc);
        }
        if let Some(x) = s.strip_suffix("*rc") {
            return number(x).map(RSpec::Rc);
        }
        number(s).map(RSpec::Absolute)
    }
}

impl Serialize for RSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Accepts `1000`, `1e6` and `1_000_000`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let cleaned = s.trim().replace('_', "");
    if let Ok(v) = cleaned.parse::<u64>() {
        return Ok(v);
    }
    match cleaned.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(63) => Ok(x as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    VerifyBounds,
    ThresholdSweep,
    Diameter,
    StripPath,
    Tails,
    Certificate,
}

impl Experiment {
    pub fn id(&self) -> &'static str {
        match self {
            Experiment::VerifyBounds => "verify-bounds",
            Experiment::ThresholdSweep => "threshold-sweep",
            Experiment::Diameter => "diameter",
            Experiment::StripPath => "strip-path",
            Experiment::Tails => "tails",
            Experiment::Certificate => "certificate",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Everything that determines a report's contents. Output location and
/// worker count are deliberately absent: they never change results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_list: Vec<u64>,
    pub r_list: Vec<RSpec>,
    pub trials: u64,
    pub pairs_per_trial: u64,
    pub master_seed: u64,
    /// Strip-path `δ`; `None` picks `min(max(J, γ), F r^{4/3})` per pair.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Tail deviations `δ` (tails experiment).
    #[serde(default)]
    pub delta_list: Vec<f64>,
    /// `None` uses exact diameters up to [`AUTO_EXACT_LIMIT`] vertices.
    #[serde(default)]
    pub diameter_mode: Option<DiameterMode>,
    /// Constant `c` of the reference diameter curve.
    #[serde(default = "default_reference_c")]
    pub reference_c: f64,
}

pub const AUTO_EXACT_LIMIT: usize = 2000;

fn default_reference_c() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            n_list: Vec::new(),
            r_list: Vec::new(),
            trials: 1,
            pairs_per_trial: 0,
            master_seed: 0,
            delta: None,
            delta_list: Vec::new(),
            diameter_mode: None,
            reference_c: default_reference_c(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let usage = |m: String| Err(HarnessError::Usage(m));
        if self.trials == 0 {
            return usage("--trials must be at least 1".into());
        }
        if self.n_list.is_empty() {
            return usage("--n needs at least one value".into());
        }
        if self.experiment == Experiment::Tails {
            if self.delta_list.is_empty() {
                return usage("--delta needs at least one value".into());
            }
            if let Some(d) = self.delta_list.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
                return usage(format!("--delta {d} must be positive"));
            }
            if let Some(n) = self.n_list.iter().find(|&&n| n == 0) {
                return usage(format!("--n {n} must be positive"));
            }
            return Ok(());
        }
        if self.r_list.is_empty() {
            return usage("--r needs at least one value".into());
        }
        if let Some(d) = self.delta.filter(|d| !(d.is_finite() && *d > 0.0)) {
            return usage(format!("--delta {d} must be positive"));
        }
        for &n in &self.n_list {
            if n < 2 {
                return usage(format!("--n {n} must be at least 2"));
            }
            for spec in &self.r_list {
                spec.resolve(n)?;
            }
        }
        Ok(())
    }

    /// `(n, token, r)` for every grid cell, in list order.
    pub fn cells(&self) -> Result<Vec<(u64, RSpec, f64)>, HarnessError> {
        let mut out = Vec::new();
        for &n in &self.n_list {
            for &spec in &self.r_list {
                out.push((n, spec, spec.resolve(n)?));
            }
        }
        Ok(out)
    }
}

/// Ten radii from `r_c/2` to `2 r_c`.
pub fn default_threshold_sweep() -> Vec<RSpec> {
    (0..10).map(|i| RSpec::Rc(0.5 + 1.5 * i as f64 / 9.0)).collect()
}
