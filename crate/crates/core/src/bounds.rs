//! Closed-form hop-count bounds: the connectivity radius `r_c`, the error
//! coefficient `γ`, the lower and upper hop bounds, and the
//! diameter bound. Logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::strip_path::ProofConstants;

/// `√(ln n / π)`.
pub fn connectivity_threshold(n: f64) -> Result<f64> {
    if !(n.is_finite() && n > 1.0) {
        return Err(invalid("n", format!("connectivity threshold needs n > 1, got {n}")));
    }
    Ok((n.ln() / std::f64::consts::PI).sqrt())
}

/// `70·√(ln n)`, the smallest radius at which the upper bound applies.
pub fn upper_applicability_radius(n: f64) -> f64 {
    ProofConstants::default().d * n.ln().max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: f64,
    pub r: f64,
    #[serde(rename = "d_E")]
    pub d_e: f64,
}

impl BoundParams {
    pub fn new(n: f64, r: f64, d_e: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 1.0) {
            return Err(invalid("n", format!("must be at least 1, got {n}")));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid("r", format!("must be positive, got {r}")));
        }
        if !(d_e.is_finite() && d_e >= 0.0) {
            return Err(invalid("d_E", format!("must be non-negative, got {d_e}")));
        }
        Ok(BoundParams { n, r, d_e })
    }

    fn ln_n(&self) -> f64 {
        self.n.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaBreakdown {
    /// `E·(2r ln n / (r + d_E))^{2/3}`.
    pub term_log: f64,
    /// `D·ln²n / r^{8/3}`.
    pub term_poly: f64,
    /// `3^{2/3}·J = 300^{2/3}`.
    pub term_const: f64,
    pub gamma: f64,
}

pub fn gamma(params: &BoundParams) -> GammaBreakdown {
    gamma_with(params, &ProofConstants::default())
}

pub fn gamma_with(params: &BoundParams, consts: &ProofConstants) -> GammaBreakdown {
    let BoundParams { r, d_e, .. } = *params;
    let ln_n = params.ln_n();
    let term_log = consts.e * (2.0 * r * ln_n / (r + d_e)).cbrt().powi(2);
    let term_poly = consts.d * ln_n * ln_n / r.powf(8.0 / 3.0);
    let term_const = 3f64.cbrt().powi(2) * consts.j;
    GammaBreakdown {
        term_log,
        term_poly,
        term_const,
        gamma: term_log.max(term_poly).max(term_const),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopBound<T> {
    pub applicable: bool,
    pub value: T,
}

/// `(d_E/r)(1 + 1/(2(r·d_E)^{2/3}))`, applicable when `d_E ≥ 20 r ln n`.
pub fn lower_bound_hops(params: &BoundParams) -> HopBound<f64> {
    let BoundParams { r, d_e, .. } = *params;
    let value = if d_e == 0.0 {
        0.0
    } else {
        (d_e / r) * (1.0 + 0.5 / (r * d_e).cbrt().powi(2))
    };
    HopBound {
        applicable: d_e >= 20.0 * r * params.ln_n(),
        value,
    }
}

/// `⌈(d_E/r)(1 + γ r^{−4/3})⌉`, applicable when `r ≥ 70√(ln n)`.
pub fn upper_bound_hops(params: &BoundParams) -> HopBound<u64> {
    let g = gamma(params).gamma;
    let BoundParams { r, d_e, .. } = *params;
    let raw = (d_e / r) * (1.0 + g * r.powf(-4.0 / 3.0));
    HopBound {
        applicable: r >= upper_applicability_radius(params.n),
        value: raw.ceil() as u64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterBound {
    pub applicable: bool,
    /// `(√(2n)/r)(1 + γ r^{−4/3})`.
    pub value: f64,
    pub ceiling: u64,
    /// Evaluated at the diagonal distance `d_E = √(2n)`.
    pub gamma: GammaBreakdown,
}

pub fn diameter_bound(n: f64, r: f64) -> Result<DiameterBound> {
    let diagonal = (2.0 * n).sqrt();
    let params = BoundParams::new(n, r, diagonal)?;
    let g = gamma(&params);
    let value = (diagonal / r) * (1.0 + g.gamma * r.powf(-4.0 / 3.0));
    Ok(DiameterBound {
        applicable: r >= upper_applicability_radius(n),
        value,
        ceiling: value.ceil() as u64,
        gamma: g,
    })
}

/// `(√(2n)/r)(1 + c·√(ln ln n / ln n))`.
pub fn reference_prior_diameter(n: f64, r: f64, c: f64) -> Result<f64> {
    if !(n.is_finite() && n >= 16.0) {
        return Err(invalid("n", format!("reference curve needs n ≥ 16, got {n}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid("r", format!("must be positive, got {r}")));
    }
    let ln_n = n.ln();
    Ok(((2.0 * n).sqrt() / r) * (1.0 + c * (ln_n.ln() / ln_n).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerCheck {
    pub applicable: bool,
    pub value: f64,
    pub satisfied: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperCheck {
    pub applicable: bool,
    pub value: u64,
    pub satisfied: Option<bool>,
}

/// Both bounds for one pair, checked against an observed hop count.
/// Satisfaction is only judged when the bound applies and the pair is
/// connected.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: f64,
    pub r: f64,
    #[serde(rename = "d_E")]
    pub d_e: f64,
    #[serde(rename = "d_G")]
    pub d_g: Option<u64>,
    pub gamma: GammaBreakdown,
    pub lower: LowerCheck,
    pub upper: UpperCheck,
}

impl BoundReport {
    pub fn evaluate(params: &BoundParams, d_g: Option<u64>) -> Self {
        let lower = lower_bound_hops(params);
        let upper = upper_bound_hops(params);
        BoundReport {
            n: params.n,
            r: params.r,
            d_e: params.d_e,
            d_g,
            gamma: gamma(params),
            lower: LowerCheck {
                applicable: lower.applicable,
                value: lower.value,
                satisfied: d_g
                    .filter(|_| lower.applicable)
                    .map(|d| d as f64 >= lower.value),
            },
            upper: UpperCheck {
                applicable: upper.applicable,
                value: upper.value,
                satisfied: d_g.filter(|_| upper.applicable).map(|d| d <= upper.value),
            },
        }
    }

    pub fn violated(&self) -> bool {
        self.lower.satisfied == Some(false) || self.upper.satisfied == Some(false)
    }
}
