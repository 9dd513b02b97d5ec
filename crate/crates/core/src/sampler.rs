//! Seeded vertex-set generation for the fixed-count model (`n` i.i.d.
//! uniform points) and the Poissonized model (a Poisson(`n`) background
//! plus two labelled vertices `u`, `v`).
//!
//! Every draw goes through [`SeedSpec`]: a `(master_seed, trial_index)`
//! pair mixed into one 64-bit ChaCha8 seed. ChaCha output is specified
//! bit-for-bit, so a seed yields the same points on every platform.

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Square};

/// ChaCha stream ids. Distinct purposes within one trial never share a stream.
pub mod stream {
    pub const POINTS: u64 = 0;
    pub const LABELLED: u64 = 1;
    pub const PAIRS: u64 = 2;
    pub const AUX: u64 = 3;
}

/// SplitMix64 finalizer (Steele, Lea & Flood).
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        SeedSpec {
            master_seed,
            trial_index,
        }
    }

    /// `mix64(master ⊕ mix64(trial))`: distinct trial indices land on
    /// unrelated seeds even for adjacent master seeds.
    pub fn trial_seed(&self) -> u64 {
        mix64(self.master_seed ^ mix64(self.trial_index))
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.trial_seed());
        rng.set_stream(stream);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    UniformN,
    PoissonizedUv,
}

/// A realized point set in the square of area `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RggInstance {
    pub n: u64,
    pub r: f64,
    pub model: Model,
    pub points: Vec<Point>,
    pub labelled_u: Option<usize>,
    pub labelled_v: Option<usize>,
    pub seed: SeedSpec,
}

impl RggInstance {
    /// Wrap an explicit point set (tests, file import). Points must lie in
    /// the square of area `n`.
    pub fn from_points(n: u64, r: f64, points: Vec<Point>) -> Result<Self> {
        let inst = RggInstance {
            n,
            r,
            model: Model::UniformN,
            points,
            labelled_u: None,
            labelled_v: None,
            seed: SeedSpec::new(0, 0),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn realized_count(&self) -> usize {
        self.points.len()
    }

    pub fn square(&self) -> Square {
        Square::new(self.n as f64).expect("validated instance has n >= 1")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(invalid("r", format!("must be a non-negative length, got {}", self.r)));
        }
        let square = self.square();
        for (i, &p) in self.points.iter().enumerate() {
            if !square.contains(p) {
                return Err(invalid(
                    "points",
                    format!("point {i} = ({}, {}) lies outside the square", p.x, p.y),
                ));
            }
        }
        match self.model {
            // Explicit point sets may have any size; sampled ones have exactly n.
            Model::UniformN => {}
            Model::PoissonizedUv => {
                let count = self.points.len();
                for (name, idx) in [("labelled_u", self.labelled_u), ("labelled_v", self.labelled_v)] {
                    match idx {
                        Some(i) if i < count => {}
                        _ => return Err(invalid(name, "poissonized instances need valid labelled vertices")),
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_n_r(n: u64, r: f64) -> Result<Square> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("r", format!("must be a non-negative length, got {r}")));
    }
    Square::new(n as f64)
}

fn uniform_in(square: &Square) -> Uniform<f64> {
    let h = square.half_side();
    Uniform::new_inclusive(-h, h).expect("half side is finite and positive")
}

fn draw_points(square: &Square, count: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let coord = uniform_in(square);
    (0..count)
        .map(|_| {
            let x = coord.sample(rng);
            let y = coord.sample(rng);
            Point::new(x, y)
        })
        .collect()
}

/// `n` points i.i.d. uniform on the square of area `n`.
pub fn sample_uniform(n: u64, r: f64, seed: SeedSpec) -> Result<RggInstance> {
    let square = check_n_r(n, r)?;
    let mut rng = seed.rng(stream::POINTS);
    let points = draw_points(&square, n as usize, &mut rng);
    Ok(RggInstance {
        n,
        r,
        model: Model::UniformN,
        points,
        labelled_u: None,
        labelled_v: None,
        seed,
    })
}

/// A Poisson process of intensity 1 on the square (count-then-place) plus the
/// labelled vertices `u`, `v` appended at indices `N` and `N + 1`. Omitted
/// labelled positions are drawn uniformly.
pub fn sample_poissonized(
    n: u64,
    r: f64,
    seed: SeedSpec,
    u: Option<Point>,
    v: Option<Point>,
) -> Result<RggInstance> {
    let square = check_n_r(n, r)?;
    for p in [u, v].into_iter().flatten() {
        if !(p.is_finite() && square.contains(p)) {
            return Err(crate::error::Error::OutOfDomain {
                x: p.x,
                y: p.y,
                n: n as f64,
            });
        }
    }
    let mut rng = seed.rng(stream::POINTS);
    let count = Poisson::new(n as f64)
        .map_err(|e| invalid("n", e.to_string()))?
        .sample(&mut rng) as usize;
    let mut points = draw_points(&square, count, &mut rng);

    let mut labelled = seed.rng(stream::LABELLED);
    let coord = uniform_in(&square);
    let mut pick = |fixed: Option<Point>| {
        fixed.unwrap_or_else(|| {
            let x = coord.sample(&mut labelled);
            let y = coord.sample(&mut labelled);
            Point::new(x, y)
        })
    };
    let pu = pick(u);
    let pv = pick(v);
    points.push(pu);
    points.push(pv);
    Ok(RggInstance {
        n,
        r,
        model: Model::PoissonizedUv,
        points,
        labelled_u: Some(count),
        labelled_v: Some(count + 1),
        seed,
    })
}

/// `count` i.i.d. draws from the exponential distribution with the given rate.
pub fn sample_exponentials(rate: f64, count: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(invalid("rate", format!("must be positive, got {rate}")));
    }
    if count == 0 {
        return Err(invalid("count", "must be positive"));
    }
    let exp = Exp::new(rate).map_err(|e| invalid("rate", e.to_string()))?;
    let mut rng = seed.rng(stream::AUX);
    Ok((0..count).map(|_| exp.sample(&mut rng)).collect())
}
