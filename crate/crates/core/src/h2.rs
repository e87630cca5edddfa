//! Sampling SL(2,Z) by norm through the upper half-plane: draw a point from
//! a hyperbolic disk around `i`, reduce it to the standard fundamental
//! domain, and keep the reducing element if it lies in the norm ball.

// NaN inputs must fail the positivity checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::IntMatrix;
use crate::census::{enumerate_norm_ball, NormBound, Sl2};
use crate::error::{Error, Result};
use crate::rng::{stream, StreamRng};

pub const MAX_REDUCTION_STEPS: usize = 10_000;
/// Slack applied to the fundamental-domain inequalities.
pub const DOMAIN_TOLERANCE: f64 = 1e-12;
/// Reduced points this close to the domain boundary are flagged.
pub const BOUNDARY_MARGIN: f64 = 1e-9;
/// Accepted samples drawn from one random stream.
pub const SAMPLES_PER_STREAM: usize = 4096;
const MIN_ATTEMPTS_FOR_RATE: u64 = 10_000;

/// Point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Invalid(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(HPoint { x, y })
    }

    /// Möbius action `(az + b) / (cz + d)`.
    pub fn apply(&self, m: &Sl2) -> HPoint {
        let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
        let re = c * self.x + d;
        let im = c * self.y;
        let den = re * re + im * im;
        HPoint {
            x: ((a * self.x + b) * re + a * self.y * im) / den,
            y: self.y / den,
        }
    }

    pub fn distance(&self, o: &HPoint) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        (1.0 + (dx * dx + dy * dy) / (2.0 * self.y * o.y)).acosh()
    }

    pub fn in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 + DOMAIN_TOLERANCE && self.x * self.x + self.y * self.y >= 1.0 - DOMAIN_TOLERANCE
    }

    pub fn near_domain_boundary(&self) -> bool {
        (self.x.abs() - 0.5).abs() < BOUNDARY_MARGIN || (self.x * self.x + self.y * self.y - 1.0).abs() < BOUNDARY_MARGIN
    }
}

/// Point uniform for hyperbolic area in the disk of radius `r_max` about `i`.
pub fn sample_disk_point<R: Rng + ?Sized>(r_max: f64, rng: &mut R) -> Result<HPoint> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::Invalid(format!("disk radius must be positive, got {r_max}")));
    }
    let u: f64 = rng.gen();
    let theta = rng.gen::<f64>() * 2.0 * PI;
    let r = (1.0 + u * (r_max.cosh() - 1.0)).acosh();
    Ok(from_polar(r, theta))
}

/// Point at hyperbolic distance `r` from `i` in direction `theta`, through
/// the Poincaré disk and the Cayley map `w ↦ i(1 + w)/(1 - w)`.
pub fn from_polar(r: f64, theta: f64) -> HPoint {
    let rho = (r / 2.0).tanh();
    let (wx, wy) = (rho * theta.cos(), rho * theta.sin());
    let den = (1.0 - wx).powi(2) + wy * wy;
    HPoint {
        x: -2.0 * wy / den,
        y: (1.0 - wx * wx - wy * wy) / den,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionResult {
    /// `m` with `m · reduced_point = input`, as a PSL representative.
    pub element: IntMatrix,
    pub reduced_point: HPoint,
    pub steps: usize,
}

/// Reduction to `|x| <= 1/2, |z| >= 1` by translations and `z ↦ -1/z`.
pub fn gauss_reduce(z: HPoint) -> Result<ReductionResult> {
    let (gamma, reduced, steps) = reduce_word(z)?;
    Ok(ReductionResult {
        element: gamma.inverse().psl_canonical().to_matrix(),
        reduced_point: reduced,
        steps,
    })
}

/// Returns `γ` with `γ · z` reduced.
fn reduce_word(z: HPoint) -> Result<(Sl2, HPoint, usize)> {
    if !(z.y > 1e-15) {
        return Err(Error::Invalid(format!("imaginary part {} too small", z.y)));
    }
    let mut gamma = Sl2::IDENTITY;
    let mut w = z;
    let mut steps = 0;
    while !w.in_fundamental_domain() {
        if steps >= MAX_REDUCTION_STEPS {
            return Err(Error::NoConvergence(steps));
        }
        let n = w.x.round();
        if n != 0.0 && w.x.abs() > 0.5 + DOMAIN_TOLERANCE {
            w.x -= n;
            gamma = Sl2::new(1, -(n as i64), 0, 1).mul(&gamma);
        } else {
            let r2 = w.x * w.x + w.y * w.y;
            w = HPoint { x: -w.x / r2, y: w.y / r2 };
            gamma = Sl2::new(0, -1, 1, 0).mul(&gamma);
        }
        steps += 1;
    }
    Ok((gamma, w, steps))
}

/// `arccosh(N^2 / 2)`: the displacement of `i` under a matrix of norm `N`.
pub fn ball_radius(bound: NormBound) -> f64 {
    (bound.max_norm_sq as f64 / 2.0).acosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSample {
    pub element: Sl2,
    pub near_boundary: bool,
}

/// Rejection sampler for the norm ball in PSL(2,Z).
#[derive(Debug, Clone)]
pub struct NormBallSampler {
    bound: NormBound,
    radius: f64,
    pub attempts: u64,
    pub accepted: u64,
}

impl NormBallSampler {
    pub fn new(bound: NormBound, slack: f64) -> Result<Self> {
        if bound.max_norm_sq < 4 {
            return Err(Error::Invalid("norm bound must be at least 2".into()));
        }
        if !(slack >= 0.0) || !slack.is_finite() {
            return Err(Error::Invalid(format!("slack must be nonnegative, got {slack}")));
        }
        Ok(NormBallSampler {
            bound,
            radius: ball_radius(bound) + slack,
            attempts: 0,
            accepted: 0,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<NormSample> {
        loop {
            if self.attempts >= MIN_ATTEMPTS_FOR_RATE && self.accepted * 1000 < self.attempts {
                return Err(Error::Budget(format!(
                    "rejection rate above 0.999 after {} attempts; slack is too large",
                    self.attempts
                )));
            }
            self.attempts += 1;
            let z = sample_disk_point(self.radius, rng)?;
            let (gamma, reduced, _) = reduce_word(z)?;
            let m = gamma.inverse().psl_canonical();
            if m.norm_sq() <= self.bound.max_norm_sq {
                self.accepted += 1;
                return Ok(NormSample {
                    element: m,
                    near_boundary: reduced.near_domain_boundary(),
                });
            }
        }
    }
}

/// One draw of the norm-ball sampler.
pub fn sample_uniform_norm_ball<R: Rng + ?Sized>(bound: NormBound, rng: &mut R, slack: f64) -> Result<IntMatrix> {
    Ok(NormBallSampler::new(bound, slack)?.sample(rng)?.element.to_matrix())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRun {
    pub samples: Vec<NormSample>,
    pub attempts: u64,
}

/// `count` accepted samples, drawn in fixed-size blocks from
/// `stream(seed, block)` so the output does not depend on thread count.
pub fn sample_many(bound: NormBound, slack: f64, count: usize, seed: u64) -> Result<SampleRun> {
    NormBallSampler::new(bound, slack)?;
    let blocks = count.div_ceil(SAMPLES_PER_STREAM);
    let parts: Vec<(Vec<NormSample>, u64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng: StreamRng = stream(seed, b as u64);
            let mut sampler = NormBallSampler::new(bound, slack)?;
            let want = SAMPLES_PER_STREAM.min(count - b * SAMPLES_PER_STREAM);
            let s = (0..want).map(|_| sampler.sample(&mut rng)).collect::<Result<Vec<_>>>()?;
            Ok((s, sampler.attempts))
        })
        .collect::<Result<_>>()?;
    let mut run = SampleRun {
        samples: Vec::with_capacity(count),
        attempts: 0,
    };
    for (s, a) in parts {
        run.samples.extend(s);
        run.attempts += a;
    }
    Ok(run)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementFrequency {
    pub element: [i64; 4],
    pub count: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniformityReport {
    pub max_norm_sq: u64,
    #[serde(with = "crate::report::f64_string")]
    pub slack: f64,
    #[serde(with = "crate::report::f64_string")]
    pub radius: f64,
    pub seed: u64,
    pub samples: u64,
    pub attempts: u64,
    #[serde(with = "crate::report::f64_string")]
    pub acceptance_rate: f64,
    /// Samples whose reduced point was within the boundary margin; left out
    /// of the statistics below.
    pub boundary_cases: u64,
    /// Number of classes `{M, -M}` in the ball.
    pub classes: u64,
    #[serde(with = "crate::report::f64_string")]
    pub chi_square: f64,
    #[serde(with = "crate::report::f64_string")]
    pub tv: f64,
    pub frequencies: Vec<ElementFrequency>,
}

/// Compares sampler output with the uniform law on the census, folded by ±.
pub fn uniformity_report(bound: NormBound, samples: usize, slack: f64, seed: u64) -> Result<UniformityReport> {
    let ball = enumerate_norm_ball(bound)?;
    let mut counts: BTreeMap<Sl2, u64> = ball
        .iter()
        .map(|m| m.psl_canonical())
        .map(|m| (m, 0))
        .collect();
    let run = sample_many(bound, slack, samples, seed)?;
    let mut boundary = 0u64;
    for s in &run.samples {
        if s.near_boundary {
            boundary += 1;
            continue;
        }
        match counts.get_mut(&s.element) {
            Some(c) => *c += 1,
            None => return Err(Error::Invalid(format!("sample {:?} outside the census", s.element))),
        }
    }
    let used = run.samples.len() as u64 - boundary;
    let classes = counts.len() as u64;
    let expected = used as f64 / classes as f64;
    let mut chi = 0.0;
    let mut tv = 0.0;
    for &c in counts.values() {
        chi += (c as f64 - expected).powi(2) / expected;
        tv += (c as f64 / used as f64 - 1.0 / classes as f64).abs();
    }
    let frequencies = counts
        .iter()
        .map(|(m, &count)| ElementFrequency {
            element: [m.a, m.b, m.c, m.d],
            count,
        })
        .collect();
    Ok(UniformityReport {
        max_norm_sq: bound.max_norm_sq,
        slack,
        radius: ball_radius(bound) + slack,
        seed,
        samples: run.samples.len() as u64,
        attempts: run.attempts,
        acceptance_rate: run.samples.len() as f64 / run.attempts as f64,
        boundary_cases: boundary,
        classes,
        chi_square: chi,
        tv: tv / 2.0,
        frequencies,
    })
}
