//! Density estimators over valuation-ordered sets: plain ratios
//! `|P_k| / |S_k|`, two-shell annular densities, and the visible-point
//! experiments (lattice squares/disks and abelianized free-group words).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest word length the free-group experiment will enumerate.
pub const MAX_WORD_LEN: usize = 14;

/// Number of trailing ρ_k values averaged for the strict-annular estimate.
pub const TAIL_WINDOW: usize = 3;

/// Largest tail oscillation for which the annular sequence is flagged as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub k: u64,
    pub hits: u64,
    pub total: u64,
}

/// Cumulative counts `(k, |P_k|, |S_k|)` ordered by valuation bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensitySeries {
    pub points: Vec<DensityPoint>,
}

impl DensitySeries {
    pub fn new(points: Vec<DensityPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.hits > p.total {
                return Err(Error::Invalid(format!("hits exceed total at k = {}", p.k)));
            }
            if i > 0 && p.total < points[i - 1].total {
                return Err(Error::Invalid(format!("totals decrease at k = {}", p.k)));
            }
        }
        Ok(DensitySeries { points })
    }
}

/// Counts on the exact-valuation shells: `X_k` hits out of `S_k` elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnularSeries {
    pub points: Vec<DensityPoint>,
}

impl AnnularSeries {
    pub fn new(points: Vec<DensityPoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.hits > p.total) {
            return Err(Error::Invalid(format!("X_k exceeds S_k at k = {}", p.k)));
        }
        Ok(AnnularSeries { points })
    }

    /// `X_k / S_k` for each shell.
    pub fn shell_ratios(&self) -> Result<Vec<BigRational>> {
        ratios(&self.points)
    }

    /// Cumulative view: ball counts up to each k.
    pub fn cumulative(&self) -> DensitySeries {
        let mut hits = 0;
        let mut total = 0;
        let points = self
            .points
            .iter()
            .map(|p| {
                hits += p.hits;
                total += p.total;
                DensityPoint { k: p.k, hits, total }
            })
            .collect();
        DensitySeries { points }
    }
}

fn ratios(points: &[DensityPoint]) -> Result<Vec<BigRational>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.total == 0 {
                Err(Error::ZeroTotal(i))
            } else {
                Ok(BigRational::new(BigInt::from(p.hits), BigInt::from(p.total)))
            }
        })
        .collect()
}

/// `|P_k| / |S_k|` at each point. No monotonicity is assumed.
pub fn density_ratios(series: &DensitySeries) -> Result<Vec<BigRational>> {
    if series.points.is_empty() {
        return Err(Error::Invalid("empty density series".into()));
    }
    ratios(&series.points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnularDensity {
    /// `(k, ρ_k)` for every point after the first.
    pub rho: Vec<(u64, BigRational)>,
    /// Mean of the last [`TAIL_WINDOW`] values of ρ_k.
    pub tail_mean: f64,
    /// Max minus min over the same window.
    pub oscillation: f64,
    pub converged: bool,
}

/// `ρ_k = (X_{k-1}/S_{k-1} + X_k/S_k) / 2` for consecutive shells.
pub fn annular_density(series: &AnnularSeries) -> Result<AnnularDensity> {
    if series.points.len() < 2 {
        return Err(Error::Invalid("annular density needs at least two shells".into()));
    }
    let shell = series.shell_ratios()?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rho: Vec<(u64, BigRational)> = shell
        .windows(2)
        .zip(&series.points[1..])
        .map(|(w, p)| (p.k, (&w[0] + &w[1]) * &half))
        .collect();
    let tail: Vec<f64> = rho
        .iter()
        .rev()
        .take(TAIL_WINDOW)
        .map(|(_, r)| r.to_f64().unwrap_or(f64::NAN))
        .collect();
    let tail_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let max = tail.iter().cloned().fold(f64::MIN, f64::max);
    let min = tail.iter().cloned().fold(f64::MAX, f64::min);
    let oscillation = max - min;
    Ok(AnnularDensity {
        rho,
        tail_mean,
        oscillation,
        converged: tail.len() == TAIL_WINDOW && oscillation <= CONVERGENCE_TOLERANCE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// Integer points with `1 <= x, y <= t`.
    Square,
    /// Integer points with `0 < x^2 + y^2 <= t^2`.
    Disk,
}

impl std::str::FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Region::Square),
            "disk" => Ok(Region::Disk),
            other => Err(Error::Invalid(format!("unknown region {other:?}"))),
        }
    }
}

/// Visible means `gcd(x, y) = 1`, with `gcd(0, n) = |n|`.
pub fn is_visible(x: i64, y: i64) -> bool {
    x.gcd(&y) == 1
}

/// Number of visible lattice points in `t·Ω`.
pub fn visible_count(region: Region, t: u64) -> u64 {
    let ti = t as i64;
    match region {
        Region::Square => (1..=ti)
            .into_par_iter()
            .map(|x| (1..=ti).filter(|&y| is_visible(x, y)).count() as u64)
            .sum(),
        Region::Disk => {
            let r2 = ti * ti;
            (-ti..=ti)
                .into_par_iter()
                .map(|x| {
                    let rem = r2 - x * x;
                    let ymax = rem.isqrt();
                    (-ymax..=ymax)
                        .filter(|&y| (x, y) != (0, 0) && is_visible(x, y))
                        .count() as u64
                })
                .sum()
        }
    }
}

/// Number of lattice points in `t·Ω`, the denominator of the visible ratio.
pub fn region_point_count(region: Region, t: u64) -> u64 {
    match region {
        Region::Square => t * t,
        Region::Disk => {
            let ti = t as i64;
            (-ti..=ti).map(|x| 2 * (ti * ti - x * x).isqrt() as u64 + 1).sum::<u64>() - 1
        }
    }
}

/// Letters of the free group on `a, b`: a, A = a⁻¹, b, B = b⁻¹.
const STEPS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

fn inverse_letter(i: usize) -> usize {
    i ^ 1
}

/// Enumerates every reduced word of length 1..=max_len in F₂ and counts, per
/// length, how many have a visible abelianization.
pub fn free_group_abelianization_experiment(max_len: usize) -> Result<AnnularSeries> {
    if max_len > MAX_WORD_LEN {
        return Err(Error::Budget(format!(
            "word length {max_len} exceeds enumeration limit {MAX_WORD_LEN}"
        )));
    }
    if max_len == 0 {
        return Err(Error::Invalid("max_len must be at least 1".into()));
    }
    // shard by first letter; each shard walks its subtree depth-first
    let shards: Vec<(Vec<u64>, Vec<u64>)> = (0..4)
        .into_par_iter()
        .map(|first| {
            let mut hits = vec![0u64; max_len + 1];
            let mut total = vec![0u64; max_len + 1];
            let (x, y) = STEPS[first];
            walk_reduced(first, x, y, 1, max_len, &mut hits, &mut total);
            (hits, total)
        })
        .collect();
    let mut hits = vec![0u64; max_len + 1];
    let mut total = vec![0u64; max_len + 1];
    for (h, t) in shards {
        for l in 0..=max_len {
            hits[l] += h[l];
            total[l] += t[l];
        }
    }
    AnnularSeries::new(
        (1..=max_len)
            .map(|l| DensityPoint {
                k: l as u64,
                hits: hits[l],
                total: total[l],
            })
            .collect(),
    )
}

fn walk_reduced(
    last: usize,
    x: i64,
    y: i64,
    len: usize,
    max_len: usize,
    hits: &mut [u64],
    total: &mut [u64],
) {
    total[len] += 1;
    if is_visible(x, y) {
        hits[len] += 1;
    }
    if len == max_len {
        return;
    }
    for (i, (dx, dy)) in STEPS.iter().enumerate() {
        if i != inverse_letter(last) {
            walk_reduced(i, x + dx, y + dy, len + 1, max_len, hits, total);
        }
    }
}

/// Exact rational as an `f64`, for presentation.
pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `6/π²`, the density of visible points.
pub fn visible_density() -> f64 {
    6.0 / (std::f64::consts::PI * std::f64::consts::PI)
}
