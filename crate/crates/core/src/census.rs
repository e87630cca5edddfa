//! Frobenius-norm census of SL(2,Z).
//!
//! Elements are enumerated column by column: for each primitive first column
//! `(a, c)` the second columns solving `ad - bc = 1` form the line
//! `(b0 + t a, d0 + t c)`, and the norm bound cuts that line to an interval
//! of `t`. Work is `O(k^2 + output)`.
//!
//! "Parabolic" here means trace `±2`, which includes `±I`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};

/// Largest `k` (norm bound) for full enumeration.
pub const MAX_ENUM_BOUND: u64 = 2000;
/// Largest `k` for the counting-only parabolic routes.
pub const MAX_PARABOLIC_BOUND: u64 = 100_000;

/// Upper bound on the squared Frobenius norm. A real bound `N` becomes
/// `floor(N^2)`, which is exact because squared norms are integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormBound {
    pub max_norm_sq: u64,
}

impl NormBound {
    /// `‖M‖ <= k`
    pub fn k(k: u64) -> Self {
        NormBound { max_norm_sq: k * k }
    }

    pub fn from_norm_sq(max_norm_sq: u64) -> Self {
        NormBound { max_norm_sq }
    }

    /// `‖M‖ <= num/den`
    pub fn rational(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator in norm bound".into()));
        }
        let n = num as u128 * num as u128;
        let d = den as u128 * den as u128;
        Ok(NormBound {
            max_norm_sq: (n / d) as u64,
        })
    }

    /// The smallest integer `k` with `k^2 >= max_norm_sq`; budgets are stated in terms of it.
    pub fn ceil_k(&self) -> u64 {
        let r = self.max_norm_sq.isqrt();
        if r * r == self.max_norm_sq {
            r
        } else {
            r + 1
        }
    }

    fn check(&self, limit: u64) -> Result<()> {
        if self.ceil_k() > limit {
            return Err(Error::Budget(format!(
                "norm bound {} exceeds limit {limit}",
                self.ceil_k()
            )));
        }
        Ok(())
    }
}

/// An element of SL(2,Z) small enough for machine words. Entries of the
/// norm ball at the enumeration budget are far below `i64` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn norm_sq(&self) -> u64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d) as u64
    }

    pub fn neg(&self) -> Sl2 {
        Sl2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn transpose(&self) -> Sl2 {
        Sl2::new(self.a, self.c, self.b, self.d)
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Representative of `{M, -M}`: the lexicographically larger tuple.
    pub fn psl_canonical(&self) -> Sl2 {
        (*self).max(self.neg())
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_array([[self.a, self.b], [self.c, self.d]])
    }

    pub fn from_matrix(m: &IntMatrix) -> Option<Sl2> {
        if m.dim() != 2 {
            return None;
        }
        let e = |i, j| m.get(i, j).to_i64();
        Some(Sl2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }
}

/// `(A, B, C, D) = (a + d, b + c, b - c, a - d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbcdQuad {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl AbcdQuad {
    /// `A^2 + C^2 - B^2 - D^2 = 4`, `A ≡ D`, `B ≡ C (mod 2)`.
    pub fn is_valid(&self) -> bool {
        self.a * self.a + self.c * self.c - self.b * self.b - self.d * self.d == 4
            && (self.a - self.d).rem_euclid(2) == 0
            && (self.b - self.c).rem_euclid(2) == 0
    }

    /// Inverts the transform: `a = (A + D)/2`, `b = (B + C)/2`, `c = (B - C)/2`, `d = (A - D)/2`.
    pub fn to_sl2(&self) -> Option<Sl2> {
        if !self.is_valid() {
            return None;
        }
        Some(Sl2::new(
            (self.a + self.d) / 2,
            (self.b + self.c) / 2,
            (self.b - self.c) / 2,
            (self.a - self.d) / 2,
        ))
    }

    /// `A^2 + B^2 + C^2 + D^2`, which equals twice the squared Frobenius norm.
    pub fn sum_sq(&self) -> i64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }
}

pub fn abcd_transform(m: &IntMatrix) -> Result<AbcdQuad> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch(m.dim(), 2));
    }
    let det = m.det();
    if !det.is_one() {
        return Err(Error::Determinant {
            expected: "1".into(),
            actual: det.to_string(),
        });
    }
    let s = Sl2::from_matrix(m).ok_or_else(|| Error::Invalid("entries exceed i64".into()))?;
    Ok(abcd_of(&s))
}

pub fn abcd_of(s: &Sl2) -> AbcdQuad {
    AbcdQuad {
        a: s.a + s.d,
        b: s.b + s.c,
        c: s.b - s.c,
        d: s.a - s.d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub bound: NormBound,
    pub total: u64,
    pub parabolic: u64,
    pub reducible: u64,
}

impl CensusRecord {
    pub fn ratio(&self) -> Option<BigRational> {
        (self.total > 0).then(|| BigRational::new(BigInt::from(self.parabolic), BigInt::from(self.total)))
    }
}

/// The SL(2,Z) elements with squared norm at most `bound.max_norm_sq`.
#[derive(Debug, Clone, Copy)]
pub struct NormBall {
    bound: NormBound,
}

/// Validates the budget and returns the ball; iterate with [`NormBall::iter`]
/// or summarize with [`NormBall::record`].
pub fn enumerate_norm_ball(bound: NormBound) -> Result<NormBall> {
    bound.check(MAX_ENUM_BOUND)?;
    Ok(NormBall { bound })
}

impl NormBall {
    pub fn bound(&self) -> NormBound {
        self.bound
    }

    /// Canonical order: first column `(a, c)` lexicographic, then `t` ascending.
    pub fn iter(&self) -> impl Iterator<Item = Sl2> + '_ {
        let k2 = self.bound.max_norm_sq as i64;
        let amax = k2.isqrt();
        (-amax..=amax).flat_map(move |a| column_shard(a, k2))
    }

    pub fn iter_matrices(&self) -> impl Iterator<Item = IntMatrix> + '_ {
        self.iter().map(|s| s.to_matrix())
    }

    /// Counts, sharded over the first entry of the first column.
    pub fn record(&self) -> CensusRecord {
        let k2 = self.bound.max_norm_sq as i64;
        let amax = k2.isqrt();
        let (total, parabolic, reducible) = (-amax..=amax)
            .into_par_iter()
            .map(|a| {
                let mut acc = (0u64, 0u64, 0u64);
                for m in column_shard(a, k2) {
                    acc.0 += 1;
                    if m.trace().abs() == 2 {
                        acc.1 += 1;
                    }
                    if trace_char_poly_reducible(m.trace()) {
                        acc.2 += 1;
                    }
                }
                acc
            })
            .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
        CensusRecord {
            bound: self.bound,
            total,
            parabolic,
            reducible,
        }
    }
}

/// All elements whose first column starts with `a`.
fn column_shard(a: i64, k2: i64) -> impl Iterator<Item = Sl2> {
    let rem = k2 - a * a;
    let cmax = if rem >= 0 { rem.isqrt() } else { -1 };
    (-cmax..=cmax)
        .filter(move |&c| a.gcd(&c) == 1)
        .flat_map(move |c| second_columns(a, c, k2))
}

/// Second columns `(b, d)` with `ad - bc = 1` and total squared norm at most `k2`.
fn second_columns(a: i64, c: i64, k2: i64) -> impl Iterator<Item = Sl2> {
    let col = (a * a + c * c) as i128;
    let budget = k2 as i128 - col;
    // a x + c y = 1  =>  d0 = x, b0 = -y
    let eg = a.extended_gcd(&c);
    let sign = eg.gcd.signum();
    let (d0, b0) = ((eg.x * sign) as i128, (-eg.y * sign) as i128);
    let (a, c) = (a as i128, c as i128);
    // |(b0, d0) + t (a, c)|^2 <= budget  <=>  col t^2 + 2 dot t + (|v0|^2 - budget) <= 0
    let dot = a * b0 + c * d0;
    let c0 = b0 * b0 + d0 * d0 - budget;
    let disc = dot * dot - col * c0;
    let f = move |t: i128| col * t * t + 2 * dot * t + c0;
    let (lo, hi) = if budget < 0 || disc < 0 {
        (1, 0)
    } else {
        let s = disc.isqrt();
        // s <= sqrt(disc) < s + 1, so these bracket the real roots from outside
        let mut lo = Integer::div_floor(&(-dot - s - 1), &col);
        let mut hi = Integer::div_ceil(&(-dot + s + 1), &col);
        while lo <= hi && f(lo) > 0 {
            lo += 1;
        }
        while hi >= lo && f(hi) > 0 {
            hi -= 1;
        }
        (lo, hi)
    };
    (lo..=hi).map(move |t| Sl2::new(a as i64, (b0 + t * a) as i64, c as i64, (d0 + t * c) as i64))
}

/// `x^2 - t x + 1` has an integer root; by the rational root test the only
/// candidates are `±1`.
pub(crate) fn trace_char_poly_reducible(trace: i64) -> bool {
    let at = |r: i64| r * r - trace * r + 1 == 0;
    at(1) || at(-1)
}

pub fn census(bound: NormBound) -> Result<CensusRecord> {
    Ok(enumerate_norm_ball(bound)?.record())
}

/// Trace-`±2` elements in the ball, counted directly on the trace slice:
/// trace 2 means `a = 1 + x`, `d = 1 - x`, `bc = -x^2`, enumerated over the
/// divisor pairs of `x^2`; trace `-2` is its image under `M -> -M`.
pub fn count_parabolic(bound: NormBound) -> Result<u64> {
    bound.check(MAX_PARABOLIC_BOUND)?;
    let k2 = bound.max_norm_sq as i128;
    if k2 < 2 {
        return Ok(0);
    }
    // x = 0: b c = 0, norm 2 + b^2 + c^2
    let r = (k2 - 2).isqrt();
    let mut trace_two: u64 = (4 * r + 1) as u64;
    // x != 0: norm 2 + 2x^2 + b^2 + c^2 with b c = -x^2
    let mut x: i128 = 1;
    while 2 + 2 * x * x + 2 * x * x <= k2 {
        let x2 = x * x;
        let mut with_b_positive = 0u64;
        for b in divisors_of_square(x as u64) {
            let b = b as i128;
            let c = x2 / b;
            if 2 + 2 * x2 + b * b + c * c <= k2 {
                with_b_positive += 1;
            }
        }
        // b ranges over ±divisors (c = -x^2 / b), and x over ±x
        trace_two += 4 * with_b_positive;
        x += 1;
    }
    Ok(2 * trace_two)
}

fn divisors_of_square(x: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut n = x;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, 2 * e));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, 2));
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs
}

/// Trace-`±2` count through Pythagorean triples. With `A = ±2`, the quadric
/// becomes `C^2 = B^2 + D^2`, the norm becomes `2 + C^2`, and the congruences
/// force `D` even. Every solution is `g·(B0, D0)` for a primitive `(B0, D0)`,
/// and the primitive ones other than the axes come from `(u^2 - v^2, 2uv)`
/// with `u > v > 0` coprime of opposite parity. Restricting to `u > v > 0`
/// is what removes the `(u, v) ~ (-u, -v)` double count; signs are restored
/// explicitly below.
pub fn pythagorean_parabolic_count(bound: NormBound) -> Result<u64> {
    bound.check(MAX_PARABOLIC_BOUND)?;
    let k2 = bound.max_norm_sq;
    if k2 < 2 {
        return Ok(0);
    }
    // |C| <= hmax
    let hmax = (k2 - 2).isqrt();
    let multiples = |h0: u64| hmax / h0;
    // (B, D) pairs with a given |C| = h > 0, summed over h
    let mut pairs: u64 = 0;
    // axis directions: (±1, 0) has D0 = 0, (0, ±1) has D0 odd
    pairs += 2 * multiples(1) + 2 * (multiples(1) / 2);
    let mut u: u64 = 2;
    while u * u < hmax {
        for v in 1..u {
            let h0 = u * u + v * v;
            if h0 > hmax {
                break;
            }
            if (u - v) % 2 == 1 && u.gcd(&v) == 1 {
                let g = multiples(h0);
                // (±(u²-v²), ±2uv): D0 even, every multiple counts
                pairs += 4 * g;
                // (±2uv, ±(u²-v²)): D0 odd, only even multiples
                pairs += 4 * (g / 2);
            }
        }
        u += 1;
    }
    // zero triple, then the sign of C, then the sign of the trace
    Ok(2 * (1 + 2 * pairs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducibilityReport {
    pub bound: NormBound,
    pub total: u64,
    pub parabolic: u64,
    pub reducible: u64,
    /// Elements where reducibility and `|trace| = 2` disagree.
    pub exceptions: u64,
    #[serde(with = "crate::report::rational_string")]
    pub density: BigRational,
}

/// Fraction of the ball with reducible characteristic polynomial, checking
/// per element that reducibility coincides with `|trace| = 2`.
///
/// Reducibility is decided by the rational root test and confirmed by the
/// discriminant `t^2 - 4` being a perfect square.
pub fn reducible_density(bound: NormBound) -> Result<ReducibilityReport> {
    enumerate_norm_ball(bound)?;
    let k2 = bound.max_norm_sq as i64;
    let amax = k2.isqrt();
    let (total, parabolic, reducible, exceptions) = (-amax..=amax)
        .into_par_iter()
        .map(|a| {
            let mut acc = (0u64, 0u64, 0u64, 0u64);
            for m in column_shard(a, k2) {
                let t = m.trace();
                let by_roots = trace_char_poly_reducible(t);
                let disc = t * t - 4;
                let by_disc = disc >= 0 && disc.isqrt().pow(2) == disc;
                let para = t.abs() == 2;
                acc.0 += 1;
                acc.1 += para as u64;
                acc.2 += by_roots as u64;
                acc.3 += (by_roots != para || by_disc != by_roots) as u64;
            }
            acc
        })
        .reduce(
            || (0, 0, 0, 0),
            |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2, x.3 + y.3),
        );
    if total == 0 {
        return Err(Error::ZeroTotal(0));
    }
    Ok(ReducibilityReport {
        bound,
        total,
        parabolic,
        reducible,
        exceptions,
        density: BigRational::new(BigInt::from(reducible), BigInt::from(total)),
    })
}

/// `6 k^2`
pub fn newman_main_term(k: f64) -> f64 {
    6.0 * k * k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_balls() {
        assert_eq!(census(NormBound::k(1)).unwrap().total, 0);
        let ball = enumerate_norm_ball(NormBound::rational(3, 2).unwrap()).unwrap();
        let mut got: Vec<Sl2> = ball.iter().collect();
        got.sort();
        let mut want = vec![
            Sl2::new(1, 0, 0, 1),
            Sl2::new(-1, 0, 0, -1),
            Sl2::new(0, -1, 1, 0),
            Sl2::new(0, 1, -1, 0),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn budget() {
        assert!(matches!(enumerate_norm_ball(NormBound::k(2001)), Err(Error::Budget(_))));
        assert!(enumerate_norm_ball(NormBound::k(2000)).is_ok());
        assert!(count_parabolic(NormBound::k(100_001)).is_err());
    }

    #[test]
    fn ball_stream_matches_record() {
        let ball = enumerate_norm_ball(NormBound::k(12)).unwrap();
        let rec = ball.record();
        assert_eq!(ball.iter().count() as u64, rec.total);
        assert!(ball.iter().all(|m| m.det() == 1 && m.norm_sq() <= 144));
        assert_eq!(rec.total % 2, 0);
        assert_eq!(rec.parabolic, rec.reducible);
    }

    #[test]
    fn abcd_examples() {
        let q = |m: IntMatrix| abcd_transform(&m).unwrap();
        assert_eq!(q(IntMatrix::identity(2)), AbcdQuad { a: 2, b: 0, c: 0, d: 0 });
        assert_eq!(q(IntMatrix::from_array([[1, 1], [0, 1]])), AbcdQuad { a: 2, b: 1, c: 1, d: 0 });
        let r = q(IntMatrix::from_array([[1, 2], [3, 7]]));
        assert_eq!(r, AbcdQuad { a: 8, b: 5, c: -1, d: -6 });
        assert!(r.is_valid());
        assert!(abcd_transform(&IntMatrix::from_array([[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn parabolic_small() {
        let b = NormBound::k(2);
        assert_eq!(count_parabolic(b).unwrap(), 10);
        assert_eq!(pythagorean_parabolic_count(b).unwrap(), 10);
        assert_eq!(census(b).unwrap().parabolic, 10);
        assert_eq!(count_parabolic(NormBound::k(1)).unwrap(), 0);
    }

    #[test]
    fn divisors() {
        let mut d = divisors_of_square(6);
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors_of_square(1), vec![1]);
    }

    #[test]
    fn rational_bounds() {
        assert_eq!(NormBound::rational(3, 2).unwrap().max_norm_sq, 2);
        assert_eq!(NormBound::k(7).ceil_k(), 7);
        assert_eq!(NormBound::from_norm_sq(50).ceil_k(), 8);
        assert!(NormBound::rational(1, 0).is_err());
    }

    #[test]
    fn reducibility_small() {
        let r = reducible_density(NormBound::k(20)).unwrap();
        assert_eq!(r.exceptions, 0);
        assert_eq!(r.reducible, r.parabolic);
        assert!(reducible_density(NormBound::k(1)).is_err());
        assert!(!trace_char_poly_reducible(0));
    }
}
