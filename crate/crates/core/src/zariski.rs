//! Zariski-density probes for finitely generated subgroups of SL(n,Z):
//! the Lie algebra spanned by logarithms of unipotent elements, and
//! surjectivity onto SL(n, Z/p).

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{IntMatrix, RationalMatrix};
use crate::error::{Error, Result};
use crate::quotients::{is_prime, FiniteGroup, ModMatrix, DEFAULT_CLOSURE_BUDGET, MAX_MOD_DIM};

/// Longest generator word searched for unipotents.
pub const HARVEST_WORD_LEN: usize = 4;
/// Longest word used to conjugate harvested unipotents.
pub const CONJUGATOR_WORD_LEN: usize = 3;

pub fn is_unipotent(m: &IntMatrix) -> bool {
    let n = m.dim();
    let nil = m.sub_checked(&IntMatrix::identity(n)).expect("same dimension");
    nil.pow(n as u64).is_zero()
}

fn is_nilpotent(x: &RationalMatrix) -> bool {
    let mut p = x.clone();
    for _ in 1..x.dim() {
        p = p.mul(x);
    }
    p.is_zero()
}

/// `log m = Σ (-1)^(j+1) (m - I)^j / j`, a finite sum for unipotent `m`.
pub fn nilpotent_log(m: &IntMatrix) -> Result<RationalMatrix> {
    if !is_unipotent(m) {
        return Err(Error::NotUnipotent);
    }
    let n = m.dim();
    let nil = RationalMatrix::from(m).sub(&RationalMatrix::identity(n));
    let mut out = RationalMatrix::zero(n);
    let mut power = nil.clone();
    for j in 1..n.max(2) {
        let c = BigRational::new(if j % 2 == 1 { BigInt::one() } else { -BigInt::one() }, BigInt::from(j));
        out = out.add(&power.scale(&c));
        power = power.mul(&nil);
    }
    Ok(out)
}

/// `exp x = Σ x^j / j!` for nilpotent `x`.
pub fn nilpotent_exp(x: &RationalMatrix) -> Result<RationalMatrix> {
    if !is_nilpotent(x) {
        return Err(Error::Invalid("matrix is not nilpotent".into()));
    }
    let n = x.dim();
    let mut out = RationalMatrix::identity(n);
    let mut term = RationalMatrix::identity(n);
    for j in 1..n {
        term = term.mul(x).scale(&BigRational::new(BigInt::one(), BigInt::from(j)));
        out = out.add(&term);
    }
    Ok(out)
}

/// Integer row-echelon basis, reduced without fractions.
#[derive(Debug, Clone, Default)]
struct Span {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Span {
    fn integer_vector(x: &RationalMatrix) -> Vec<BigInt> {
        let den = x.entries().iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        x.entries()
            .iter()
            .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
            .collect()
    }

    /// Adds `x` if it is independent of the span; returns whether it was.
    fn insert(&mut self, x: &RationalMatrix) -> bool {
        let mut v = Self::integer_vector(x);
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let (a, b) = (row[*pivot].clone(), v[*pivot].clone());
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = &a * &*vi - &b * ri;
            }
            let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            if !g.is_zero() {
                for vi in v.iter_mut() {
                    *vi /= &g;
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(p) => {
                // clear the new pivot from older rows
                for (_, row) in self.rows.iter_mut() {
                    if !row[p].is_zero() {
                        let (a, b) = (v[p].clone(), row[p].clone());
                        for (ri, vi) in row.iter_mut().zip(&v) {
                            *ri = &a * &*ri - &b * vi;
                        }
                        let g = row.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
                        for ri in row.iter_mut() {
                            *ri /= &g;
                        }
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

/// Dimension of the Lie algebra generated by `seeds` under `[X, Y] = XY - YX`.
pub fn lie_closure(seeds: &[RationalMatrix], n: usize) -> Result<usize> {
    Ok(lie_closure_basis(seeds, n)?.len())
}

/// A basis of the Lie algebra generated by `seeds`, as matrices.
pub fn lie_closure_basis(seeds: &[RationalMatrix], n: usize) -> Result<Vec<RationalMatrix>> {
    for s in seeds {
        if s.dim() != n {
            return Err(Error::DimensionMismatch(s.dim(), n));
        }
        if !s.trace().is_zero() {
            return Err(Error::NotTraceless);
        }
    }
    let full = n * n - 1;
    let mut span = Span::default();
    let mut basis: Vec<RationalMatrix> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            basis.push(s.clone());
        }
        if basis.len() == full {
            return Ok(basis);
        }
    }
    let mut i = 0;
    while i < basis.len() && basis.len() < full {
        for j in 0..i {
            let b = basis[i].bracket(&basis[j]);
            if span.insert(&b) {
                basis.push(b);
            }
        }
        i += 1;
    }
    Ok(basis)
}

/// `|SL(n, Z/p)| = p^(n(n-1)/2) Π_{i=2..n} (p^i - 1)`.
pub fn sl_order(n: usize, p: u64) -> u128 {
    let p = p as u128;
    let mut order = p.pow((n * (n - 1) / 2) as u32);
    for i in 2..=n {
        order *= p.pow(i as u32) - 1;
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpResult {
    pub p: u64,
    pub surjective: bool,
    pub order: u64,
    pub full_order: u64,
}

/// Order of the image of `generators` in SL(n, Z/p), by closure.
pub fn mod_p_surjective(generators: &[IntMatrix], p: u64, n: usize) -> Result<ModpResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n > MAX_MOD_DIM {
        return Err(Error::DimensionLimit { dim: n, limit: MAX_MOD_DIM });
    }
    let full = sl_order(n, p);
    if full > DEFAULT_CLOSURE_BUDGET as u128 {
        return Err(Error::Budget(format!("|SL({n}, Z/{p})| = {full} exceeds the closure budget")));
    }
    let gens = generators
        .iter()
        .map(|g| {
            if g.dim() != n {
                return Err(Error::DimensionMismatch(g.dim(), n));
            }
            let m = ModMatrix::from_int(g, p as u32)?;
            if m.det() != 1 {
                return Err(Error::Determinant {
                    expected: "1".into(),
                    actual: g.det().to_string(),
                });
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let group = FiniteGroup::closure(&gens, n, p as u32, DEFAULT_CLOSURE_BUDGET)?;
    Ok(ModpResult {
        p,
        surjective: group.order() as u128 == full,
        order: group.order() as u64,
        full_order: full as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantWitness {
    /// Every generator maps this vector to a multiple of itself.
    Line { vector: Vec<String> },
    /// Every generator preserves the hyperplane orthogonal to this vector.
    Hyperplane { normal: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    DenseCertifiedModp { p: u64 },
    DenseEvidenceLie,
    Inconclusive,
    NotDense { witness: InvariantWitness },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiVerdict {
    pub n: usize,
    pub unipotents_harvested: usize,
    pub lie_dimension: usize,
    pub lie_full: bool,
    pub modp_results: Vec<ModpResult>,
    pub verdict: Verdict,
    pub caveat: Option<String>,
}

const MODP_CAVEAT: &str =
    "surjectivity mod a prime p > 3 is taken as certifying density; the hypotheses of that criterion are assumed";

fn words(letters: &[IntMatrix], max_len: usize, n: usize) -> Vec<IntMatrix> {
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut frontier = vec![IntMatrix::identity(n)];
    seen.insert(IntMatrix::identity(n));
    let mut out = frontier.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                let x = w * l;
                if seen.insert(x.clone()) {
                    next.push(x.clone());
                    out.push(x);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Rational kernel basis of `a`.
fn kernel(a: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

fn rat_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

fn preserves_line(g: &IntMatrix, v: &[BigRational]) -> bool {
    let n = v.len();
    let gv: Vec<BigRational> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(g.get(i, j).clone()) * &v[j]).sum())
        .collect();
    // gv parallel to v: all 2×2 minors vanish
    (0..n).all(|i| (0..n).all(|j| &gv[i] * &v[j] == &gv[j] * &v[i]))
}

/// A rational line fixed (projectively) by every generator, searched among
/// eigenvectors of the generators for integer eigenvalues.
fn invariant_line(gens: &[IntMatrix], n: usize) -> Option<Vec<BigRational>> {
    let mut candidates: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for g in gens {
        let Ok(f) = g.char_poly() else { continue };
        for lambda in f.integer_roots().unwrap_or_default() {
            let shifted = g.sub_checked(&IntMatrix::identity(n).scale(&lambda)).ok()?;
            candidates.extend(kernel(&rat_rows(&shifted), n));
        }
    }
    candidates
        .into_iter()
        .find(|v| gens.iter().all(|g| preserves_line(g, v)))
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.into_iter().map(|x| x * BigRational::from_integer(den.clone())).collect()
        })
}

fn format_vector(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Combines the Lie-algebra probe and mod-p closure for the subgroup
/// generated by `generators`.
pub fn zariski_verdict(generators: &[IntMatrix], n: usize, primes: &[u64]) -> Result<ZariskiVerdict> {
    for g in generators {
        if g.dim() != n {
            return Err(Error::DimensionMismatch(g.dim(), n));
        }
        if !g.det().is_one() {
            return Err(Error::Determinant {
                expected: "1".into(),
                actual: g.det().to_string(),
            });
        }
    }
    for &p in primes {
        if p <= 3 || !is_prime(p) {
            return Err(Error::Invalid(format!("certifying prime must be a prime above 3, got {p}")));
        }
    }
    let mut letters: Vec<IntMatrix> = Vec::new();
    for g in generators {
        letters.push(g.clone());
        letters.push(g.inverse_unimodular()?);
    }
    let harvest = words(&letters, HARVEST_WORD_LEN, n);
    let unipotent: Vec<&IntMatrix> = harvest.iter().filter(|w| !w.is_identity() && is_unipotent(w)).collect();
    let conjugators = words(&letters, CONJUGATOR_WORD_LEN, n);
    let full = n * n - 1;

    let mut seeds: Vec<RationalMatrix> = Vec::new();
    let mut seed_span = Span::default();
    'outer: for u in &unipotent {
        let x = nilpotent_log(u)?;
        for c in &conjugators {
            let cr = RationalMatrix::from(c);
            let ci = RationalMatrix::from(&c.inverse_unimodular()?);
            let y = cr.mul(&x).mul(&ci);
            if seed_span.insert(&y) {
                seeds.push(y);
                if seeds.len() == full {
                    break 'outer;
                }
            }
        }
    }
    let lie_dimension = lie_closure(&seeds, n)?;
    let lie_full = lie_dimension == full;

    let modp_results = primes
        .iter()
        .map(|&p| mod_p_surjective(generators, p, n))
        .collect::<Result<Vec<_>>>()?;

    let (verdict, caveat) = if let Some(r) = modp_results.iter().find(|r| r.surjective) {
        (Verdict::DenseCertifiedModp { p: r.p }, Some(MODP_CAVEAT.to_string()))
    } else if lie_full {
        (Verdict::DenseEvidenceLie, None)
    } else if let Some(v) = invariant_line(generators, n) {
        let witness = InvariantWitness::Line {
            vector: format_vector(&v),
        };
        (Verdict::NotDense { witness }, None)
    } else {
        let transposed: Vec<IntMatrix> = generators.iter().map(IntMatrix::transpose).collect();
        match invariant_line(&transposed, n) {
            Some(v) => (
                Verdict::NotDense {
                    witness: InvariantWitness::Hyperplane {
                        normal: format_vector(&v),
                    },
                },
                None,
            ),
            None => (Verdict::Inconclusive, None),
        }
    };
    Ok(ZariskiVerdict {
        n,
        unipotents_harvested: unipotent.len(),
        lie_dimension,
        lie_full,
        modp_results,
        verdict,
        caveat,
    })
}
