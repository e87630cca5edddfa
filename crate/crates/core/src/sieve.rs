//! Sieve certificates on characteristic polynomials: irreducibility,
//! cyclotomic and power-substitution tests, and symmetric Galois groups
//! from factorization patterns mod p.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{IntMatrix, IntPolynomial};
use crate::error::{Error, Result};
use crate::quotients::is_prime;

pub const DEFAULT_PRIME_BUDGET: u64 = 200;

/// Polynomial over `F_p`, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    fn from_int(f: &IntPolynomial, p: u64) -> Self {
        let pb = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|v| v.mod_floor(&pb).to_u64().unwrap())
            .collect();
        Self::new(p, c)
    }

    fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn inv(&self, a: u64) -> u64 {
        let eg = (a as i64).extended_gcd(&(self.p as i64));
        eg.x.rem_euclid(self.p as i64) as u64
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = self.inv(l);
                Self::new(self.p, self.c.iter().map(|v| v * li).collect())
            }
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Self::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.deg().expect("division by zero polynomial");
        let li = self.inv(*d.c.last().unwrap());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = r[i + dd] * li % self.p;
            q[i] = t;
            if t != 0 {
                for (j, dv) in d.c.iter().enumerate() {
                    r[i + j] = (r[i + j] + self.p - t * dv % self.p) % self.p;
                }
            }
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (i as u64 % self.p) * v % self.p)
            .collect();
        Self::new(self.p, c)
    }

    fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `g` with `g(x)^p = self`; valid when `self' = 0`.
    fn pth_root(&self) -> Self {
        let c = self.c.iter().step_by(self.p as usize).copied().collect();
        Self::new(self.p, c)
    }

    /// Squarefree factorization: `(factor, multiplicity)` pairs.
    fn squarefree_parts(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let f = self.monic();
        if f.deg().unwrap_or(0) == 0 {
            return out;
        }
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if fac.deg().unwrap_or(0) > 0 {
                out.push((fac, i));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_parts() {
                out.push((g, m * self.p as usize));
            }
        }
        out
    }

    /// Degrees of the irreducible factors of a squarefree monic polynomial.
    fn distinct_degree(&self) -> Vec<usize> {
        let mut degrees = Vec::new();
        let mut f = self.monic();
        let x = Self::x(self.p);
        let mut h = x.rem(&f);
        let mut d = 1;
        while f.deg().unwrap_or(0) >= 2 * d {
            h = h.pow_mod(self.p, &f);
            let g = f.gcd(&h.sub(&x));
            let gd = g.deg().unwrap_or(0);
            if gd > 0 {
                degrees.extend(std::iter::repeat_n(d, gd / d));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        if let Some(r) = f.deg().filter(|&r| r > 0) {
            degrees.push(r);
        }
        degrees
    }
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime(n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPattern {
    pub p: u64,
    /// Factor degrees in increasing order, repeated by multiplicity.
    pub degrees: Vec<usize>,
    pub squarefree: bool,
}

/// Degree multiset of the factorization of `f mod p`.
pub fn factor_pattern_mod_p(f: &IntPolynomial, p: u64) -> Result<FactorPattern> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !f.is_monic() {
        return Err(Error::Invalid(format!("{f} is not monic")));
    }
    let fp = FpPoly::from_int(f, p);
    let mut degrees = Vec::new();
    let mut squarefree = true;
    for (part, mult) in fp.squarefree_parts() {
        squarefree &= mult == 1;
        for d in part.distinct_degree() {
            degrees.extend(std::iter::repeat_n(d, mult));
        }
    }
    degrees.sort_unstable();
    Ok(FactorPattern { p, degrees, squarefree })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible { witness: u64 },
    Reducible { reason: String },
    Unknown { primes_tried: usize },
}

/// Irreducibility over Z, certified by a prime where `f mod p` is
/// irreducible; reducibility only constructively.
pub fn certify_irreducible(f: &IntPolynomial, prime_budget: u64) -> Result<Irreducibility> {
    if !f.is_monic() {
        return Err(Error::Invalid(format!("{f} is not monic")));
    }
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Irreducibility::Reducible {
            reason: "constant polynomial".into(),
        });
    }
    if n >= 2 {
        if let Some(r) = f.integer_roots().and_then(|rs| rs.into_iter().next()) {
            return Ok(Irreducibility::Reducible {
                reason: format!("rational root {r}"),
            });
        }
        if n == 2 && f.coeff(0).is_one() && f.coeff(1).abs() == BigInt::from(2) {
            return Ok(Irreducibility::Reducible {
                reason: "|trace| = 2".into(),
            });
        }
        let g = f.primitive_gcd(&f.derivative());
        if g.degree().unwrap_or(0) > 0 {
            return Ok(Irreducibility::Reducible {
                reason: format!("repeated factor {g}"),
            });
        }
    }
    let primes = primes_up_to(prime_budget);
    for &p in &primes {
        let pat = factor_pattern_mod_p(f, p)?;
        if pat.squarefree && pat.degrees == [n] {
            return Ok(Irreducibility::Irreducible { witness: p });
        }
    }
    Ok(Irreducibility::Unknown {
        primes_tried: primes.len(),
    })
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut phi = m;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            phi -= phi / q;
        }
        q += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// `Φ_m` for every `m` with `φ(m) <= max_degree`, keyed by `m`.
pub fn cyclotomic_polynomials(max_degree: usize) -> BTreeMap<u64, IntPolynomial> {
    // φ(m) >= sqrt(m / 2), so m <= 2 d^2 covers every index
    let limit = (2 * max_degree * max_degree).max(2) as u64;
    let mut all: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for m in 1..=limit {
        let mut c = vec![BigInt::zero(); m as usize + 1];
        c[0] = -BigInt::one();
        c[m as usize] = BigInt::one();
        let mut phi = IntPolynomial::new(c);
        for d in (1..m).filter(|d| m % d == 0) {
            phi = phi.div_rem_monic(&all[&d]).0;
        }
        all.insert(m, phi);
    }
    all.retain(|&m, _| euler_phi(m) as usize <= max_degree);
    all
}

/// Cyclotomic indices `m` (with repetition) whose product is `f`, or `None`
/// when `f` is not a product of cyclotomic polynomials.
pub fn cyclotomic_factors(f: &IntPolynomial) -> Result<Option<Vec<u64>>> {
    if !f.is_monic() {
        return Err(Error::Invalid(format!("{f} is not monic")));
    }
    if f.coeff(0).is_zero() {
        return Err(Error::Invalid("zero constant term".into()));
    }
    let mut rest = f.clone();
    let mut found = Vec::new();
    for (m, phi) in cyclotomic_polynomials(f.degree().unwrap_or(0)) {
        loop {
            let (q, r) = rest.div_rem_monic(&phi);
            if !r.is_zero() || rest.degree().unwrap_or(0) == 0 {
                break;
            }
            rest = q;
            found.push(m);
        }
    }
    Ok((rest.degree() == Some(0)).then_some(found))
}

pub fn is_cyclotomic_product(f: &IntPolynomial) -> Result<bool> {
    Ok(cyclotomic_factors(f)?.is_some())
}

/// Smallest `k >= 2` dividing `deg f` with `f(x) = g(x^k)`.
pub fn is_power_substitution(f: &IntPolynomial) -> Option<usize> {
    let n = f.degree()?;
    (2..=n).filter(|k| n % k == 0).find(|&k| {
        f.coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % k == 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CassonVerdict {
    Certified,
    Rejected { reason: CassonRejection },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum CassonRejection {
    Reducible { detail: String },
    Cyclotomic { indices: Vec<u64> },
    PowerSubstitution { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CassonCertificate {
    pub char_poly: IntPolynomial,
    pub irreducible_witness: Option<u64>,
    /// Cyclotomic indices tried as divisors.
    pub noncyclotomic_evidence: Vec<u64>,
    /// Divisors `k` of the degree that were tested.
    pub nonpower_evidence: Vec<usize>,
    pub verdict: CassonVerdict,
}

/// The three characteristic-polynomial conditions for a mapping class
/// acting on homology: irreducible, not cyclotomic, not `g(x^k)`.
pub fn casson_certificate(m: &IntMatrix) -> Result<CassonCertificate> {
    casson_certificate_with_budget(m, DEFAULT_PRIME_BUDGET)
}

pub fn casson_certificate_with_budget(m: &IntMatrix, prime_budget: u64) -> Result<CassonCertificate> {
    let f = m.char_poly()?;
    let n = f.degree().unwrap_or(0);
    let irr = certify_irreducible(&f, prime_budget)?;
    let noncyclotomic_evidence: Vec<u64> = cyclotomic_polynomials(n).into_keys().collect();
    let nonpower_evidence: Vec<usize> = (2..=n).filter(|k| n % k == 0).collect();
    let cyclo = if f.coeff(0).is_zero() {
        None
    } else {
        cyclotomic_factors(&f)?
    };
    let power = is_power_substitution(&f);
    let verdict = match (&irr, cyclo, power) {
        (Irreducibility::Reducible { reason }, _, _) => CassonVerdict::Rejected {
            reason: CassonRejection::Reducible { detail: reason.clone() },
        },
        (_, Some(indices), _) => CassonVerdict::Rejected {
            reason: CassonRejection::Cyclotomic { indices },
        },
        (_, None, Some(k)) => CassonVerdict::Rejected {
            reason: CassonRejection::PowerSubstitution { k },
        },
        (Irreducibility::Unknown { .. }, None, None) => CassonVerdict::Unknown,
        (Irreducibility::Irreducible { .. }, None, None) => CassonVerdict::Certified,
    };
    let irreducible_witness = match irr {
        Irreducibility::Irreducible { witness } => Some(witness),
        _ => None,
    };
    Ok(CassonCertificate {
        char_poly: f,
        irreducible_witness,
        noncyclotomic_evidence,
        nonpower_evidence,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleRole {
    /// Pattern `{n}`: an n-cycle.
    NCycle,
    /// Pattern `{1, n-1}`: with an n-cycle, forces 2-transitivity.
    NMinusOneCycle,
    /// One 2 and otherwise odd degrees: an odd power is a transposition.
    Transposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisWitness {
    pub p: u64,
    pub pattern: Vec<usize>,
    pub roles: Vec<CycleRole>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaloisVerdict {
    FullSymmetric,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub degree: usize,
    pub witnesses: Vec<GaloisWitness>,
    /// Primes skipped because `f mod p` has a repeated factor.
    pub skipped_primes: Vec<u64>,
    pub verdict: GaloisVerdict,
}

fn roles_of(degrees: &[usize], n: usize) -> Vec<CycleRole> {
    let mut roles = Vec::new();
    if degrees == [n] {
        roles.push(CycleRole::NCycle);
    }
    if n >= 3 && degrees == [1, n - 1] {
        roles.push(CycleRole::NMinusOneCycle);
    }
    let twos = degrees.iter().filter(|&&d| d == 2).count();
    if twos == 1 && degrees.iter().all(|&d| d == 2 || d % 2 == 1) {
        roles.push(CycleRole::Transposition);
    }
    roles
}

fn needed_roles(n: usize) -> &'static [CycleRole] {
    match n {
        0 | 1 => &[],
        2 => &[CycleRole::NCycle],
        _ => &[CycleRole::NCycle, CycleRole::NMinusOneCycle, CycleRole::Transposition],
    }
}

/// Certifies `Gal(f) = S_n` from Frobenius cycle types: an n-cycle, an
/// (n-1)-cycle and a transposition-type pattern. One-sided: `Unknown`
/// proves nothing.
pub fn galois_full_symmetric_certificate(f: &IntPolynomial, prime_budget: u64) -> Result<GaloisCertificate> {
    if !f.is_monic() {
        return Err(Error::Invalid(format!("{f} is not monic")));
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let n = f.degree().unwrap_or(0);
    let patterns: Vec<FactorPattern> = primes_up_to(prime_budget)
        .par_iter()
        .map(|&p| factor_pattern_mod_p(f, p))
        .collect::<Result<_>>()?;
    let needed = needed_roles(n);
    let mut found: Vec<CycleRole> = Vec::new();
    let mut witnesses = Vec::new();
    let mut skipped_primes = Vec::new();
    for pat in patterns {
        if found.len() == needed.len() {
            break;
        }
        if !pat.squarefree {
            skipped_primes.push(pat.p);
            continue;
        }
        let new: Vec<CycleRole> = roles_of(&pat.degrees, n)
            .into_iter()
            .filter(|r| needed.contains(r) && !found.contains(r))
            .collect();
        if !new.is_empty() {
            found.extend(&new);
            witnesses.push(GaloisWitness {
                p: pat.p,
                pattern: pat.degrees,
                roles: new,
            });
        }
    }
    let verdict = if found.len() == needed.len() {
        GaloisVerdict::FullSymmetric
    } else {
        GaloisVerdict::Unknown
    };
    Ok(GaloisCertificate {
        degree: n,
        witnesses,
        skipped_primes,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IwipVerdict {
    CertifiedIwipAbelianized { galois: GaloisCertificate },
    Rejected { reason: String },
    Unknown { galois: GaloisCertificate },
}

/// Abelianized iwip test: a full symmetric Galois group for `χ(m)` makes
/// `χ(m^k)` irreducible for every `k`.
pub fn iwip_certificate(m: &IntMatrix) -> Result<IwipVerdict> {
    iwip_certificate_with_budget(m, DEFAULT_PRIME_BUDGET)
}

pub fn iwip_certificate_with_budget(m: &IntMatrix, prime_budget: u64) -> Result<IwipVerdict> {
    let det = m.det();
    if det.abs() != BigInt::one() {
        return Err(Error::Determinant {
            expected: "±1".into(),
            actual: det.to_string(),
        });
    }
    let f = m.char_poly()?;
    if let Irreducibility::Reducible { reason } = certify_irreducible(&f, 0)? {
        return Ok(IwipVerdict::Rejected {
            reason: format!("characteristic polynomial reducible: {reason}"),
        });
    }
    let galois = galois_full_symmetric_certificate(&f, prime_budget)?;
    Ok(match galois.verdict {
        GaloisVerdict::FullSymmetric => IwipVerdict::CertifiedIwipAbelianized { galois },
        GaloisVerdict::Unknown => IwipVerdict::Unknown { galois },
    })
}
