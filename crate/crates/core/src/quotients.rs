//! Finite quotients `SL(n, Z/m)`: enumeration, subgroup closure, exact walk
//! push-forward and the abelian obstruction to equidistribution.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};
use crate::walk::WalkGraph;

/// Largest dimension for [`ModMatrix`].
pub const MAX_MOD_DIM: usize = 3;
/// Largest prime for the exhaustive SL(2, Z/p) routines.
pub const MAX_ENUM_PRIME: u64 = 31;
/// Largest composite modulus for the CRT check.
pub const MAX_CRT_MODULUS: u64 = 30;
/// `|Γ| · |V|` budget for exact push-forward.
pub const MAX_WALK_STATES: usize = 1_000_000;
/// Default element budget for subgroup closure.
pub const DEFAULT_CLOSURE_BUDGET: usize = 1_000_000;

/// Matrix over `Z/m` with `n <= 3`, entries in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: u8,
    m: u32,
    e: [u32; 9],
}

impl ModMatrix {
    pub fn new(n: usize, m: u32, entries: &[i64]) -> Result<Self> {
        if n == 0 || n > MAX_MOD_DIM {
            return Err(Error::DimensionLimit { dim: n, limit: MAX_MOD_DIM });
        }
        if m < 2 {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare);
        }
        let mut e = [0u32; 9];
        for (slot, &v) in e.iter_mut().zip(entries) {
            *slot = v.rem_euclid(m as i64) as u32;
        }
        Ok(ModMatrix { n: n as u8, m, e })
    }

    pub fn from_int(mat: &IntMatrix, m: u32) -> Result<Self> {
        let r = mat.reduce_mod(&BigInt::from(m))?;
        let ents: Vec<i64> = r.entries().iter().map(|v| v.to_i64().unwrap()).collect();
        Self::new(mat.dim(), m, &ents)
    }

    pub fn identity(n: usize, m: u32) -> Self {
        let mut e = [0u32; 9];
        for i in 0..n {
            e[i * n + i] = 1 % m;
        }
        ModMatrix { n: n as u8, m, e }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.e[..self.dim() * self.dim()]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.e[i * self.dim() + j]
    }

    pub fn mul(&self, o: &ModMatrix) -> ModMatrix {
        debug_assert_eq!((self.n, self.m), (o.n, o.m));
        let n = self.dim();
        let m = self.m as u64;
        let mut e = [0u32; 9];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.e[i * n + k] as u64 * o.e[k * n + j] as u64;
                }
                e[i * n + j] = (acc % m) as u32;
            }
        }
        ModMatrix { n: self.n, m: self.m, e }
    }

    pub fn det(&self) -> u32 {
        let m = self.m as i64;
        let g = |i, j| self.get(i, j) as i64;
        let d = match self.dim() {
            1 => g(0, 0),
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                    - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        };
        d.rem_euclid(m) as u32
    }

    pub fn trace(&self) -> u32 {
        let n = self.dim();
        ((0..n).map(|i| self.get(i, i) as u64).sum::<u64>() % self.m as u64) as u32
    }

    /// Inverse via the adjugate; `None` when the determinant is not a unit.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let m = self.m as i64;
        let det_inv = mod_inverse(self.det() as i64, m)?;
        let n = self.dim();
        let g = |i: usize, j: usize| self.get(i, j) as i64;
        let adj: Vec<i64> = match n {
            1 => vec![1],
            2 => vec![g(1, 1), -g(0, 1), -g(1, 0), g(0, 0)],
            _ => {
                let mut a = vec![0i64; 9];
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        a[i * 3 + j] = g(r0, c0) * g(r1, c1) - g(r0, c1) * g(r1, c0);
                    }
                }
                a
            }
        };
        let ents: Vec<i64> = adj.iter().map(|v| v * det_inv).collect();
        ModMatrix::new(n, self.m, &ents).ok()
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let eg = a.rem_euclid(m).extended_gcd(&m);
    (eg.gcd == 1).then(|| eg.x.rem_euclid(m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite matrix group with its elements indexed.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    n: usize,
    modulus: u32,
    elements: Vec<ModMatrix>,
    index: HashMap<ModMatrix, usize>,
}

impl FiniteGroup {
    fn from_elements(n: usize, modulus: u32, elements: Vec<ModMatrix>) -> Self {
        let index = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        FiniteGroup {
            n,
            modulus,
            elements,
            index,
        }
    }

    /// Every 2×2 matrix over `Z/m` with determinant 1, in lexicographic order.
    pub fn sl2(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        if m as u64 > MAX_CRT_MODULUS.max(MAX_ENUM_PRIME) {
            return Err(Error::Budget(format!("modulus {m} too large for exhaustive enumeration")));
        }
        let mut elements = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let det = (a as u64 * d as u64 + (m as u64 - b as u64 * c as u64 % m as u64)) % m as u64;
                        if det == 1 % m as u64 {
                            let mut e = [0u32; 9];
                            e[..4].copy_from_slice(&[a, b, c, d]);
                            elements.push(ModMatrix { n: 2, m, e });
                        }
                    }
                }
            }
        }
        Ok(Self::from_elements(2, m, elements))
    }

    /// Subgroup generated by `gens`, by breadth-first search on right
    /// multiplication. Fails once more than `budget` elements are found.
    pub fn closure(gens: &[ModMatrix], n: usize, modulus: u32, budget: usize) -> Result<Self> {
        let id = ModMatrix::identity(n, modulus);
        if let Some(g) = gens.iter().find(|g| g.dim() != n || g.modulus() != modulus) {
            return Err(Error::Invalid(format!(
                "generator of dimension {} mod {} in a group of dimension {n} mod {modulus}",
                g.dim(),
                g.modulus()
            )));
        }
        let mut elements = vec![id];
        let mut index: HashMap<ModMatrix, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.mul(g);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    if elements.len() >= budget {
                        return Err(Error::Budget(format!("subgroup closure exceeded {budget} elements")));
                    }
                    e.insert(elements.len());
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(FiniteGroup {
            n,
            modulus,
            elements,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn elements(&self) -> &[ModMatrix] {
        &self.elements
    }

    pub fn index_of(&self, x: &ModMatrix) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &ModMatrix) -> bool {
        self.index.contains_key(x)
    }

    pub fn identity_index(&self) -> usize {
        self.index[&ModMatrix::identity(self.n, self.modulus)]
    }

    /// Small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<ModMatrix> {
        let mut gens: Vec<ModMatrix> = Vec::new();
        let mut sub = FiniteGroup::closure(&[], self.n, self.modulus, usize::MAX).unwrap();
        for x in &self.elements {
            if !sub.contains(x) {
                gens.push(*x);
                sub = FiniteGroup::closure(&gens, self.n, self.modulus, usize::MAX).unwrap();
                if sub.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Commutator subgroup: normal closure of the commutators of a
    /// generating set.
    pub fn derived_subgroup(&self) -> FiniteGroup {
        let gens = self.generators();
        let inv: Vec<ModMatrix> = gens.iter().map(|g| g.inverse().expect("group element")).collect();
        let mut dgens: Vec<ModMatrix> = Vec::new();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                dgens.push(gens[i].mul(&gens[j]).mul(&inv[i]).mul(&inv[j]));
            }
        }
        let close = |g: &[ModMatrix]| FiniteGroup::closure(g, self.n, self.modulus, usize::MAX).unwrap();
        let mut d = close(&dgens);
        loop {
            let mut grew = false;
            for k in 0..dgens.len() {
                for (g, gi) in gens.iter().zip(&inv) {
                    let c = g.mul(&dgens[k]).mul(gi);
                    if !d.contains(&c) {
                        dgens.push(c);
                        d = close(&dgens);
                        grew = true;
                    }
                }
            }
            if !grew {
                return d;
            }
        }
    }
}

/// `|SL(2, Z/p)| = p (p^2 - 1)`.
pub fn group_order(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p * (p * p - 1))
}

/// Order of SL(2, Z/m) by listing every determinant-1 matrix.
pub fn sl2_order_by_enumeration(m: u32) -> Result<u64> {
    Ok(FiniteGroup::sl2(m)?.order() as u64)
}

/// Number of elements of SL(2, Z/p) with trace `t mod p`.
pub fn count_trace(p: u64, t: i64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_ENUM_PRIME {
        return Err(Error::Budget(format!("p = {p} exceeds {MAX_ENUM_PRIME}")));
    }
    let g = FiniteGroup::sl2(p as u32)?;
    let t = t.rem_euclid(p as i64) as u32;
    Ok(g.elements().iter().filter(|x| x.trace() == t).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtReport {
    pub n: u64,
    pub m: u64,
    pub order_nm: u64,
    pub order_n: u64,
    pub order_m: u64,
    /// Reduction `SL(2, Z/NM) -> SL(2, Z/N) × SL(2, Z/M)` is a bijection.
    pub bijective: bool,
    /// Reduction respected products on every checked pair.
    pub homomorphism: bool,
    pub pairs_checked: u64,
}

impl CrtReport {
    pub fn holds(&self) -> bool {
        self.order_nm == self.order_n * self.order_m && self.bijective && self.homomorphism
    }
}

fn reduce_to(x: &ModMatrix, m: u32) -> ModMatrix {
    let mut e = x.e;
    for v in e.iter_mut() {
        *v %= m;
    }
    ModMatrix { n: x.n, m, e }
}

/// Checks `SL(2, Z/NM) ≅ SL(2, Z/N) × SL(2, Z/M)` for coprime `N, M`.
pub fn crt_split_check(n: u64, m: u64) -> Result<CrtReport> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidModulus(n.min(m).to_string()));
    }
    if n.gcd(&m) != 1 {
        return Err(Error::NotCoprime(n, m));
    }
    if n * m > MAX_CRT_MODULUS {
        return Err(Error::Budget(format!("NM = {} exceeds {MAX_CRT_MODULUS}", n * m)));
    }
    let big = FiniteGroup::sl2((n * m) as u32)?;
    let gn = FiniteGroup::sl2(n as u32)?;
    let gm = FiniteGroup::sl2(m as u32)?;
    let image: std::collections::HashSet<(ModMatrix, ModMatrix)> = big
        .elements()
        .iter()
        .map(|x| (reduce_to(x, n as u32), reduce_to(x, m as u32)))
        .collect();
    let in_range = image.iter().all(|(a, b)| gn.contains(a) && gm.contains(b));
    let bijective = in_range && image.len() == big.order() && image.len() == gn.order() * gm.order();
    // products on a deterministic stride through the pairs
    let els = big.elements();
    let stride = (els.len() / 61).max(1);
    let mut pairs = 0u64;
    let mut homomorphism = true;
    for x in els.iter().step_by(stride) {
        for y in els.iter().step_by(stride) {
            let xy = x.mul(y);
            for q in [n as u32, m as u32] {
                homomorphism &= reduce_to(&xy, q) == reduce_to(x, q).mul(&reduce_to(y, q));
            }
            pairs += 1;
        }
    }
    Ok(CrtReport {
        n,
        m,
        order_nm: big.order() as u64,
        order_n: gn.order() as u64,
        order_m: gm.order() as u64,
        bijective,
        homomorphism,
        pairs_checked: pairs,
    })
}

/// Exact probability mass over the elements of a [`FiniteGroup`], aligned
/// with [`FiniteGroup::elements`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub mass: Vec<BigRational>,
}

impl Distribution {
    pub fn point(order: usize, at: usize) -> Self {
        let mut mass = vec![BigRational::zero(); order];
        mass[at] = BigRational::one();
        Distribution { mass }
    }

    pub fn uniform(order: usize) -> Self {
        Distribution {
            mass: vec![BigRational::new(BigInt::one(), BigInt::from(order)); order],
        }
    }

    pub fn total(&self) -> BigRational {
        self.mass.iter().sum()
    }
}

/// `½ Σ |d(γ) - 1/|Γ||`
pub fn tv_distance(d: &Distribution) -> BigRational {
    let u = BigRational::new(BigInt::one(), BigInt::from(d.mass.len()));
    let s: BigRational = d.mass.iter().map(|x| (x - &u).abs()).sum();
    s / BigRational::from_integer(BigInt::from(2))
}

/// Total variation between two distributions on the same group.
pub fn tv_between(a: &Distribution, b: &Distribution) -> BigRational {
    let s: BigRational = a.mass.iter().zip(&b.mass).map(|(x, y)| (x - y).abs()).sum();
    s / BigRational::from_integer(BigInt::from(2))
}

/// Laws of the walk product for every length `1..=kmax`.
///
/// The product of a walk is the ordered product of the labels of the
/// vertices it visits, the start vertex included. State is
/// `(group element, current vertex)`; masses are kept as integer numerators
/// over a common denominator so every step is exact.
pub fn walk_distributions(
    g: &WalkGraph,
    labels: &[ModMatrix],
    group: &FiniteGroup,
    kmax: usize,
) -> Result<Vec<Distribution>> {
    let nv = g.len();
    if labels.len() != nv {
        return Err(Error::Invalid(format!("{} labels for {nv} vertices", labels.len())));
    }
    let states = group.order().saturating_mul(nv);
    if states > MAX_WALK_STATES {
        return Err(Error::Budget(format!("{states} walk states exceed {MAX_WALK_STATES}")));
    }
    let label_idx: Vec<usize> = labels
        .iter()
        .map(|l| {
            group
                .index_of(l)
                .ok_or_else(|| Error::Invalid(format!("label {l:?} is not in the group")))
        })
        .collect::<Result<_>>()?;
    // right-multiplication table per vertex label
    let order = group.order();
    let mut right: HashMap<usize, Vec<usize>> = HashMap::new();
    for &li in &label_idx {
        right.entry(li).or_insert_with(|| {
            let l = group.elements()[li];
            group
                .elements()
                .iter()
                .map(|x| group.index_of(&x.mul(&l)).expect("group closed under products"))
                .collect()
        });
    }
    let degrees: Vec<u64> = (0..nv).map(|v| g.neighbors(v).len() as u64).collect();
    let step_den: u64 = degrees.iter().filter(|&&d| d > 0).fold(1u64, |acc, &d| acc.lcm(&d));
    let start_den = g
        .start_weights()
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));

    // numerators, denominator = start_den * step_den^(k-1)
    let mut num = vec![BigInt::zero(); order * nv];
    for (s, w) in g.start_states().iter().zip(g.start_weights()) {
        let scaled = w * BigRational::from_integer(start_den.clone());
        num[label_idx[*s] * nv + s] += scaled.to_integer();
    }
    let mut den = start_den.clone();
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        if k > 1 {
            let mut next = vec![BigInt::zero(); order * nv];
            for x in 0..order {
                for v in 0..nv {
                    let c = &num[x * nv + v];
                    if c.is_zero() {
                        continue;
                    }
                    let share = c * BigInt::from(step_den / degrees[v]);
                    for &u in g.neighbors(v) {
                        let y = right[&label_idx[u]][x];
                        next[y * nv + u] += &share;
                    }
                }
            }
            num = next;
            den *= step_den;
        }
        let mass = (0..order)
            .map(|x| {
                let s: BigInt = num[x * nv..(x + 1) * nv].iter().sum();
                BigRational::new(s, den.clone())
            })
            .collect();
        out.push(Distribution { mass });
    }
    Ok(out)
}

/// Law of the walk product at length `k`.
pub fn exact_walk_distribution(
    g: &WalkGraph,
    labels: &[ModMatrix],
    group: &FiniteGroup,
    k: usize,
) -> Result<Distribution> {
    if k == 0 {
        return Err(Error::Invalid("walk length must be at least 1".into()));
    }
    Ok(walk_distributions(g, labels, group, k)?.pop().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub derived_order: usize,
    pub single_coset: bool,
    pub nontrivial_coset: bool,
}

impl Obstruction {
    pub fn fires(&self) -> bool {
        self.single_coset && self.nontrivial_coset
    }
}

/// Whether some one-dimensional character separates the walk from
/// equidistribution: all labels in one coset of `[Γ, Γ]`, and that coset
/// not the identity coset.
pub fn onedim_obstruction_report(group: &FiniteGroup, labels: &[ModMatrix]) -> Result<Obstruction> {
    let d = group.derived_subgroup();
    let Some(first) = labels.first() else {
        return Err(Error::Invalid("no labels".into()));
    };
    if let Some(l) = labels.iter().find(|l| !group.contains(l)) {
        return Err(Error::Invalid(format!("label {l:?} is not in the group")));
    }
    let first_inv = first.inverse().expect("group element");
    let single_coset = labels.iter().all(|l| d.contains(&l.mul(&first_inv)));
    Ok(Obstruction {
        derived_order: d.order(),
        single_coset,
        nontrivial_coset: !d.contains(first),
    })
}

pub fn onedim_obstruction(group: &FiniteGroup, labels: &[ModMatrix]) -> Result<bool> {
    Ok(onedim_obstruction_report(group, labels)?.fires())
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, r²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Parses a generator token into a 2×2 integer matrix: `L`, `U`, `S`, `T`,
/// their inverses (`L^-1`, `Li`, ...), and `I`.
pub fn named_generator(token: &str) -> Result<IntMatrix> {
    use crate::algebra::gens;
    Ok(match token {
        "L" => gens::l(),
        "U" | "T" => gens::u(),
        "L^-1" | "Li" | "l" => gens::l_inv(),
        "U^-1" | "Ui" | "u" | "T^-1" => gens::u_inv(),
        "S" => gens::s(),
        "S^-1" => -&gens::s(),
        "I" => IntMatrix::identity(2),
        "-I" => -&IntMatrix::identity(2),
        other => return Err(Error::Invalid(format!("unknown generator {other:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::build_free_monoid_graph;
    use num_traits::Signed;

    #[test]
    fn orders() {
        assert_eq!(group_order(2).unwrap(), 6);
        assert_eq!(group_order(5).unwrap(), 120);
        assert_eq!(group_order(13).unwrap(), 2184);
        assert_eq!(group_order(4), Err(Error::NotPrime(4)));
        assert_eq!(sl2_order_by_enumeration(5).unwrap(), 120);
    }

    #[test]
    fn traces() {
        assert_eq!(count_trace(5, 2).unwrap(), 25);
        assert_eq!(count_trace(3, 2).unwrap(), 9);
        let total: u64 = (0..7).map(|t| count_trace(7, t).unwrap()).sum();
        assert_eq!(total, group_order(7).unwrap());
        assert!(count_trace(37, 2).is_err());
    }

    #[test]
    fn crt() {
        let r = crt_split_check(2, 3).unwrap();
        assert_eq!((r.order_nm, r.order_n, r.order_m), (144, 6, 24));
        assert!(r.holds());
        assert_eq!(crt_split_check(2, 2), Err(Error::NotCoprime(2, 2)));
        assert!(matches!(crt_split_check(5, 7), Err(Error::Budget(_))));
    }

    #[test]
    fn mod_matrix_ops() {
        let x = ModMatrix::new(3, 5, &[2, 1, 0, 1, 1, 0, 4, 5, 1]).unwrap();
        assert_eq!(x.det(), 1);
        assert_eq!(x.mul(&x.inverse().unwrap()), ModMatrix::identity(3, 5));
        let y = ModMatrix::new(2, 6, &[2, 0, 0, 1]).unwrap();
        assert!(y.inverse().is_none());
        assert!(ModMatrix::new(4, 5, &[0; 16]).is_err());
        let l = ModMatrix::from_int(&crate::algebra::gens::l().pow(10), 3).unwrap();
        assert_eq!(l, ModMatrix::new(2, 3, &[1, 0, 1, 1]).unwrap());
    }

    #[test]
    fn trivial_group_walk() {
        let g = build_free_monoid_graph(&["e"]).unwrap();
        let id = ModMatrix::identity(2, 5);
        let grp = FiniteGroup::closure(&[id], 2, 5, 10).unwrap();
        let d = exact_walk_distribution(&g, &[id], &grp, 4).unwrap();
        assert!(d.mass[0].is_one());
        assert!(tv_distance(&d).is_zero());
    }

    #[test]
    fn parity_walk_never_mixes() {
        let minus = ModMatrix::from_int(&-&IntMatrix::identity(2), 3).unwrap();
        let grp = FiniteGroup::closure(&[minus], 2, 3, 10).unwrap();
        assert_eq!(grp.order(), 2);
        let g = build_free_monoid_graph(&["x", "y"]).unwrap();
        for (k, d) in walk_distributions(&g, &[minus, minus], &grp, 8).unwrap().iter().enumerate() {
            assert!(d.total().is_one());
            assert_eq!(tv_distance(d), BigRational::new(1.into(), 2.into()), "k = {}", k + 1);
        }
        assert!(onedim_obstruction(&grp, &[minus, minus]).unwrap());
        let id = ModMatrix::identity(2, 3);
        assert!(!onedim_obstruction(&grp, &[id, minus]).unwrap());
    }

    #[test]
    fn tv_of_point_mass() {
        let d = Distribution::point(120, 0);
        assert_eq!(tv_distance(&d), BigRational::new(119.into(), 120.into()));
        assert!(tv_distance(&Distribution::uniform(120)).is_zero());
        assert!(tv_between(&d, &d).is_zero());
    }

    #[test]
    fn sl25_is_perfect() {
        let g = FiniteGroup::sl2(5).unwrap();
        assert_eq!(g.derived_subgroup().order(), 120);
        let l = ModMatrix::from_int(&crate::algebra::gens::l(), 5).unwrap();
        assert!(!onedim_obstruction(&g, &[l]).unwrap());
    }

    #[test]
    fn abelian_group_has_trivial_derived_subgroup() {
        let u = ModMatrix::from_int(&crate::algebra::gens::u(), 7).unwrap();
        let g = FiniteGroup::closure(&[u], 2, 7, 100).unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.derived_subgroup().order(), 1);
        assert!(onedim_obstruction(&g, &[u]).unwrap());
    }

    #[test]
    fn budgets() {
        let g = build_free_monoid_graph(&["a"]).unwrap();
        let id = ModMatrix::identity(2, 5);
        let grp = FiniteGroup::sl2(5).unwrap();
        assert!(walk_distributions(&g, &[id, id], &grp, 3).is_err());
        let l = ModMatrix::from_int(&crate::algebra::gens::l(), 5).unwrap();
        let u = ModMatrix::from_int(&crate::algebra::gens::u(), 5).unwrap();
        assert!(matches!(FiniteGroup::closure(&[l, u], 2, 5, 50), Err(Error::Budget(_))));
    }

    #[test]
    fn fit() {
        let pts: Vec<(f64, f64)> = (0..10).map(|x| (x as f64, 3.0 - 0.5 * x as f64)).collect();
        let (s, i, r2) = linear_fit(&pts);
        assert!((s + 0.5).abs() < 1e-12 && (i - 3.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        assert!(BigRational::new((-1).into(), 2.into()).is_negative());
    }
}
