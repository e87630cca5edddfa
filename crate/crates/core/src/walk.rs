//! Recognizing graphs and walks on them.
//!
//! A [`WalkGraph`] is an undirected graph whose vertices carry generator
//! tokens; a walk of length `k` visits `k` vertices and spells the word of
//! their tokens. Loops are allowed and count once in a neighbor list.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{gens, IntMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkGraph {
    tokens: Vec<String>,
    /// Sorted, deduplicated neighbor lists; `adj[i]` contains `i` iff there is a loop.
    adj: Vec<Vec<usize>>,
    start: Vec<usize>,
    start_weights: Vec<BigRational>,
    /// Set for graphs whose construction makes them bipartite.
    pub bipartite_by_construction: bool,
}

/// JSON layout: `{"vertices": [...], "edges": [[i, j], ...], "start": [...]}`,
/// with optional `"start_weights": ["p/q", ...]` (uniform when absent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub start: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_weights: Option<Vec<String>>,
}

impl WalkGraph {
    /// Builds a graph from an undirected edge list. Start weights default to uniform.
    pub fn new(
        tokens: Vec<String>,
        edges: &[(usize, usize)],
        start: Vec<usize>,
        start_weights: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        let n = tokens.len();
        if n == 0 {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Invalid(format!("edge ({i}, {j}) out of range")));
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        for nb in adj.iter_mut() {
            nb.sort_unstable();
            nb.dedup();
        }
        if start.is_empty() {
            return Err(Error::Invalid("no start states".into()));
        }
        if let Some(&s) = start.iter().find(|&&s| s >= n) {
            return Err(Error::Invalid(format!("start state {s} out of range")));
        }
        let weights = match start_weights {
            Some(w) => {
                if w.len() != start.len() {
                    return Err(Error::Invalid("start weight count differs from start states".into()));
                }
                if w.iter().any(Signed::is_negative) {
                    return Err(Error::Invalid("negative start weight".into()));
                }
                let total: BigRational = w.iter().sum();
                if !total.is_one() {
                    return Err(Error::Invalid(format!("start weights sum to {total}, not 1")));
                }
                w
            }
            None => {
                let u = BigRational::new(BigInt::one(), BigInt::from(start.len()));
                vec![u; start.len()]
            }
        };
        let g = WalkGraph {
            tokens,
            adj,
            start,
            start_weights: weights,
            bipartite_by_construction: false,
        };
        let reach = g.reachable_from_start();
        if let Some(v) = reach.iter().position(|r| !r) {
            return Err(Error::Invalid(format!(
                "vertex {} ({}) unreachable from the start states",
                v, g.tokens[v]
            )));
        }
        Ok(g)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        let edges: Vec<(usize, usize)> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        let weights = spec
            .start_weights
            .as_ref()
            .map(|ws| {
                ws.iter()
                    .map(|s| {
                        s.parse::<BigRational>()
                            .map_err(|_| Error::Invalid(format!("bad weight {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Self::new(spec.vertices.clone(), &edges, spec.start.clone(), weights)
    }

    pub fn to_spec(&self) -> GraphSpec {
        let uniform = self.start_weights.iter().all(|w| *w == self.start_weights[0]);
        GraphSpec {
            vertices: self.tokens.clone(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            start: self.start.clone(),
            start_weights: (!uniform).then(|| self.start_weights.iter().map(|w| w.to_string()).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn start_states(&self) -> &[usize] {
        &self.start
    }

    pub fn start_weights(&self) -> &[BigRational] {
        &self.start_weights
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adj[v].binary_search(&v).is_ok()
    }

    /// Undirected edges `(i, j)` with `i <= j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&j| j >= i).map(|&j| (i, j)));
        }
        out
    }

    /// 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.len();
        let mut m = vec![vec![0u8; n]; n];
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                m[i][j] = 1;
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.adjacency_matrix();
        (0..self.len()).all(|i| (0..self.len()).all(|j| m[i][j] == m[j][i]))
    }

    fn reachable_from_start(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = self.start.iter().copied().collect();
        for &s in &self.start {
            seen[s] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == token)
    }

    /// Number of walks visiting `len` vertices that begin at a start state,
    /// by transfer-matrix iteration.
    pub fn walk_count(&self, len: usize) -> BigInt {
        if len == 0 {
            return BigInt::zero();
        }
        let mut v = vec![BigInt::zero(); self.len()];
        for &s in &self.start {
            v[s] += 1;
        }
        for _ in 1..len {
            let mut next = vec![BigInt::zero(); self.len()];
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &j in &self.adj[i] {
                    next[j] += c;
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }
}

/// Complete graph on the tokens with a loop at every vertex; every vertex
/// is a start state.
pub fn build_free_monoid_graph<S: AsRef<str>>(tokens: &[S]) -> Result<WalkGraph> {
    if tokens.is_empty() {
        return Err(Error::Invalid("empty token list".into()));
    }
    let n = tokens.len();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    WalkGraph::new(
        tokens.iter().map(|t| t.as_ref().to_string()).collect(),
        &edges,
        (0..n).collect(),
        None,
    )
}

/// Token names for the free group of the given rank: `a, A, b, B, ...`,
/// with the capital letter the inverse.
pub fn free_group_tokens(rank: usize) -> Vec<String> {
    (0..rank)
        .flat_map(|i| {
            let c = (b'a' + i as u8) as char;
            [c.to_string(), c.to_ascii_uppercase().to_string()]
        })
        .collect()
}

/// Reduced-word automaton: all pairs adjacent except a generator and its
/// inverse; loops everywhere.
pub fn build_free_group_graph(rank: usize) -> Result<WalkGraph> {
    if rank == 0 || rank > 13 {
        return Err(Error::Invalid(format!("unsupported rank {rank}")));
    }
    let tokens = free_group_tokens(rank);
    let n = tokens.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i / 2 == j / 2 && i != j))
        .collect();
    WalkGraph::new(tokens, &edges, (0..n).collect(), None)
}

fn power_token(base: char, e: usize) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// The two automata for `C_p * C_q = <T | T^p> * <S | S^q>`.
///
/// The naive graph has vertices `T..T^{p-1}, S..S^{q-1}` with every `T^i`
/// adjacent to every `S^j`; it is bipartite. The improved graph has one
/// vertex per block `S^i T^j` (so `(p-1)(q-1)` vertices), any block may
/// follow any block, and the `q-1` blocks `S^i T` are the start states.
pub fn build_free_product_graph(p: usize, q: usize) -> Result<(WalkGraph, WalkGraph)> {
    if p < 2 || q < 2 {
        return Err(Error::Invalid(format!("need p, q >= 2, got ({p}, {q})")));
    }
    let mut tokens: Vec<String> = (1..p).map(|i| power_token('T', i)).collect();
    tokens.extend((1..q).map(|j| power_token('S', j)));
    let edges: Vec<(usize, usize)> = (0..p - 1)
        .flat_map(|i| (0..q - 1).map(move |j| (i, p - 1 + j)))
        .collect();
    let mut naive = WalkGraph::new(tokens, &edges, (0..p + q - 2).collect(), None)?;
    naive.bipartite_by_construction = true;

    let mut blocks = Vec::new();
    let mut start = Vec::new();
    for i in 1..q {
        for j in 1..p {
            if j == 1 {
                start.push(blocks.len());
            }
            blocks.push(format!("{}{}", power_token('S', i), power_token('T', j)));
        }
    }
    let m = blocks.len();
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let improved = WalkGraph::new(blocks, &edges, start, None)?;
    Ok((naive, improved))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyR {
    Holds,
    FailsBipartite,
    FailsDisconnected,
}

/// For a symmetric adjacency matrix, a unique eigenvalue of maximal modulus
/// is equivalent to the graph being connected and not bipartite.
pub fn check_property_r(g: &WalkGraph) -> PropertyR {
    let n = g.len();
    let mut color: Vec<Option<bool>> = vec![None; n];
    color[0] = Some(false);
    let mut queue = VecDeque::from([0usize]);
    let mut bipartite = true;
    let mut visited = 1;
    while let Some(v) = queue.pop_front() {
        let cv = color[v].unwrap();
        for &w in g.neighbors(v) {
            match color[w] {
                None => {
                    color[w] = Some(!cv);
                    visited += 1;
                    queue.push_back(w);
                }
                Some(cw) if cw == cv => bipartite = false,
                Some(_) => {}
            }
        }
    }
    if visited < n {
        PropertyR::FailsDisconnected
    } else if bipartite {
        PropertyR::FailsBipartite
    } else {
        PropertyR::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub tokens: Vec<String>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Vertex indices of a random walk visiting `k` vertices.
pub fn sample_walk_indices<R: Rng + ?Sized>(g: &WalkGraph, k: usize, rng: &mut R) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut v = *g.start.last().unwrap();
    for (s, w) in g.start.iter().zip(&g.start_weights) {
        acc += w.to_f64().unwrap_or(0.0);
        if u < acc {
            v = *s;
            break;
        }
    }
    out.push(v);
    for _ in 1..k {
        let nb = g.neighbors(v);
        if nb.is_empty() {
            break;
        }
        v = nb[rng.gen_range(0..nb.len())];
        out.push(v);
    }
    out
}

/// Random walk visiting `k` vertices; returns its token word.
pub fn sample_walk<R: Rng + ?Sized>(g: &WalkGraph, k: usize, rng: &mut R) -> Result<Word> {
    if k == 0 {
        return Err(Error::Invalid("walk length must be at least 1".into()));
    }
    let idx = sample_walk_indices(g, k, rng);
    if idx.len() < k {
        return Err(Error::Invalid("walk reached a vertex with no neighbors".into()));
    }
    Ok(Word {
        tokens: idx.into_iter().map(|i| g.tokens[i].clone()).collect(),
    })
}

/// Generators of the positive {L, U} monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LuLetter {
    L,
    U,
}

impl LuLetter {
    pub fn matrix(self) -> IntMatrix {
        match self {
            LuLetter::L => gens::l(),
            LuLetter::U => gens::u(),
        }
    }
}

/// `M = sign · S^left · W · S^right` with `W` a positive word in `L, U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LuDecomposition {
    pub sign: i8,
    pub left_s: i8,
    pub right_s: i8,
    /// Run-length form of `W`, e.g. `[(U, 0)...]` never appears; zero runs are dropped.
    pub runs: Vec<(LuLetter, u64)>,
    /// Length of `W` (sum of the run lengths).
    pub length: u64,
}

impl LuDecomposition {
    pub fn word_matrix(&self) -> IntMatrix {
        self.runs
            .iter()
            .fold(IntMatrix::identity(2), |acc, &(l, e)| &acc * &l.matrix().pow(e))
    }

    /// Rebuilds the matrix the decomposition describes.
    pub fn reconstruct(&self) -> IntMatrix {
        let s_pow = |e: i8| match e {
            1 => gens::s(),
            -1 => -&gens::s(),
            _ => IntMatrix::identity(2),
        };
        let m = &(&s_pow(self.left_s) * &self.word_matrix()) * &s_pow(self.right_s);
        if self.sign < 0 {
            -&m
        } else {
            m
        }
    }
}

/// Word of a nonnegative SL(2,Z) matrix in the free monoid on `L, U`,
/// by repeatedly peeling `U` (top row dominates) or `L` (bottom row dominates).
fn positive_word(m: &IntMatrix) -> Option<Vec<(LuLetter, u64)>> {
    let mut e: Vec<BigInt> = m.entries().to_vec();
    if e.iter().any(Signed::is_negative) || !m.det().is_one() {
        return None;
    }
    let mut runs: Vec<(LuLetter, u64)> = Vec::new();
    let push = |runs: &mut Vec<(LuLetter, u64)>, l: LuLetter, n: u64| {
        if n == 0 {
            return;
        }
        match runs.last_mut() {
            Some((last, c)) if *last == l => *c += n,
            _ => runs.push((l, n)),
        }
    };
    loop {
        let [a, b, c, d] = [e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()];
        let (a, b, c, d) = (&a, &b, &c, &d);
        if a.is_one() && b.is_zero() && c.is_zero() && d.is_one() {
            return Some(runs);
        }
        if a >= c && b >= d {
            // peel U^n with n = as many as keep the top row nonnegative
            let n = if c.is_zero() { b / d } else if d.is_zero() { a / c } else { (a / c).min(b / d) };
            let n = n.max(BigInt::one());
            e[0] = a - &n * c;
            e[1] = b - &n * d;
            push(&mut runs, LuLetter::U, n.to_u64()?);
        } else if c >= a && d >= b {
            let n = if a.is_zero() { d / b } else if b.is_zero() { c / a } else { (c / a).min(d / b) };
            let n = n.max(BigInt::one());
            e[2] = c - &n * a;
            e[3] = d - &n * b;
            push(&mut runs, LuLetter::L, n.to_u64()?);
        } else {
            return None;
        }
    }
}

/// Word length of `M` in the generators `L, U`.
///
/// Inside the cone `b > a > 0, d > c >= 0` this equals the sum of the
/// partial quotients of `b/d`. Other matrices are brought into the
/// nonnegative monoid by this table, tried in order:
///
/// | form                | handled as          |
/// |---------------------|---------------------|
/// | `M >= 0`            | `W`                 |
/// | `M <= 0`            | `-W`                |
/// | `M S^{±1} >= 0`     | `W S^{∓1}`          |
/// | `S^{±1} M >= 0`     | `S^{∓1} W`          |
/// | `S^{±1} M S^{±1}`   | both sides          |
///
/// each also with the overall sign flipped. Anything else is an error.
pub fn word_length_lu(m: &IntMatrix) -> Result<LuDecomposition> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch(m.dim(), 2));
    }
    if !m.det().is_one() {
        return Err(Error::Determinant {
            expected: "1".into(),
            actual: m.det().to_string(),
        });
    }
    let s = gens::s();
    let s_inv = -&s;
    let pow = |e: i8| match e {
        1 => s.clone(),
        -1 => s_inv.clone(),
        _ => IntMatrix::identity(2),
    };
    for sign in [1i8, -1] {
        let signed = if sign < 0 { -m } else { m.clone() };
        for (left, right) in [(0i8, 0i8), (0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
            // signed = S^left W S^right  =>  W = S^-left signed S^-right
            let w = &(&pow(-left) * &signed) * &pow(-right);
            if let Some(runs) = positive_word(&w) {
                let length = runs.iter().map(|r| r.1).sum();
                return Ok(LuDecomposition {
                    sign,
                    left_s: left,
                    right_s: right,
                    runs,
                    length,
                });
            }
        }
    }
    Err(Error::Invalid(format!("matrix {m} outside all handled cones")))
}

/// Canonical continued fraction `[a0; a1, ..., ar]` of `p/q` (q > 0), with
/// `ar >= 2` whenever `r >= 1`.
pub fn continued_fraction(mut p: u64, mut q: u64) -> Vec<u64> {
    assert!(q > 0, "denominator must be positive");
    let mut out = Vec::new();
    while q != 0 {
        out.push(p / q);
        (p, q) = (q, p % q);
    }
    out
}

/// Sum of the partial quotients of `p/q`.
pub fn cf_sum(p: u64, q: u64) -> u64 {
    continued_fraction(p, q).iter().sum()
}

pub const MAX_CF_DENOMINATOR: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfStat {
    pub q: u64,
    /// Exact mean of `S(p/q)` over `0 < p < q`.
    #[serde(with = "crate::report::rational_string")]
    pub mean: BigRational,
    /// `(6/π²) (ln q)^2`
    #[serde(with = "crate::report::f64_string")]
    pub reference: f64,
    #[serde(with = "crate::report::f64_string")]
    pub ratio: f64,
}

/// Mean continued-fraction sum over `0 < p < q` for each requested `q`.
pub fn cf_sum_statistics(qs: &[u64]) -> Result<Vec<CfStat>> {
    qs.iter()
        .map(|&q| {
            if q < 2 {
                return Err(Error::Invalid(format!("q must be at least 2, got {q}")));
            }
            if q > MAX_CF_DENOMINATOR {
                return Err(Error::Budget(format!("q = {q} exceeds {MAX_CF_DENOMINATOR}")));
            }
            let total: u64 = (1..q).map(|p| cf_sum(p, q)).sum();
            let mean = BigRational::new(BigInt::from(total), BigInt::from(q - 1));
            let lq = (q as f64).ln();
            let reference = 6.0 / (std::f64::consts::PI * std::f64::consts::PI) * lq * lq;
            let ratio = mean.to_f64().unwrap_or(f64::NAN) / reference;
            Ok(CfStat { q, mean, reference, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn free_monoid_shape() {
        let g = build_free_monoid_graph(&["a", "A", "b", "B"]).unwrap();
        let e = g.edges();
        assert_eq!(e.iter().filter(|(i, j)| i == j).count(), 4);
        assert_eq!(e.iter().filter(|(i, j)| i != j).count(), 6);
        assert_eq!(g.walk_count(5), BigInt::from(4u32.pow(5)));
        let one = build_free_monoid_graph(&["x"]).unwrap();
        assert_eq!(one.edges(), vec![(0, 0)]);
        assert!(build_free_monoid_graph::<&str>(&[]).is_err());
    }

    #[test]
    fn free_group_counts() {
        let g = build_free_group_graph(2).unwrap();
        assert_eq!(g.tokens(), &["a", "A", "b", "B"]);
        assert!(!g.neighbors(0).contains(&1));
        assert!(!g.neighbors(2).contains(&3));
        assert!(g.has_loop(3));
        for l in 1..10 {
            assert_eq!(g.walk_count(l), BigInt::from(4 * 3u64.pow(l as u32 - 1)));
        }
    }

    #[test]
    fn free_product_sizes() {
        let (naive, improved) = build_free_product_graph(2, 3).unwrap();
        assert_eq!(naive.len(), 3);
        assert_eq!(improved.len(), 2);
        assert_eq!(improved.start_states().len(), 2);
        assert_eq!(check_property_r(&naive), PropertyR::FailsBipartite);
        assert!(naive.bipartite_by_construction);
        assert_eq!(check_property_r(&improved), PropertyR::Holds);
        let (n2, i2) = build_free_product_graph(3, 4).unwrap();
        assert_eq!(n2.len(), 5);
        assert_eq!(i2.len(), 6);
        assert_eq!(i2.start_states().len(), 3);
        assert!(build_free_product_graph(1, 3).is_err());
    }

    #[test]
    fn property_r_cases() {
        let square = WalkGraph::new(
            ["1", "2", "3", "4"].map(String::from).to_vec(),
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![0],
            None,
        )
        .unwrap();
        assert_eq!(check_property_r(&square), PropertyR::FailsBipartite);
        let split = WalkGraph::new(
            ["x", "y"].map(String::from).to_vec(),
            &[(0, 0), (1, 1)],
            vec![0, 1],
            None,
        )
        .unwrap();
        assert_eq!(check_property_r(&split), PropertyR::FailsDisconnected);
        assert_eq!(check_property_r(&build_free_group_graph(2).unwrap()), PropertyR::Holds);
        assert_eq!(check_property_r(&build_free_monoid_graph(&["z"]).unwrap()), PropertyR::Holds);
    }

    #[test]
    fn graph_validation() {
        let t = || ["x", "y"].map(String::from).to_vec();
        assert!(WalkGraph::new(t(), &[(0, 0)], vec![0], None).is_err(), "unreachable vertex");
        assert!(WalkGraph::new(t(), &[(0, 2)], vec![0], None).is_err());
        assert!(WalkGraph::new(t(), &[(0, 1)], vec![], None).is_err());
        let half = BigRational::new(1.into(), 2.into());
        assert!(WalkGraph::new(t(), &[(0, 1)], vec![0, 1], Some(vec![half.clone(), half.clone()])).is_ok());
        assert!(WalkGraph::new(t(), &[(0, 1)], vec![0, 1], Some(vec![half.clone(), half * BigRational::from_integer(2.into())])).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let g = build_free_group_graph(2).unwrap();
        let json = serde_json::to_string(&g.to_spec()).unwrap();
        let back = WalkGraph::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(serde_json::from_str::<GraphSpec>(r#"{"vertices":["a"],"edges":[[0,0]],"start":[0],"extra":1}"#).is_err());
    }

    #[test]
    fn walks() {
        let one = build_free_monoid_graph(&["z"]).unwrap();
        let mut r = rng::stream(1, 0);
        assert_eq!(sample_walk(&one, 4, &mut r).unwrap().tokens, vec!["z"; 4]);
        let g = build_free_group_graph(2).unwrap();
        for _ in 0..200 {
            let w = sample_walk(&g, 12, &mut r).unwrap();
            assert_eq!(w.len(), 12);
            for pair in w.tokens.windows(2) {
                let (x, y) = (&pair[0], &pair[1]);
                assert!(!(x != y && x.eq_ignore_ascii_case(y)), "{x}{y}");
            }
        }
        assert!(sample_walk(&g, 0, &mut r).is_err());
    }

    #[test]
    fn lu_lengths() {
        let m = IntMatrix::from_array([[1, 2], [3, 7]]);
        let d = word_length_lu(&m).unwrap();
        assert_eq!(d.length, 5);
        assert_eq!(d.runs, vec![(LuLetter::L, 3), (LuLetter::U, 2)]);
        assert_eq!(d.reconstruct(), m);
        assert_eq!(cf_sum(2, 7), 5);
        assert_eq!(word_length_lu(&gens::u()).unwrap().length, 1);
        assert_eq!(word_length_lu(&IntMatrix::identity(2)).unwrap().length, 0);
        assert!(word_length_lu(&IntMatrix::from_array([[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn lu_symmetry_table_round_trips() {
        for m in [gens::s(), gens::u_inv(), gens::l_inv(), -&gens::u(), IntMatrix::from_array([[3, -2], [-4, 3]])] {
            let d = word_length_lu(&m).unwrap();
            assert_eq!(d.reconstruct(), m);
        }
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction(1, 2), vec![0, 2]);
        assert_eq!(continued_fraction(3, 7), vec![0, 2, 3]);
        assert_eq!(cf_sum(1, 2), 2);
        assert_eq!(cf_sum(3, 7), 5);
        assert!(cf_sum_statistics(&[MAX_CF_DENOMINATOR + 1]).is_err());
        let s = cf_sum_statistics(&[7]).unwrap();
        // S(p/7) for p = 1..6: 7, 5, 5, 5, 5, 7
        assert_eq!(s[0].mean, BigRational::new(34.into(), 6.into()));
    }
}
