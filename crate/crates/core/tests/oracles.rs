//! Library results checked against independent brute-force or numerical
//! oracles.

use std::collections::{HashMap, HashSet};

use genlab::algebra::gens;
use genlab::census::{self, abcd_of, enumerate_norm_ball, NormBound, Sl2};
use genlab::genericity::{self, Region};
use genlab::h2::{self, HPoint};
use genlab::quotients::{self, FiniteGroup, ModMatrix};
use genlab::rng::stream;
use genlab::sieve::{self, Irreducibility};
use genlab::walk::{self, PropertyR, WalkGraph};
use genlab::zariski;
use genlab::{IntMatrix, IntPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn census_counts_match_quadruple_loop() {
    for k in 1..=12i64 {
        let mut naive = 0u64;
        let mut parabolic = 0u64;
        for a in -k..=k {
            for b in -k..=k {
                for c in -k..=k {
                    for d in -k..=k {
                        if a * d - b * c == 1 && a * a + b * b + c * c + d * d <= k * k {
                            naive += 1;
                            parabolic += ((a + d).abs() == 2) as u64;
                        }
                    }
                }
            }
        }
        let rec = census::census(NormBound::k(k as u64)).unwrap();
        assert_eq!((rec.total, rec.parabolic), (naive, parabolic), "k = {k}");
    }
}

#[test]
fn census_is_closed_under_norm_preserving_involutions() {
    for k in [7u64, 31, 100] {
        let ball: HashSet<Sl2> = enumerate_norm_ball(NormBound::k(k)).unwrap().iter().collect();
        for m in &ball {
            assert!(ball.contains(&m.neg()));
            assert!(ball.contains(&m.transpose()));
            assert!(ball.contains(&m.inverse()));
        }
    }
}

#[test]
fn abcd_quadric_identity() {
    for m in enumerate_norm_ball(NormBound::k(25)).unwrap().iter() {
        let q = abcd_of(&m);
        assert_eq!(q.sum_sq(), 2 * m.norm_sq() as i64);
        assert_eq!(q.to_sl2(), Some(m));
    }
}

#[test]
fn parabolic_routes_match_enumeration() {
    for k in 1..=80u64 {
        let b = NormBound::k(k);
        let brute = enumerate_norm_ball(b)
            .unwrap()
            .iter()
            .filter(|m| m.trace().abs() == 2)
            .count() as u64;
        assert_eq!(census::count_parabolic(b).unwrap(), brute, "k = {k}");
        assert_eq!(census::pythagorean_parabolic_count(b).unwrap(), brute, "k = {k}");
    }
    // non-integer bounds
    for (num, den) in [(7u64, 2u64), (101, 10), (1000, 7)] {
        let b = NormBound::rational(num, den).unwrap();
        let brute = enumerate_norm_ball(b)
            .unwrap()
            .iter()
            .filter(|m| m.trace().abs() == 2)
            .count() as u64;
        assert_eq!(census::count_parabolic(b).unwrap(), brute);
    }
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn disk_points(r2: u64) -> u64 {
    // nonzero points with x^2 + y^2 <= r2
    let r = r2.isqrt() as i64;
    (-r..=r)
        .map(|x| 2 * (r2 as i64 - x * x).isqrt() as u64 + 1)
        .sum::<u64>()
        - 1
}

#[test]
fn visible_counts_match_inclusion_exclusion() {
    for t in 1..=200u64 {
        let square: i64 = (1..=t).map(|d| mobius(d) * ((t / d) * (t / d)) as i64).sum();
        assert_eq!(genericity::visible_count(Region::Square, t) as i64, square, "t = {t}");
        assert_eq!(genericity::region_point_count(Region::Square, t), t * t);
    }
    for t in [1u64, 2, 5, 17, 60, 200] {
        let disk: i64 = (1..=t).map(|d| mobius(d) * disk_points(t * t / (d * d)) as i64).sum();
        assert_eq!(genericity::visible_count(Region::Disk, t) as i64, disk, "t = {t}");
        assert_eq!(genericity::region_point_count(Region::Disk, t), disk_points(t * t));
    }
}

#[test]
fn free_group_shells_match_brute_force() {
    let series = genericity::free_group_abelianization_experiment(6).unwrap();
    let steps = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    for len in 1..=6u32 {
        let (mut total, mut hits) = (0u64, 0u64);
        for code in 0..4u64.pow(len) {
            let letters: Vec<usize> = (0..len).map(|i| ((code >> (2 * i)) & 3) as usize).collect();
            let reduced = letters.windows(2).all(|w| steps[w[0]].0 + steps[w[1]].0 != 0 || steps[w[0]].1 + steps[w[1]].1 != 0);
            if !reduced {
                continue;
            }
            total += 1;
            let (x, y) = letters.iter().fold((0, 0), |(x, y), &l| (x + steps[l].0, y + steps[l].1));
            hits += (gcd(x, y) == 1) as u64;
        }
        let p = &series.points[len as usize - 1];
        assert_eq!((p.hits, p.total), (hits, total), "length {len}");
    }
}

#[test]
fn annular_density_parity_split() {
    let series = genericity::free_group_abelianization_experiment(12).unwrap();
    let shells: Vec<f64> = series.shell_ratios().unwrap().iter().map(|r| r.to_f64().unwrap()).collect();
    let even: Vec<f64> = shells.iter().skip(1).step_by(2).copied().collect();
    let odd: Vec<f64> = shells.iter().step_by(2).copied().collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let ad = genericity::annular_density(&series).unwrap();
    assert!((mean(&odd) - mean(&even)).abs() > ad.oscillation);
    for (i, (k, rho)) in ad.rho.iter().enumerate() {
        let (a, b) = (shells[i], shells[i + 1]);
        let r = rho.to_f64().unwrap();
        assert_eq!(*k as usize, i + 2);
        assert!(a.min(b) <= r && r <= a.max(b));
    }
}

fn built_graphs() -> Vec<WalkGraph> {
    let mut gs = vec![
        walk::build_free_monoid_graph(&["x"]).unwrap(),
        walk::build_free_monoid_graph(&["a", "b"]).unwrap(),
        walk::build_free_monoid_graph(&["a", "A", "b", "B"]).unwrap(),
        walk::build_free_group_graph(2).unwrap(),
        walk::build_free_group_graph(3).unwrap(),
    ];
    for (p, q) in [(2, 3), (3, 3), (3, 4), (4, 5)] {
        let (naive, improved) = walk::build_free_product_graph(p, q).unwrap();
        gs.push(naive);
        gs.push(improved);
    }
    gs
}

fn brute_walks(g: &WalkGraph, len: usize) -> u64 {
    fn go(g: &WalkGraph, v: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        g.neighbors(v).iter().map(|&u| go(g, u, left - 1)).sum()
    }
    g.start_states().iter().map(|&s| go(g, s, len - 1)).sum()
}

#[test]
fn transfer_matrix_counts_match_enumeration() {
    for g in built_graphs() {
        assert!(g.is_symmetric());
        for len in 1..=8 {
            assert_eq!(g.walk_count(len), BigInt::from(brute_walks(&g, len)), "{:?} len {len}", g.tokens());
        }
    }
    let fg = walk::build_free_group_graph(2).unwrap();
    for len in 1..=12u32 {
        assert_eq!(fg.walk_count(len as usize), BigInt::from(4 * 3u64.pow(len - 1)));
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

fn spectral_property_r(g: &WalkGraph) -> bool {
    let a: Vec<Vec<f64>> = g
        .adjacency_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let mut mods: Vec<f64> = symmetric_eigenvalues(&a).iter().map(|l| l.abs()).collect();
    mods.sort_by(|x, y| y.partial_cmp(x).unwrap());
    mods.len() == 1 || mods[0] - mods[1] > 1e-8
}

#[test]
fn property_r_agrees_with_spectrum() {
    let mut graphs = built_graphs();
    let cycle = WalkGraph::new(
        (0..4).map(|i| i.to_string()).collect(),
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
        vec![0],
        None,
    )
    .unwrap();
    let two_loops = WalkGraph::new(vec!["x".into(), "y".into()], &[(0, 0), (1, 1)], vec![0, 1], None).unwrap();
    let triangle = WalkGraph::new(vec!["x".into(), "y".into(), "z".into()], &[(0, 1), (1, 2), (2, 0)], vec![0], None).unwrap();
    graphs.extend([cycle.clone(), two_loops.clone(), triangle]);
    for g in &graphs {
        assert!(g.len() <= 12);
        let combinatorial = walk::check_property_r(g) == PropertyR::Holds;
        assert_eq!(combinatorial, spectral_property_r(g), "{:?}", g.tokens());
    }
    assert_eq!(walk::check_property_r(&cycle), PropertyR::FailsBipartite);
    assert_eq!(walk::check_property_r(&two_loops), PropertyR::FailsDisconnected);
}

#[test]
fn free_monoid_steps_are_uniform() {
    let g = walk::build_free_monoid_graph(&["a", "A", "b", "B"]).unwrap();
    let n = 100_000usize;
    let mut counts = [0u64; 4];
    let mut rng = stream(11, 0);
    let w = walk::sample_walk_indices(&g, n + 1, &mut rng);
    for &v in &w[1..] {
        counts[v] += 1;
    }
    let sigma = (n as f64 * 0.25 * 0.75).sqrt();
    for c in counts {
        assert!((c as f64 - n as f64 / 4.0).abs() < 3.0 * sigma, "{counts:?}");
    }
    let fg = walk::build_free_group_graph(2).unwrap();
    for i in 0..2000 {
        let w = walk::sample_walk(&fg, 12, &mut stream(5, i)).unwrap();
        for pair in w.tokens.windows(2) {
            let (x, y) = (pair[0].as_str(), pair[1].as_str());
            assert!(x == y || !x.eq_ignore_ascii_case(y), "forbidden pair {x}{y}");
        }
    }
}

fn sl25_walk_setup() -> (WalkGraph, Vec<ModMatrix>, FiniteGroup) {
    let names = ["L", "U", "L^-1", "U^-1"];
    let g = walk::build_free_monoid_graph(&names).unwrap();
    let labels = names
        .iter()
        .map(|n| ModMatrix::from_int(&quotients::named_generator(n).unwrap(), 5).unwrap())
        .collect();
    (g, labels, FiniteGroup::sl2(5).unwrap())
}

/// Exact law at step `k` and the TV distance to its empirical estimate.
fn monte_carlo_tv(k: usize, samples: usize) -> (Vec<f64>, f64) {
    let (g, labels, group) = sl25_walk_setup();
    let exact: Vec<f64> = quotients::exact_walk_distribution(&g, &labels, &group, k)
        .unwrap()
        .mass
        .iter()
        .map(|p| p.to_f64().unwrap())
        .collect();
    let mut counts = vec![0u64; group.order()];
    for i in 0..samples {
        let w = walk::sample_walk_indices(&g, k, &mut stream(k as u64, i as u64));
        let x = w.iter().fold(ModMatrix::identity(2, 5), |acc, &v| acc.mul(&labels[v]));
        counts[group.index_of(&x).unwrap()] += 1;
    }
    let tv = exact
        .iter()
        .zip(&counts)
        .map(|(p, &c)| (p - c as f64 / samples as f64).abs())
        .sum::<f64>()
        / 2.0;
    (exact, tv)
}

#[test]
fn push_forward_matches_monte_carlo() {
    let samples = 100_000usize;
    for k in [2usize, 3, 4, 5] {
        let (_, tv) = monte_carlo_tv(k, samples);
        assert!(tv < 4.0 / (samples as f64).sqrt(), "k = {k}: tv = {tv}");
    }
}

#[test]
fn monte_carlo_error_sits_at_the_sampling_floor() {
    // once the law spreads over most of SL(2, Z/5) the expected empirical TV,
    // sum of sqrt(2 p (1 - p) / (pi n)) / 2, exceeds 4 / sqrt(n)
    let samples = 100_000usize;
    let (exact, tv) = monte_carlo_tv(8, samples);
    let floor: f64 = exact
        .iter()
        .map(|p| (2.0 * p * (1.0 - p) / (std::f64::consts::PI * samples as f64)).sqrt())
        .sum::<f64>()
        / 2.0;
    assert!(floor > 4.0 / (samples as f64).sqrt());
    assert!((tv - floor).abs() < 0.25 * floor, "tv = {tv}, floor = {floor}");
}

#[test]
fn push_forward_matches_float_convolution() {
    // the i.i.d. step law convolved k times, in floating point
    let (g, labels, group) = sl25_walk_setup();
    let exact = quotients::walk_distributions(&g, &labels, &group, 12).unwrap();
    let mut law = vec![0.0f64; group.order()];
    law[group.identity_index()] = 1.0;
    for (k, d) in exact.iter().enumerate() {
        let mut next = vec![0.0f64; group.order()];
        for (x, &m) in law.iter().enumerate() {
            for l in &labels {
                let y = group.index_of(&group.elements()[x].mul(l)).unwrap();
                next[y] += m / 4.0;
            }
        }
        law = next;
        for (p, q) in d.mass.iter().zip(&law) {
            assert!((p.to_f64().unwrap() - q).abs() < 1e-12, "k = {}", k + 1);
        }
    }
}

#[test]
fn abelian_obstruction_keeps_walk_in_a_coset() {
    // SL(2, Z/3) has derived subgroup Q8 and abelianization Z/3; U maps to a
    // generator, so walks labelled by U alone never equidistribute
    let group = FiniteGroup::sl2(3).unwrap();
    assert_eq!(group.derived_subgroup().order(), 8);
    let u = ModMatrix::from_int(&gens::u(), 3).unwrap();
    let l_inv = ModMatrix::from_int(&gens::l_inv(), 3).unwrap();
    let g = walk::build_free_monoid_graph(&["u", "l"]).unwrap();
    // U and L^-1 lie in the same nontrivial coset
    assert!(quotients::onedim_obstruction(&group, &[u, l_inv]).unwrap());
    let two_thirds = BigRational::new(2.into(), 3.into());
    for d in quotients::walk_distributions(&g, &[u, l_inv], &group, 30).unwrap() {
        assert!(quotients::tv_distance(&d) >= two_thirds);
    }
    let l = ModMatrix::from_int(&gens::l(), 3).unwrap();
    assert!(!quotients::onedim_obstruction(&group, &[u, l]).unwrap());
    let tv = quotients::tv_distance(&quotients::exact_walk_distribution(&g, &[u, l], &group, 60).unwrap());
    assert!(tv.to_f64().unwrap() < 1e-3);
}

#[test]
fn finite_groups_are_closed() {
    for m in [2u32, 3, 4, 5, 6, 7] {
        let g = FiniteGroup::sl2(m).unwrap();
        let els = g.elements();
        let mut rng = stream(m as u64, 0);
        for _ in 0..500 {
            let x = els[rng.gen_range(0..els.len())];
            let y = els[rng.gen_range(0..els.len())];
            assert!(g.contains(&x.mul(&y)));
            assert!(g.contains(&x.inverse().unwrap()));
        }
    }
    let r = quotients::crt_split_check(3, 5).unwrap();
    assert_eq!((r.order_nm, r.order_n, r.order_m), (2880, 24, 120));
    assert!(r.holds());
    let r = quotients::crt_split_check(5, 6).unwrap();
    assert!(r.holds());
}

#[test]
fn sl3_mod5_closure() {
    let e = |i: usize, j: usize| {
        let mut m = IntMatrix::identity(3);
        m.set(i, j, BigInt::one());
        m
    };
    let r = zariski::mod_p_surjective(&[e(0, 1), e(1, 0), e(1, 2), e(2, 1)], 5, 3).unwrap();
    assert_eq!((r.surjective, r.order), (true, 372_000));
}

/// Positive-word lengths by breadth-first search over `{L, U}` (norms never
/// shrink along a positive word, so pruning at the bound is exact).
fn monoid_lengths(max_norm_sq: u64) -> HashMap<Sl2, u64> {
    let mut dist = HashMap::from([(Sl2::IDENTITY, 0u64)]);
    let mut frontier = vec![Sl2::IDENTITY];
    let letters = [Sl2::new(1, 0, 1, 1), Sl2::new(1, 1, 0, 1)];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for m in &frontier {
            for s in &letters {
                let x = m.mul(s);
                if x.norm_sq() <= max_norm_sq && !dist.contains_key(&x) {
                    dist.insert(x, depth);
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[test]
fn lu_length_matches_bfs() {
    let lengths = monoid_lengths(400);
    let mut checked = 0;
    for m in enumerate_norm_ball(NormBound::k(20)).unwrap().iter() {
        if m.a >= 0 && m.b >= 0 && m.c >= 0 && m.d >= 0 {
            let lu = walk::word_length_lu(&m.to_matrix()).unwrap();
            assert_eq!(Some(&lu.length), lengths.get(&m), "{m:?}");
            assert_eq!(lu.reconstruct(), m.to_matrix());
            checked += 1;
        }
    }
    assert_eq!(checked, lengths.len());
}

#[test]
fn cf_sums_by_euclid() {
    fn s(p: u64, q: u64) -> u64 {
        if p == 0 {
            0
        } else {
            q / p + s(q % p, p)
        }
    }
    for q in 2..200u64 {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            assert_eq!(walk::cf_sum(p, q), s(p, q), "{p}/{q}");
        }
    }
    let stats = walk::cf_sum_statistics(&[7]).unwrap();
    assert_eq!(stats[0].mean, BigRational::new(34.into(), 6.into()));
}

fn eval_mod(f: &IntPolynomial, x: i64, p: i64) -> i64 {
    f.coeffs()
        .iter()
        .rev()
        .fold(0i64, |acc, c| (acc * x + c.mod_floor(&BigInt::from(p)).to_i64().unwrap()) % p)
}

#[test]
fn linear_factor_counts_match_root_counts() {
    let polys = [
        IntPolynomial::from_i64(&[-1, -1, 0, 1]),
        IntPolynomial::from_i64(&[1, -1, -1, -1, 1]),
        IntPolynomial::from_i64(&[1, 0, 0, 0, 1]),
        IntPolynomial::from_i64(&[-2, 0, 0, 0, 0, 1]),
        IntPolynomial::from_i64(&[6, -5, 0, 0, 1, 0, 1]),
    ];
    for f in &polys {
        for p in sieve::primes_up_to(60) {
            let pat = sieve::factor_pattern_mod_p(f, p).unwrap();
            if !pat.squarefree {
                continue;
            }
            assert_eq!(pat.degrees.iter().sum::<usize>(), f.degree().unwrap());
            let roots = (0..p as i64).filter(|&x| eval_mod(f, x, p as i64) == 0).count();
            assert_eq!(pat.degrees.iter().filter(|&&d| d == 1).count(), roots, "{f} mod {p}");
        }
    }
}

#[test]
fn casson_quartic_brute_force() {
    // x^4 - x^3 - x^2 - x + 1
    let f = IntPolynomial::from_i64(&[1, -1, -1, -1, 1]);
    for r in [-1i64, 1] {
        assert_ne!(f.eval(&BigInt::from(r)), BigInt::from(0));
    }
    // (x^2 + a x + b)(x^2 + c x + d) with b d = 1
    for (b, d) in [(1i64, 1i64), (-1, -1)] {
        for a in -50i64..=50 {
            let c = -1 - a;
            let x2 = b + d + a * c;
            let x1 = a * d + b * c;
            assert!(!(x2 == -1 && x1 == -1), "factorization with a = {a}");
        }
    }
    // no root of unity of order m with φ(m) <= 4 is a root
    for m in [1u32, 2, 3, 4, 5, 6, 8, 10, 12] {
        for j in (0..m).filter(|j| j.gcd(&m) == 1) {
            let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (i, c) in f.coeffs().iter().enumerate() {
                let c = c.to_f64().unwrap();
                re += c * (th * i as f64).cos();
                im += c * (th * i as f64).sin();
            }
            assert!(re.hypot(im) > 1e-6, "ζ_{m}^{j} is a root");
        }
    }
    assert!(!sieve::is_cyclotomic_product(&f).unwrap());
}

#[test]
fn cyclotomic_companions_are_periodic() {
    let phis = sieve::cyclotomic_polynomials(4);
    let entries = |m: &IntMatrix| m.entries().iter().map(|v| v.to_i64().unwrap().abs()).max().unwrap();
    for (i, (mi, fi)) in phis.iter().enumerate() {
        for (mj, fj) in phis.iter().skip(i + 1) {
            let f = fi.mul(fj);
            if f.degree().unwrap() > 4 {
                continue;
            }
            assert!(sieve::is_cyclotomic_product(&f).unwrap());
            let c = IntMatrix::companion(&f).unwrap();
            let period = mi.lcm(mj);
            assert!(c.pow(period).is_identity());
            for e in 1..=2 * 12 {
                assert!(entries(&c.pow(e)) <= 4);
            }
        }
    }
    let c = IntMatrix::companion(&IntPolynomial::from_i64(&[1, -3, 1])).unwrap();
    assert!(entries(&c.pow(24)) > 1_000_000);
}

#[test]
fn reducibility_tracks_trace_for_random_words() {
    let letters = [gens::l(), gens::u(), gens::l_inv(), gens::u_inv(), gens::s()];
    let mut rng = stream(99, 0);
    for _ in 0..500 {
        let len = rng.gen_range(0..=20);
        let m = (0..len).fold(IntMatrix::identity(2), |acc, _| &acc * &letters[rng.gen_range(0..letters.len())]);
        let f = m.char_poly().unwrap();
        let reducible = matches!(sieve::certify_irreducible(&f, 200).unwrap(), Irreducibility::Reducible { .. });
        let t = m.trace();
        assert_eq!(reducible, t == BigInt::from(2) || t == BigInt::from(-2), "{m}");
    }
}

#[test]
fn radial_law_passes_ks() {
    let r_max = 3.0f64;
    let n = 100_000;
    let mut rng = stream(2024, 0);
    let mut rs: Vec<f64> = (0..n)
        .map(|_| h2::sample_disk_point(r_max, &mut rng).unwrap().distance(&HPoint::I))
        .collect();
    rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cdf = |r: f64| (r.cosh() - 1.0) / (r_max.cosh() - 1.0);
    let ks = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let f = cdf(r);
            (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS = {ks}");
    assert!(rs.last().unwrap() <= &(r_max + 1e-9));
}

#[test]
fn gauss_reduction_terminates_and_round_trips() {
    let mut rng = stream(7, 3);
    let mut max_steps = 0;
    for i in 0..1_000_000 {
        let x = rng.gen_range(-50.0..50.0);
        let y = 10f64.powf(rng.gen_range(-6.0..2.0));
        let z = HPoint::new(x, y).unwrap();
        let r = h2::gauss_reduce(z).unwrap();
        max_steps = max_steps.max(r.steps);
        assert!(r.reduced_point.in_fundamental_domain());
        if i % 100 == 0 {
            let m = Sl2::from_matrix(&r.element).unwrap();
            let back = r.reduced_point.apply(&m);
            assert!((back.x - z.x).abs() < 1e-9 * (1.0 + z.x.abs()) && (back.y - z.y).abs() < 1e-9, "{z:?}");
        }
    }
    assert!(max_steps <= 200, "{max_steps}");
}

#[test]
fn reduction_is_stable_away_from_the_boundary() {
    let mut rng = stream(8, 0);
    let mut boundary = 0;
    for _ in 0..20_000 {
        let z = h2::sample_disk_point(6.0, &mut rng).unwrap();
        let a = h2::gauss_reduce(z).unwrap();
        let b = h2::gauss_reduce(HPoint { x: z.x + 1e-12, y: z.y }).unwrap();
        if a.element != b.element {
            assert!(a.reduced_point.near_domain_boundary() || b.reduced_point.near_domain_boundary());
            boundary += 1;
        }
    }
    assert!(boundary < 10);
}

#[test]
fn norm_is_twice_cosh_displacement() {
    let ball: Vec<Sl2> = enumerate_norm_ball(NormBound::k(40)).unwrap().iter().collect();
    let mut rng = stream(1, 1);
    for _ in 0..1000 {
        let m = ball[rng.gen_range(0..ball.len())];
        let d = HPoint::I.distance(&HPoint::I.apply(&m));
        assert!((m.norm_sq() as f64 - 2.0 * d.cosh()).abs() < 1e-9 * m.norm_sq() as f64);
    }
}

#[test]
fn log_exp_and_conjugation() {
    let letters = [gens::l(), gens::u(), gens::l_inv(), gens::u_inv()];
    let mut rng = stream(3, 3);
    let unipotents = [gens::u(), gens::l().pow(3), gens::u_inv().pow(2)];
    for _ in 0..200 {
        let len = rng.gen_range(0..=10);
        let g = (0..len).fold(IntMatrix::identity(2), |acc, _| &acc * &letters[rng.gen_range(0..4)]);
        let gi = g.inverse_unimodular().unwrap();
        for u in &unipotents {
            let conj = &(&g * u) * &gi;
            let lhs = zariski::nilpotent_log(&conj).unwrap();
            let x = zariski::nilpotent_log(u).unwrap();
            let rhs = genlab::RationalMatrix::from(&g).mul(&x).mul(&genlab::RationalMatrix::from(&gi));
            assert_eq!(lhs, rhs);
            assert_eq!(zariski::nilpotent_exp(&lhs).unwrap().to_int().unwrap(), conj);
        }
    }
    for p in [5, 7, 11, 13] {
        assert!(zariski::mod_p_surjective(&[gens::l(), gens::u()], p, 2).unwrap().surjective);
    }
}
