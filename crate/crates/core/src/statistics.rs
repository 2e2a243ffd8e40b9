//! Map observables, exact and limiting laws, and goodness-of-fit tools.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::factorial::ln_binomial;

use crate::counting::{count_forests, count_trees, ln_count_forests, ratio_to_f64};
use crate::stackmap::{bfs, Family, StackMap};
use crate::tree::{Arity, OrderedTree};

/// Empirical distribution of an integer-valued observable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalPmf {
    counts: BTreeMap<i64, u64>,
    total: u64,
}

impl EmpiricalPmf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: i64) {
        self.add_n(value, 1);
    }

    pub fn add_n(&mut self, value: i64, n: u64) {
        *self.counts.entry(value).or_default() += n;
        self.total += n;
    }

    pub fn merge(&mut self, other: &EmpiricalPmf) {
        for (&v, &c) in &other.counts {
            self.add_n(v, c);
        }
    }

    pub fn count(&self, value: i64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, value: i64) -> f64 {
        self.count(value) as f64 / self.total as f64
    }

    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    pub fn mean(&self) -> f64 {
        self.counts
            .iter()
            .map(|(&v, &c)| v as f64 * c as f64)
            .sum::<f64>()
            / self.total as f64
    }
}

impl FromIterator<i64> for EmpiricalPmf {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut p = EmpiricalPmf::new();
        for v in iter {
            p.add(v);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson test of observed category counts against probabilities.
/// Neighboring categories are pooled until every expected count is at
/// least 5. Observations in a zero-probability category give `p = 0`.
pub fn chi_square_categories(observed: &[u64], probs: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 && o > 0 {
            return ChiSquare {
                statistic: f64::INFINITY,
                dof: 0,
                p_value: 0.0,
                bins: 0,
            };
        }
        acc.0 += o as f64;
        acc.1 += p * nf;
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e) * (o - e) / e } else { 0.0 })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let d = ChiSquared::new(dof as f64).expect("positive dof");
        1.0 - d.cdf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        bins: bins.len(),
    }
}

/// Test of an integer sample against `pmf` on `lo..hi`; everything at or
/// above `hi` forms a tail bin with the remaining mass.
pub fn chi_square_pmf(
    sample: &EmpiricalPmf,
    pmf: impl Fn(i64) -> f64,
    lo: i64,
    hi: i64,
) -> ChiSquare {
    let mut observed = Vec::new();
    let mut probs = Vec::new();
    let below: u64 = sample.counts.range(..lo).map(|(_, &c)| c).sum();
    observed.push(below);
    probs.push(0.0);
    let mut mass = 0.0;
    for k in lo..hi {
        let p = pmf(k);
        mass += p;
        observed.push(sample.count(k));
        probs.push(p);
    }
    observed.push(sample.counts.range(hi..).map(|(_, &c)| c).sum());
    probs.push((1.0 - mass).max(0.0));
    chi_square_categories(&observed, &probs)
}

/// Homogeneity test of two samples over the union of their supports.
pub fn chi_square_two_sample(a: &EmpiricalPmf, b: &EmpiricalPmf) -> ChiSquare {
    let keys: Vec<i64> = a
        .counts
        .keys()
        .chain(b.counts.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let (na, nb) = (a.total as f64, b.total as f64);
    let n = na + nb;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for k in keys {
        acc.0 += a.count(k) as f64;
        acc.1 += b.count(k) as f64;
        let pooled = acc.0 + acc.1;
        if pooled * na.min(nb) / n >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let mut statistic = 0.0;
    for &(x, y) in &bins {
        let pooled = x + y;
        let (ea, eb) = (pooled * na / n, pooled * nb / n);
        statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    }
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64)
            .expect("positive dof")
            .cdf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        bins: bins.len(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub sem: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    if n == 0 {
        return Summary::default();
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let sd = var.sqrt();
    Summary {
        n,
        mean,
        sd,
        sem: sd / (n as f64).sqrt(),
    }
}

/// Cumulative vertex counts by distance to the root vertex:
/// `(t, #{u : d(E0, u) ≤ t})` for `t = 0..=radius`.
pub fn profile(m: &StackMap) -> Vec<(u32, usize)> {
    let d = bfs(m, m.root_vertex());
    let r = d.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0usize; r as usize + 1];
    for &x in &d {
        hist[x as usize] += 1;
    }
    let mut acc = 0;
    hist.iter()
        .enumerate()
        .map(|(t, &c)| {
            acc += c;
            (t as u32, acc)
        })
        .collect()
}

pub fn radius(m: &StackMap) -> u32 {
    bfs(m, m.root_vertex()).into_iter().max().unwrap_or(0)
}

/// `Γ_△ √(3n/2)` for triangulations, `(1/5) √(2n)` for quadrangulations.
pub fn default_distance_scale(family: Family, n: usize) -> f64 {
    match family {
        Family::Triangulation => 2.0 / 11.0 * (1.5 * n as f64).sqrt(),
        Family::Quadrangulation => 0.2 * (2.0 * n as f64).sqrt(),
    }
}

/// `D[a][b] = d(u(⌊n s_a⌋), u(⌊n s_b⌋)) / scale`, where `u(i)` is the
/// internal vertex of lexicographic rank `i` (clamped to `n - 1`).
pub fn normalized_distance_matrix(m: &StackMap, grid: &[f64], scale: f64) -> Vec<Vec<f64>> {
    let lex = m.internal_vertices_lex();
    let n = lex.len();
    if n == 0 {
        return vec![vec![0.0; grid.len()]; grid.len()];
    }
    let pick = |s: f64| lex[((n as f64 * s).floor() as usize).min(n - 1)];
    let verts: Vec<u32> = grid.iter().map(|&s| pick(s)).collect();
    let mut out = vec![vec![0.0; grid.len()]; grid.len()];
    for (a, &u) in verts.iter().enumerate() {
        let d = bfs(m, u);
        for (b, &v) in verts.iter().enumerate() {
            out[a][b] = d[v as usize] as f64 / scale;
        }
    }
    out
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn binom_int(n: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        binomial(big(n), big(k))
    }
}

/// `P(X = k+3) = k/(k+3) · C(2k+2, k) · 2^{k+3} / 3^{2k+3}`.
pub fn pmf_limit_deg_first_exact(k: u64) -> BigRational {
    ratio(
        big(k) * binom_int(2 * k + 2, k) * BigInt::from(2).pow((k + 3) as u32),
        big(k + 3) * BigInt::from(3).pow((2 * k + 3) as u32),
    )
}

pub fn pmf_limit_deg_first(k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    (kf.ln() - (kf + 3.0).ln() + ln_binomial(2 * k + 2, k) + (kf + 3.0) * 2f64.ln()
        - (2.0 * kf + 3.0) * 3f64.ln())
    .exp()
}

/// `P(Y = k+3) = 1/(k+3) · C(2k+2, k) · 2^{k+3} / 3^{2k+2}`.
pub fn pmf_limit_deg_uniform_exact(k: u64) -> BigRational {
    ratio(
        binom_int(2 * k + 2, k) * BigInt::from(2).pow((k + 3) as u32),
        big(k + 3) * BigInt::from(3).pow((2 * k + 2) as u32),
    )
}

pub fn pmf_limit_deg_uniform(k: u64) -> f64 {
    let kf = k as f64;
    (-(kf + 3.0).ln() + ln_binomial(2 * k + 2, k) + (kf + 3.0) * 2f64.ln()
        - (2.0 * kf + 2.0) * 3f64.ln())
    .exp()
}

/// Law of `deg(u(1)) - 3` under the uniform law on triangulations with
/// `2n` faces (`n - 1` internal vertices), for `0 ≤ k < n - 1`.
pub fn pmf_finite_deg_first_exact(n: u64, k: u64) -> BigRational {
    if n < 2 || k + 1 >= n {
        return BigRational::zero();
    }
    let num = count_forests(Arity::Binary, 3, 2 * k + 3)
        * count_forests(Arity::Ternary, k, 3 * n - 2 * k - 6);
    let den = count_trees(Arity::Ternary, n - 1);
    ratio(BigInt::from(num), BigInt::from(den))
}

pub fn pmf_finite_deg_first(n: u64, k: u64) -> f64 {
    if n < 2 || k + 1 >= n {
        return 0.0;
    }
    (ln_count_forests(Arity::Binary, 3, 2 * k + 3)
        + ln_count_forests(Arity::Ternary, k, 3 * n - 2 * k - 6)
        - ln_count_forests(Arity::Ternary, 1, 3 * n - 2))
    .exp()
}

/// `P(K = 3k+1) = 2^{2k+1} / (3^{3k} (3k+1)) · C(3k+1, k)` for `k ≥ 1`:
/// node count of the fringe subtree of a uniform internal node.
pub fn pmf_subtree_size_exact(k: u64) -> BigRational {
    if k == 0 {
        return BigRational::zero();
    }
    ratio(
        BigInt::from(2).pow((2 * k + 1) as u32) * binom_int(3 * k + 1, k),
        BigInt::from(3).pow((3 * k) as u32) * big(3 * k + 1),
    )
}

pub fn pmf_subtree_size(k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    let ln = (2.0 * kf + 1.0) * 2f64.ln() - 3.0 * kf * 3f64.ln() - (3.0 * kf + 1.0).ln()
        + ln_binomial(3 * k + 1, k);
    ln.exp()
}

/// Total mass of the subtree-size law: terms up to `k_max` by their ratio
/// recurrence plus the `2 k p_k` tail of a `k^{-3/2}` sequence.
pub fn subtree_size_total_mass(k_max: u64) -> f64 {
    let mut p = pmf_subtree_size(1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 1..=k_max {
        let y = p - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let kf = k as f64;
        p *= 4.0 / 27.0 * (3.0 * kf + 1.0) * (3.0 * kf + 2.0) * (3.0 * kf + 3.0)
            / ((kf + 1.0) * (2.0 * kf + 2.0) * (2.0 * kf + 3.0));
    }
    // p now holds p_{k_max+1}; Σ_{k>K} c k^{-3/2} ≈ 2 c (K+1/2)^{-1/2}
    let k1 = (k_max + 1) as f64;
    sum + 2.0 * p * k1 * (k1 - 0.5).sqrt() / k1.sqrt()
}

/// Generalized binomial `a (a-1) ... (a-b+1) / b!` for rational `a`.
fn gen_binom(a: &BigRational, b: u64) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..b {
        num *= a - BigRational::from_integer(big(i));
    }
    let fact = (1..=b).fold(BigInt::one(), |acc, i| acc * big(i));
    num / BigRational::from_integer(fact)
}

/// The closed-form urn expression for `P(deg v(j) = k+3)` as printed,
/// `Γ(n-j+1)Γ(j+½)/Γ(n+½) · C(k+2,k) · Σ_i (-1)^i C(k,i) C(n-i/2-2, n-j)`,
/// in exact arithmetic. Only meaningful for `n > j ≥ 1`.
pub fn pmf_urn_exact(n: u64, j: u64, k: u64) -> BigRational {
    if j == 0 || n <= j || k > n - j {
        return BigRational::zero();
    }
    // Γ(n-j+1) Γ(j+½) / Γ(n+½) = (n-j)! / ∏_{i=j}^{n-1} (i+½)
    let mut pre = BigRational::from_integer((1..=n - j).fold(BigInt::one(), |a, i| a * big(i)));
    for i in j..n {
        pre /= ratio(big(2 * i + 1), big(2));
    }
    let mut sum = BigRational::zero();
    for i in 0..=k {
        let a = BigRational::from_integer(big(n))
            - ratio(big(i), big(2))
            - BigRational::from_integer(big(2));
        let term = BigRational::from_integer(binom_int(k, i)) * gen_binom(&a, n - j);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    pre * BigRational::from_integer(binom_int(k + 2, k)) * sum
}

pub fn pmf_urn(n: u64, j: u64, k: u64) -> f64 {
    ratio_to_f64(&pmf_urn_exact(n, j, k))
}

/// Exact law of `deg v(j) - 3` in `M_n` under the growth law: `v(j)` is
/// born in `M_{j+1}` with degree 3, and at step `M_m → M_{m+1}` its degree
/// `D` goes up by one with probability `D / (2m - 1)`. Index = `k`.
pub fn urn_chain_law(n: u64, j: u64) -> Vec<BigRational> {
    assert!(j >= 1 && n > j, "v(j) exists in M_n only for n > j");
    let mut law = vec![BigRational::one()];
    for m in (j + 1)..n {
        let faces = big(2 * m - 1);
        let mut next = vec![BigRational::zero(); law.len() + 1];
        for (k, p) in law.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let up = ratio(big(k as u64 + 3), faces.clone());
            next[k + 1] += p * &up;
            next[k] += p * (BigRational::one() - up);
        }
        law = next;
    }
    law
}

/// The same law by enumerating all `N_{n-1}` growth histories.
pub fn urn_exhaustive_law(n: u64, j: u64) -> Vec<BigRational> {
    assert!(j >= 1 && n > j);
    let v = 2 + j as u32;
    let mut counts: Vec<u64> = Vec::new();
    let mut total = 0u64;
    crate::stackmap::for_each_growth_history(Family::Triangulation, (n - 1) as usize, |m, _| {
        let k = m.degree(v) - 3;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
        total += 1;
    });
    counts
        .into_iter()
        .map(|c| ratio(big(c), big(total)))
        .collect()
}

/// Shift `s` such that the printed formula at `(n, j)`, over
/// `0 ≤ k ≤ n-j`, is the exact law of `deg v(j)` in `M_{n+s}`.
pub fn detect_urn_index_shift(n: u64, j: u64) -> Option<i64> {
    let formula: Vec<BigRational> = (0..=n - j).map(|k| pmf_urn_exact(n, j, k)).collect();
    let trim = |v: &[BigRational]| -> Vec<BigRational> {
        let mut v = v.to_vec();
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    };
    let target = trim(&formula);
    (-2i64..=2).find(|&s| {
        let m = n as i64 + s;
        m > j as i64 && trim(&urn_chain_law(m as u64, j)) == target
    })
}

/// `E(D^n_j) = 3 ∏_{k=j+1}^{n-1} 2k/(2k-1)`: mean degree in `M_n` of the
/// `j`-th inserted vertex. Equals 3 when `n ≤ j + 1`.
pub fn expected_degree_growth_exact(n: u64, j: u64) -> BigRational {
    let mut e = BigRational::from_integer(big(3));
    for k in (j + 1)..n {
        e *= ratio(big(2 * k), big(2 * k - 1));
    }
    e
}

pub fn expected_degree_growth(n: u64, j: u64) -> f64 {
    let mut ln = 3f64.ln();
    for k in (j + 1)..n {
        let kf = k as f64;
        ln += (2.0 * kf).ln() - (2.0 * kf - 1.0).ln();
    }
    ln.exp()
}

/// Mean of the exact law returned by [`urn_chain_law`] or
/// [`urn_exhaustive_law`], as a degree.
pub fn law_mean_degree(law: &[BigRational]) -> BigRational {
    law.iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (k, p)| {
            acc + p * BigRational::from_integer(big(k as u64 + 3))
        })
}

/// Largest `|d_{T°}(i,j) - (H(i) + H(j) - 2 min_{[i,j]} H)|` over all pairs
/// of internal nodes, where `H` is the height process. Tree distances come
/// from a breadth-first search on the internal-node tree.
pub fn height_process_max_deviation(t: &OrderedTree) -> u32 {
    let internal: Vec<u32> = t.internal_ids().collect();
    let n = internal.len();
    let mut rank = vec![u32::MAX; t.len()];
    for (r, &id) in internal.iter().enumerate() {
        rank[id as usize] = r as u32;
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (r, &id) in internal.iter().enumerate() {
        if let Some(p) = t.parent(id) {
            let pr = rank[p as usize];
            adj[r].push(pr);
            adj[pr as usize].push(r as u32);
        }
    }
    let h: Vec<i64> = internal.iter().map(|&id| t.depth(id) as i64).collect();
    let mut worst = 0i64;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[i] = 0;
        queue.push_back(i as u32);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v as usize] {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        let mut min = h[i];
        for j in i..n {
            min = min.min(h[j]);
            let dev = (dist[j] as i64 - (h[i] + h[j] - 2 * min)).abs();
            worst = worst.max(dev);
        }
    }
    worst as u32
}

/// Mean depth of the internal nodes of an increasing tree with `n`
/// internal nodes. Node `i+1` sits at the mean leaf depth after `i` steps,
/// and splitting a leaf of depth `h` trades it for `d` leaves of depth `h+1`.
pub fn exact_mean_internal_depth(arity: Arity, n: u64) -> f64 {
    let d = arity.degree() as f64;
    let mut leaf_depth_sum = 0.0;
    let mut total = 0.0;
    for i in 0..n {
        let leaves = (d - 1.0) * i as f64 + 1.0;
        let mean_leaf = leaf_depth_sum / leaves;
        total += mean_leaf;
        leaf_depth_sum += (d - 1.0) * mean_leaf + d;
    }
    total / n as f64
}

/// `6n/(n+2)` with `2n` faces, i.e. `n = (number of internal vertices) + 1`.
pub fn triangulation_mean_degree(m: &StackMap) -> BigRational {
    let n = m.n_internal() as u64 + 1;
    ratio(big(6 * n), big(n + 2))
}

pub fn observed_mean_degree(m: &StackMap) -> BigRational {
    ratio(big(2 * m.n_edges() as u64), big(m.n_vertices() as u64))
}

/// Rational equality helper for exhaustive histograms.
pub fn histogram_law(counts: &BTreeMap<u64, u64>) -> BTreeMap<u64, BigRational> {
    let total: u64 = counts.values().sum();
    counts
        .iter()
        .map(|(&k, &c)| (k, ratio(big(c), big(total))))
        .collect()
}

pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

pub fn to_biguint(x: u64) -> BigUint {
    BigUint::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stackmap::{map_from_history, map_from_tree, sample_growth_map};
    use crate::tree::{enumerate_trees, sample_uniform_tree};
    use crate::word::w;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn profiles_and_radius() {
        let theta = StackMap::initial(Family::Triangulation);
        assert_eq!(profile(&theta), vec![(0, 1), (1, 3)]);
        assert_eq!(radius(&theta), 1);
        let m = theta.grow(&w("")).unwrap();
        assert_eq!(profile(&m), vec![(0, 1), (1, 4)]);
        assert_eq!(radius(&m), 1);
        let m = map_from_history(Family::Triangulation, &[w(""), w("1"), w("11")]).unwrap();
        assert_eq!(radius(&m), 2);
        assert_eq!(profile(&m).last().unwrap().1, m.n_vertices());
    }

    #[test]
    fn distance_matrix_shape() {
        let m = sample_growth_map(Family::Triangulation, 300, &mut stream(3));
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let s = default_distance_scale(Family::Triangulation, 300);
        let d = normalized_distance_matrix(&m, &grid, s);
        for (a, row) in d.iter().enumerate() {
            assert_eq!(row[a], 0.0);
            for (b, &x) in row.iter().enumerate() {
                assert_eq!(x, d[b][a]);
            }
        }
    }

    #[test]
    fn limit_laws_spot_values() {
        assert_eq!(pmf_limit_deg_first_exact(0), r(0, 1));
        assert_eq!(pmf_limit_deg_first_exact(1), r(16, 243));
        assert_eq!(pmf_limit_deg_uniform_exact(0), r(8, 27));
        for k in [0, 1, 5, 30] {
            let a = ratio_to_f64(&pmf_limit_deg_first_exact(k));
            let b = ratio_to_f64(&pmf_limit_deg_uniform_exact(k));
            assert!((pmf_limit_deg_first(k) - a).abs() < 1e-13);
            assert!((pmf_limit_deg_uniform(k) - b).abs() < 1e-13);
        }
        assert_eq!(pmf_subtree_size_exact(1), r(8, 27));
        assert!((pmf_subtree_size(1) - 8.0 / 27.0).abs() < 1e-14);
        assert!((pmf_subtree_size(40) - ratio_to_f64(&pmf_subtree_size_exact(40))).abs() < 1e-12);
    }

    #[test]
    fn limit_laws_sum_to_one() {
        let s1: f64 = (0..2000).map(pmf_limit_deg_first).sum();
        let s2: f64 = (0..2000).map(pmf_limit_deg_uniform).sum();
        assert!((s1 - 1.0).abs() < 1e-9, "{s1}");
        assert!((s2 - 1.0).abs() < 1e-9, "{s2}");
        let s3 = subtree_size_total_mass(10_000_000);
        assert!((s3 - 1.0).abs() < 1e-9, "{s3}");
    }

    #[test]
    fn finite_degree_law_sums_to_one_and_matches_enumeration() {
        for n in 4..=10u64 {
            let s: BigRational = (0..n - 1).map(|k| pmf_finite_deg_first_exact(n, k)).sum();
            assert_eq!(s, BigRational::one(), "n={n}");
        }
        for n in 3..=7u64 {
            let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
            for t in enumerate_trees(Arity::Ternary, (n - 1) as usize).unwrap() {
                let m = map_from_tree(&t, Family::Triangulation).unwrap();
                *counts.entry(m.degree(3) as u64 - 3).or_default() += 1;
            }
            let law = histogram_law(&counts);
            for k in 0..n - 1 {
                let want = law.get(&k).cloned().unwrap_or_else(BigRational::zero);
                assert_eq!(pmf_finite_deg_first_exact(n, k), want, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn finite_degree_law_f64_agrees() {
        for (n, k) in [(10, 0), (10, 3), (40, 7), (200, 20)] {
            let a = ratio_to_f64(&pmf_finite_deg_first_exact(n, k));
            let b = pmf_finite_deg_first(n, k);
            assert!(
                (a - b).abs() <= 1e-12 * a.max(1e-300) + 1e-300,
                "n={n} k={k} {a} {b}"
            );
        }
    }

    #[test]
    fn finite_degree_law_approaches_limit() {
        for k in 1..6 {
            let a = pmf_finite_deg_first(10_000, k);
            let b = pmf_limit_deg_first(k);
            assert!((a - b).abs() / b < 0.01, "k={k} {a} {b}");
        }
    }

    #[test]
    fn urn_chain_matches_histories() {
        for n in 3..=6u64 {
            for j in 1..n {
                assert_eq!(urn_chain_law(n, j), urn_exhaustive_law(n, j), "n={n} j={j}");
                assert_eq!(
                    law_mean_degree(&urn_chain_law(n, j)),
                    expected_degree_growth_exact(n, j)
                );
            }
        }
        assert_eq!(expected_degree_growth_exact(3, 1), r(4, 1));
        assert_eq!(expected_degree_growth_exact(5, 5), r(3, 1));
    }

    #[test]
    fn urn_formula_needs_k_zero_and_a_shift() {
        let s: BigRational = (0..=3).map(|k| pmf_urn_exact(5, 2, k)).sum();
        assert_eq!(s, BigRational::one());
        let s1: BigRational = (1..=3).map(|k| pmf_urn_exact(5, 2, k)).sum();
        assert_ne!(s1, BigRational::one());
        for (n, j) in [(4, 2), (5, 2), (6, 2), (6, 3), (5, 1)] {
            assert_eq!(detect_urn_index_shift(n, j), Some(1), "n={n} j={j}");
        }
    }

    #[test]
    fn urn_last_step_is_bernoulli() {
        // v(n-1) is born in M_n; one more step adds an edge w.p. 3/(2n-1)
        for n in 3..8u64 {
            let law = urn_chain_law(n + 1, n - 1);
            assert_eq!(law[1], r(3, 2 * n as i64 - 1));
        }
    }

    #[test]
    fn height_process_identity() {
        let mut rng = stream(10);
        for _ in 0..3 {
            let t = sample_uniform_tree(Arity::Ternary, 500, &mut rng);
            assert!(height_process_max_deviation(&t) <= 2);
        }
    }

    #[test]
    fn exact_depth_small_cases() {
        assert_eq!(exact_mean_internal_depth(Arity::Ternary, 1), 0.0);
        assert_eq!(exact_mean_internal_depth(Arity::Ternary, 2), 0.5);
        // before the third step: two leaves at depth 1, three at depth 2
        assert!(
            (exact_mean_internal_depth(Arity::Ternary, 3) - (0.0 + 1.0 + 8.0 / 5.0) / 3.0).abs()
                < 1e-15
        );
        assert!(
            (exact_mean_internal_depth(Arity::Binary, 3) - (0.0 + 1.0 + 5.0 / 3.0) / 3.0).abs()
                < 1e-15
        );
    }

    #[test]
    fn two_sample_chi_square() {
        let a: EmpiricalPmf = (0..3000).map(|i| i % 3).collect();
        let b: EmpiricalPmf = (0..6000).map(|i| i % 3).collect();
        assert!(chi_square_two_sample(&a, &b).p_value > 0.99);
        let c: EmpiricalPmf = (0..6000).map(|i| (i % 4).min(2)).collect();
        assert!(chi_square_two_sample(&a, &c).p_value < 1e-6);
    }

    #[test]
    fn mean_degree_identity() {
        let m = sample_growth_map(Family::Triangulation, 100, &mut stream(0));
        assert_eq!(observed_mean_degree(&m), triangulation_mean_degree(&m));
    }

    #[test]
    fn chi_square_behaves() {
        let probs = [0.25, 0.25, 0.5];
        let good = chi_square_categories(&[250, 250, 500], &probs);
        assert!(good.p_value > 0.99);
        let bad = chi_square_categories(&[400, 100, 500], &probs);
        assert!(bad.p_value < 1e-6);
        let impossible = chi_square_categories(&[1, 10, 10], &[0.0, 0.5, 0.5]);
        assert_eq!(impossible.p_value, 0.0);
    }
}
