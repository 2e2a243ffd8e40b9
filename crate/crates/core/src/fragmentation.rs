//! Dirichlet fragmentation of `[0,1)` with size-biased marks.
//!
//! Each step draws a uniform mark, finds the leaf interval holding it and
//! splits that interval in Dirichlet proportions. With `α = 1/(d-1)` the
//! resulting shape has the same law as the uniform-leaf growth of a tree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Serialize, Serializer};
use statrs::function::gamma::ln_gamma;

use crate::counting::histories_total;
use crate::tree::{Arity, OrderedTree, TreeError};
use crate::word::Word;

/// Leaf intervals must cover `[0,1)` up to this much rounding.
pub const PARTITION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FragNode {
    pub word: Word,
    pub lo: f64,
    pub hi: f64,
    pub split: Option<Vec<f64>>,
    children: Vec<u32>,
}

impl FragNode {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FragmentationTree {
    arity: Arity,
    nodes: Vec<FragNode>,
    n_internal: usize,
}

/// Ternary: three Gamma(1/2) variables, each `N²/2`, normalized.
/// Binary: `(U, 1-U)`.
pub fn sample_split<R: Rng + ?Sized>(arity: Arity, rng: &mut R) -> Vec<f64> {
    match arity {
        Arity::Binary => {
            let u: f64 = rng.random();
            vec![u, 1.0 - u]
        }
        Arity::Ternary => {
            let g: Vec<f64> = (0..3)
                .map(|_| {
                    let z: f64 = rng.sample(StandardNormal);
                    z * z / 2.0
                })
                .collect();
            let s: f64 = g.iter().sum();
            g.into_iter().map(|x| x / s).collect()
        }
    }
}

impl FragmentationTree {
    pub fn new(arity: Arity) -> Self {
        FragmentationTree {
            arity,
            nodes: vec![FragNode {
                word: Word::root(),
                lo: 0.0,
                hi: 1.0,
                split: None,
                children: Vec::new(),
            }],
            n_internal: 0,
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn nodes(&self) -> &[FragNode] {
        &self.nodes
    }

    pub fn n_internal(&self) -> usize {
        self.n_internal
    }

    pub fn leaves(&self) -> impl Iterator<Item = &FragNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    /// Index of the leaf whose interval holds `x`; a mark on a boundary
    /// belongs to the interval on its right.
    pub fn locate(&self, x: f64) -> usize {
        let mut id = 0usize;
        while !self.nodes[id].is_leaf() {
            let ch = &self.nodes[id].children;
            id = ch
                .iter()
                .rev()
                .map(|&c| c as usize)
                .find(|&c| x >= self.nodes[c].lo)
                .unwrap_or(ch[0] as usize);
        }
        id
    }

    /// Splits leaf `id` in the proportions `split`.
    pub fn split_leaf(&mut self, id: usize, split: Vec<f64>) {
        assert!(self.nodes[id].is_leaf());
        assert_eq!(split.len(), self.arity.degree());
        let (lo, hi) = (self.nodes[id].lo, self.nodes[id].hi);
        let len = hi - lo;
        let mut cut = lo;
        let mut children = Vec::with_capacity(split.len());
        for (i, &p) in split.iter().enumerate() {
            let next = if i + 1 == split.len() {
                hi
            } else {
                cut + p * len
            };
            let c = self.nodes.len() as u32;
            self.nodes.push(FragNode {
                word: self.nodes[id].word.child(i as u8 + 1),
                lo: cut,
                hi: next,
                split: None,
                children: Vec::new(),
            });
            children.push(c);
            cut = next;
        }
        self.nodes[id].children = children;
        self.nodes[id].split = Some(split);
        self.n_internal += 1;
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let mark: f64 = rng.random();
        let leaf = self.locate(mark);
        let split = sample_split(self.arity, rng);
        self.split_leaf(leaf, split);
        leaf
    }

    pub fn check_partition(&self) -> Result<(), String> {
        let mut leaves: Vec<(f64, f64)> = self.leaves().map(|n| (n.lo, n.hi)).collect();
        leaves.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut at = 0.0;
        for (lo, hi) in leaves {
            if (lo - at).abs() > PARTITION_TOLERANCE || hi < lo {
                return Err(format!("gap or overlap at {at}: [{lo}, {hi})"));
            }
            at = hi;
        }
        if (at - 1.0).abs() > PARTITION_TOLERANCE {
            return Err(format!("leaves end at {at}"));
        }
        for n in &self.nodes {
            if let Some(s) = &n.split {
                for (i, &c) in n.children.iter().enumerate() {
                    let want = s[i] * n.length();
                    let got = self.nodes[c as usize].length();
                    if (want - got).abs() > PARTITION_TOLERANCE {
                        return Err(format!(
                            "child {} of {} has length {got}, want {want}",
                            i + 1,
                            n.word
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_tree(&self) -> OrderedTree {
        let internal: Vec<Word> = self
            .nodes
            .iter()
            .filter(|n| !n.is_leaf())
            .map(|n| n.word.clone())
            .collect();
        OrderedTree::from_internal_words(self.arity, &internal)
            .expect("fragmentation nodes form a tree")
    }

    /// Internal-node counts of the root's subtrees, in letter order.
    pub fn root_composition(&self) -> Vec<usize> {
        let mut out = vec![0; self.arity.degree()];
        for n in self
            .nodes
            .iter()
            .filter(|n| !n.is_leaf() && !n.word.is_root())
        {
            out[n.word.letters()[0] as usize - 1] += 1;
        }
        out
    }
}

/// `K - 1` fragmentation steps from the single interval `[0,1)`.
pub fn build_fragmentation_tree<R: Rng + ?Sized>(
    arity: Arity,
    k: usize,
    rng: &mut R,
) -> Result<FragmentationTree, TreeError> {
    if k == 0 {
        return Err(TreeError::Malformed("fragmentation needs K ≥ 1".into()));
    }
    let mut t = FragmentationTree::new(arity);
    for _ in 1..k {
        t.step(rng);
    }
    Ok(t)
}

#[derive(Serialize)]
struct NodeJson<'a> {
    word: &'a Word,
    interval: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<&'a Vec<f64>>,
}

#[derive(Serialize)]
struct TreeJson<'a> {
    arity: Arity,
    nodes: Vec<NodeJson<'a>>,
    tree: String,
}

impl Serialize for FragmentationTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeJson {
            arity: self.arity,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeJson {
                    word: &n.word,
                    interval: [n.lo, n.hi],
                    split: n.split.as_ref(),
                })
                .collect(),
            tree: self.to_tree().to_paren(),
        }
        .serialize(s)
    }
}

fn ln_multinomial(ks: &[u64]) -> f64 {
    let n: u64 = ks.iter().sum();
    ln_gamma(n as f64 + 1.0) - ks.iter().map(|&k| ln_gamma(k as f64 + 1.0)).sum::<f64>()
}

/// `multinomial(K-1; k) · Γ(3/2)/Γ(1/2)³ · ∏Γ(k_i+1/2) / Γ(K-1+3/2)` with
/// `K - 1 = k1 + k2 + k3`.
pub fn shape_pmf_momentdir(k1: u64, k2: u64, k3: u64) -> f64 {
    let ks = [k1, k2, k3];
    let m = (k1 + k2 + k3) as f64;
    let ln = ln_multinomial(&ks) + ln_gamma(1.5) - 3.0 * ln_gamma(0.5)
        + ks.iter().map(|&k| ln_gamma(k as f64 + 0.5)).sum::<f64>()
        - ln_gamma(m + 1.5);
    ln.exp()
}

/// `multinomial(K-1; k) · N_{k1} N_{k2} N_{k3} / N_K`, where `N_m` counts
/// histories of `m` insertions.
pub fn shape_pmf_q_exact(k1: u64, k2: u64, k3: u64) -> BigRational {
    let ks = [k1, k2, k3];
    let total = k1 + k2 + k3;
    let fact = |n: u64| (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let mut num = fact(total);
    let mut den = BigInt::from(histories_total(total + 1));
    for &k in &ks {
        num *= BigInt::from(histories_total(k));
        den *= fact(k);
    }
    BigRational::new(num, den)
}

pub fn shape_pmf_q(k1: u64, k2: u64, k3: u64) -> f64 {
    crate::counting::ratio_to_f64(&shape_pmf_q_exact(k1, k2, k3))
}

/// All `(k1, k2, k3)` with `k1 + k2 + k3 = total`.
pub fn compositions3(total: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a in 0..=total {
        for b in 0..=total - a {
            out.push([a, b, total - a - b]);
        }
    }
    out
}

pub fn shape_q_total(total: u64) -> BigRational {
    compositions3(total)
        .into_iter()
        .fold(BigRational::zero(), |acc, [a, b, c]| {
            acc + shape_pmf_q_exact(a, b, c)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::statistics::summarize;

    #[test]
    fn single_node() {
        let t = build_fragmentation_tree(Arity::Ternary, 1, &mut stream(0)).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert_eq!((t.nodes()[0].lo, t.nodes()[0].hi), (0.0, 1.0));
        assert!(build_fragmentation_tree(Arity::Ternary, 0, &mut stream(0)).is_err());
    }

    #[test]
    fn partition_holds_after_every_step() {
        let mut rng = stream(5);
        for arity in [Arity::Binary, Arity::Ternary] {
            let mut t = FragmentationTree::new(arity);
            for _ in 0..300 {
                t.step(&mut rng);
                t.check_partition().unwrap();
            }
            let total: f64 = t.leaves().map(|n| n.length()).sum();
            assert!((total - 1.0).abs() < PARTITION_TOLERANCE);
            assert_eq!(t.to_tree().n_internal(), 300);
        }
    }

    #[test]
    fn boundary_marks_go_right() {
        let mut t = FragmentationTree::new(Arity::Binary);
        t.split_leaf(0, vec![0.5, 0.5]);
        assert_eq!(t.nodes()[t.locate(0.5)].word, Word::from_letters(vec![2]));
        assert_eq!(t.nodes()[t.locate(0.0)].word, Word::from_letters(vec![1]));
    }

    #[test]
    fn split_moments() {
        let mut rng = stream(8);
        let n = 100_000;
        let draws: Vec<Vec<f64>> = (0..n)
            .map(|_| sample_split(Arity::Ternary, &mut rng))
            .collect();
        for i in 0..3 {
            let xs: Vec<f64> = draws.iter().map(|d| d[i]).collect();
            let s = summarize(&xs);
            assert!((s.mean - 1.0 / 3.0).abs() < 3.0 * s.sem, "{s:?}");
        }
        // Dirichlet(1/2,1/2,1/2): E y² = (1/2)(3/2) / ((3/2)(5/2)) = 1/5
        let sq: Vec<f64> = draws.iter().map(|d| d[0] * d[0]).collect();
        let s = summarize(&sq);
        assert!((s.mean - 0.2).abs() < 3.0 * s.sem, "{s:?}");
        let u2: Vec<f64> = (0..n)
            .map(|_| sample_split(Arity::Binary, &mut rng)[0].powi(2))
            .collect();
        let s = summarize(&u2);
        assert!((s.mean - 1.0 / 3.0).abs() < 3.0 * s.sem, "{s:?}");
    }

    #[test]
    fn shape_laws_agree() {
        assert!((shape_pmf_momentdir(1, 0, 0) - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(
            shape_pmf_q_exact(1, 0, 0),
            BigRational::new(1.into(), 3.into())
        );
        for total in 0..=8 {
            assert_eq!(shape_q_total(total), BigRational::one());
            for [a, b, c] in compositions3(total) {
                let q = shape_pmf_q(a, b, c);
                let m = shape_pmf_momentdir(a, b, c);
                assert!((q - m).abs() <= 1e-10 * q, "{a} {b} {c}: {q} {m}");
                assert!((m - shape_pmf_momentdir(c, a, b)).abs() <= 1e-14);
            }
        }
        for total in 9..20 {
            let s: f64 = compositions3(total)
                .iter()
                .map(|&[a, b, c]| shape_pmf_momentdir(a, b, c))
                .sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn json_has_intervals() {
        let t = build_fragmentation_tree(Arity::Ternary, 3, &mut stream(1)).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["arity"], 3);
        assert_eq!(v["nodes"][0]["interval"], serde_json::json!([0.0, 1.0]));
        assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
    }
}
