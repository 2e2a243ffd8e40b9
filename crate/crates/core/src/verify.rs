//! Invariant suite with stable check identifiers.

use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::counting::{count_histories, count_trees, histories_total, histories_total_for, q_walk};
use crate::fragmentation::{
    build_fragmentation_tree, compositions3, shape_pmf_momentdir, shape_pmf_q, shape_q_total,
};
use crate::localtopo::{gamma_ball, infinite_map_ball, local_distance};
use crate::passage::{
    gamma, gamma_pair, gamma_prime_literal, quad_root_distance, tri_root_distance,
};
use crate::rng::{stream, substream};
use crate::stackmap::{
    bfs, count_crossings, degree_via_tree, for_each_growth_history, for_each_history,
    map_from_tree, sample_growth_map, sample_uniform_map, tree_from_map, Family, StackMap,
};
use crate::statistics::{
    expected_degree_growth_exact, height_process_max_deviation, histogram_law, law_mean_degree,
    observed_mean_degree, pmf_finite_deg_first_exact, pmf_limit_deg_first, pmf_limit_deg_uniform,
    triangulation_mean_degree, urn_chain_law, urn_exhaustive_law,
};
use crate::tree::{enumerate_trees, is_valid_tree, sample_uniform_tree, Arity, OrderedTree};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub full: bool,
    pub max_exhaustive: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            full: false,
            max_exhaustive: 5,
            seed: 0,
        }
    }
}

pub const CHECKS: &[(&str, &str)] = &[
    (
        "TREE-COUNT",
        "enumeration sizes equal the closed-form tree counts",
    ),
    (
        "TREE-VALID",
        "sampled and enumerated trees are valid full trees",
    ),
    ("TREE-PAREN", "parenthesis form round-trips"),
    ("MAP-EULER", "vertex, edge and face counts of stack maps"),
    ("MAP-INJECTIVE", "distinct trees give distinct maps"),
    ("MAP-BIJECTION", "tree_from_map inverts map_from_tree"),
    (
        "MAP-ROOT-TRI",
        "BFS root distance equals Γ in triangulations",
    ),
    (
        "MAP-PAIR-TRI",
        "|BFS(u,v) - Γ(u',v')| ≤ 4 in triangulations",
    ),
    (
        "MAP-ROOT-QUAD",
        "BFS root distance equals the automaton distance in quadrangulations",
    ),
    ("MAP-DEGREE", "degrees read from the tree equal map degrees"),
    (
        "MAP-MEAN-DEGREE",
        "mean degree of a triangulation is 6n/(n+2)",
    ),
    ("MAP-PLANE", "canonical drawings have no crossings"),
    (
        "COUNT-HISTORIES",
        "hook-length counts equal enumerated histories and sum to N_k",
    ),
    ("COUNT-WALK", "walk probabilities sum to at most 1"),
    ("STAT-PMF-SUM", "limit degree laws sum to 1"),
    (
        "STAT-DEG-FIRST",
        "finite degree law equals the exhaustive histogram",
    ),
    (
        "STAT-URN",
        "urn chain equals history enumeration, mean equals the product formula",
    ),
    ("STAT-HEIGHT", "height-process distance identity within 2"),
    (
        "FRAG-PARTITION",
        "fragmentation leaf intervals partition [0,1)",
    ),
    (
        "FRAG-SHAPE",
        "growth shape law equals the Dirichlet moment formula",
    ),
    (
        "LOCAL-ULTRAMETRIC",
        "local distance is ultrametric on fixtures",
    ),
    ("LOCAL-BALL", "Γ-balls are monotone and map balls nest"),
    ("DETERMINISM", "samplers are reproducible from the seed"),
];

fn description(id: &str) -> &'static str {
    CHECKS
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .expect("registered check")
}

/// Internal vertices whose BFS distance to the root differs from the word
/// statistic of the family.
pub fn root_distance_violations(m: &StackMap) -> usize {
    let d = bfs(m, m.root_vertex());
    let nb = m.family().face_len() as u32;
    (nb..m.n_vertices() as u32)
        .filter(|&v| {
            let u = m.vertex_word(v).expect("internal vertex");
            let want = match m.family() {
                Family::Triangulation => tri_root_distance(&u),
                Family::Quadrangulation => quad_root_distance(&u),
            };
            d[v as usize] != want
        })
        .count()
}

/// Internal vertices where the literal block reading disagrees with BFS.
pub fn literal_quad_mismatches(m: &StackMap) -> usize {
    let d = bfs(m, m.root_vertex());
    (4..m.n_vertices() as u32)
        .filter(|&v| {
            d[v as usize] != gamma_prime_literal(&m.vertex_word(v).expect("internal vertex"))
        })
        .count()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairBound {
    pub checked: usize,
    pub violations: usize,
    /// Pairs whose words are prefix-related, where Γ(u,v) is undefined.
    pub prefix_pairs: usize,
    pub max_gap: u32,
}

/// `|BFS(u,v) - Γ(u',v')| ≤ 4` over internal pairs of a triangulation, with
/// BFS sources drawn from `sources` (all when `None`).
pub fn pair_bound(m: &StackMap, sources: Option<&[u32]>) -> PairBound {
    let words: Vec<Option<Word>> = (0..m.n_vertices() as u32)
        .map(|v| m.vertex_word(v))
        .collect();
    let all: Vec<u32> = (3..m.n_vertices() as u32).collect();
    let mut out = PairBound::default();
    for &u in sources.unwrap_or(&all) {
        let d = bfs(m, u);
        let wu = words[u as usize].as_ref().expect("internal vertex");
        for &v in &all {
            if v == u {
                continue;
            }
            match gamma_pair(wu, words[v as usize].as_ref().expect("internal vertex")) {
                Ok(g) => {
                    out.checked += 1;
                    let gap = d[v as usize].abs_diff(g);
                    out.max_gap = out.max_gap.max(gap);
                    if gap > 4 {
                        out.violations += 1;
                    }
                }
                Err(_) => out.prefix_pairs += 1,
            }
        }
    }
    out
}

struct Runner {
    out: Vec<VerifyOutcome>,
}

impl Runner {
    fn record(&mut self, id: &'static str, passed: bool, detail: String) {
        self.out.push(VerifyOutcome {
            id,
            description: description(id),
            passed,
            detail,
        });
    }
}

fn both_families() -> [(Family, Arity); 2] {
    [
        (Family::Triangulation, Arity::Ternary),
        (Family::Quadrangulation, Arity::Binary),
    ]
}

pub fn run_verification(cfg: &VerifyConfig) -> Vec<VerifyOutcome> {
    let mut r = Runner { out: Vec::new() };
    let ex = cfg.max_exhaustive;
    let (samples, size) = if cfg.full { (20, 2000) } else { (4, 300) };
    let mut rng = stream(cfg.seed);

    let mut ok = true;
    let mut detail = String::new();
    for arity in [Arity::Binary, Arity::Ternary] {
        for n in 0..=ex {
            let got = enumerate_trees(arity, n).map(|v| v.len()).unwrap_or(0);
            let want = count_trees(arity, n as u64);
            if want != got.into() {
                ok = false;
                detail = format!("{arity:?} n={n}: {got} vs {want}");
            }
        }
    }
    r.record("TREE-COUNT", ok, detail);

    let sampled: Vec<OrderedTree> = (0..samples)
        .flat_map(|_| both_families().map(|(_, a)| sample_uniform_tree(a, size, &mut rng)))
        .collect();
    let valid = sampled
        .iter()
        .all(|t| is_valid_tree(&t.word_set(), t.arity().degree() as u8));
    r.record("TREE-VALID", valid, format!("{} trees", sampled.len()));
    let paren = sampled
        .iter()
        .all(|t| OrderedTree::from_paren(t.arity(), &t.to_paren()).as_ref() == Ok(t));
    r.record("TREE-PAREN", paren, String::new());

    let maps: Vec<StackMap> = sampled
        .iter()
        .map(|t| {
            let fam = if t.arity() == Arity::Ternary {
                Family::Triangulation
            } else {
                Family::Quadrangulation
            };
            map_from_tree(t, fam).expect("arity matches")
        })
        .collect();
    let euler = maps.iter().all(|m| {
        let k = m.n_internal();
        let fam = m.family();
        m.n_edges() == fam.face_len() + fam.new_edges() * k
            && m.n_vertices() == fam.face_len() + k
            && m.n_faces() == 1 + (fam.arity().degree() - 1) * k
    });
    r.record("MAP-EULER", euler, String::new());

    let mut injective = true;
    let mut bijection = true;
    for (fam, arity) in both_families() {
        for n in 0..=ex {
            let trees = enumerate_trees(arity, n).unwrap_or_default();
            let mut seen = HashSet::new();
            for t in &trees {
                let m = map_from_tree(t, fam).expect("arity matches");
                injective &= seen.insert(m.edges());
                bijection &= tree_from_map(&m).as_ref() == Ok(t);
            }
        }
    }
    bijection &= maps
        .iter()
        .zip(&sampled)
        .all(|(m, t)| tree_from_map(m).as_ref() == Ok(t));
    r.record("MAP-INJECTIVE", injective, String::new());
    r.record("MAP-BIJECTION", bijection, String::new());

    let mut root_tri = 0;
    let mut root_quad = 0;
    for (fam, _) in both_families() {
        for k in 0..=ex {
            for_each_growth_history(fam, k, |m, _| {
                let v = root_distance_violations(m);
                match fam {
                    Family::Triangulation => root_tri += v,
                    Family::Quadrangulation => root_quad += v,
                }
            });
        }
    }
    for m in &maps {
        match m.family() {
            Family::Triangulation => root_tri += root_distance_violations(m),
            Family::Quadrangulation => root_quad += root_distance_violations(m),
        }
    }
    r.record(
        "MAP-ROOT-TRI",
        root_tri == 0,
        format!("{root_tri} violations"),
    );
    r.record(
        "MAP-ROOT-QUAD",
        root_quad == 0,
        format!("{root_quad} violations"),
    );

    let mut pb = PairBound::default();
    for m in maps.iter().filter(|m| m.family() == Family::Triangulation) {
        let sources: Vec<u32> = (0..20)
            .map(|_| rng.random_range(3..m.n_vertices() as u32))
            .collect();
        let p = pair_bound(m, Some(&sources));
        pb.checked += p.checked;
        pb.violations += p.violations;
        pb.prefix_pairs += p.prefix_pairs;
        pb.max_gap = pb.max_gap.max(p.max_gap);
    }
    r.record(
        "MAP-PAIR-TRI",
        pb.violations == 0,
        format!(
            "{} pairs, max gap {}, {} violations",
            pb.checked, pb.max_gap, pb.violations
        ),
    );

    let mut deg_ok = true;
    for (fam, arity) in both_families() {
        for n in 0..=ex.min(5) {
            for t in enumerate_trees(arity, n).unwrap_or_default() {
                let m = map_from_tree(&t, fam).expect("arity matches");
                for v in m.internal_vertices_lex() {
                    let u = m.vertex_word(v).expect("internal vertex");
                    deg_ok &= degree_via_tree(&t, &u, fam).ok() == Some(m.degree(v));
                }
            }
        }
    }
    r.record("MAP-DEGREE", deg_ok, String::new());

    let mean_ok = maps
        .iter()
        .filter(|m| m.family() == Family::Triangulation)
        .all(|m| observed_mean_degree(m) == triangulation_mean_degree(m));
    r.record("MAP-MEAN-DEGREE", mean_ok, String::new());

    let plane_size = if cfg.full { 200 } else { 60 };
    let crossings: usize = both_families()
        .iter()
        .map(|&(fam, _)| count_crossings(&sample_growth_map(fam, plane_size, &mut rng)))
        .sum();
    r.record(
        "MAP-PLANE",
        crossings == 0,
        format!("{crossings} crossings"),
    );

    let mut hist_ok = true;
    for k in 0..=ex.min(6) {
        let sum: num_bigint::BigUint = enumerate_trees(Arity::Ternary, k)
            .unwrap_or_default()
            .iter()
            .map(|t| {
                let mut c = 0u64;
                for_each_history(t, |_| c += 1);
                hist_ok &= count_histories(t) == c.into();
                count_histories(t)
            })
            .sum();
        hist_ok &= sum == histories_total(k as u64);
        let bsum: num_bigint::BigUint = enumerate_trees(Arity::Binary, k)
            .unwrap_or_default()
            .iter()
            .map(count_histories)
            .sum();
        hist_ok &= bsum == histories_total_for(Arity::Binary, k as u64);
    }
    r.record("COUNT-HISTORIES", hist_ok, String::new());

    let walk_ok = (1..30u64)
        .all(|m| (0..=m).map(|k| q_walk(m, k)).sum::<BigRational>() <= BigRational::one());
    r.record("COUNT-WALK", walk_ok, String::new());

    let s1: f64 = (0..2000).map(pmf_limit_deg_first).sum();
    let s2: f64 = (0..2000).map(pmf_limit_deg_uniform).sum();
    r.record(
        "STAT-PMF-SUM",
        (s1 - 1.0).abs() < 1e-9 && (s2 - 1.0).abs() < 1e-9,
        format!("{s1:.12} {s2:.12}"),
    );

    let mut deg_first_ok = true;
    for n in 3..=(ex as u64 + 1).min(7) {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for t in enumerate_trees(Arity::Ternary, (n - 1) as usize).unwrap_or_default() {
            let m = map_from_tree(&t, Family::Triangulation).expect("ternary");
            *counts.entry(m.degree(3) as u64 - 3).or_default() += 1;
        }
        let law = histogram_law(&counts);
        for k in 0..n - 1 {
            let want = law.get(&k).cloned().unwrap_or_default();
            deg_first_ok &= pmf_finite_deg_first_exact(n, k) == want;
        }
    }
    r.record("STAT-DEG-FIRST", deg_first_ok, String::new());

    let mut urn_ok = true;
    for n in 3..=(ex as u64 + 1).min(6) {
        for j in 1..n {
            let chain = urn_chain_law(n, j);
            urn_ok &= chain == urn_exhaustive_law(n, j);
            urn_ok &= law_mean_degree(&chain) == expected_degree_growth_exact(n, j);
        }
    }
    r.record("STAT-URN", urn_ok, String::new());

    let (ht, hs) = if cfg.full { (20, 3000) } else { (3, 500) };
    let worst = (0..ht)
        .map(|_| height_process_max_deviation(&sample_uniform_tree(Arity::Ternary, hs, &mut rng)))
        .max()
        .unwrap_or(0);
    r.record("STAT-HEIGHT", worst <= 2, format!("max deviation {worst}"));

    let frag_ok = [Arity::Binary, Arity::Ternary].iter().all(|&a| {
        build_fragmentation_tree(a, 200, &mut rng)
            .map(|t| t.check_partition().is_ok())
            .unwrap_or(false)
    });
    r.record("FRAG-PARTITION", frag_ok, String::new());

    let mut shape_ok = true;
    for total in 0..=8 {
        shape_ok &= shape_q_total(total) == BigRational::one();
        for [a, b, c] in compositions3(total) {
            let (q, m) = (shape_pmf_q(a, b, c), shape_pmf_momentdir(a, b, c));
            shape_ok &= (q - m).abs() <= 1e-10 * q;
        }
    }
    r.record("FRAG-SHAPE", shape_ok, String::new());

    let base = sample_growth_map(Family::Triangulation, 6, &mut rng);
    let fixtures: Vec<StackMap> = (0..5)
        .map(|_| {
            let mut m = base.clone();
            for _ in 0..3 {
                m.grow_uniform(&mut rng);
            }
            m
        })
        .collect();
    let mut ultra = true;
    for a in &fixtures {
        for b in &fixtures {
            for c in &fixtures {
                let d = |x: &StackMap, y: &StackMap| local_distance(x, y).unwrap_or(f64::NAN);
                ultra &= d(a, c) <= d(a, b).max(d(b, c));
            }
        }
    }
    r.record("LOCAL-ULTRAMETRIC", ultra, String::new());

    let t = sample_uniform_tree(Arity::Ternary, 200, &mut rng);
    let mut ball_ok = true;
    let mut prev: Option<StackMap> = None;
    for radius in 0..12 {
        ball_ok &= gamma_ball(&t, radius).is_subset(&gamma_ball(&t, radius + 1));
        ball_ok &= gamma_ball(&t, radius).iter().all(|u| gamma(u) <= radius);
        if let Ok(m) = infinite_map_ball(&t, radius) {
            if let Some(p) = &prev {
                let edges = m.edges();
                ball_ok &= p.edges().iter().all(|e| edges.binary_search(e).is_ok());
            }
            prev = Some(m);
        } else {
            ball_ok = false;
        }
    }
    r.record("LOCAL-BALL", ball_ok, String::new());

    let same = |i: u64| {
        let a = sample_uniform_map(Family::Triangulation, 100, &mut substream(cfg.seed, i));
        let b = sample_uniform_map(Family::Triangulation, 100, &mut substream(cfg.seed, i));
        let c = sample_growth_map(Family::Quadrangulation, 100, &mut substream(cfg.seed, i));
        let d = sample_growth_map(Family::Quadrangulation, 100, &mut substream(cfg.seed, i));
        serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok()
            && serde_json::to_string(&c).ok() == serde_json::to_string(&d).ok()
    };
    r.record("DETERMINISM", (0..3).all(same), String::new());

    r.out
}
