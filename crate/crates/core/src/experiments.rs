//! Monte-Carlo experiments with seeded replicas and JSON/CSV reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fragmentation::build_fragmentation_tree;
use crate::localtopo::sample_spine_tree;
use crate::par::{replicate, Execution};
use crate::passage::{
    gamma_of_letters, gamma_prime_literal_of_letters, quad_root_distance_of_letters,
};
use crate::stackmap::{bfs, sample_growth_map, sample_uniform_map, Family};
use crate::statistics::{
    chi_square_pmf, chi_square_two_sample, exact_mean_internal_depth, pmf_finite_deg_first,
    pmf_limit_deg_uniform, pmf_subtree_size, radius, summarize, EmpiricalPmf, Summary,
};
use crate::tree::{
    sample_increasing_tree, sample_uniform_tree, Arity, GrowingTree, DEFAULT_GW_CAP,
};

pub const EXPERIMENTS: &[&str] = &[
    "gamma-rate",
    "quad-rate",
    "typical-distance",
    "depth-ternary",
    "depth-binary",
    "radius-scaling",
    "degree-uniform",
    "degree-first",
    "subtree-size",
    "frag-shape",
    "spine-length",
];

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("unknown experiment {0:?}; known: {list}", list = EXPERIMENTS.join(", "))]
    Unknown(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Constant quoted from the literature.
    Literature,
    /// Obtained here by exact computation or enumeration.
    Computed,
    /// Follows from elementary arithmetic or symmetry.
    Elementary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub std_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks do not affect the verdict.
    pub required: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub values: Vec<i64>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub reps: usize,
    pub estimates: Vec<Estimate>,
    pub references: Vec<Reference>,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

impl ExperimentReport {
    fn new(name: &str, seed: u64, reps: usize) -> Self {
        ExperimentReport {
            experiment: name.to_string(),
            params: BTreeMap::new(),
            seed,
            reps,
            estimates: Vec::new(),
            references: Vec::new(),
            checks: Vec::new(),
            passed: true,
            histogram: None,
        }
    }

    fn param(&mut self, name: &str, value: f64) {
        self.params.insert(name.to_string(), value);
    }

    fn estimate(&mut self, name: &str, value: f64, std_error: Option<f64>) {
        self.estimates.push(Estimate {
            name: name.to_string(),
            value,
            std_error,
        });
    }

    fn summary(&mut self, name: &str, s: Summary) {
        self.estimate(name, s.mean, Some(s.sem));
    }

    fn reference(&mut self, name: &str, value: f64, provenance: Provenance) {
        self.references.push(Reference {
            name: name.to_string(),
            value,
            provenance,
        });
    }

    fn check(&mut self, name: &str, passed: bool, required: bool, detail: String) {
        if required && !passed {
            self.passed = false;
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            required,
            detail,
        });
    }

    pub fn estimate_value(&self, name: &str) -> Option<f64> {
        self.estimates
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.value)
    }

    pub fn check_passed(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,name,value,std_error,provenance\n");
        for (k, v) in &self.params {
            let _ = writeln!(s, "param,{k},{v},,");
        }
        for e in &self.estimates {
            let se = e.std_error.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(s, "estimate,{},{},{se},", e.name, e.value);
        }
        for r in &self.references {
            let p = serde_json::to_value(r.provenance).expect("enum serializes");
            let _ = writeln!(
                s,
                "reference,{},{},,{}",
                r.name,
                r.value,
                p.as_str().unwrap_or("")
            );
        }
        for c in &self.checks {
            let _ = writeln!(s, "check,{},{},,", c.name, c.passed);
        }
        s
    }

    /// Bar chart of the histogram, observed in black and expected in red.
    pub fn to_svg(&self) -> Option<String> {
        let h = self.histogram.as_ref()?;
        let total: u64 = h.observed.iter().sum();
        let n = h.values.len().max(1) as f64;
        let top = h
            .observed
            .iter()
            .map(|&o| o as f64 / total.max(1) as f64)
            .chain(h.expected.iter().copied())
            .fold(0.0f64, f64::max)
            .max(1e-12);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="800" height="400" preserveAspectRatio="none">"#
        );
        for (i, (&o, &e)) in h.observed.iter().zip(&h.expected).enumerate() {
            let x = i as f64 / n;
            let fo = o as f64 / total.max(1) as f64 / top;
            let _ = writeln!(
                s,
                r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="black"/>"#,
                x,
                1.0 - fo,
                0.8 / n,
                fo
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="red" stroke-width="0.004"/>"#,
                x,
                1.0 - e / top,
                x + 0.8 / n,
                1.0 - e / top
            );
        }
        s.push_str("</svg>\n");
        Some(s)
    }
}

/// Optional overrides; each experiment has its own defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub n: Option<u64>,
    pub reps: Option<usize>,
    pub samples: Option<usize>,
    pub r: Option<u32>,
    pub k: Option<usize>,
}

impl ExperimentParams {
    fn n_or(&self, d: u64) -> u64 {
        self.n.unwrap_or(d)
    }

    fn reps_or(&self, d: usize) -> usize {
        self.reps.unwrap_or(d)
    }
}

fn random_letters<R: Rng + ?Sized>(rng: &mut R, n: u64, d: u8) -> impl Iterator<Item = u8> + '_ {
    (0..n).map(move |_| rng.random_range(1..=d))
}

fn pmf_histogram(sample: &EmpiricalPmf, pmf: impl Fn(i64) -> f64, lo: i64, hi: i64) -> Histogram {
    let values: Vec<i64> = (lo..hi).collect();
    Histogram {
        observed: values.iter().map(|&v| sample.count(v)).collect(),
        expected: values.iter().map(|&v| pmf(v)).collect(),
        values,
    }
}

pub fn run_experiment(
    name: &str,
    params: &ExperimentParams,
    seed: u64,
    exec: Execution,
) -> Result<ExperimentReport, ExperimentError> {
    if params.n == Some(0) || params.reps == Some(0) {
        return Err(ExperimentError::InvalidParam(
            "sizes must be positive".into(),
        ));
    }
    match name {
        "gamma-rate" => Ok(gamma_rate(params, seed, exec)),
        "quad-rate" => Ok(quad_rate(params, seed, exec)),
        "typical-distance" => Ok(typical_distance(params, seed, exec)),
        "depth-ternary" => Ok(depth(Arity::Ternary, params, seed, exec)),
        "depth-binary" => Ok(depth(Arity::Binary, params, seed, exec)),
        "radius-scaling" => Ok(radius_scaling(params, seed, exec)),
        "degree-uniform" => Ok(degree_uniform(params, seed, exec)),
        "degree-first" => Ok(degree_first(params, seed, exec)),
        "subtree-size" => Ok(subtree_size(params, seed, exec)),
        "frag-shape" => Ok(frag_shape(params, seed, exec)),
        "spine-length" => Ok(spine_length(params, seed, exec)),
        other => Err(ExperimentError::Unknown(other.to_string())),
    }
}

fn gamma_rate(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(1_000_000), p.reps_or(30));
    let rates = replicate(exec, seed, reps, |rng, _| {
        gamma_of_letters(random_letters(rng, n, 3)) as f64 / n as f64
    });
    let s = summarize(&rates);
    let mut r = ExperimentReport::new("gamma-rate", seed, reps);
    r.param("n", n as f64);
    r.summary("rate", s);
    r.reference("gamma_tri", 2.0 / 11.0, Provenance::Literature);
    let dev = (s.mean - 2.0 / 11.0).abs();
    r.check(
        "rate_within_0.005",
        dev <= 0.005,
        true,
        format!("|{:.6} - 2/11| = {dev:.6}", s.mean),
    );
    r
}

fn quad_rate(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(1_000_000), p.reps_or(30));
    let rates = replicate(exec, seed, reps, |rng, _| {
        let letters: Vec<u8> = random_letters(rng, n, 2).collect();
        let a = quad_root_distance_of_letters(letters.iter().copied()) as f64 / n as f64;
        let l = gamma_prime_literal_of_letters(letters.iter().copied()) as f64 / n as f64;
        (a, l)
    });
    let sa = summarize(&rates.iter().map(|x| x.0).collect::<Vec<_>>());
    let sl = summarize(&rates.iter().map(|x| x.1).collect::<Vec<_>>());
    let mut r = ExperimentReport::new("quad-rate", seed, reps);
    r.param("n", n as f64);
    r.summary("automaton_rate", sa);
    r.summary("literal_rate", sl);
    r.reference("gamma_quad_literature", 1.0 / 3.0, Provenance::Literature);
    r.reference("gamma_quad_automaton", 0.2, Provenance::Computed);
    let near = |x: f64, c: f64| (x - c).abs() <= 0.005;
    r.check(
        "automaton_matches_1/5",
        near(sa.mean, 0.2),
        true,
        format!("{:.6}", sa.mean),
    );
    r.check(
        "automaton_matches_1/3",
        near(sa.mean, 1.0 / 3.0),
        false,
        format!("{:.6}", sa.mean),
    );
    r.check(
        "literal_matches_1/3",
        near(sl.mean, 1.0 / 3.0),
        false,
        format!("{:.6}", sl.mean),
    );
    r.check(
        "literal_matches_1/5",
        near(sl.mean, 0.2),
        false,
        format!("{:.6}", sl.mean),
    );
    r
}

fn typical_distance(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(10_000), p.reps_or(400));
    let pairs = p.samples.unwrap_or(10);
    let per_map = replicate(exec, seed, reps, |rng, _| {
        let m = sample_growth_map(Family::Triangulation, n as usize, rng);
        let nb = 3u32;
        let pick = |rng: &mut crate::rng::StackRng| rng.random_range(nb..m.n_vertices() as u32);
        let u = pick(rng);
        let d = bfs(&m, u);
        (0..pairs)
            .map(|_| d[pick(rng) as usize] as f64)
            .sum::<f64>()
            / pairs as f64
    });
    let s = summarize(&per_map);
    let scale = 6.0 / 11.0 * (n as f64).ln();
    let mut r = ExperimentReport::new("typical-distance", seed, reps);
    r.param("n", n as f64);
    r.param("pairs_per_map", pairs as f64);
    r.summary("mean_distance", s);
    r.estimate("ratio", s.mean / scale, Some(s.sem / scale));
    r.reference("3_gamma_tri_ln_n", scale, Provenance::Literature);
    r
}

fn depth(arity: Arity, p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(100_000), p.reps_or(10));
    let per_tree = p.samples.unwrap_or(1000);
    let depths: Vec<Vec<f64>> = replicate(exec, seed, reps, |rng, _| {
        let mut g = GrowingTree::new(arity);
        let mut depth_of = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let id = g.grow_uniform(rng);
            depth_of.push(g.depth(id) as f64);
        }
        (0..per_tree)
            .map(|_| depth_of[rng.random_range(0..n as usize)])
            .collect()
    });
    // nodes of one tree are correlated, so the error bar comes from tree means
    let tree_means: Vec<f64> = depths
        .iter()
        .map(|d| d.iter().sum::<f64>() / d.len() as f64)
        .collect();
    let s = summarize(&tree_means);
    let sampled = depths.iter().map(Vec::len).sum::<usize>();
    let ln = (n as f64).ln();
    let exact = exact_mean_internal_depth(arity, n);
    let name = match arity {
        Arity::Ternary => "depth-ternary",
        Arity::Binary => "depth-binary",
    };
    let mut r = ExperimentReport::new(name, seed, reps);
    r.param("n", n as f64);
    r.param("nodes_sampled", sampled as f64);
    r.summary("mean_depth", s);
    r.estimate("fitted_constant", s.mean / ln, Some(s.sem / ln));
    r.reference("exact_mean_depth", exact, Provenance::Computed);
    let within = (s.mean - exact).abs() <= 3.0 * s.sem.max(1e-12);
    r.check(
        "matches_exact_mean",
        within,
        true,
        format!("{:.4} vs {:.4}", s.mean, exact),
    );
    match arity {
        Arity::Ternary => {
            let c = 1.5 * ln;
            r.reference("1.5_ln_n", c, Provenance::Literature);
            let q = s.mean / c;
            r.estimate("ratio_to_1.5_ln_n", q, Some(s.sem / c));
            r.check(
                "ratio_in_[0.95,1.05]",
                (0.95..=1.05).contains(&q),
                true,
                format!("{q:.4}"),
            );
        }
        Arity::Binary => {
            r.reference("2_ln_n", 2.0 * ln, Provenance::Literature);
            r.reference("4_ln_n", 4.0 * ln, Provenance::Literature);
            let (q2, q4) = (s.mean / (2.0 * ln), s.mean / (4.0 * ln));
            r.estimate("ratio_to_2_ln_n", q2, None);
            r.estimate("ratio_to_4_ln_n", q4, None);
            let closer = if (q2 - 1.0).abs() <= (q4 - 1.0).abs() {
                "2 ln n"
            } else {
                "4 ln n"
            };
            r.check(
                "closer_to_2_ln_n",
                closer == "2 ln n",
                false,
                format!("closer to {closer}"),
            );
        }
    }
    r
}

fn radius_scaling(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(10_000), p.reps_or(200));
    let small = (n / 4).max(1);
    let big = replicate(exec, seed, reps, |rng, _| {
        radius(&sample_uniform_map(Family::Triangulation, n as usize, rng)) as f64
    });
    let little = replicate(exec, seed.wrapping_add(1), reps, |rng, _| {
        radius(&sample_uniform_map(
            Family::Triangulation,
            small as usize,
            rng,
        )) as f64
    });
    let (sb, sl) = (summarize(&big), summarize(&little));
    let ratio = sb.mean / sl.mean;
    let mut r = ExperimentReport::new("radius-scaling", seed, reps);
    r.param("n", n as f64);
    r.param("n_small", small as f64);
    r.summary("mean_radius", sb);
    r.summary("mean_radius_small", sl);
    r.estimate("ratio", ratio, None);
    r.reference("sqrt_4", 2.0, Provenance::Elementary);
    r.check(
        "ratio_in_[1.8,2.2]",
        (1.8..=2.2).contains(&ratio),
        true,
        format!("{ratio:.4}"),
    );
    r
}

fn degree_uniform(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(2000), p.reps_or(100_000));
    let degs = replicate(exec, seed, reps, |rng, _| {
        let m = sample_uniform_map(Family::Triangulation, n as usize, rng);
        let v = rng.random_range(3..m.n_vertices() as u32);
        m.degree(v) as i64 - 3
    });
    let sample: EmpiricalPmf = degs.into_iter().collect();
    let pmf = |k: i64| {
        if k < 0 {
            0.0
        } else {
            pmf_limit_deg_uniform(k as u64)
        }
    };
    let chi = chi_square_pmf(&sample, pmf, 0, 40);
    let mut r = ExperimentReport::new("degree-uniform", seed, reps);
    r.param("n", n as f64);
    r.estimate("mean_degree", sample.mean() + 3.0, None);
    r.estimate("chi2_statistic", chi.statistic, None);
    r.estimate("chi2_p_value", chi.p_value, None);
    r.reference("limit_mean_degree", 6.0, Provenance::Elementary);
    r.check(
        "chi2_p>0.01",
        chi.p_value > 0.01,
        true,
        format!("dof {}", chi.dof),
    );
    r.histogram = Some(pmf_histogram(&sample, pmf, 0, 25));
    r
}

fn degree_first(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(200), p.reps_or(20_000));
    // n counts faces/2, so the map has n-1 internal vertices
    let degs = replicate(exec, seed, reps, |rng, _| {
        let m = sample_uniform_map(Family::Triangulation, (n - 1) as usize, rng);
        let first = m.internal_vertices_lex()[0];
        m.degree(first) as i64 - 3
    });
    let sample: EmpiricalPmf = degs.into_iter().collect();
    let pmf = |k: i64| {
        if k < 0 {
            0.0
        } else {
            pmf_finite_deg_first(n, k as u64)
        }
    };
    let chi = chi_square_pmf(&sample, pmf, 0, 40);
    let mut r = ExperimentReport::new("degree-first", seed, reps);
    r.param("n", n as f64);
    r.estimate("chi2_p_value", chi.p_value, None);
    r.check(
        "chi2_p>0.01",
        chi.p_value > 0.01,
        true,
        format!("dof {}", chi.dof),
    );
    r.histogram = Some(pmf_histogram(&sample, pmf, 0, 25));
    r
}

fn subtree_size(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let (n, reps) = (p.n_or(3000), p.reps_or(100_000));
    let ks = replicate(exec, seed, reps, |rng, _| {
        let t = sample_uniform_tree(Arity::Ternary, n as usize, rng);
        let sizes = t.internal_subtree_sizes();
        let internal: Vec<u32> = t.internal_ids().collect();
        let u = internal[rng.random_range(0..internal.len())];
        sizes[u as usize] as i64
    });
    let sample: EmpiricalPmf = ks.into_iter().collect();
    let pmf = |k: i64| {
        if k < 1 {
            0.0
        } else {
            pmf_subtree_size(k as u64)
        }
    };
    let chi = chi_square_pmf(&sample, pmf, 1, 200);
    let mut r = ExperimentReport::new("subtree-size", seed, reps);
    r.param("n", n as f64);
    r.estimate("chi2_statistic", chi.statistic, None);
    r.estimate("chi2_p_value", chi.p_value, None);
    r.check(
        "chi2_p>0.01",
        chi.p_value > 0.01,
        true,
        format!("dof {}", chi.dof),
    );
    r.histogram = Some(pmf_histogram(&sample, pmf, 1, 30));
    r
}

/// Shape code of a small tree: its index among the preorder flag strings.
fn shape_code(t: &crate::tree::OrderedTree, table: &mut Vec<Vec<bool>>) -> i64 {
    let flags = t.preorder_flags().to_vec();
    match table.iter().position(|f| *f == flags) {
        Some(i) => i as i64,
        None => {
            table.push(flags);
            (table.len() - 1) as i64
        }
    }
}

fn frag_shape(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let k = p.k.unwrap_or(3);
    let reps = p.reps_or(100_000);
    let frag = replicate(exec, seed, reps, |rng, _| {
        build_fragmentation_tree(Arity::Ternary, k, rng)
            .expect("K ≥ 1")
            .to_tree()
    });
    let inc = replicate(exec, seed.wrapping_add(1), reps, |rng, _| {
        sample_increasing_tree(Arity::Ternary, k - 1, rng).into_tree()
    });
    let mut table = Vec::new();
    let a: EmpiricalPmf = frag.iter().map(|t| shape_code(t, &mut table)).collect();
    let b: EmpiricalPmf = inc.iter().map(|t| shape_code(t, &mut table)).collect();
    let chi = chi_square_two_sample(&a, &b);
    let mut r = ExperimentReport::new("frag-shape", seed, reps);
    r.param("k", k as f64);
    r.estimate("shapes_seen", table.len() as f64, None);
    r.estimate("chi2_statistic", chi.statistic, None);
    r.estimate("chi2_p_value", chi.p_value, None);
    r.check(
        "chi2_p>0.01",
        chi.p_value > 0.01,
        true,
        format!("dof {}", chi.dof),
    );
    r
}

fn spine_length(p: &ExperimentParams, seed: u64, exec: Execution) -> ExperimentReport {
    let radius = p.r.unwrap_or(10);
    let reps = p.reps_or(2000);
    let lens = replicate(exec, seed, reps, |rng, _| {
        sample_spine_tree(Arity::Ternary, radius, rng, DEFAULT_GW_CAP)
            .map(|s| s.spine.len() as f64)
            .unwrap_or(f64::NAN)
    });
    let s = summarize(&lens);
    let target = 5.5 * radius as f64;
    let mut r = ExperimentReport::new("spine-length", seed, reps);
    r.param("r", radius as f64);
    r.summary("mean_spine_length", s);
    r.reference("11r/2", target, Provenance::Literature);
    let rel = (s.mean - target).abs() / target;
    r.check(
        "within_15%",
        rel <= 0.15,
        true,
        format!("{:.3} vs {target}", s.mean),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: u64, reps: usize) -> ExperimentParams {
        ExperimentParams {
            n: Some(n),
            reps: Some(reps),
            ..Default::default()
        }
    }

    #[test]
    fn unknown_and_invalid() {
        let p = ExperimentParams::default();
        assert!(matches!(
            run_experiment("nope", &p, 1, Execution::Sequential),
            Err(ExperimentError::Unknown(_))
        ));
        assert!(run_experiment("gamma-rate", &small(0, 1), 1, Execution::Sequential).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for name in [
            "gamma-rate",
            "quad-rate",
            "typical-distance",
            "depth-binary",
        ] {
            let p = small(2000, 6);
            let a = run_experiment(name, &p, 9, Execution::Sequential).unwrap();
            let b = run_experiment(name, &p, 9, Execution::Parallel).unwrap();
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }

    #[test]
    fn every_reference_has_provenance() {
        let r = run_experiment("depth-ternary", &small(500, 3), 2, Execution::Parallel).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for reference in v["references"].as_array().unwrap() {
            assert!(["literature", "computed", "elementary"]
                .contains(&reference["provenance"].as_str().unwrap()));
        }
        assert!(r.to_csv().starts_with("kind,name,value"));
    }

    #[test]
    fn histogram_svg() {
        let p = ExperimentParams {
            n: Some(100),
            reps: Some(500),
            ..Default::default()
        };
        let r = run_experiment("degree-uniform", &p, 4, Execution::Parallel).unwrap();
        assert!(r.to_svg().unwrap().contains("<rect"));
    }
}
