use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use stackmap::counting::{count_forests, count_histories, count_trees, histories_total_for};
use stackmap::experiments::{run_experiment, ExperimentParams, EXPERIMENTS};
use stackmap::fragmentation::build_fragmentation_tree;
use stackmap::localtopo::{infinite_map_ball, sample_spine_tree};
use stackmap::par::Execution;
use stackmap::passage::{
    gamma, gamma_pair, gamma_prime_literal, gamma_prime_pair, quad_root_distance, quad_type,
    tri_root_distance, tri_type, QuadDistance,
};
use stackmap::rng::stream;
use stackmap::stackmap::{
    canonical_drawing, map_from_tree, sample_growth_map, sample_uniform_map, to_svg, Family,
    StackMap,
};
use stackmap::tree::{enumerate_trees, Arity, OrderedTree, DEFAULT_GW_CAP};
use stackmap::verify::{run_verification, VerifyConfig};
use stackmap::word::Word;

const USAGE: u8 = 1;
const VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "stackmap",
    version,
    about = "Stack-triangulations and stack-quadrangulations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample one map.
    Sample(SampleArgs),
    /// List every map with a given number of internal vertices.
    Enumerate(EnumerateArgs),
    /// Exact counts.
    Count(CountArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Run a named statistical experiment.
    Stats(StatsArgs),
    /// Render a sampled map or a given tree as SVG.
    Draw(SampleArgs),
    /// Interval fragmentation tree.
    Frag(FragArgs),
    /// Ball of radius r around the root of the local limit.
    Ball(BallArgs),
    /// Distances read off face words.
    Passage(PassageArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tri,
    Quad,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Tri => Family::Triangulation,
            FamilyArg::Quad => Family::Quadrangulation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Uniform,
    Growth,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Trees,
    Forests,
    Histories,
}

#[derive(Args)]
struct Common {
    #[arg(long, env = "STACKMAP_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "tri")]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "uniform")]
    law: Law,
    /// Number of internal vertices.
    #[arg(long, default_value_t = 100)]
    size: usize,
    /// Build from a parenthesized tree instead of sampling.
    #[arg(long, conflicts_with = "law")]
    tree: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_enum, default_value = "tri")]
    family: FamilyArg,
    #[arg(long)]
    size: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_enum)]
    what: What,
    /// trees: N; forests: M N; histories: K or a parenthesized tree.
    #[arg(long, num_args = 1..=2, required = true)]
    args: Vec<String>,
    #[arg(long, default_value_t = 3)]
    arity: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: Level,
    #[arg(long, default_value_t = 5)]
    max_exhaustive: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    /// Worker threads; 1 runs replicas sequentially.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FragArgs {
    #[arg(long, default_value_t = 3)]
    arity: u8,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BallArgs {
    #[arg(long, value_enum, default_value = "tri")]
    family: FamilyArg,
    #[arg(long)]
    r: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PassageArgs {
    #[command(subcommand)]
    op: PassageOp,
}

#[derive(Subcommand)]
enum PassageOp {
    /// Face type and root distance of a word; with --other, the pair bound.
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: Option<String>,
        #[arg(long, value_enum, default_value = "tri")]
        family: FamilyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut s = io::stdout().lock();
            s.write_all(body.as_bytes())?;
            s.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Format from the flag, else from the output extension, else JSON.
fn pick_format(flag: Option<Format>, out: &Option<PathBuf>) -> Format {
    flag.unwrap_or_else(|| {
        match out
            .as_ref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str())
        {
            Some("svg") => Format::Svg,
            Some("csv") => Format::Csv,
            _ => Format::Json,
        }
    })
}

fn arity_of(d: u8) -> Result<Arity> {
    Arity::from_degree(d).map_err(|e| anyhow::anyhow!("{e}"))
}

fn map_csv(m: &StackMap) -> String {
    let mut s = String::from("u,v\n");
    for (a, b) in m.edges() {
        s += &format!("{a},{b}\n");
    }
    s
}

fn render_map(m: &StackMap, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => pretty(m)?,
        Format::Csv => map_csv(m),
        Format::Svg => to_svg(m, &canonical_drawing(m)),
    })
}

fn build_map(a: &SampleArgs) -> Result<StackMap> {
    let family: Family = a.family.into();
    if let Some(p) = &a.tree {
        let t = OrderedTree::from_paren(family.arity(), p)?;
        return Ok(map_from_tree(&t, family)?);
    }
    let mut rng = stream(a.common.seed);
    Ok(match a.law {
        Law::Uniform => sample_uniform_map(family, a.size, &mut rng),
        Law::Growth => sample_growth_map(family, a.size, &mut rng),
    })
}

fn sample(a: &SampleArgs, default: Format) -> Result<u8> {
    let m = build_map(a)?;
    let format = a.format.unwrap_or_else(|| match a.common.out {
        None => default,
        _ => pick_format(None, &a.common.out),
    });
    emit(&a.common.out, &render_map(&m, format)?)?;
    Ok(0)
}

fn enumerate(a: &EnumerateArgs) -> Result<u8> {
    let family: Family = a.family.into();
    let trees = enumerate_trees(family.arity(), a.size)?;
    let body = match a.format {
        Format::Json => {
            let maps = trees
                .iter()
                .map(|t| map_from_tree(t, family))
                .collect::<Result<Vec<_>, _>>()?;
            pretty(&maps)?
        }
        Format::Csv => {
            let mut s = String::from("index,tree\n");
            for (i, t) in trees.iter().enumerate() {
                s += &format!("{i},{}\n", t.to_paren());
            }
            s
        }
        Format::Svg => bail!("enumerate has no SVG output"),
    };
    emit(&a.out, &body)?;
    Ok(0)
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse()
        .with_context(|| format!("not a non-negative integer: {s}"))
}

fn count(a: &CountArgs) -> Result<u8> {
    let arity = arity_of(a.arity)?;
    let n = match (a.what, a.args.as_slice()) {
        (What::Trees, [n]) => count_trees(arity, parse_u64(n)?),
        (What::Forests, [m, n]) => count_forests(arity, parse_u64(m)?, parse_u64(n)?),
        (What::Histories, [x]) => match x.parse::<u64>() {
            Ok(k) => histories_total_for(arity, k),
            Err(_) => count_histories(&OrderedTree::from_paren(arity, x)?),
        },
        (What::Trees, _) => bail!("trees takes one argument N"),
        (What::Forests, _) => bail!("forests takes two arguments M N"),
        (What::Histories, _) => bail!("histories takes one argument"),
    };
    emit(&a.out, &format!("{n}\n"))?;
    Ok(0)
}

fn verify(a: &VerifyArgs) -> Result<u8> {
    let cfg = VerifyConfig {
        full: matches!(a.level, Level::Full),
        max_exhaustive: a.max_exhaustive,
        seed: a.common.seed,
    };
    let outcomes = run_verification(&cfg);
    let body = match a.format {
        Format::Json => pretty(&outcomes)?,
        Format::Csv => {
            let mut s = String::from("id,passed,detail\n");
            for o in &outcomes {
                s += &format!("{},{},\"{}\"\n", o.id, o.passed, o.detail.replace('"', "'"));
            }
            s
        }
        Format::Svg => bail!("verify has no SVG output"),
    };
    emit(&a.common.out, &body)?;
    Ok(if outcomes.iter().all(|o| o.passed) {
        0
    } else {
        VERIFY_FAILED
    })
}

fn stats(a: &StatsArgs) -> Result<u8> {
    if !EXPERIMENTS.contains(&a.experiment.as_str()) {
        bail!(
            "unknown experiment {}; known: {}",
            a.experiment,
            EXPERIMENTS.join(", ")
        );
    }
    let exec = match a.threads {
        Some(0) => bail!("--threads must be positive"),
        Some(1) => Execution::Sequential,
        Some(t) => {
            set_threads(t)?;
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let params = ExperimentParams {
        n: a.n,
        reps: a.reps,
        samples: a.samples,
        r: a.r,
        k: a.k,
    };
    let report = run_experiment(&a.experiment, &params, a.common.seed, exec)?;
    let body = match a.format {
        Format::Json => pretty(&report)?,
        Format::Csv => report.to_csv(),
        Format::Svg => report
            .to_svg()
            .with_context(|| format!("{} has no histogram to plot", a.experiment))?,
    };
    emit(&a.common.out, &body)?;
    Ok(0)
}

#[cfg(feature = "parallel")]
fn set_threads(t: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()?;
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) -> Result<()> {
    Ok(())
}

fn frag(a: &FragArgs) -> Result<u8> {
    let t = build_fragmentation_tree(arity_of(a.arity)?, a.k, &mut stream(a.common.seed))?;
    emit(&a.common.out, &pretty(&t)?)?;
    Ok(0)
}

fn ball(a: &BallArgs) -> Result<u8> {
    let family: Family = a.family.into();
    let spine = sample_spine_tree(
        family.arity(),
        a.r,
        &mut stream(a.common.seed),
        DEFAULT_GW_CAP,
    )?;
    let m = infinite_map_ball(&spine.tree, a.r)?;
    let body = match pick_format(a.format, &a.common.out) {
        Format::Json => pretty(&json!({
            "radius": a.r,
            "spine": spine.spine,
            "map": m,
        }))?,
        f => render_map(&m, f)?,
    };
    emit(&a.common.out, &body)?;
    Ok(0)
}

fn passage(a: &PassageArgs) -> Result<u8> {
    let PassageOp::Eval {
        word,
        other,
        family,
        out,
    } = &a.op;
    let family: Family = (*family).into();
    let u: Word = word.parse()?;
    if !u.is_over(family.arity().degree() as u8) {
        bail!("word {word} uses letters outside the alphabet");
    }
    let mut v = match family {
        Family::Triangulation => json!({
            "family": family,
            "word": u,
            "gamma": gamma(&u),
            "type": tri_type(&u).values(),
            "root_distance": tri_root_distance(&u),
        }),
        Family::Quadrangulation => json!({
            "family": family,
            "word": u,
            "type": quad_type(&u).values(),
            "root_distance": quad_root_distance(&u),
            "literal": gamma_prime_literal(&u),
        }),
    };
    if let Some(o) = other {
        let o: Word = o.parse()?;
        let bound = match family {
            Family::Triangulation => gamma_pair(&u, &o),
            Family::Quadrangulation => gamma_prime_pair(&u, &o, QuadDistance::Automaton),
        }?;
        v["other"] = json!(o);
        v["pair_bound"] = json!(bound);
    }
    emit(out, &pretty(&v)?)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Sample(a) => sample(a, Format::Json),
        Cmd::Draw(a) => sample(a, Format::Svg),
        Cmd::Enumerate(a) => enumerate(a),
        Cmd::Count(a) => count(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Stats(a) => stats(a),
        Cmd::Frag(a) => frag(a),
        Cmd::Ball(a) => ball(a),
        Cmd::Passage(a) => passage(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
