//! The `ramsey-balance` command line.
//!
//! Every command writes one JSON document (or a CSV table) with an embedded
//! run manifest. Outputs depend only on the arguments, seeds and input
//! files, so repeated runs are byte-identical unless `--timing` is given.
//!
//! Exit codes: 0 pass, 1 a checked property failed, 2 usage or I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::blowup::{find_homogeneous_blowup, FinderConfig};
use crate::census::{census_k4, census_k4_reference};
use crate::constructions::{make_bipartite_mindeg, make_multicolour_cycle, make_pk, make_random, make_split};
use crate::error::{Error, Result};
use crate::graph::{balance_profile, ColouredCompleteGraph, Rational};
use crate::io::{bipartite_from_json, bipartite_to_json, graph_from_json, graph_to_json, is_bipartite_json, read_json};
use crate::multicolour::{min_unibalanced_subgraph_size, sample_unibalanced_subset, MinUnibalanced, SamplerConfig, DEFAULT_SUBSET_BUDGET};
use crate::patterns::pattern_by_name;
use crate::verify::{run_suite, sample_locally_balanced, SUITES};

#[derive(Parser, Debug)]
#[command(name = "ramsey-balance", version, about = "Locally balanced colourings: generators, census, blow-up search and verification suites")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Add wall-clock time to the manifest (outputs stop being reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a colouring from one of the built-in families.
    Generate(GenerateArgs),
    /// Count every 2-coloured K4 class (or M1 copies of a bipartite colouring).
    Census(CensusArgs),
    /// Search for a homogeneous blow-up of a named pattern.
    FindBlowup(FindBlowupArgs),
    /// Sample a vertex subset inducing a unibalanced subgraph.
    SampleUnibalanced(SampleArgs),
    /// Smallest vertex subset inducing a unibalanced subgraph.
    MinUnibalanced(MinArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Census and blow-up search over a grid of balanced random hosts.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pk,
    Split,
    Mcycle,
    Random,
    Bipartite,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Family parameters as `key=value` pairs: pk `k`; split `a,b,flips`;
    /// mcycle `l,m`; random `n,r`; bipartite `n,eps`.
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the compact `rows` layout.
    #[arg(long)]
    pub compact: bool,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    pub file: PathBuf,
    /// Use the O(n^4) enumeration instead of the counting formulas.
    #[arg(long)]
    pub reference: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FindBlowupArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub pattern: String,
    #[arg(long, default_value_t = 2)]
    pub target_t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Copy density `c`, as a fraction or decimal.
    #[arg(long, default_value = "1/32")]
    pub c: String,
    #[arg(long, default_value_t = 64)]
    pub retries: usize,
    /// Largest number of subsets for the exact star search.
    #[arg(long, default_value_t = 200_000)]
    pub budget: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub eps: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub max_draws: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MinArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub cap: usize,
    /// Largest number of subsets tested at one size.
    #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
    pub budget: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: String,
    /// Treat record-only findings as failures.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// Comma-separated balance levels, e.g. `0.2,1/4`.
    #[arg(long, default_value = "")]
    pub eps: String,
    /// Comma-separated host sizes.
    #[arg(long, default_value = "")]
    pub n: String,
    #[arg(long, default_value = "C4")]
    pub pattern: String,
    /// Comma-separated seeds or a range `a..b`.
    #[arg(long, default_value = "0")]
    pub seeds: String,
    #[arg(long, default_value_t = 8)]
    pub retries: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Provenance embedded in every output.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub seeds: Vec<u64>,
    /// SHA-256 of each input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Parses `a/b`, an integer, or a decimal such as `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a rational"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10i64.pow(frac.len() as u32);
    let int_part: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    if int_part < 0 || int.starts_with('-') {
        return Err(bad());
    }
    Ok(Rational::new(int_part * den + frac_part, den))
}

fn parse_params(s: &str) -> Result<BTreeMap<String, String>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::InvalidParameter(format!("parameter {p:?} is not key=value")))
        })
        .collect()
}

fn param_usize(params: &BTreeMap<String, String>, key: &str, default: Option<usize>) -> Result<usize> {
    match params.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{key}={v} is not a nonnegative integer"))),
        None => default.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}"))),
    }
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(item).collect()
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse seeds {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    parse_list(s, |p| p.parse().map_err(|_| bad()))
}

/// How a command finished when it did not error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
}

struct Context {
    args: Vec<String>,
    timing: bool,
    started: Instant,
}

impl Context {
    fn manifest(&self, command: &str, seeds: Vec<u64>, inputs: &[&Path]) -> Result<RunManifest> {
        let mut hashes = BTreeMap::new();
        for p in inputs {
            hashes.insert(p.display().to_string(), sha256_file(p)?);
        }
        Ok(RunManifest {
            command: command.to_string(),
            args: self.args.clone(),
            seeds,
            inputs: hashes,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: self.timing.then(|| self.started.elapsed().as_millis() as u64),
        })
    }
}

fn emit(value: &Value, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_manifest(mut value: Value, manifest: &RunManifest) -> Result<Value> {
    value
        .as_object_mut()
        .expect("outputs are JSON objects")
        .insert("manifest".into(), serde_json::to_value(manifest)?);
    Ok(value)
}

fn load_graph(path: &Path) -> Result<ColouredCompleteGraph> {
    graph_from_json(&read_json(path)?)
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `stdout` and diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let ctx = Context {
        args: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        timing: cli.timing,
        started: Instant::now(),
    };
    match dispatch(&cli.command, &ctx, stdout) {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(Error::InvalidWitness(msg)) => {
            eprintln!("error: invalid witness: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: &Command, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    match command {
        Command::Generate(a) => generate(a, ctx, stdout),
        Command::Census(a) => census(a, ctx, stdout),
        Command::FindBlowup(a) => find_blowup(a, ctx, stdout),
        Command::SampleUnibalanced(a) => sample(a, ctx, stdout),
        Command::MinUnibalanced(a) => min_unibalanced(a, ctx, stdout),
        Command::Verify(a) => verify(a, ctx, stdout),
        Command::Experiment(a) => experiment(a, ctx, stdout),
    }
}

fn generate(a: &GenerateArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let p = parse_params(&a.params)?;
    let value = match a.family {
        Family::Pk => graph_to_json(&make_pk(param_usize(&p, "k", None)?)?, a.compact),
        Family::Split => {
            let g = make_split(param_usize(&p, "a", None)?, param_usize(&p, "b", None)?, param_usize(&p, "flips", Some(0))?, a.seed)?;
            graph_to_json(&g, a.compact)
        }
        Family::Mcycle => graph_to_json(&make_multicolour_cycle(param_usize(&p, "l", None)?, param_usize(&p, "m", None)?)?, a.compact),
        Family::Random => {
            let r = param_usize(&p, "r", Some(2))?;
            let r = u8::try_from(r).map_err(|_| Error::InvalidParameter(format!("r = {r} is too large")))?;
            graph_to_json(&make_random(param_usize(&p, "n", None)?, r, a.seed)?, a.compact)
        }
        Family::Bipartite => {
            let eps = parse_rational(p.get("eps").ok_or_else(|| Error::InvalidParameter("missing parameter eps".into()))?)?;
            bipartite_to_json(&make_bipartite_mindeg(param_usize(&p, "n", None)?, eps, a.seed)?)
        }
    };
    let manifest = ctx.manifest("generate", vec![a.seed], &[])?;
    emit(&with_manifest(value, &manifest)?, a.out.as_deref(), stdout)?;
    Ok(Status::Pass)
}

fn census(a: &CensusArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let input = read_json(&a.file)?;
    let value = if is_bipartite_json(&input) {
        let b = bipartite_from_json(&input)?;
        json!({
            "x": b.x().len(),
            "y": b.y().len(),
            "M1": b.count_m1(),
        })
    } else {
        let g = graph_from_json(&input)?;
        let c = if a.reference { census_k4_reference(&g)? } else { census_k4(&g)? };
        json!({
            "n": c.n,
            "classes": c.k4_counts,
            "C4": c.count_c4,
            "C4bar": c.count_c4bar,
            "P3o": c.count_p3o,
            "totalQuadruples": c.total_quadruples,
        })
    };
    let manifest = ctx.manifest("census", Vec::new(), &[&a.file])?;
    emit(&with_manifest(value, &manifest)?, a.output.json.as_deref(), stdout)?;
    Ok(Status::Pass)
}

fn find_blowup(a: &FindBlowupArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let g = load_graph(&a.file)?;
    let h = pattern_by_name(&a.pattern)?;
    let config = FinderConfig {
        c: parse_rational(&a.c)?,
        seed: a.seed,
        max_partition_retries: a.retries,
        subset_search_budget: a.budget,
        target_t: a.target_t,
        ..FinderConfig::default()
    };
    let res = find_homogeneous_blowup(&g, &h, &config)?;
    let mut value = serde_json::to_value(&res)?;
    value["pattern"] = json!(a.pattern);
    value["targetT"] = json!(a.target_t);
    let manifest = ctx.manifest("find-blowup", vec![a.seed], &[&a.file])?;
    emit(&with_manifest(value, &manifest)?, a.output.json.as_deref(), stdout)?;
    Ok(Status::Pass)
}

fn sample(a: &SampleArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let g = load_graph(&a.file)?;
    let config = SamplerConfig::new(parse_rational(&a.eps)?, g.r(), a.max_draws, a.seed)?;
    let out = sample_unibalanced_subset(&g, &config)?;
    if !out.host_balanced {
        eprintln!("warning: host is not locally {}-balanced", config.eps);
    }
    let value = json!({
        "S": out.found.as_ref().map(|f| &f.subset),
        "draws": out.draws_made,
        "found": out.found.is_some(),
        "C": out.cap,
        "zeta": out.zeta,
        "hostBalanced": out.host_balanced,
    });
    let manifest = ctx.manifest("sample-unibalanced", vec![a.seed], &[&a.file])?;
    emit(&with_manifest(value, &manifest)?, a.output.json.as_deref(), stdout)?;
    Ok(Status::Pass)
}

fn min_unibalanced(a: &MinArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let g = load_graph(&a.file)?;
    let value = match min_unibalanced_subgraph_size(&g, a.cap, a.budget)? {
        MinUnibalanced::Size(k) => json!({"minSize": k, "cap": a.cap}),
        MinUnibalanced::ExceedsCap(c) => json!({"minSize": null, "exceedsCap": true, "cap": c}),
    };
    let manifest = ctx.manifest("min-unibalanced", Vec::new(), &[&a.file])?;
    emit(&with_manifest(value, &manifest)?, a.output.json.as_deref(), stdout)?;
    Ok(Status::Pass)
}

fn verify(a: &VerifyArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    if !SUITES.contains(&a.suite.as_str()) {
        return Err(Error::InvalidParameter(format!("unknown suite {:?}; expected one of {}", a.suite, SUITES.join(", "))));
    }
    let mut report = run_suite(&a.suite, a.seed, a.strict)?;
    if ctx.timing {
        report.runtime_ms = Some(report.elapsed.as_millis() as u64);
    }
    let manifest = ctx.manifest("verify", vec![a.seed], &[])?;
    emit(&with_manifest(serde_json::to_value(&report)?, &manifest)?, a.output.json.as_deref(), stdout)?;
    eprintln!(
        "{}: {} ({} instances, {} failures)",
        report.suite,
        if report.pass { "pass" } else { "FAIL" },
        report.instances,
        report.failures.len()
    );
    Ok(if report.pass { Status::Pass } else { Status::Fail })
}

/// One cell of [`experiment_frontier`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrontierRow {
    pub eps: String,
    pub n: usize,
    pub seed: u64,
    pub sample_seed: Option<u64>,
    pub epsilon_local: Option<String>,
    pub c4: Option<u64>,
    pub c4bar: Option<u64>,
    pub p3o: Option<u64>,
    pub copies: Option<usize>,
    pub t: Option<usize>,
    pub paper_target_t: Option<f64>,
    pub error: Option<String>,
}

/// Largest host size for the census-based frontier cells.
pub const FRONTIER_MAX_N: usize = 512;

/// For every `(eps, n, seed)`: a locally `eps`-balanced random host (first
/// accepted seed at or after `seed`), its census, and the largest homogeneous
/// blow-up of `pattern` found. Cell errors are recorded in the row.
pub fn experiment_frontier(eps_list: &[Rational], n_list: &[usize], pattern: &str, seeds: &[u64], retries: usize) -> Result<Vec<FrontierRow>> {
    let h = pattern_by_name(pattern)?;
    let cells: Vec<(Rational, usize, u64)> = eps_list
        .iter()
        .flat_map(|&e| n_list.iter().flat_map(move |&n| seeds.iter().map(move |&s| (e, n, s))))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(eps, n, seed)| {
            let mut row = FrontierRow {
                eps: eps.to_string(),
                n,
                seed,
                sample_seed: None,
                epsilon_local: None,
                c4: None,
                c4bar: None,
                p3o: None,
                copies: None,
                t: None,
                paper_target_t: None,
                error: None,
            };
            let mut cell = || -> Result<()> {
                if n > FRONTIER_MAX_N {
                    return Err(Error::InvalidParameter(format!("n = {n} exceeds {FRONTIER_MAX_N}")));
                }
                let (g, used) = sample_locally_balanced(n, h.r(), eps, seed)?;
                row.sample_seed = Some(used);
                row.epsilon_local = Some(balance_profile(&g).epsilon_local.to_string());
                if g.r() == 2 && n >= 4 {
                    let c = census_k4(&g)?;
                    row.c4 = Some(c.count_c4);
                    row.c4bar = Some(c.count_c4bar);
                    row.p3o = Some(c.count_p3o);
                }
                if n >= h.l() {
                    let config = FinderConfig {
                        seed,
                        max_partition_retries: retries.max(1),
                        target_t: usize::MAX,
                        edge_budget: 500_000,
                        ..FinderConfig::default()
                    };
                    let res = find_homogeneous_blowup(&g, &h, &config)?;
                    row.copies = Some(res.copies);
                    row.t = Some(res.t);
                    row.paper_target_t = Some(res.paper_target_t);
                } else {
                    row.t = Some(0);
                }
                Ok(())
            };
            if let Err(e) = cell() {
                row.error = Some(e.to_string());
            }
            row
        })
        .collect();
    Ok(rows)
}

fn experiment(a: &ExperimentArgs, ctx: &Context, stdout: &mut dyn Write) -> Result<Status> {
    let eps_list = parse_list(&a.eps, parse_rational)?;
    if eps_list.iter().any(|e| *e <= Rational::zero()) {
        return Err(Error::InvalidParameter("eps values must be positive".into()));
    }
    let n_list = parse_list(&a.n, |s| {
        s.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad n {s:?}")))
    })?;
    let seeds = parse_seeds(&a.seeds)?;
    let rows = experiment_frontier(&eps_list, &n_list, &a.pattern, &seeds, a.retries)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for row in &rows {
            w.serialize(row).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        }
        w.flush()?;
    }
    let manifest = ctx.manifest("experiment", seeds.clone(), &[])?;
    let value = json!({"pattern": a.pattern, "rows": rows});
    emit(&with_manifest(value, &manifest)?, a.output.json.as_deref(), stdout)?;
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/6").unwrap(), Rational::new(1, 6));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational(".1").unwrap(), Rational::new(1, 10));
        for bad in ["1/0", "x", "-0.5", "0.1.2", ""] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn params_and_seeds() {
        let p = parse_params("a=3, b=4,flips=2").unwrap();
        assert_eq!(param_usize(&p, "b", None).unwrap(), 4);
        assert_eq!(param_usize(&p, "z", Some(7)).unwrap(), 7);
        assert!(param_usize(&p, "z", None).is_err());
        assert!(parse_params("a").is_err());
        assert_eq!(parse_seeds("2..5").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_seeds("1,9").unwrap(), vec![1, 9]);
    }

    #[test]
    fn empty_and_tiny_frontiers() {
        assert!(experiment_frontier(&[], &[8], "C4", &[0], 2).unwrap().is_empty());
        let rows = experiment_frontier(&[Rational::new(1, 4)], &[4], "C4", &[0, 1], 2).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!(r.error.is_some() || r.t.is_some_and(|t| t <= 1), "{r:?}");
        }
    }
}
