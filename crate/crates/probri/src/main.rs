//! Command-line front end: orthogonality tables, Monte-Carlo estimates,
//! space building, event detection, and the benchmark harness.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use num_traits::ToPrimitive;

use probri::corpus::{self, StopwordSet, TimeSlicedCorpus};
use probri::detect::{self, DetectionParams};
use probri::format;
use probri::mc;
use probri::ortho;
use probri::pipeline::{run_detection, PipelineTiming};
use probri::ri::{GenStrategy, RSpec};
use probri::space::{build_spaces, SemanticSpace, SpaceConfig};

/// Seed fallback read when --seed is not given.
const SEED_ENV: &str = "PROBRI_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "probri",
    version,
    about = "Probabilistic random indexing: orthogonality analysis and semantic-shift event detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonality probabilities: a sweep table, or cutoff dimensions
    /// when --p-min is given.
    Ortho(OrthoArgs),
    /// Representation capacity N(n, r, K) sweep table.
    Capacity(CapacityArgs),
    /// Monte-Carlo orthogonality of a randomly chosen subset.
    Mc(McArgs),
    /// Ingest corpora and persist one semantic space per time slice.
    Build(BuildArgs),
    /// Suggest event-related words for a query across two slices.
    Detect(DetectArgs),
    /// Suggest related words within a single slice.
    DetectSingle(DetectSingleArgs),
    /// Angle shift of a word pair across two slices.
    Shift(ShiftArgs),
    /// Agreement of a random-indexed space with a one-hot baseline.
    Accuracy(AccuracyArgs),
    /// Wall-clock grid over strategies and window sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct OrthoArgs {
    /// Dimension or inclusive range, e.g. "40" or "2..200".
    #[arg(long, default_value = "2..200")]
    n: String,
    /// r values ("2" or "2,3,4"), or a distribution
    /// ("uniform:2,3,4,5,6" / "weights:2=0.5,6=0.5") for the expected
    /// probability.
    #[arg(long)]
    r: String,
    /// Sign alphabet size (1 or 2).
    #[arg(long, default_value_t = 2)]
    k: u8,
    /// Probability targets, e.g. "0.90,0.95,0.975"; switches to the cutoff
    /// table.
    #[arg(long)]
    p_min: Option<String>,
    /// Search bound for cutoff scans.
    #[arg(long, default_value_t = 1000)]
    n_max: u64,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    /// Dimension or inclusive range.
    #[arg(long, default_value = "1..60")]
    n: String,
    /// r values, e.g. "1,2".
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 2)]
    k: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    n: usize,
    /// r value or distribution.
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 1000)]
    subset_size: usize,
    /// Sample this many pairs instead of enumerating them.
    #[arg(long)]
    pairs: Option<u64>,
    /// Count (i, i) pairs in the denominator; exact-enumeration mode.
    #[arg(long)]
    include_self_pairs: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Slice inputs as label=path pairs, one document per line.
    #[arg(long, num_args = 1.., value_name = "LABEL=PATH")]
    slices: Vec<String>,
    /// JSON-lines input with {"text": ..., "slice": ...} records.
    #[arg(long)]
    jsonl: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    n: usize,
    /// r value or distribution (ignored for one-hot).
    #[arg(long, default_value = "uniform:2,3,4,5,6")]
    r: String,
    /// onehot | random | halfsplit.
    #[arg(long, default_value = "random")]
    strategy: String,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Stopword file (one word per line); the embedded English list is
    /// used when omitted.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Output directory for <label>.space files.
    #[arg(long)]
    out: PathBuf,
    /// Also write a <label>.json debug mirror per slice.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    pre: PathBuf,
    #[arg(long)]
    post: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 50)]
    kappa: usize,
    #[arg(long, default_value_t = 5)]
    top: usize,
    #[arg(long)]
    invert_freq_ratio: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DetectSingleArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 5)]
    top: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    pre: PathBuf,
    #[arg(long)]
    post: PathBuf,
    #[arg(long)]
    w1: String,
    #[arg(long)]
    w2: String,
}

#[derive(Args)]
struct AccuracyArgs {
    #[arg(long)]
    ri_pre: PathBuf,
    #[arg(long)]
    ri_post: PathBuf,
    #[arg(long)]
    bow_pre: PathBuf,
    #[arg(long)]
    bow_post: PathBuf,
    #[arg(long)]
    w1: String,
    #[arg(long)]
    w2: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, num_args = 1.., value_name = "LABEL=PATH")]
    slices: Vec<String>,
    #[arg(long)]
    jsonl: Option<PathBuf>,
    #[arg(long)]
    query: String,
    /// Strategy under test: "onehot", "random,n=12,r=6",
    /// "halfsplit,n=12,r=4", "random,n=12,r=uniform:2,3,4,5,6" (r last).
    /// Repeatable; defaults to the one-hot / fixed-r / uniform-r trio.
    #[arg(long = "strategy-spec")]
    strategy_specs: Vec<String>,
    /// Window sizes, e.g. "2,5,8".
    #[arg(long, default_value = "2,5,8")]
    windows: String,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 50)]
    kappa: usize,
    #[arg(long, default_value_t = 5)]
    top: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Ortho(args) => cmd_ortho(args),
        Command::Capacity(args) => cmd_capacity(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Build(args) => cmd_build(args),
        Command::Detect(args) => cmd_detect(args),
        Command::DetectSingle(args) => cmd_detect_single(args),
        Command::Shift(args) => cmd_shift(args),
        Command::Accuracy(args) => cmd_accuracy(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// ---------------------------------------------------------------------
// argument parsing helpers

fn parse_range(s: &str) -> Result<(u64, u64)> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().context("range start")?;
        let hi: u64 = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .context("range end")?;
        if lo > hi {
            bail!("empty range {s}");
        }
        Ok((lo, hi))
    } else {
        let v: u64 = s
            .trim()
            .parse()
            .with_context(|| format!("not a number: {s}"))?;
        Ok((v, v))
    }
}

fn parse_weight(s: &str) -> Result<Ratio<u64>> {
    let t = s.trim();
    let (int_part, frac_part) = match t.split_once('.') {
        Some((i, f)) => (i, f),
        None => (t, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        bail!("not a decimal weight: {s:?}");
    }
    if frac_part.len() > 18 {
        bail!("weight {s:?} has more than 18 fractional digits");
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        bail!("not a decimal weight: {s:?}");
    }
    let digits = format!("{int_part}{frac_part}");
    let num: u64 = digits.parse().with_context(|| format!("weight {s:?}"))?;
    Ok(Ratio::new(num, 10u64.pow(frac_part.len() as u32)))
}

fn parse_rspec(s: &str) -> Result<RSpec> {
    let t = s.trim();
    if let Some(body) = t.strip_prefix("uniform:") {
        let values = parse_support_list(body)?;
        return RSpec::uniform(values).map_err(|e| anyhow!(e));
    }
    if let Some(body) = t.strip_prefix("weights:") {
        let mut pairs = Vec::new();
        for item in body.split(',') {
            let (r, w) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("expected r=weight, got {item:?}"))?;
            pairs.push((
                r.trim().parse::<u32>().context("support value")?,
                parse_weight(w)?,
            ));
        }
        return RSpec::weighted(pairs).map_err(|e| anyhow!(e));
    }
    let r: u32 = t
        .parse()
        .with_context(|| format!("not an r value: {s:?}"))?;
    RSpec::fixed(r).map_err(|e| anyhow!(e))
}

fn parse_support_list(s: &str) -> Result<Vec<u32>> {
    let mut values = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if let Some((a, b)) = item.split_once('-') {
            let a: u32 = a.trim().parse().context("support range")?;
            let b: u32 = b.trim().parse().context("support range")?;
            values.extend(a..=b);
        } else {
            values.push(item.parse().context("support value")?);
        }
    }
    Ok(values)
}

/// `--r` for sweep commands: either a set of fixed r values or one
/// distribution.
enum RArg {
    Set(Vec<u64>),
    Dist(RSpec),
}

fn parse_r_arg(s: &str) -> Result<RArg> {
    let t = s.trim();
    if t.starts_with("uniform:") || t.starts_with("weights:") {
        Ok(RArg::Dist(parse_rspec(t)?))
    } else {
        let vals = t
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<u64>()
                    .with_context(|| format!("r value {v:?}"))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.is_empty() {
            bail!("empty --r");
        }
        Ok(RArg::Set(vals))
    }
}

fn parse_strategy(mode: &str, rspec: &str) -> Result<GenStrategy> {
    match mode {
        "onehot" => Ok(GenStrategy::OneHot),
        "random" => Ok(GenStrategy::RandomPlacement(parse_rspec(rspec)?)),
        "halfsplit" => Ok(GenStrategy::HalfSplit(parse_rspec(rspec)?)),
        other => bail!("unknown strategy {other:?} (expected onehot|random|halfsplit)"),
    }
}

/// Bench strategy spec: "onehot" or "<mode>,n=<int>,r=<rspec>" with r last.
fn parse_strategy_spec(s: &str) -> Result<(GenStrategy, usize)> {
    let t = s.trim();
    if t == "onehot" {
        return Ok((GenStrategy::OneHot, 0));
    }
    let (mode, rest) = t
        .split_once(',')
        .ok_or_else(|| anyhow!("expected <mode>,n=...,r=... in {s:?}"))?;
    let (prefix, rspec) = rest
        .split_once("r=")
        .ok_or_else(|| anyhow!("missing r= in strategy spec {s:?}"))?;
    let mut n = None;
    for field in prefix.split(',').filter(|f| !f.trim().is_empty()) {
        match field.trim().split_once('=') {
            Some(("n", v)) => n = Some(v.trim().parse::<usize>().context("n")?),
            _ => bail!("unexpected field {field:?} in strategy spec {s:?}"),
        }
    }
    let n = n.ok_or_else(|| anyhow!("missing n= in strategy spec {s:?}"))?;
    Ok((parse_strategy(mode, rspec)?, n))
}

fn parse_slices(items: &[String]) -> Result<Vec<(String, PathBuf)>> {
    items
        .iter()
        .map(|item| {
            let (label, path) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("expected label=path, got {item:?}"))?;
            if label.is_empty() {
                bail!("empty slice label in {item:?}");
            }
            Ok((label.to_string(), PathBuf::from(path)))
        })
        .collect()
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .parse()
            .with_context(|| format!("{SEED_ENV} must be an integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load_stopwords(path: &Option<PathBuf>) -> Result<StopwordSet> {
    match path {
        Some(p) => StopwordSet::from_file(p).map_err(|e| anyhow!(e)),
        None => Ok(StopwordSet::english()),
    }
}

fn ingest(
    slices: &[String],
    jsonl: &Option<PathBuf>,
    stopwords: &StopwordSet,
) -> Result<TimeSlicedCorpus> {
    if slices.is_empty() && jsonl.is_none() {
        bail!("no input: give --slices label=path pairs or --jsonl");
    }
    if !slices.is_empty() && jsonl.is_some() {
        bail!("use either --slices or --jsonl, not both");
    }
    let report = if let Some(path) = jsonl {
        corpus::ingest_jsonl(path, stopwords)?
    } else {
        corpus::ingest_lines(&parse_slices(slices)?, stopwords)?
    };
    if report.skipped_lines > 0 {
        log::warn!("skipped {} non-UTF-8 input lines", report.skipped_lines);
    }
    Ok(report.corpus)
}

/// Echo the fully resolved configuration so a run can be reproduced
/// exactly. Goes to stderr so CSV on stdout stays machine-readable.
fn echo_config(value: serde_json::Value) {
    eprintln!("config: {value}");
}

// ---------------------------------------------------------------------
// CSV output

struct CsvSink {
    out: Box<dyn Write>,
}

impl CsvSink {
    fn create(path: &Option<PathBuf>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(
                fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        Ok(Self { out })
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<()> {
        let line = fields
            .into_iter()
            .map(|f| quote_csv(&f))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(self.out, "{line}")?;
        Ok(())
    }
}

fn quote_csv(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

// ---------------------------------------------------------------------
// subcommands

fn cmd_ortho(args: OrthoArgs) -> Result<()> {
    let (n_lo, n_hi) = parse_range(&args.n)?;
    let r_arg = parse_r_arg(&args.r)?;
    if args.k != 1 && args.k != 2 {
        bail!("--k must be 1 or 2");
    }
    echo_config(serde_json::json!({
        "subcommand": "ortho", "n": args.n, "r": args.r, "k": args.k,
        "p_min": args.p_min, "n_max": args.n_max,
    }));
    let mut csv = CsvSink::create(&args.out)?;

    if let Some(p_min_list) = &args.p_min {
        let rs = match &r_arg {
            RArg::Set(v) => v.clone(),
            RArg::Dist(_) => bail!("cutoff tables need fixed r values in --r"),
        };
        if args.k != 2 {
            bail!("cutoff tables are defined for K=2");
        }
        csv.row(["r", "p_min", "n", "capacity"].map(String::from))?;
        for &r in &rs {
            for p_str in p_min_list.split(',') {
                let p_str = p_str.trim();
                let target = ortho::parse_decimal_rational(p_str).map_err(|e| anyhow!(e))?;
                match ortho::cutoff_n(r, &target, args.n_max).map_err(|e| anyhow!(e))? {
                    Some(cut) => csv.row([
                        r.to_string(),
                        p_str.to_string(),
                        cut.n.to_string(),
                        cut.capacity.to_string(),
                    ])?,
                    None => csv.row([
                        r.to_string(),
                        p_str.to_string(),
                        format!(">{}", args.n_max),
                        String::new(),
                    ])?,
                }
            }
        }
        return Ok(());
    }

    csv.row(["n", "r", "k", "probability"].map(String::from))?;
    match r_arg {
        RArg::Set(rs) => {
            for n in n_lo..=n_hi {
                for &r in &rs {
                    if r > n {
                        continue;
                    }
                    let p = if args.k == 1 {
                        ortho::p_ortho_k1(r, n).map_err(|e| anyhow!(e))?.as_f64()
                    } else {
                        ortho::p_ortho(r, r, n).map_err(|e| anyhow!(e))?.as_f64()
                    };
                    csv.row([
                        n.to_string(),
                        r.to_string(),
                        args.k.to_string(),
                        p.to_string(),
                    ])?;
                }
            }
        }
        RArg::Dist(spec) => {
            if args.k != 2 {
                bail!("expected probabilities over a distribution are defined for K=2");
            }
            for n in n_lo..=n_hi {
                if u64::from(spec.max_r()) > n {
                    continue;
                }
                let e = ortho::expected_p_ortho(&spec, n).map_err(|e| anyhow!(e))?;
                csv.row([
                    n.to_string(),
                    spec.to_string(),
                    args.k.to_string(),
                    e.to_f64().unwrap_or(f64::NAN).to_string(),
                ])?;
            }
        }
    }
    Ok(())
}

fn cmd_capacity(args: CapacityArgs) -> Result<()> {
    let (n_lo, n_hi) = parse_range(&args.n)?;
    let rs = match parse_r_arg(&args.r)? {
        RArg::Set(v) => v,
        RArg::Dist(_) => bail!("capacity sweeps need fixed r values in --r"),
    };
    echo_config(serde_json::json!({
        "subcommand": "capacity", "n": args.n, "r": args.r, "k": args.k,
    }));
    let mut csv = CsvSink::create(&args.out)?;
    csv.row(["n", "r", "k", "capacity"].map(String::from))?;
    for n in n_lo..=n_hi {
        for &r in &rs {
            if r > n {
                continue;
            }
            let cap = ortho::capacity(n, r, args.k).map_err(|e| anyhow!(e))?;
            csv.row([
                n.to_string(),
                r.to_string(),
                args.k.to_string(),
                cap.to_string(),
            ])?;
        }
    }
    Ok(())
}

fn cmd_mc(args: McArgs) -> Result<()> {
    use rand::SeedableRng;
    let spec = parse_rspec(&args.r)?;
    let seed = resolve_seed(args.seed)?;
    echo_config(serde_json::json!({
        "subcommand": "mc", "n": args.n, "r": spec.to_string(),
        "subset_size": args.subset_size, "pairs": args.pairs,
        "include_self_pairs": args.include_self_pairs, "seed": seed,
    }));
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut csv = CsvSink::create(&args.out)?;
    csv.row(["samples", "estimate", "std_error"].map(String::from))?;
    if args.pairs.is_none() && args.subset_size <= mc::EXHAUSTIVE_PAIR_LIMIT {
        let series = mc::mc_running_series(
            args.n,
            &spec,
            args.subset_size,
            args.include_self_pairs,
            &mut rng,
        )
        .map_err(|e| anyhow!(e))?;
        for point in series {
            csv.row([
                point.samples.to_string(),
                point.estimate.to_string(),
                point.std_error.to_string(),
            ])?;
        }
    } else {
        let est = mc::mc_subset_ortho(
            args.n,
            &spec,
            args.subset_size,
            args.pairs,
            args.include_self_pairs,
            &mut rng,
        )
        .map_err(|e| anyhow!(e))?;
        csv.row([
            args.subset_size.to_string(),
            est.estimate.to_string(),
            est.std_error.to_string(),
        ])?;
    }
    Ok(())
}

fn cmd_build(args: BuildArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let stop = load_stopwords(&args.stopwords)?;
    let corpus = ingest(&args.slices, &args.jsonl, &stop)?;
    let strategy = parse_strategy(&args.strategy, &args.r)?;
    let config = SpaceConfig::new(args.n, strategy, args.window, seed).map_err(|e| anyhow!(e))?;
    echo_config(serde_json::json!({
        "subcommand": "build", "slices": args.slices, "jsonl": args.jsonl,
        "n": args.n, "r": args.r, "strategy": args.strategy,
        "window": args.window, "seed": seed, "out": args.out,
    }));

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let start = Instant::now();
    let spaces = build_spaces(&corpus, &config).map_err(|e| {
        anyhow!(e).context("build failed (a capacity error means n or r is too small for |W|)")
    })?;
    let built = start.elapsed();
    for space in &spaces {
        let path = args.out.join(format!("{}.space", space.slice_label()));
        format::persist(space, &path).map_err(|e| anyhow!(e))?;
        if args.json {
            let json_path = args.out.join(format!("{}.json", space.slice_label()));
            format::export_json(space, &json_path).map_err(|e| anyhow!(e))?;
        }
        if space.is_empty() {
            log::warn!("slice {:?} has an empty vocabulary", space.slice_label());
        }
        println!(
            "slice {}: |W|={} tokens={} n={} -> {}",
            space.slice_label(),
            space.len(),
            space.total_tokens(),
            space.config().dim,
            path.display()
        );
    }
    println!("built {} slice(s) in {:.3} ms", spaces.len(), ms(built));
    Ok(())
}

fn load_space(path: &Path) -> Result<SemanticSpace> {
    format::load(path).map_err(|e| anyhow!(e).context(format!("loading {}", path.display())))
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let pre = load_space(&args.pre)?;
    let post = load_space(&args.post)?;
    let params = DetectionParams::new(args.query.clone(), args.kappa, args.top)
        .map_err(|e| anyhow!(e))?
        .with_invert_freq_ratio(args.invert_freq_ratio);
    echo_config(serde_json::json!({
        "subcommand": "detect", "pre": args.pre, "post": args.post,
        "query": params.query, "kappa": params.kappa, "top": params.top,
        "invert_freq_ratio": params.invert_freq_ratio,
        "pre_seed": pre.config().seed, "post_seed": post.config().seed,
    }));
    let rows = detect::suggest(&pre, &post, &params).map_err(|e| anyhow!(e))?;

    println!(
        "{:<4} {:<20} {:>10} {:>8} {:>9} {:>9} {:>10} {:>10} {:>9} {:>9}",
        "rank",
        "word",
        "S",
        "delta",
        "rank_pre",
        "rank_post",
        "f_pre",
        "f_post",
        "theta_pre",
        "theta_post"
    );
    for (i, row) in rows.iter().enumerate() {
        println!(
            "{:<4} {:<20} {:>10.5} {:>8.4} {:>9} {:>9} {:>10.6} {:>10.6} {:>9.4} {:>9.4}",
            i + 1,
            row.word,
            row.score,
            row.delta,
            row.rank_pre,
            row.rank_post,
            row.freq_pre,
            row.freq_post,
            row.theta_pre,
            row.theta_post
        );
    }
    if let Some(path) = &args.out {
        let mut csv = CsvSink::create(&Some(path.clone()))?;
        write_suggestion_csv(&mut csv, &rows)?;
    }
    Ok(())
}

fn write_suggestion_csv(csv: &mut CsvSink, rows: &[detect::SuggestionRow]) -> Result<()> {
    csv.row(
        [
            "word",
            "S",
            "delta",
            "rank_pre",
            "rank_post",
            "f_pre",
            "f_post",
            "theta_pre",
            "theta_post",
        ]
        .map(String::from),
    )?;
    for row in rows {
        csv.row([
            row.word.clone(),
            row.score.to_string(),
            row.delta.to_string(),
            row.rank_pre.to_string(),
            row.rank_post.to_string(),
            row.freq_pre.to_string(),
            row.freq_post.to_string(),
            row.theta_pre.to_string(),
            row.theta_post.to_string(),
        ])?;
    }
    Ok(())
}

fn cmd_detect_single(args: DetectSingleArgs) -> Result<()> {
    let space = load_space(&args.space)?;
    echo_config(serde_json::json!({
        "subcommand": "detect-single", "space": args.space,
        "query": args.query, "top": args.top, "seed": space.config().seed,
    }));
    let rows =
        detect::suggest_single_slice(&space, &args.query, args.top).map_err(|e| anyhow!(e))?;
    println!(
        "{:<4} {:<20} {:>10} {:>10} {:>9}",
        "rank", "word", "score", "f", "theta"
    );
    for (i, row) in rows.iter().enumerate() {
        println!(
            "{:<4} {:<20} {:>10.6} {:>10.6} {:>9.4}",
            i + 1,
            row.word,
            row.score,
            row.freq,
            row.theta
        );
    }
    if let Some(path) = &args.out {
        let mut csv = CsvSink::create(&Some(path.clone()))?;
        csv.row(["word", "score", "f", "theta"].map(String::from))?;
        for row in &rows {
            csv.row([
                row.word.clone(),
                row.score.to_string(),
                row.freq.to_string(),
                row.theta.to_string(),
            ])?;
        }
    }
    Ok(())
}

fn cmd_shift(args: ShiftArgs) -> Result<()> {
    let pre = load_space(&args.pre)?;
    let post = load_space(&args.post)?;
    echo_config(serde_json::json!({
        "subcommand": "shift", "pre": args.pre, "post": args.post,
        "w1": args.w1, "w2": args.w2,
    }));
    let theta_pre = pre
        .angle_between(&args.w1, &args.w2)
        .map_err(|e| anyhow!(e))?;
    let theta_post = post
        .angle_between(&args.w1, &args.w2)
        .map_err(|e| anyhow!(e))?;
    let shift = detect::semantic_shift(&pre, &post, &args.w1, &args.w2).map_err(|e| anyhow!(e))?;
    println!("theta_pre={theta_pre} theta_post={theta_post} shift={shift}");
    Ok(())
}

fn cmd_accuracy(args: AccuracyArgs) -> Result<()> {
    let ri_pre = load_space(&args.ri_pre)?;
    let ri_post = load_space(&args.ri_post)?;
    let bow_pre = load_space(&args.bow_pre)?;
    let bow_post = load_space(&args.bow_post)?;
    echo_config(serde_json::json!({
        "subcommand": "accuracy", "w1": args.w1, "w2": args.w2,
        "ri_pre": args.ri_pre, "ri_post": args.ri_post,
        "bow_pre": args.bow_pre, "bow_post": args.bow_post,
    }));
    let acc =
        detect::accuracy_vs_baseline(&ri_pre, &ri_post, &bow_pre, &bow_post, &args.w1, &args.w2)
            .map_err(|e| anyhow!(e))?;
    println!("accuracy={acc}");
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let stop = load_stopwords(&args.stopwords)?;
    let ingest_start = Instant::now();
    let corpus = ingest(&args.slices, &args.jsonl, &stop)?;
    eprintln!(
        "ingest_ms={:.3} (file I/O, excluded from the grid)",
        ms(ingest_start.elapsed())
    );

    let labels: Vec<String> = corpus.labels().map(String::from).collect();
    if labels.len() < 2 {
        bail!("bench needs two slices, found {}", labels.len());
    }
    let (pre_label, post_label) = (labels[0].clone(), labels[1].clone());

    let specs: Vec<String> = if args.strategy_specs.is_empty() {
        vec![
            "onehot".into(),
            "random,n=12,r=6".into(),
            "random,n=12,r=uniform:2,3,4,5,6".into(),
        ]
    } else {
        args.strategy_specs.clone()
    };
    let windows: Vec<usize> = args
        .windows
        .split(',')
        .map(|w| w.trim().parse::<usize>().context("window"))
        .collect::<Result<Vec<_>>>()?;
    let seed = resolve_seed(args.seed)?;
    if args.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    if args.repeats == 1 {
        log::warn!("repeats=1: single-sample timings are noisy");
    }
    echo_config(serde_json::json!({
        "subcommand": "bench", "slices": args.slices, "query": args.query,
        "strategies": specs, "windows": windows, "repeats": args.repeats,
        "kappa": args.kappa, "top": args.top, "seed": seed, "threads": 1,
    }));

    let params =
        DetectionParams::new(args.query.clone(), args.kappa, args.top).map_err(|e| anyhow!(e))?;
    let mut csv = CsvSink::create(&args.out)?;
    csv.row(
        [
            "strategy",
            "window",
            "vocab_pre",
            "vocab_post",
            "dim",
            "repeats",
            "mean_ms",
            "std_ms",
        ]
        .map(String::from),
    )?;
    for spec_str in &specs {
        let (strategy, n) = parse_strategy_spec(spec_str)?;
        for &window in &windows {
            let config = SpaceConfig::new(n.max(1), strategy.clone(), window, seed)
                .map_err(|e| anyhow!(e))?;
            let mut times = Vec::with_capacity(args.repeats);
            let mut sizes = (0usize, 0usize, 0usize);
            for _ in 0..args.repeats {
                let out = run_detection(&corpus, &pre_label, &post_label, &config, &params)
                    .map_err(|e| anyhow!(e))?;
                let timing: PipelineTiming = out.timing;
                times.push(ms(timing.total()));
                sizes = (out.vocab_pre, out.vocab_post, out.dim);
            }
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let std = if times.len() > 1 {
                let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>()
                    / (times.len() - 1) as f64;
                var.sqrt().to_string()
            } else {
                String::new()
            };
            csv.row([
                spec_str.clone(),
                window.to_string(),
                sizes.0.to_string(),
                sizes.1.to_string(),
                sizes.2.to_string(),
                args.repeats.to_string(),
                format!("{mean:.3}"),
                std,
            ])?;
        }
    }
    Ok(())
}
