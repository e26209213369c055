//! Command-line front end behind the `skewkit` binary.
//!
//! Exit codes: 0 certified or target reached, 1 usage or validation error,
//! 2 refuted, 3 search ended without reaching its target.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{bounds_table, write_csv, Target};
use crate::embeddings::{bilinear_map_by_name, by_name, pair_by_name, parametric_curve, Basis, Embedding};
use crate::error::{Error, Result};
use crate::search::{run_search, Family, Init, SearchConfig, SearchResult, SearchStatus};
use crate::verify::{
    certify_bilinear_sphere, gauss_pair_differential_check, verify_skew_pair,
    verify_totally_skew, write_margin_field, SamplingPlan, SkewReport, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_SEARCH_INCOMPLETE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "skewkit", version, about = "Totally skew embeddings: certify, refute, bound, search")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key=value file with the same keys as the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample an embedding and export points.
    Construct(ConstructArgs),
    /// Sampled (or exact, with --certify) total-skewness check.
    Verify(VerifyArgs),
    /// Check that two submanifolds form a totally skew pair.
    Pair(PairArgs),
    /// Dimension bounds table.
    Bounds(BoundsArgs),
    /// Maximin margin search over a parametric curve family.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MapKind {
    Convolution,
    Complex,
    Quaternion,
}

#[derive(Debug, Args, Serialize)]
struct FamilyArgs {
    /// cubic, circle-quadratic, planar-circle, complex-cubic-disk,
    /// bilinear-sphere, sphere-pair.
    #[arg(long)]
    family: String,
    /// Sphere dimension for convolution bilinear spheres.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "convolution")]
    map: MapKind,
    /// Complex dimension for the complex convolution map.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
}

impl FamilyArgs {
    fn catalog_name(&self) -> Result<String> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for --family {}", self.family)))
        };
        Ok(match self.family.as_str() {
            "bilinear-sphere" => match self.map {
                MapKind::Convolution => format!("bilinear-sphere:n={}", need(self.n, "n")?),
                MapKind::Complex => format!("bilinear-sphere:complex:l={}", need(self.l, "l")?),
                MapKind::Quaternion => "bilinear-sphere:quaternion".to_string(),
            },
            "sphere-pair" => format!("sphere-pair:{},{}", need(self.n1, "n1")?, need(self.n2, "n2")?),
            other => other.to_string(),
        })
    }
}

#[derive(Debug, Args, Serialize)]
struct ConstructArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 32)]
    grid: usize,
    /// Output CSV of grid points and their images.
    #[arg(long)]
    emit: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct PlanArgs {
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Lowest pairs to polish by local descent.
    #[arg(long, default_value_t = 0)]
    refine: usize,
}

impl PlanArgs {
    fn plan(&self) -> Result<SamplingPlan> {
        Ok(SamplingPlan::new(self.grid, self.random, self.delta, self.seed)?.with_refine(self.refine))
    }
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Catalog name, or `parametric` together with --coeffs.
    #[arg(long)]
    embedding: String,
    /// Coefficient file (search result JSON, or {basis, ambient, coefficients}).
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[command(flatten)]
    plan: PlanArgs,
    /// For bilinear spheres: certify from the symmetric-nonsingular criterion.
    #[arg(long)]
    certify: bool,
    /// Samples for the nonsingularity margin used by --certify.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write every admissible grid pair with its margin.
    #[arg(long)]
    margins_csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct PairArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    plan: PlanArgs,
    /// Also report the minimum σ_min of the Gauss-map differential.
    #[arg(long, default_value_t = 0)]
    gauss_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TargetArg {
    Disk,
    Sphere,
    Closed,
}

#[derive(Debug, Args, Serialize)]
struct BoundsArgs {
    /// Inclusive range `A..B`.
    #[arg(long)]
    n: String,
    #[arg(long)]
    use_published_table: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_enum, default_value = "disk")]
    target: TargetArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DomainArg {
    Circle,
    Interval,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InitArg {
    Random,
    CircleQuadratic,
}

#[derive(Debug, Args, Serialize)]
struct SearchArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long)]
    ambient: usize,
    /// Defaults to fourier on the circle and polynomial on the interval.
    #[arg(long)]
    basis: Option<String>,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 20_000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    target: f64,
    #[arg(long, default_value_t = 48)]
    grid: usize,
    /// Exclusion radius; defaults to a tenth of the domain diameter.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 4)]
    refine: usize,
    #[arg(long, default_value_t = 200.0)]
    beta: f64,
    #[arg(long, default_value_t = 8)]
    population: usize,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    #[arg(long, value_enum, default_value = "random")]
    init: InitArg,
    /// Noise level for --init circle-quadratic, scale for --init random.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Provenance block written into every JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Value,
    pub version: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
}

impl RunManifest {
    fn new<T: Serialize>(subcommand: &str, args: &T, seed: Option<u64>) -> Result<Self> {
        Ok(RunManifest {
            subcommand: subcommand.to_string(),
            config: serde_json::to_value(args)?,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed,
        })
    }
}

/// JSON document written by `verify` and `pair`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub manifest: RunManifest,
    pub report: SkewReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_min_sigma: Option<f64>,
}

/// JSON document written by `search`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchFile {
    pub manifest: RunManifest,
    pub result: SearchResult,
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn emit_json<T: Serialize>(doc: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn verdict_code(v: Verdict) -> i32 {
    if v.is_certified() {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

#[derive(Deserialize)]
struct PlainCoeffs {
    basis: Basis,
    ambient: usize,
    coefficients: Vec<f64>,
}

/// Loads a parametric curve from a search output or a plain coefficient file.
pub fn load_coefficients(path: &Path) -> Result<Embedding> {
    let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let result = if let Some(r) = v.get("result") {
        Some(r.clone())
    } else if v.get("config").is_some() {
        Some(v.clone())
    } else {
        None
    };
    match result {
        Some(r) => {
            let r: SearchResult = serde_json::from_value(r)?;
            r.config.family.embedding(&r.coefficients)
        }
        None => {
            let p: PlainCoeffs = serde_json::from_value(v)?;
            parametric_curve(p.coefficients, p.basis, p.ambient)
        }
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<i32> {
    let name = args.family.catalog_name()?;
    let mut w = csv::Writer::from_path(&args.emit)?;
    if name.starts_with("sphere-pair:") {
        let (a, b) = pair_by_name(&name)?;
        let header: Vec<String> = std::iter::once("part".to_string())
            .chain((0..a.ambient_dim()).map(|i| format!("x{i}")))
            .collect();
        w.write_record(&header)?;
        for (part, e) in [(0, &a), (1, &b)] {
            for p in e.domain().grid(args.grid)? {
                let mut row = vec![part.to_string()];
                row.extend(e.value(&p)?.iter().map(f64::to_string));
                w.write_record(&row)?;
            }
        }
    } else {
        let e = by_name(&name)?;
        let k = e.domain().coord_len();
        let header: Vec<String> = (0..k)
            .map(|i| format!("s{i}"))
            .chain((0..e.ambient_dim()).map(|i| format!("x{i}")))
            .collect();
        w.write_record(&header)?;
        for p in e.domain().grid(args.grid)? {
            let row: Vec<String> = p.iter().chain(e.value(&p)?.iter()).map(f64::to_string).collect();
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    let mut manifest = RunManifest::new("construct", args, None)?;
    manifest.outputs.push(path_str(&args.emit));
    let sidecar = PathBuf::from(format!("{}.manifest.json", args.emit.display()));
    emit_json(&manifest, Some(&sidecar))?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let e = match (&args.coeffs, args.embedding.as_str()) {
        (Some(path), "parametric") => load_coefficients(path)?,
        (Some(_), other) => {
            return Err(Error::InvalidArgument(format!(
                "--coeffs needs --embedding parametric, got {other}"
            )))
        }
        (None, name) => by_name(name)?,
    };
    let mut manifest = RunManifest::new("verify", args, Some(args.plan.seed))?;
    if let Some(p) = &args.coeffs {
        manifest.inputs.push(path_str(p));
    }
    let report = if args.certify {
        let map = bilinear_map_by_name(&args.embedding).map_err(|_| {
            Error::InvalidArgument("--certify applies to bilinear-sphere:* embeddings only".into())
        })?;
        certify_bilinear_sphere(&map, args.samples, args.plan.seed)?
    } else {
        verify_totally_skew(&e, &args.plan.plan()?, args.plan.tol)?
    };
    if let Some(path) = &args.margins_csv {
        write_margin_field(&e, &args.plan.plan()?, fs::File::create(path)?)?;
        manifest.outputs.push(path_str(path));
    }
    if let Some(p) = &args.out {
        manifest.outputs.push(path_str(p));
    }
    let code = verdict_code(report.verdict);
    emit_json(
        &ReportFile {
            manifest,
            report,
            gauss_min_sigma: None,
        },
        args.out.as_deref(),
    )?;
    Ok(code)
}

fn cmd_pair(args: &PairArgs) -> Result<i32> {
    let name = args.family.catalog_name()?;
    let (a, b) = if name.starts_with("sphere-pair:") {
        pair_by_name(&name)?
    } else {
        let e = by_name(&name)?;
        (e.clone(), e)
    };
    let report = verify_skew_pair(&a, &b, &args.plan.plan()?, args.plan.tol)?;
    let gauss = if args.gauss_samples > 0 {
        Some(gauss_pair_differential_check(&a, &b, args.gauss_samples, args.plan.seed)?)
    } else {
        None
    };
    let mut manifest = RunManifest::new("pair", args, Some(args.plan.seed))?;
    if let Some(p) = &args.out {
        manifest.outputs.push(path_str(p));
    }
    let code = verdict_code(report.verdict);
    emit_json(
        &ReportFile {
            manifest,
            report,
            gauss_min_sigma: gauss,
        },
        args.out.as_deref(),
    )?;
    Ok(code)
}

/// Parses an inclusive range `A..B` (or a single `A`) with `1 <= A <= B`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let bad = || Error::InvalidArgument(format!("malformed range {s:?}, expected A..B with 1 <= A <= B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[derive(Serialize)]
struct BoundsFile<'a> {
    manifest: RunManifest,
    records: &'a [crate::bounds::BoundRecord],
}

fn cmd_bounds(args: &BoundsArgs) -> Result<i32> {
    let range = parse_range(&args.n)?;
    let target = match args.target {
        TargetArg::Disk => Target::Disk,
        TargetArg::Sphere => Target::Sphere,
        TargetArg::Closed => Target::Closed,
    };
    let records = bounds_table(range, target, args.use_published_table)?;
    let mut manifest = RunManifest::new("bounds", args, None)?;
    if let Some(p) = &args.out {
        manifest.outputs.push(path_str(p));
    }
    match args.format {
        Format::Json => emit_json(&BoundsFile { manifest, records: &records }, args.out.as_deref())?,
        Format::Csv => match &args.out {
            Some(path) => {
                write_csv(&records, fs::File::create(path)?)?;
                let sidecar = PathBuf::from(format!("{}.manifest.json", path.display()));
                emit_json(&manifest, Some(&sidecar))?;
            }
            None => write_csv(&records, io::stdout().lock())?,
        },
    }
    Ok(EXIT_OK)
}

fn cmd_search(args: &SearchArgs) -> Result<i32> {
    let basis = match (&args.basis, args.domain) {
        (Some(b), _) => b.parse()?,
        (None, DomainArg::Circle) => Basis::Fourier,
        (None, DomainArg::Interval) => Basis::Polynomial,
    };
    match (args.domain, basis) {
        (DomainArg::Circle, Basis::Fourier) | (DomainArg::Interval, Basis::Polynomial) => {}
        _ => {
            return Err(Error::InvalidArgument(
                "the circle takes the fourier basis and the interval the polynomial basis".into(),
            ))
        }
    }
    let family = Family::new(basis, args.degree, args.ambient)?;
    let mut cfg = SearchConfig::new(family, args.seed);
    cfg.plan.grid = args.grid;
    if let Some(d) = args.delta {
        cfg.plan.delta = d;
    }
    cfg.plan.refine = args.refine;
    cfg.beta = args.beta;
    cfg.iters = args.iters;
    cfg.population = args.population;
    cfg.step = args.step;
    cfg.target_margin = args.target;
    cfg.init = match args.init {
        InitArg::Random => Init::Random {
            scale: args.noise.unwrap_or(1.0),
        },
        InitArg::CircleQuadratic => Init::PerturbedCircleQuadratic {
            noise: args.noise.unwrap_or(0.01),
        },
    };
    let result = run_search(&cfg)?;
    let code = match result.status {
        SearchStatus::TargetReached => EXIT_OK,
        SearchStatus::Stalled | SearchStatus::BudgetExhausted => EXIT_SEARCH_INCOMPLETE,
    };
    let mut manifest = RunManifest::new("search", args, Some(args.seed))?;
    if let Some(p) = &args.out {
        manifest.outputs.push(path_str(p));
    }
    emit_json(&SearchFile { manifest, result }, args.out.as_deref())?;
    Ok(code)
}

/// Inserts `--key value` pairs from a key=value file after the subcommand,
/// skipping keys already given on the command line.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let Some(pos) = strs.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let (path, span) = match strs[pos].strip_prefix("--config=") {
        Some(p) => (p.to_string(), 1),
        None => (
            strs.get(pos + 1)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument("--config needs a file".into()))?,
            2,
        ),
    };
    let mut rest: Vec<String> = strs[..pos].to_vec();
    rest.extend_from_slice(&strs[pos + span..]);
    let sub = rest
        .iter()
        .position(|a| ["construct", "verify", "pair", "bounds", "search"].contains(&a.as_str()))
        .ok_or_else(|| Error::InvalidArgument("--config needs a subcommand".into()))?;
    let mut extra = Vec::new();
    for (lineno, line) in fs::read_to_string(&path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("{path}:{}: expected key=value", lineno + 1))
        })?;
        let flag = format!("--{}", k.trim().trim_start_matches("--").replace('_', "-"));
        if rest.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match v.trim() {
            "true" => extra.push(flag),
            "false" => {}
            v => {
                extra.push(flag);
                extra.push(v.to_string());
            }
        }
    }
    rest.splice(sub + 1..sub + 1, extra);
    Ok(rest.into_iter().map(OsString::from).collect())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Pair(a) => cmd_pair(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Search(a) => cmd_search(a),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
