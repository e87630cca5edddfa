//! Command-line front end: argument parsing, experiment configs, run
//! records and replay.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::IntMatrix;
use crate::census::{self, NormBound};
use crate::error::{Error, Result};
use crate::genericity::{self, Region};
use crate::h2;
use crate::quotients::{self, FiniteGroup, ModMatrix};
use crate::report::{fmt_f64, fmt_rational};
use crate::rng::stream;
use crate::sieve;
use crate::walk::{self, GraphSpec, WalkGraph};
use crate::zariski;

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "GENLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
    Summary,
    Matrices,
    Report,
}

#[derive(Debug, Parser)]
#[command(name = "genlab", version, about = "Experiments on generic elements of arithmetic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    /// Seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub emit: Option<Emit>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    #[command(flatten)]
    Experiment(Command),
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-run the config embedded in a run record.
    Replay {
        record: PathBuf,
        /// Fail unless the output matches the recorded artifact byte for byte.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "name", content = "params", rename_all = "lowercase")]
pub enum Command {
    /// Norm-ball census of SL(2,Z).
    Census(CensusParams),
    /// Random walks on a word automaton.
    Walk(WalkParams),
    /// Exact walk distributions in SL(2, Z/p).
    Quotient(QuotientParams),
    /// Characteristic-polynomial certificates for a matrix.
    Sieve(SieveParams),
    /// Sample SL(2,Z) uniformly by norm.
    Sample(SampleParams),
    /// Zariski-density probe for a finitely generated group.
    Zariski(ZariskiParams),
    /// Density experiments on lattice points and free-group words.
    Density(DensityParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct CensusParams {
    /// Norm bounds; each gives one row.
    #[arg(long, required = true, value_delimiter = ',')]
    pub k: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct WalkParams {
    /// A graph JSON file, or builtin:freemonoid, builtin:freegroup,
    /// builtin:cpq-naive, builtin:cpq-improved.
    #[arg(long, default_value = "builtin:freegroup")]
    pub graph: String,
    /// Tokens of the free-monoid graph.
    #[arg(long, value_delimiter = ',', default_value = "a,b")]
    pub tokens: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// `p` and `q` of the free product C_p * C_q.
    #[arg(long, default_value_t = 2)]
    pub cp: usize,
    #[arg(long, default_value_t = 3)]
    pub cq: usize,
    #[arg(long, default_value_t = 10)]
    pub len: usize,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams {
            graph: "builtin:freegroup".into(),
            tokens: vec!["a".into(), "b".into()],
            rank: 2,
            cp: 2,
            cq: 3,
            len: 10,
            samples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct QuotientParams {
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// builtin:freemonoid, builtin:freegroup, or a graph file whose vertex
    /// tokens name generators.
    #[arg(long, default_value = "builtin:freemonoid")]
    pub graph: String,
    /// Generator names: L, U, S, T, and inverses such as L^-1.
    #[arg(long, value_delimiter = ',', default_value = "L,U,L^-1,U^-1")]
    pub gens: Vec<String>,
    #[arg(long, default_value_t = 40)]
    pub kmax: usize,
}

impl Default for QuotientParams {
    fn default() -> Self {
        QuotientParams {
            p: 5,
            graph: "builtin:freemonoid".into(),
            gens: ["L", "U", "L^-1", "U^-1"].map(String::from).to_vec(),
            kmax: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SieveParams {
    /// JSON file holding one square integer matrix.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = sieve::DEFAULT_PRIME_BUDGET)]
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    sieve::DEFAULT_PRIME_BUDGET
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct SampleParams {
    /// Norm bound `N`, an integer or a fraction `p/q`.
    #[arg(long, default_value = "6")]
    pub norm: String,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 2.0)]
    pub slack: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            norm: "6".into(),
            count: 1000,
            slack: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ZariskiParams {
    /// JSON file holding a list of square integer matrices.
    #[arg(long)]
    pub gens: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "5")]
    #[serde(default = "default_primes")]
    pub p: Vec<u64>,
}

fn default_primes() -> Vec<u64> {
    vec![5]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DensityExperiment {
    FreeGroup,
    Visible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields, default)]
pub struct DensityParams {
    #[arg(long, value_enum, default_value = "free-group")]
    pub experiment: DensityExperiment,
    /// Longest word for the free-group experiment.
    #[arg(long, default_value_t = 12)]
    pub max_len: usize,
    #[arg(long, default_value = "square")]
    pub region: Region,
    /// Scales for the visible-point experiment.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub t: Vec<u64>,
}

impl Default for DensityParams {
    fn default() -> Self {
        DensityParams {
            experiment: DensityExperiment::FreeGroup,
            max_len: 12,
            region: Region::Square,
            t: vec![10, 100, 1000],
        }
    }
}

/// A complete, resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_emit")]
    pub emit: Emit,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_emit() -> Emit {
    Emit::Summary
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunRecord {
    schema_version: u32,
    config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    artifact: Option<String>,
}

/// Sets the rayon pool size from `GENLAB_THREADS` when present.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses the command line, runs it and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        CliCommand::Experiment(command) => {
            let config = ExperimentConfig {
                command,
                seed: cli.seed.unwrap_or(0),
                emit: cli.emit.unwrap_or(Emit::Summary),
                output: cli.output,
            };
            run(&config)
        }
        CliCommand::Run { config } => {
            let mut cfg = ExperimentConfig::from_json(&fs::read_to_string(&config)?)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(e) = cli.emit {
                cfg.emit = e;
            }
            if cli.output.is_some() {
                cfg.output = cli.output;
            }
            run(&cfg)
        }
        CliCommand::Replay { record, verify } => {
            let text = replay(&record, verify)?;
            match cli.output {
                Some(path) => write_atomic(&path, &text),
                None => print_stdout(&text),
            }
        }
    }
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Runs `config` and writes its artifact (and, for non-JSON artifacts
/// written to a file, a `<output>.record.json` next to it).
pub fn run(config: &ExperimentConfig) -> Result<()> {
    let text = render(config)?;
    match &config.output {
        None => print_stdout(&text),
        Some(path) => {
            if config.emit != Emit::Json {
                let record = RunRecord {
                    schema_version: SCHEMA_VERSION,
                    config: config.clone(),
                    result: None,
                    artifact: Some(text.clone()),
                };
                write_atomic(&record_path(path), &(serde_json::to_string_pretty(&record)? + "\n"))?;
            }
            write_atomic(path, &text)
        }
    }
}

pub fn record_path(artifact: &Path) -> PathBuf {
    let mut s = artifact.as_os_str().to_owned();
    s.push(".record.json");
    PathBuf::from(s)
}

/// Re-runs the config stored in a record (a JSON artifact or a sidecar
/// record) and returns the regenerated artifact.
pub fn replay(record: &Path, verify: bool) -> Result<String> {
    let text = fs::read_to_string(record)?;
    let value: Value = serde_json::from_str(&text)?;
    let version = value.get("schema_version").and_then(Value::as_u64);
    if version != Some(SCHEMA_VERSION as u64) {
        return Err(Error::Schema {
            expected: SCHEMA_VERSION.to_string(),
            found: version.map_or("none".into(), |v| v.to_string()),
        });
    }
    let rec: RunRecord = serde_json::from_value(value)?;
    let expected = rec.artifact.clone().unwrap_or(text);
    let out = render(&rec.config)?;
    if verify && out != expected {
        return Err(Error::Invalid("replayed output differs from the recorded artifact".into()));
    }
    Ok(out)
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// The artifact text for a config.
pub fn render(config: &ExperimentConfig) -> Result<String> {
    let out = match &config.command {
        Command::Census(p) => census_cmd(p, config.emit)?,
        Command::Walk(p) => walk_cmd(p, config.emit, config.seed)?,
        Command::Quotient(p) => quotient_cmd(p, config.emit)?,
        Command::Sieve(p) => sieve_cmd(p, config.emit)?,
        Command::Sample(p) => sample_cmd(p, config.emit, config.seed)?,
        Command::Zariski(p) => zariski_cmd(p, config.emit)?,
        Command::Density(p) => density_cmd(p, config.emit)?,
    };
    Ok(match out {
        Output::Text(t) => t,
        Output::Json(result) => {
            let record = RunRecord {
                schema_version: SCHEMA_VERSION,
                config: config.clone(),
                result: Some(result),
                artifact: None,
            };
            serde_json::to_string_pretty(&record)? + "\n"
        }
    })
}

enum Output {
    Text(String),
    Json(Value),
}

fn unsupported(cmd: &str, emit: Emit) -> Error {
    Error::Invalid(format!("{cmd} cannot emit {emit:?}").to_lowercase())
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",") + "\r\n";
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .map(|c| {
                if c.contains([',', '"', '\n', '\r']) {
                    format!("\"{}\"", c.replace('"', "\"\""))
                } else {
                    c.clone()
                }
            })
            .collect();
        s += &(cells.join(",") + "\r\n");
    }
    s
}

fn ratio_cell(r: Option<&BigRational>) -> String {
    r.map(|r| fmt_f64(r.to_f64().unwrap_or(f64::NAN))).unwrap_or_default()
}

fn census_cmd(p: &CensusParams, emit: Emit) -> Result<Output> {
    let records = p
        .k
        .iter()
        .map(|&k| census::census(NormBound::k(k)).map(|r| (k, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match emit {
        Emit::Csv => Output::Text(csv(
            &["k", "total", "parabolic", "ratio"],
            &records
                .iter()
                .map(|(k, r)| {
                    vec![
                        k.to_string(),
                        r.total.to_string(),
                        r.parabolic.to_string(),
                        ratio_cell(r.ratio().as_ref()),
                    ]
                })
                .collect::<Vec<_>>(),
        )),
        Emit::Summary => {
            let mut s = String::new();
            for (k, r) in &records {
                writeln!(
                    s,
                    "k={k} total={} parabolic={} reducible={} ratio={}",
                    r.total,
                    r.parabolic,
                    r.reducible,
                    ratio_cell(r.ratio().as_ref())
                )
                .unwrap();
            }
            Output::Text(s)
        }
        Emit::Json => Output::Json(Value::Array(
            records
                .iter()
                .map(|(k, r)| {
                    json!({
                        "k": k,
                        "max_norm_sq": r.bound.max_norm_sq,
                        "total": r.total,
                        "parabolic": r.parabolic,
                        "reducible": r.reducible,
                        "ratio": r.ratio().map(|x| fmt_rational(&x)),
                    })
                })
                .collect(),
        )),
        other => return Err(unsupported("census", other)),
    })
}

fn read_graph(path: &str) -> Result<WalkGraph> {
    let spec: GraphSpec = serde_json::from_str(&fs::read_to_string(path)?)?;
    WalkGraph::from_spec(&spec)
}

fn walk_graph(p: &WalkParams) -> Result<WalkGraph> {
    match p.graph.as_str() {
        "builtin:freemonoid" => walk::build_free_monoid_graph(&p.tokens),
        "builtin:freegroup" => walk::build_free_group_graph(p.rank),
        "builtin:cpq-naive" => Ok(walk::build_free_product_graph(p.cp, p.cq)?.0),
        "builtin:cpq-improved" => Ok(walk::build_free_product_graph(p.cp, p.cq)?.1),
        other if other.starts_with("builtin:") => Err(Error::Invalid(format!("unknown builtin graph {other:?}"))),
        path => read_graph(path),
    }
}

fn walk_cmd(p: &WalkParams, emit: Emit, seed: u64) -> Result<Output> {
    let g = walk_graph(p)?;
    let words = (0..p.samples)
        .map(|i| walk::sample_walk(&g, p.len, &mut stream(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let property_r = walk::check_property_r(&g);
    let count = g.walk_count(p.len);
    let spelled: Vec<String> = words.iter().map(|w| w.tokens.join(" ")).collect();
    Ok(match emit {
        Emit::Csv => Output::Text(csv(
            &["sample", "word"],
            &spelled
                .iter()
                .enumerate()
                .map(|(i, w)| vec![i.to_string(), w.clone()])
                .collect::<Vec<_>>(),
        )),
        Emit::Summary => {
            let mut s = format!(
                "vertices={} property_r={:?} walks_of_length_{}={}\n",
                g.len(),
                property_r,
                p.len,
                count
            );
            for w in &spelled {
                s += w;
                s.push('\n');
            }
            Output::Text(s)
        }
        Emit::Json => Output::Json(json!({
            "graph": g.to_spec(),
            "property_r": property_r,
            "walk_count": count.to_string(),
            "samples": spelled,
        })),
        other => return Err(unsupported("walk", other)),
    })
}

fn inverse_name(token: &str) -> String {
    match token.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{token}^-1"),
    }
}

fn quotient_graph(p: &QuotientParams) -> Result<WalkGraph> {
    match p.graph.as_str() {
        "builtin:freemonoid" => walk::build_free_monoid_graph(&p.gens),
        "builtin:freegroup" => {
            let mut spec = walk::build_free_group_graph(p.gens.len())?.to_spec();
            spec.vertices = p.gens.iter().flat_map(|g| [g.clone(), inverse_name(g)]).collect();
            WalkGraph::from_spec(&spec)
        }
        other if other.starts_with("builtin:") => Err(Error::Invalid(format!("unknown builtin graph {other:?}"))),
        path => read_graph(path),
    }
}

fn quotient_cmd(p: &QuotientParams, emit: Emit) -> Result<Output> {
    let group_order = quotients::group_order(p.p)?;
    if p.p > quotients::MAX_ENUM_PRIME {
        return Err(Error::Budget(format!("p = {} exceeds {}", p.p, quotients::MAX_ENUM_PRIME)));
    }
    let g = quotient_graph(p)?;
    let labels = g
        .tokens()
        .iter()
        .map(|t| ModMatrix::from_int(&quotients::named_generator(t)?, p.p as u32))
        .collect::<Result<Vec<_>>>()?;
    let group = FiniteGroup::sl2(p.p as u32)?;
    let dists = quotients::walk_distributions(&g, &labels, &group, p.kmax)?;
    let tvs: Vec<BigRational> = dists.iter().map(quotients::tv_distance).collect();
    let tv_f: Vec<f64> = tvs.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    Ok(match emit {
        Emit::Csv => Output::Text(csv(
            &["k", "tv"],
            &tv_f
                .iter()
                .enumerate()
                .map(|(i, t)| vec![(i + 1).to_string(), fmt_f64(*t)])
                .collect::<Vec<_>>(),
        )),
        Emit::Summary => {
            let obstruction = quotients::onedim_obstruction(&group, &labels)?;
            let mut s = format!("p={} order={group_order} obstruction={obstruction}\n", p.p);
            for (i, t) in tv_f.iter().enumerate() {
                writeln!(s, "k={} tv={}", i + 1, fmt_f64(*t)).unwrap();
            }
            Output::Text(s)
        }
        Emit::Json => {
            let obstruction = quotients::onedim_obstruction_report(&group, &labels)?;
            let fit: Vec<(f64, f64)> = tv_f
                .iter()
                .enumerate()
                .filter(|(i, t)| (10..=40).contains(&(i + 1)) && **t > 0.0)
                .map(|(i, t)| ((i + 1) as f64, t.ln()))
                .collect();
            let fit_json = (fit.len() >= 3).then(|| {
                let (slope, intercept, r2) = quotients::linear_fit(&fit);
                json!({"slope": fmt_f64(slope), "intercept": fmt_f64(intercept), "r2": fmt_f64(r2)})
            });
            Output::Json(json!({
                "p": p.p,
                "group_order": group_order,
                "obstruction": obstruction,
                "log_tv_fit": fit_json,
                "rows": tv_f.iter().zip(&tvs).enumerate().map(|(i, (t, exact))| json!({
                    "k": i + 1,
                    "tv": fmt_f64(*t),
                    "tv_exact": fmt_rational(exact),
                })).collect::<Vec<_>>(),
            }))
        }
        other => return Err(unsupported("quotient", other)),
    })
}

fn read_matrix(path: &Path) -> Result<IntMatrix> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn sieve_cmd(p: &SieveParams, emit: Emit) -> Result<Output> {
    let m = read_matrix(&p.matrix)?;
    let casson = sieve::casson_certificate_with_budget(&m, p.budget)?;
    let f = &casson.char_poly;
    let galois = if f.is_squarefree() {
        Some(sieve::galois_full_symmetric_certificate(f, p.budget)?)
    } else {
        None
    };
    let det = m.det();
    let iwip = if num_traits::Signed::abs(&det) == num_bigint::BigInt::from(1) {
        Some(sieve::iwip_certificate_with_budget(&m, p.budget)?)
    } else {
        None
    };
    Ok(match emit {
        Emit::Json => Output::Json(json!({
            "matrix": m,
            "casson": casson,
            "galois": galois,
            "iwip": iwip,
        })),
        Emit::Summary => {
            let mut s = format!("char_poly={f}\ncasson={}\n", serde_json::to_string(&casson.verdict)?);
            if let Some(g) = &galois {
                writeln!(s, "galois={}", serde_json::to_string(&g.verdict)?).unwrap();
            }
            if let Some(i) = &iwip {
                let tag = serde_json::to_value(i)?["verdict"].clone();
                writeln!(s, "iwip={tag}").unwrap();
            }
            Output::Text(s)
        }
        other => return Err(unsupported("sieve", other)),
    })
}

/// Parses `"6"` or `"13/2"` into a norm bound.
pub fn parse_norm(s: &str) -> Result<NormBound> {
    let bad = || Error::Invalid(format!("bad norm bound {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    NormBound::rational(num, den)
}

fn sample_cmd(p: &SampleParams, emit: Emit, seed: u64) -> Result<Output> {
    let bound = parse_norm(&p.norm)?;
    Ok(match emit {
        Emit::Matrices | Emit::Csv => {
            let run = h2::sample_many(bound, p.slack, p.count, seed)?;
            if emit == Emit::Csv {
                Output::Text(csv(
                    &["a", "b", "c", "d"],
                    &run.samples
                        .iter()
                        .map(|s| [s.element.a, s.element.b, s.element.c, s.element.d].map(|v| v.to_string()).to_vec())
                        .collect::<Vec<_>>(),
                ))
            } else {
                let mut s = String::new();
                for x in &run.samples {
                    writeln!(s, "{}", x.element.to_matrix()).unwrap();
                }
                Output::Text(s)
            }
        }
        Emit::Report | Emit::Json => Output::Json(serde_json::to_value(h2::uniformity_report(
            bound, p.count, p.slack, seed,
        )?)?),
        Emit::Summary => {
            let r = h2::uniformity_report(bound, p.count, p.slack, seed)?;
            Output::Text(format!(
                "max_norm_sq={} classes={} samples={} acceptance_rate={} tv={} chi_square={} boundary_cases={}\n",
                r.max_norm_sq,
                r.classes,
                r.samples,
                fmt_f64(r.acceptance_rate),
                fmt_f64(r.tv),
                fmt_f64(r.chi_square),
                r.boundary_cases
            ))
        }
    })
}

fn zariski_cmd(p: &ZariskiParams, emit: Emit) -> Result<Output> {
    let gens: Vec<IntMatrix> = serde_json::from_str(&fs::read_to_string(&p.gens)?)?;
    let n = gens
        .first()
        .map(IntMatrix::dim)
        .ok_or_else(|| Error::Invalid("empty generator list".into()))?;
    let v = zariski::zariski_verdict(&gens, n, &p.p)?;
    Ok(match emit {
        Emit::Json => Output::Json(serde_json::to_value(&v)?),
        Emit::Summary => Output::Text(format!(
            "n={} lie_dimension={} lie_full={} verdict={}\n",
            v.n,
            v.lie_dimension,
            v.lie_full,
            serde_json::to_string(&v.verdict)?
        )),
        other => return Err(unsupported("zariski", other)),
    })
}

fn density_cmd(p: &DensityParams, emit: Emit) -> Result<Output> {
    let header = ["k", "hits", "total", "ratio", "rho_k"];
    let rows: Vec<Vec<String>> = match p.experiment {
        DensityExperiment::FreeGroup => {
            let series = genericity::free_group_abelianization_experiment(p.max_len)?;
            let shells = series.shell_ratios()?;
            let annular = genericity::annular_density(&series)?;
            series
                .points
                .iter()
                .zip(&shells)
                .map(|(pt, r)| {
                    let rho = annular.rho.iter().find(|(k, _)| *k == pt.k).map(|(_, v)| v);
                    vec![
                        pt.k.to_string(),
                        pt.hits.to_string(),
                        pt.total.to_string(),
                        ratio_cell(Some(r)),
                        ratio_cell(rho),
                    ]
                })
                .collect()
        }
        DensityExperiment::Visible => p
            .t
            .iter()
            .map(|&t| {
                let hits = genericity::visible_count(p.region, t);
                let total = genericity::region_point_count(p.region, t);
                vec![
                    t.to_string(),
                    hits.to_string(),
                    total.to_string(),
                    fmt_f64(hits as f64 / total as f64),
                    String::new(),
                ]
            })
            .collect(),
    };
    Ok(match emit {
        Emit::Csv => Output::Text(csv(&header, &rows)),
        Emit::Summary => {
            let mut s = String::new();
            for r in &rows {
                let cells: Vec<String> = header.iter().zip(r).map(|(h, c)| format!("{h}={c}")).collect();
                s += &(cells.join(" ") + "\n");
            }
            Output::Text(s)
        }
        Emit::Json => Output::Json(Value::Array(
            rows.iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .zip(r)
                            .map(|(h, c)| (h.to_string(), Value::String(c.clone())))
                            .collect(),
                    )
                })
                .collect(),
        )),
        other => return Err(unsupported("density", other)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let cfg = ExperimentConfig {
            command: Command::Census(CensusParams { k: vec![10] }),
            seed: 3,
            emit: Emit::Csv,
            output: None,
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
        let bad = text.replace("\"seed\"", "\"sead\"");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = r#"{"command":{"name":"census","params":{"k":[3],"extra":1}}}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
    }

    #[test]
    fn defaults_fill_missing_params() {
        let cfg = ExperimentConfig::from_json(r#"{"command":{"name":"quotient","params":{"kmax":3}}}"#).unwrap();
        match cfg.command {
            Command::Quotient(q) => assert_eq!((q.p, q.kmax, q.gens.len()), (5, 3, 4)),
            _ => panic!(),
        }
        assert_eq!(cfg.emit, Emit::Summary);
    }

    #[test]
    fn norms() {
        assert_eq!(parse_norm("6").unwrap(), NormBound::k(6));
        assert_eq!(parse_norm("13/2").unwrap().max_norm_sq, 42);
        assert!(parse_norm("x").is_err());
    }

    #[test]
    fn csv_quoting() {
        let s = csv(&["a", "b"], &[vec!["1".into(), "x,y".into()]]);
        assert_eq!(s, "a,b\r\n1,\"x,y\"\r\n");
    }

    #[test]
    fn inverse_names() {
        assert_eq!(inverse_name("L"), "L^-1");
        assert_eq!(inverse_name("U^-1"), "U");
    }
}
