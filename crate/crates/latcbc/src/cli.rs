//! Command-line front end: declarative run configurations, vector and table
//! file formats, and the table-reproduction suite.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical validation
//! failure, 3 I/O error. Everything is deterministic; the artifact contains
//! no random number generator.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::construct::{
    self, Algorithm, ConstructionResult, IcbcOptions, IcbcTrace,
};
use crate::numerics::{fit_power_law, is_prime};
use crate::tables;
use crate::wce::{wce_pod_fixed_z, wce_upper_bound, GeneratingVector};
use crate::weights::{
    lambda_weights, CoordinateFamily, NormBoundSpec, OrderFamily, OrderWeights, WeightScheme,
};
use crate::{cbc, Error};

/// CLI failure classes, mapped onto the process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent configuration (exit 1).
    Config(String),
    /// A numerical validation failed (exit 2).
    Numerical(String),
    /// Filesystem trouble (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical validation failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "latcbc",
    version,
    about = "Rank-1 lattice rules by CBC construction, with automatic weight \
             selection and guaranteed RMS error bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Construct generating vectors (classic, double, or iterated CBC)
    Construct(Box<ConstructArgs>),
    /// Evaluate the shift-averaged worst-case error of a stored vector
    Wce(WceArgs),
    /// Evaluate the theoretical worst-case error bound for given weights
    Bound(BoundArgs),
    /// Reproduce the benchmark tables and compare against reference values
    Tables(TablesArgs),
}

#[derive(Args, Default)]
pub struct ConstructArgs {
    /// Configuration file (line-oriented `key = value`, optional sections);
    /// command-line flags override file entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// cbc | dcbc | icbc
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Comma-separated moduli, e.g. `251` or `251,499,997`
    #[arg(long)]
    pub n: Option<String>,
    /// Number of dimensions
    #[arg(long, short = 's')]
    pub dims: Option<usize>,
    /// Per-coordinate bound family: poly:C | geo:R | const:V | file:PATH
    #[arg(long)]
    pub b: Option<String>,
    /// Order-dependent bound family: one | linear | factorial | file:PATH
    #[arg(long = "b-order")]
    pub b_order: Option<String>,
    /// CBC weights: poly:C | geo:R | lambda:L | file:PATH
    #[arg(long)]
    pub weights: Option<String>,
    /// DCBC order weight factors: equal-b | factorial | linear | file:PATH
    #[arg(long)]
    pub gamma_order: Option<String>,
    /// First-dimension weight for DCBC: a number, or `default`
    #[arg(long)]
    pub gamma1: Option<String>,
    /// ICBC starting lambda (default 0.75)
    #[arg(long)]
    pub lambda0: Option<f64>,
    /// ICBC gradient threshold (default 1e-3 * E(lambda0))
    #[arg(long)]
    pub tau: Option<f64>,
    /// ICBC iteration cap (default 10)
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Output path for the generating vector (grid runs insert `_n<modulus>`)
    #[arg(long)]
    pub vector_out: Option<PathBuf>,
    /// Output path for the run summary table (CSV)
    #[arg(long)]
    pub table_out: Option<PathBuf>,
    /// Also write per-dimension gamma/E history CSVs
    #[arg(long)]
    pub histories: bool,
}

#[derive(Args)]
pub struct WceArgs {
    /// Vector file to evaluate
    #[arg(long)]
    pub vector: PathBuf,
    /// Override weights: poly:C | geo:R | lambda:L | file:PATH
    /// (defaults to the weights embedded in the vector file)
    #[arg(long)]
    pub weights: Option<String>,
    /// Per-coordinate bound family (needed by lambda weights)
    #[arg(long)]
    pub b: Option<String>,
    /// Order-dependent bound family (needed by lambda weights)
    #[arg(long = "b-order")]
    pub b_order: Option<String>,
}

#[derive(Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, short = 's')]
    pub dims: usize,
    /// Weights: poly:C | geo:R | lambda:L | file:PATH
    #[arg(long)]
    pub weights: String,
    /// Per-coordinate bound family (needed by lambda weights)
    #[arg(long)]
    pub b: Option<String>,
    /// Order-dependent bound family (needed by lambda weights)
    #[arg(long = "b-order")]
    pub b_order: Option<String>,
    /// Evaluate at one lambda instead of the grid 0.55, 0.60, ..., 1.00
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Args)]
pub struct TablesArgs {
    /// Which tables to reproduce, e.g. `1,2,3`
    #[arg(long, default_value = "1,2,3,4,5,6,7,8")]
    pub which: String,
    /// Output directory for the CSV tables and the comparison report
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Trim the modulus grid to n <= this (full grid up to 32003 by default)
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Dimension (default 100; reference comparisons assume 100)
    #[arg(long)]
    pub dims: Option<usize>,
}

/// Parse-and-dispatch entry point returning the process exit code.
pub fn run_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too and are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Construct(args) => cmd_construct(&args),
        Command::Wce(args) => cmd_wce(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::Tables(args) => cmd_tables(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("latcbc: {e}");
            e.exit_code()
        }
    }
}

// ---------------------------------------------------------------------------
// run configuration

/// CBC weight choice.
#[derive(Clone, Debug)]
pub enum WeightChoice {
    Poly(f64),
    Geo(f64),
    Lambda(f64),
    Explicit(Vec<f64>),
}

/// Source of the DCBC order weight factors.
#[derive(Clone, Debug)]
pub enum GammaOrderChoice {
    EqualB,
    Factorial,
    Linear,
    Explicit(Vec<f64>),
}

/// A validated construction run over a modulus grid.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub n_grid: Vec<u64>,
    pub s: usize,
    pub b: CoordinateFamily,
    pub b_order: OrderFamily,
    pub weights: Option<WeightChoice>,
    pub gamma_order: Option<GammaOrderChoice>,
    pub gamma1: Option<f64>,
    pub lambda0: f64,
    pub tau: Option<f64>,
    pub k_max: usize,
    pub vector_out: Option<PathBuf>,
    pub table_out: Option<PathBuf>,
    pub histories: bool,
}

fn bad(field: &str, why: impl fmt::Display) -> CliError {
    CliError::Config(format!("field '{field}': {why}"))
}

fn parse_f64(field: &str, v: &str) -> Result<f64, CliError> {
    v.trim()
        .parse()
        .map_err(|_| bad(field, format!("'{v}' is not a number")))
}

fn read_float_file(field: &str, path: &str) -> Result<Vec<f64>, CliError> {
    let path = Path::new(path);
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(
            line.parse::<f64>()
                .map_err(|_| bad(field, format!("{}:{}: '{line}' is not a number", path.display(), i + 1)))?,
        );
    }
    if out.is_empty() {
        return Err(bad(field, format!("{} holds no values", path.display())));
    }
    Ok(out)
}

fn parse_coordinate_family(field: &str, v: &str) -> Result<CoordinateFamily, CliError> {
    let v = v.trim();
    if let Some(rest) = v.strip_prefix("poly:") {
        return Ok(CoordinateFamily::PolynomialDecay(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("geo:") {
        return Ok(CoordinateFamily::Geometric(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("const:") {
        return Ok(CoordinateFamily::Constant(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("file:") {
        return Ok(CoordinateFamily::Explicit(read_float_file(field, rest)?));
    }
    Err(bad(
        field,
        format!("'{v}' is not one of poly:C, geo:R, const:V, file:PATH"),
    ))
}

fn parse_order_family(field: &str, v: &str) -> Result<OrderFamily, CliError> {
    match v.trim() {
        "one" | "ones" => Ok(OrderFamily::Ones),
        "linear" => Ok(OrderFamily::Linear),
        "factorial" => Ok(OrderFamily::Factorial),
        other => {
            if let Some(rest) = other.strip_prefix("file:") {
                OrderFamily::from_values(&read_float_file(field, rest)?)
                    .map_err(|e| bad(field, e))
            } else {
                Err(bad(
                    field,
                    format!("'{other}' is not one of one, linear, factorial, file:PATH"),
                ))
            }
        }
    }
}

fn parse_weight_choice(field: &str, v: &str) -> Result<WeightChoice, CliError> {
    let v = v.trim();
    if let Some(rest) = v.strip_prefix("poly:") {
        return Ok(WeightChoice::Poly(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("geo:") {
        return Ok(WeightChoice::Geo(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("lambda:") {
        return Ok(WeightChoice::Lambda(parse_f64(field, rest)?));
    }
    if let Some(rest) = v.strip_prefix("file:") {
        return Ok(WeightChoice::Explicit(read_float_file(field, rest)?));
    }
    Err(bad(
        field,
        format!("'{v}' is not one of poly:C, geo:R, lambda:L, file:PATH"),
    ))
}

fn parse_gamma_order(field: &str, v: &str) -> Result<GammaOrderChoice, CliError> {
    match v.trim() {
        "equal-b" | "equal-B" => Ok(GammaOrderChoice::EqualB),
        "factorial" => Ok(GammaOrderChoice::Factorial),
        "linear" => Ok(GammaOrderChoice::Linear),
        other => {
            if let Some(rest) = other.strip_prefix("file:") {
                Ok(GammaOrderChoice::Explicit(read_float_file(field, rest)?))
            } else {
                Err(bad(
                    field,
                    format!("'{other}' is not one of equal-b, factorial, linear, file:PATH"),
                ))
            }
        }
    }
}

fn parse_n_list(field: &str, v: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse::<u64>()
                .map_err(|_| bad(field, format!("'{part}' is not a modulus")))?,
        );
    }
    if out.is_empty() {
        return Err(bad(field, "no moduli given"));
    }
    Ok(out)
}

/// Parses the line-oriented `key = value` configuration format. `[section]`
/// headers prefix the keys that follow (`[icbc]` + `lambda0` becomes
/// `icbc.lambda0`); `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut out = HashMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected 'key = value', got '{raw}'",
                i + 1
            )));
        };
        let key = if section.is_empty() {
            k.trim().to_string()
        } else {
            format!("{section}.{}", k.trim())
        };
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("duplicate key '{key}'")));
        }
    }
    Ok(out)
}

const KNOWN_KEYS: &[&str] = &[
    "algorithm",
    "n",
    "s",
    "b",
    "B",
    "weights",
    "Gamma",
    "gamma1",
    "lambda0",
    "tau",
    "k_max",
    "icbc.lambda0",
    "icbc.tau",
    "icbc.k_max",
    "vector",
    "table",
    "histories",
    "output.vector",
    "output.table",
    "output.histories",
];

/// Builds a validated [`RunConfig`] from an optional configuration file and
/// the command-line flags (flags win).
pub fn resolve_config(args: &ConstructArgs) -> Result<RunConfig, CliError> {
    let mut file: HashMap<String, String> = HashMap::new();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        file = parse_config_text(&text)?;
        if let Some(unknown) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!(
                "unknown configuration key '{unknown}'"
            )));
        }
    }
    let pick = |flag: &Option<String>, keys: &[&str]| -> Option<String> {
        flag.clone()
            .or_else(|| keys.iter().find_map(|k| file.get(*k).cloned()))
    };

    let algorithm = match pick(&args.algorithm, &["algorithm"]) {
        None => return Err(bad("algorithm", "required (cbc, dcbc, or icbc)")),
        Some(v) => match v.trim() {
            "cbc" => Algorithm::Cbc,
            "dcbc" => Algorithm::Dcbc,
            "icbc" => Algorithm::Icbc,
            other => return Err(bad("algorithm", format!("'{other}' is not cbc, dcbc, or icbc"))),
        },
    };
    let n_grid = match pick(&args.n, &["n"]) {
        None => return Err(bad("n", "required")),
        Some(v) => parse_n_list("n", &v)?,
    };
    let s = match args.dims {
        Some(s) => s,
        None => match file.get("s") {
            None => return Err(bad("s", "required")),
            Some(v) => v.parse().map_err(|_| bad("s", format!("'{v}' is not a dimension")))?,
        },
    };
    let b = match pick(&args.b, &["b"]) {
        None => return Err(bad("b", "required")),
        Some(v) => parse_coordinate_family("b", &v)?,
    };
    let b_order = match pick(&args.b_order, &["B"]) {
        None => OrderFamily::Ones,
        Some(v) => parse_order_family("B", &v)?,
    };
    let weights = match pick(&args.weights, &["weights"]) {
        None => None,
        Some(v) => Some(parse_weight_choice("weights", &v)?),
    };
    let gamma_order = match pick(&args.gamma_order, &["Gamma"]) {
        None => None,
        Some(v) => Some(parse_gamma_order("Gamma", &v)?),
    };
    let gamma1 = match pick(&args.gamma1, &["gamma1"]) {
        None => None,
        Some(v) => match v.trim() {
            "default" => None,
            other => Some(parse_f64("gamma1", other)?),
        },
    };
    let lambda0 = match args.lambda0 {
        Some(v) => v,
        None => match file.get("icbc.lambda0").or_else(|| file.get("lambda0")) {
            Some(v) => parse_f64("icbc.lambda0", v)?,
            None => 0.75,
        },
    };
    let tau = match args.tau {
        Some(v) => Some(v),
        None => match file.get("icbc.tau").or_else(|| file.get("tau")) {
            Some(v) => Some(parse_f64("icbc.tau", v)?),
            None => None,
        },
    };
    let k_max = match args.k_max {
        Some(v) => v,
        None => match file.get("icbc.k_max").or_else(|| file.get("k_max")) {
            Some(v) => v
                .parse()
                .map_err(|_| bad("icbc.k_max", format!("'{v}' is not a count")))?,
            None => 10,
        },
    };
    let vector_out = args.vector_out.clone().or_else(|| {
        file.get("output.vector")
            .or_else(|| file.get("vector"))
            .map(PathBuf::from)
    });
    let table_out = args.table_out.clone().or_else(|| {
        file.get("output.table")
            .or_else(|| file.get("table"))
            .map(PathBuf::from)
    });
    let histories = args.histories
        || file
            .get("output.histories")
            .or_else(|| file.get("histories"))
            .map(|v| v.trim() == "true" || v.trim() == "1")
            .unwrap_or(false);

    let config = RunConfig {
        algorithm,
        n_grid,
        s,
        b,
        b_order,
        weights,
        gamma_order,
        gamma1,
        lambda0,
        tau,
        k_max,
        vector_out,
        table_out,
        histories,
    };
    validate_config(&config)?;
    Ok(config)
}

fn validate_config(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.s == 0 {
        return Err(bad("s", "must be at least 1"));
    }
    if let Some(&n) = cfg.n_grid.iter().find(|&&n| n < 2) {
        return Err(bad("n", format!("modulus {n} must be >= 2")));
    }
    let spec = NormBoundSpec::new(cfg.b.clone(), cfg.b_order.clone());
    spec.check_dimension(cfg.s).map_err(|e| bad("b", e))?;
    match cfg.algorithm {
        Algorithm::Cbc => {
            if cfg.weights.is_none() {
                return Err(bad("weights", "required for the cbc algorithm"));
            }
        }
        Algorithm::Dcbc => {
            if !spec.is_product() && cfg.gamma_order.is_none() {
                return Err(bad(
                    "Gamma",
                    "required when B is not the all-ones family (POD double CBC)",
                ));
            }
            if let Some(g1) = cfg.gamma1 {
                if !(g1 > 0.0) {
                    return Err(bad("gamma1", "must be positive"));
                }
            }
        }
        Algorithm::Icbc => {
            if !(cfg.lambda0 > 0.5 && cfg.lambda0 <= 1.0) {
                return Err(bad("icbc.lambda0", "must lie in (1/2, 1]"));
            }
            if let Some(tau) = cfg.tau {
                if !(tau > 0.0) {
                    return Err(bad("icbc.tau", "must be positive"));
                }
            }
            if cfg.k_max < 1 {
                return Err(bad("icbc.k_max", "must be at least 1"));
            }
        }
    }
    if let Some(WeightChoice::Lambda(l)) = cfg.weights {
        if !(l > 0.5 && l <= 1.0) {
            return Err(bad("weights", "lambda must lie in (1/2, 1]"));
        }
    }
    Ok(())
}

fn materialize_scheme(
    choice: &WeightChoice,
    spec: &NormBoundSpec,
    s: usize,
) -> Result<WeightScheme, CliError> {
    Ok(match choice {
        WeightChoice::Poly(c) => {
            WeightScheme::product((1..=s).map(|i| (i as f64).powf(-c)).collect())?
        }
        WeightChoice::Geo(r) => {
            WeightScheme::product((1..=s).map(|i| r.powi(i as i32)).collect())?
        }
        WeightChoice::Lambda(l) => lambda_weights(spec, *l, s)?,
        WeightChoice::Explicit(v) => {
            if v.len() < s {
                return Err(bad(
                    "weights",
                    format!("file holds {} weights, dimension {s} requested", v.len()),
                ));
            }
            WeightScheme::product(v[..s].to_vec())?
        }
    })
}

fn materialize_gamma_order(
    choice: &GammaOrderChoice,
    spec: &NormBoundSpec,
    s: usize,
) -> Result<(OrderWeights, String), CliError> {
    Ok(match choice {
        GammaOrderChoice::EqualB => (
            OrderWeights::matching_order_family(spec.order(), s),
            "Gamma_l = B_l".to_string(),
        ),
        GammaOrderChoice::Factorial => (OrderWeights::factorial(s), "Gamma_l = l!".to_string()),
        GammaOrderChoice::Linear => (OrderWeights::linear(s), "Gamma_l = l".to_string()),
        GammaOrderChoice::Explicit(v) => {
            if v.len() < s {
                return Err(bad(
                    "Gamma",
                    format!("file holds {} factors, dimension {s} requested", v.len()),
                ));
            }
            (
                OrderWeights::from_values(&v[..s])?,
                "explicit".to_string(),
            )
        }
    })
}

/// One executed grid point.
pub struct RunRow {
    pub n: u64,
    pub result: ConstructionResult,
    pub trace: Option<IcbcTrace>,
    pub seconds: f64,
}

/// Executes a validated configuration for one modulus.
pub fn execute_one(cfg: &RunConfig, n: u64) -> Result<RunRow, CliError> {
    let start = Instant::now();
    let spec = NormBoundSpec::new(cfg.b.clone(), cfg.b_order.clone());
    let (result, trace) = match cfg.algorithm {
        Algorithm::Cbc => {
            let scheme = materialize_scheme(cfg.weights.as_ref().expect("validated"), &spec, cfg.s)?;
            let res = if scheme.is_effectively_product() {
                let gamma: Vec<f64> = (1..=cfg.s).map(|j| scheme.gamma(j)).collect();
                cbc::cbc_product(n, cfg.s, &gamma, Some(&spec))?
            } else {
                cbc::cbc_pod(n, cfg.s, &scheme, Some(&spec))?
            };
            (res, None)
        }
        Algorithm::Dcbc => {
            let gamma1 = cfg.gamma1.unwrap_or_else(construct::default_gamma1);
            match &cfg.gamma_order {
                None => (construct::dcbc_product(n, cfg.s, &spec, gamma1)?, None),
                Some(choice) => {
                    let (order, label) = materialize_gamma_order(choice, &spec, cfg.s)?;
                    let mut res = construct::dcbc_pod(n, cfg.s, &spec, &order, gamma1)?;
                    res.meta.order_source = Some(label);
                    (res, None)
                }
            }
        }
        Algorithm::Icbc => {
            let opts = IcbcOptions {
                lambda0: cfg.lambda0,
                tau: cfg.tau,
                k_max: cfg.k_max,
            };
            let (res, trace) = construct::icbc(n, cfg.s, &spec, opts)?;
            (res, Some(trace))
        }
    };
    Ok(RunRow {
        n,
        result,
        trace,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Inserts `_n<modulus>` ahead of the extension for grid runs.
fn vector_path(base: &Path, n: u64, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("vector");
    let ext = base.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(ext) => format!("{stem}_n{n}.{ext}"),
        None => format!("{stem}_n{n}"),
    };
    base.with_file_name(name)
}

struct OutputTracker {
    written: Vec<PathBuf>,
}

impl OutputTracker {
    fn new() -> Self {
        Self {
            written: Vec::new(),
        }
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
            }
        }
        fs::write(path, contents).map_err(|e| io_err(path, e))?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    fn discard_all(&self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
    }
}

/// Runs a configuration over its modulus grid and writes the requested
/// artifacts. Partial outputs are removed on failure.
pub fn run(cfg: &RunConfig) -> Result<Vec<RunRow>, CliError> {
    for &n in &cfg.n_grid {
        if !is_prime(n) {
            eprintln!(
                "latcbc: warning: n = {n} is composite; the naive O(n^2) kernel is engaged"
            );
        }
    }
    let rows: Result<Vec<RunRow>, CliError> = cfg
        .n_grid
        .par_iter()
        .map(|&n| execute_one(cfg, n))
        .collect();
    let rows = rows?;

    let mut tracker = OutputTracker::new();
    let outcome = write_artifacts(cfg, &rows, &mut tracker);
    if let Err(e) = outcome {
        tracker.discard_all();
        return Err(e);
    }
    Ok(rows)
}

fn write_artifacts(
    cfg: &RunConfig,
    rows: &[RunRow],
    tracker: &mut OutputTracker,
) -> Result<(), CliError> {
    let multi = cfg.n_grid.len() > 1;
    if let Some(base) = &cfg.vector_out {
        for row in rows {
            let path = vector_path(base, row.n, multi);
            tracker.write(&path, &render_vector_file(&row.result))?;
        }
    }
    if let Some(path) = &cfg.table_out {
        tracker.write(path, &render_run_table(cfg, rows))?;
    }
    if cfg.histories {
        let dir = cfg
            .table_out
            .as_deref()
            .and_then(Path::parent)
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        for row in rows {
            let path = dir.join(format!("history_n{}.csv", row.n));
            tracker.write(&path, &tables::history_csv(&row.result))?;
        }
    }
    Ok(())
}

fn render_run_table(cfg: &RunConfig, rows: &[RunRow]) -> String {
    use std::fmt::Write as _;
    let icbc = cfg.algorithm == Algorithm::Icbc;
    let mut out = String::new();
    out.push_str(if icbc { "n,E,lambda_star\n" } else { "n,E\n" });
    for row in rows {
        let e = row.result.rms_bound().unwrap_or(f64::NAN);
        if icbc {
            let ls = row.trace.as_ref().map(|t| t.lambda_star).unwrap_or(f64::NAN);
            let _ = writeln!(out, "{},{e:.4e},{ls:.3}", row.n);
        } else {
            let _ = writeln!(out, "{},{e:.4e}", row.n);
        }
    }
    let pairs: Vec<(u64, f64)> = rows
        .iter()
        .filter_map(|r| r.result.rms_bound().map(|e| (r.n, e)))
        .collect();
    if let Ok(fit) = fit_power_law(&pairs) {
        if icbc {
            let _ = writeln!(out, "rate,{:.3},", fit.exponent);
        } else {
            let _ = writeln!(out, "rate,{:.3}", fit.exponent);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// vector file format

/// Renders the self-describing vector file: `n s` on the first line, one
/// component per line, then the weights as 17-significant-digit comments.
pub fn render_vector_file(result: &ConstructionResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let s = result.gv.dimension();
    let _ = writeln!(out, "{} {}", result.gv.modulus(), s);
    for &z in result.gv.components() {
        let _ = writeln!(out, "{z}");
    }
    for i in 1..=s {
        let _ = writeln!(out, "# gamma_{i} = {:.16e}", result.scheme.gamma(i));
    }
    if !result.scheme.is_effectively_product() {
        for l in 1..=s {
            let _ = writeln!(out, "# Gamma_ratio_{l} = {:.16e}", result.scheme.order_ratio(l));
        }
    }
    out
}

/// Reads a vector file back: the vector plus the embedded weights, when
/// present.
pub fn read_vector_file(path: &Path) -> Result<(GeneratingVector, Option<WeightScheme>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_vector_file(&text).map_err(|m| CliError::Config(format!("{}: {m}", path.display())))
}

fn parse_vector_file(text: &str) -> Result<(GeneratingVector, Option<WeightScheme>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty vector file")?;
    let mut parts = header.split_whitespace();
    let n: u64 = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("first line must be 'n s'")?;
    let s: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("first line must be 'n s'")?;
    let mut z = Vec::with_capacity(s);
    let mut gamma = vec![f64::NAN; s];
    let mut ratios = vec![f64::NAN; s];
    let mut saw_gamma = false;
    let mut saw_ratio = false;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((lhs, rhs)) = rest.split_once('=') {
                let lhs = lhs.trim();
                let value: f64 = rhs.trim().parse().map_err(|_| format!("bad number in '{line}'"))?;
                if let Some(idx) = lhs.strip_prefix("gamma_") {
                    let i: usize = idx.trim().parse().map_err(|_| format!("bad index in '{line}'"))?;
                    if i == 0 || i > s {
                        return Err(format!("gamma index {i} out of range"));
                    }
                    gamma[i - 1] = value;
                    saw_gamma = true;
                } else if let Some(idx) = lhs.strip_prefix("Gamma_ratio_") {
                    let l: usize = idx.trim().parse().map_err(|_| format!("bad index in '{line}'"))?;
                    if l == 0 || l > s {
                        return Err(format!("Gamma ratio index {l} out of range"));
                    }
                    ratios[l - 1] = value;
                    saw_ratio = true;
                }
            }
            continue;
        }
        z.push(line.parse::<u64>().map_err(|_| format!("bad component '{line}'"))?);
    }
    if z.len() != s {
        return Err(format!("expected {s} components, found {}", z.len()));
    }
    let gv = GeneratingVector::new(n, z).map_err(|e| e.to_string())?;
    let scheme = if saw_gamma && saw_ratio {
        if gamma.iter().chain(ratios.iter()).any(|x| x.is_nan()) {
            return Err("incomplete weight comments".into());
        }
        Some(
            WeightScheme::pod(gamma, OrderWeights::from_ratios(ratios).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?,
        )
    } else if saw_gamma {
        if gamma.iter().any(|x| x.is_nan()) {
            return Err("incomplete weight comments".into());
        }
        Some(WeightScheme::product(gamma).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok((gv, scheme))
}

// ---------------------------------------------------------------------------
// subcommands

fn cmd_construct(args: &ConstructArgs) -> Result<(), CliError> {
    let cfg = resolve_config(args)?;
    let rows = run(&cfg)?;
    for row in &rows {
        let e = row.result.rms_bound().unwrap_or(f64::NAN);
        match &row.trace {
            Some(trace) => println!(
                "n={} E={e:.4e} lambda_star={:.3} iterations={} stop={:?}",
                row.n,
                trace.lambda_star,
                trace.iterates.len(),
                trace.stop_reason
            ),
            None => println!("n={} E={e:.4e}", row.n),
        }
        eprintln!("latcbc: n={} finished in {:.2}s", row.n, row.seconds);
    }
    Ok(())
}

fn cmd_wce(args: &WceArgs) -> Result<(), CliError> {
    let (gv, embedded) = read_vector_file(&args.vector)?;
    let s = gv.dimension();
    let scheme = match &args.weights {
        Some(v) => {
            let choice = parse_weight_choice("weights", v)?;
            let b = match &args.b {
                Some(b) => parse_coordinate_family("b", b)?,
                None => match choice {
                    WeightChoice::Lambda(_) => {
                        return Err(bad("b", "required for lambda weights"))
                    }
                    _ => CoordinateFamily::Constant(1.0),
                },
            };
            let b_order = match &args.b_order {
                Some(v) => parse_order_family("B", v)?,
                None => OrderFamily::Ones,
            };
            let spec = NormBoundSpec::new(b, b_order);
            materialize_scheme(&choice, &spec, s)?
        }
        None => embedded.ok_or_else(|| {
            bad(
                "weights",
                "the vector file embeds no weights; pass --weights",
            )
        })?,
    };
    let e = wce_pod_fixed_z(&gv, &scheme)?;
    println!("n = {}", gv.modulus());
    println!("s = {s}");
    println!("e_sh = {e:.16e}");
    println!("e_sh^2 = {:.16e}", e * e);
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    let choice = parse_weight_choice("weights", &args.weights)?;
    let b = match &args.b {
        Some(b) => parse_coordinate_family("b", b)?,
        None => match choice {
            WeightChoice::Lambda(_) => return Err(bad("b", "required for lambda weights")),
            _ => CoordinateFamily::Constant(1.0),
        },
    };
    let b_order = match &args.b_order {
        Some(v) => parse_order_family("B", v)?,
        None => OrderFamily::Ones,
    };
    let spec = NormBoundSpec::new(b, b_order);
    let scheme = materialize_scheme(&choice, &spec, args.dims)?;
    let lambdas: Vec<f64> = match args.lambda {
        Some(l) => vec![l],
        None => (0..10).map(|i| 0.55 + 0.05 * i as f64).collect(),
    };
    for lambda in lambdas {
        let bound = wce_upper_bound(&scheme, args.n, args.dims, lambda)?;
        println!("lambda={lambda:.2} bound={bound:.16e}");
    }
    Ok(())
}

fn cmd_tables(args: &TablesArgs) -> Result<(), CliError> {
    let mut ids = Vec::new();
    for part in args.which.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let id: u8 = part
            .parse()
            .map_err(|_| bad("which", format!("'{part}' is not a table id")))?;
        if !(1..=8).contains(&id) {
            return Err(bad("which", format!("table {id} does not exist (1..8)")));
        }
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if ids.is_empty() {
        return Err(bad("which", "no tables requested"));
    }
    let grid: Vec<u64> = match args.n_max {
        Some(cap) => tables::N_GRID.iter().copied().filter(|&n| n <= cap).collect(),
        None => tables::N_GRID.to_vec(),
    };
    if grid.is_empty() {
        return Err(bad("n_max", "excludes the whole modulus grid"));
    }
    let s = args.dims.unwrap_or(tables::TABLE_S);
    let started = Instant::now();
    let rep = tables::reproduce(&ids, &grid, s)?;
    eprintln!(
        "latcbc: reproduced {} table(s) in {:.1}s",
        ids.len(),
        started.elapsed().as_secs_f64()
    );

    let mut tracker = OutputTracker::new();
    let outcome = (|| -> Result<(), CliError> {
        for table in &rep.tables {
            let path = args.out_dir.join(format!("table{}.csv", table.id));
            tracker.write(&path, &tables::table_csv(table))?;
        }
        let cmp = tables::compare(&rep);
        let path = args.out_dir.join("comparison_report.txt");
        tracker.write(&path, &cmp.report)?;
        println!("{}", cmp.report);
        if s == tables::TABLE_S && !cmp.deterministic_ok {
            return Err(CliError::Numerical(
                "a deterministic table cell deviates beyond tolerance".into(),
            ));
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        if !matches!(e, CliError::Numerical(_)) {
            tracker.discard_all();
        }
        return Err(e);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_sections_and_errors() {
        let text = "\
# a comment
algorithm = dcbc
n = 31, 61
s = 10
b = poly:2
[icbc]
lambda0 = 0.8
";
        let map = parse_config_text(text).unwrap();
        assert_eq!(map["algorithm"], "dcbc");
        assert_eq!(map["n"], "31, 61");
        assert_eq!(map["icbc.lambda0"], "0.8");
        assert!(parse_config_text("nonsense line").is_err());
        assert!(parse_config_text("a = 1\na = 2").is_err());
    }

    #[test]
    fn resolve_requires_fields_and_names_them() {
        let args = ConstructArgs {
            algorithm: Some("dcbc".into()),
            ..Default::default()
        };
        let err = resolve_config(&args).unwrap_err();
        assert!(err.to_string().contains("'n'"), "{err}");
        assert_eq!(err.exit_code(), 1);

        let args = ConstructArgs {
            algorithm: Some("dcbc".into()),
            n: Some("31".into()),
            dims: Some(4),
            b: Some("poly:2".into()),
            b_order: Some("linear".into()),
            ..Default::default()
        };
        let err = resolve_config(&args).unwrap_err();
        assert!(err.to_string().contains("'Gamma'"), "{err}");
    }

    #[test]
    fn vector_file_round_trip() {
        let spec = NormBoundSpec::product_form(CoordinateFamily::PolynomialDecay(2.0));
        let res = construct::dcbc_product(31, 6, &spec, 1.0).unwrap();
        let text = render_vector_file(&res);
        let (gv, scheme) = parse_vector_file(&text).unwrap();
        assert_eq!(gv.components(), res.gv.components());
        let scheme = scheme.unwrap();
        for j in 1..=6 {
            assert_eq!(scheme.gamma(j), res.scheme.gamma(j), "17 digits round-trip");
        }
    }

    #[test]
    fn vector_file_pod_round_trip() {
        let spec = NormBoundSpec::new(CoordinateFamily::PolynomialDecay(2.0), OrderFamily::Linear);
        let order = OrderWeights::matching_order_family(spec.order(), 5);
        let res = construct::dcbc_pod(31, 5, &spec, &order, 1.0).unwrap();
        let text = render_vector_file(&res);
        let (gv, scheme) = parse_vector_file(&text).unwrap();
        assert_eq!(gv.components(), res.gv.components());
        let scheme = scheme.unwrap();
        for l in 1..=5 {
            assert_eq!(scheme.order_ratio(l), res.scheme.order_ratio(l));
        }
    }

    #[test]
    fn vector_path_insertion() {
        let p = vector_path(Path::new("out/vec.txt"), 251, true);
        assert_eq!(p, Path::new("out/vec_n251.txt"));
        let p = vector_path(Path::new("out/vec.txt"), 251, false);
        assert_eq!(p, Path::new("out/vec.txt"));
    }
}
