use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use minor_extremes::chen_stein::run_chen_stein;
use minor_extremes::experiments::persist::{sidecar_path, to_csv};
use minor_extremes::experiments::{
    centered_column, ecdf, eigvec_law_test, fit_c, independence_diag, ks_distance, load, persist,
    run_trials, ExperimentConfig, Sidecar, TrialResult,
};
use minor_extremes::km::estimate_km_seeded;
use minor_extremes::laws::{
    c1_explicit, c2_explicit, classical_cdf, classical_norming, constant_c_m, k_closed,
    log_partition_z, partition_z, GumbelLaw,
};
use minor_extremes::matrix_file::read_matrix;
use minor_extremes::sampler::SEED_ENV;
use minor_extremes::scan::scan_max_parallel;
use minor_extremes::{Error, Workers, CODE_VERSION};

#[derive(Parser)]
#[command(
    name = "minor-extremes",
    version,
    about = "Extreme eigenvalues of GOE principal minors: constants, simulation and limit-law tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print c_m, K_m, and for a given n also Z_n and the classical norming
    Constants(ConstantsArgs),
    /// Monte Carlo estimate of K_m
    Km(KmArgs),
    /// Simulate T_{m,n} and v* and optionally persist the trials
    Simulate(SimulateArgs),
    /// Compare the centered statistic with the Gumbel law F_Y
    GumbelTest(GumbelArgs),
    /// Compare v* with the law nu and check independence from T
    EigvecTest(EigvecArgs),
    /// Poisson-approximation bounds and a direct P(S = 0) simulation
    ChenStein(ChenSteinArgs),
    /// Scan every m x m principal minor of a matrix read from a file
    Scan(ScanArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
struct Common {
    /// Master seed; the flag takes precedence over the environment
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all available cores); never changes results
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Serialize)]
struct ConstantsArgs {
    /// Minor size
    #[arg(long)]
    m: usize,
    /// Matrix size for Z_n and the classical norming
    #[arg(long)]
    n: Option<u64>,
    /// Use this value of K_m (required for m >= 3 unless --estimate-km)
    #[arg(long = "Km")]
    k_m: Option<f64>,
    /// Estimate K_m by Monte Carlo with --samples draws
    #[arg(long = "estimate-km", conflicts_with = "k_m", requires = "samples")]
    estimate_km: bool,
    /// Draws for --estimate-km
    #[arg(long)]
    samples: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct KmArgs {
    /// Dimension of the sphere's ambient space
    #[arg(long)]
    m: usize,
    /// Uniform draws on the sphere
    #[arg(long)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    /// Matrix size
    #[arg(long)]
    n: u64,
    /// Minor size
    #[arg(long)]
    m: usize,
    /// Number of simulated matrices
    #[arg(long)]
    trials: u64,
    /// Threshold grid recorded with the run (comma-separated)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<f64>,
    /// Write trials to this CSV file plus a JSON sidecar next to it
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall times and the start time (output is then not reproducible)
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

/// Where trials come from: a fresh simulation or a persisted CSV.
#[derive(Args, Serialize)]
struct TrialSource {
    /// Matrix size
    #[arg(long, required_unless_present = "from", conflicts_with = "from")]
    n: Option<u64>,
    /// Minor size
    #[arg(long, required_unless_present = "from", conflicts_with = "from")]
    m: Option<usize>,
    /// Number of simulated matrices
    #[arg(long, required_unless_present = "from", conflicts_with = "from")]
    trials: Option<u64>,
    /// Load trials written by `simulate --out` instead of simulating
    #[arg(long)]
    from: Option<PathBuf>,
    /// Persist freshly simulated trials to this CSV (plus JSON sidecar)
    #[arg(long, conflicts_with = "from")]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GumbelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: TrialSource,
    /// K_m used for c_m when m >= 3
    #[arg(long = "Km")]
    k_m: Option<f64>,
    /// Points of the ECDF table (comma-separated)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct EigvecArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: TrialSource,
    /// Keep trials whose centered statistic exceeds this quantile
    #[arg(long, default_value_t = 0.5)]
    cutoff: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct ChenSteinArgs {
    /// Matrix size
    #[arg(long)]
    n: u64,
    /// Minor size
    #[arg(long)]
    m: usize,
    /// Threshold shift y in y_m
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
    /// Draws for each moment estimate (p and every q_k)
    #[arg(long)]
    trials: u64,
    /// Full-matrix trials for the direct P(S = 0) estimate
    #[arg(long, default_value_t = 100_000)]
    void_trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    /// Matrix file: dimension on the first line, then one row per line
    matrix: PathBuf,
    /// Minor size
    #[arg(long)]
    m: usize,
    /// Evaluate every minor without branch-and-bound
    #[arg(long)]
    no_pruning: bool,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

const DEFAULT_Y_GRID: [f64; 11] = [-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            e => Failure::Runtime(e),
        }
    }
}

type CliResult = std::result::Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn envelope(command: &str, seed: u64, flags: &impl Serialize, result: Value) -> Value {
    json!({
        "command": command,
        "code_version": CODE_VERSION,
        "seed": seed,
        "flags": flags,
        "result": result,
    })
}

fn json_only(format: Format, command: &str) -> std::result::Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(usage(format!("`{command}` only supports --format json"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Constants(a) => constants(a),
        Command::Km(a) => km(a),
        Command::Simulate(a) => simulate(a),
        Command::GumbelTest(a) => gumbel_test(a),
        Command::EigvecTest(a) => eigvec_test(a),
        Command::ChenStein(a) => chen_stein(a),
        Command::Scan(a) => scan(a),
    };
    match outcome {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => {
                    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
                    s.push('\n');
                    s
                }
                Output::Text(s) => s,
            };
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn constants(a: ConstantsArgs) -> CliResult {
    json_only(a.common.format, "constants")?;
    let (k_m, source, stderr) = match (a.k_m, a.estimate_km, k_closed(a.m)) {
        (Some(k), _, _) => (k, "given", None),
        (None, true, _) => {
            let samples = a.samples.ok_or_else(|| usage("--estimate-km requires --samples"))?;
            let e = estimate_km_seeded(a.m, samples, a.common.seed, Workers(a.common.workers))?;
            (e.estimate, "estimated", Some(e.stderr))
        }
        (None, false, Some(k)) => (k, "closed_form", None),
        (None, false, None) => {
            return Err(usage(format!(
                "m = {} has no closed-form K_m; pass --Km or --estimate-km --samples N",
                a.m
            )))
        }
    };
    let mut result = json!({
        "m": a.m,
        "K_m": k_m,
        "K_m_source": source,
        "K_m_stderr": stderr,
        "c_m": constant_c_m(a.m, k_m)?,
    });
    let explicit = match a.m {
        1 => Some(c1_explicit()),
        2 => Some(c2_explicit()),
        _ => None,
    };
    result["c_m_explicit"] = json!(explicit);
    if let Some(n) = a.n {
        let dim = usize::try_from(n).map_err(|_| usage("n is too large"))?;
        let (a_n, b_n) = classical_norming(n)?;
        result["n"] = json!(n);
        result["ln_Z_n"] = json!(log_partition_z(dim)?);
        result["Z_n"] = json!(partition_z(dim).ok());
        result["classical_norming"] = json!({ "a_n": a_n, "b_n": b_n });
    }
    Ok(Output::Json(envelope("constants", a.common.seed, &a, result)))
}

fn km(a: KmArgs) -> CliResult {
    json_only(a.common.format, "km")?;
    let e = estimate_km_seeded(a.m, a.samples, a.common.seed, Workers(a.common.workers))?;
    let mut result = serde_json::to_value(&e).expect("estimate serializes");
    result["closed_form"] = json!(k_closed(a.m));
    Ok(Output::Json(envelope("km", a.common.seed, &a, result)))
}

fn write_trials(results: &[TrialResult], cfg: &ExperimentConfig, started_at: Option<String>, out: &Path) -> std::result::Result<Value, Failure> {
    persist(results, &Sidecar::from_config(cfg, started_at), out)?;
    Ok(json!({
        "csv": out.display().to_string(),
        "sidecar": sidecar_path(out).display().to_string(),
    }))
}

fn summary(results: &[TrialResult]) -> Value {
    let count = results.len() as f64;
    let mean = |f: fn(&TrialResult) -> f64| results.iter().map(f).sum::<f64>() / count;
    json!({
        "trials": results.len(),
        "mean_T": mean(|r| r.t),
        "mean_centered": mean(|r| r.centered),
        "max_T": results.iter().map(|r| r.t).fold(f64::NEG_INFINITY, f64::max),
    })
}

fn simulate(a: SimulateArgs) -> CliResult {
    let mut cfg = ExperimentConfig::new(a.n, a.m, a.trials, a.common.seed);
    cfg.y_grid = a.y.clone();
    cfg.workers = Workers(a.common.workers);
    cfg.out = a.out.clone();
    cfg.record_timings = a.timings;
    cfg.validate()?;
    let started_at = a.timings.then(|| chrono::Utc::now().to_rfc3339());
    let results = run_trials(&cfg)?;
    let files = match &a.out {
        Some(out) => Some(write_trials(&results, &cfg, started_at, out)?),
        None => None,
    };
    match (a.common.format, files) {
        (Format::Csv, _) => Ok(Output::Text(to_csv(&results))),
        (Format::Json, Some(files)) => {
            let result = json!({ "files": files, "summary": summary(&results) });
            Ok(Output::Json(envelope("simulate", a.common.seed, &a, result)))
        }
        (Format::Json, None) => {
            let result = json!({ "summary": summary(&results), "trials": results });
            Ok(Output::Json(envelope("simulate", a.common.seed, &a, result)))
        }
    }
}

/// Trials and `(n, m)` from either source. A loaded run reports its own seed.
fn obtain_trials(src: &TrialSource, common: &Common) -> std::result::Result<(Vec<TrialResult>, u64, usize, u64, Option<Value>), Failure> {
    if let Some(path) = &src.from {
        let (results, sc) = load(path)?;
        if results.is_empty() {
            return Err(Failure::Runtime(Error::InsufficientData(format!(
                "{} holds no trials",
                path.display()
            ))));
        }
        return Ok((results, sc.n, sc.m, sc.seed, None));
    }
    let (n, m, trials) = match (src.n, src.m, src.trials) {
        (Some(n), Some(m), Some(t)) => (n, m, t),
        _ => return Err(usage("--n, --m and --trials are required without --from")),
    };
    let mut cfg = ExperimentConfig::new(n, m, trials, common.seed);
    cfg.workers = Workers(common.workers);
    cfg.out = src.out.clone();
    cfg.validate()?;
    let results = run_trials(&cfg)?;
    let files = match &src.out {
        Some(out) => Some(write_trials(&results, &cfg, None, out)?),
        None => None,
    };
    Ok((results, n, m, common.seed, files))
}

fn gumbel_test(a: GumbelArgs) -> CliResult {
    let (results, n, m, seed, files) = obtain_trials(&a.source, &a.common)?;
    let k_m = match (a.k_m, k_closed(m)) {
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(usage(format!("m = {m} needs --Km to fix c_m"))),
    };
    let c_m = constant_c_m(m, k_m)?;
    let law = GumbelLaw::new(c_m)?;
    let centered = centered_column(&results);
    let ks = ks_distance(&centered, |y| law.cdf(y))?;
    let c_hat = fit_c(&centered)?;
    let grid = if a.y.is_empty() { DEFAULT_Y_GRID.to_vec() } else { a.y.clone() };
    let e = ecdf(&centered)?;
    let table: Vec<Value> = grid
        .iter()
        .map(|&y| json!({ "y": y, "ecdf": e.eval(y), "model": law.cdf(y) }))
        .collect();
    if a.common.format == Format::Csv {
        let mut s = String::from("y,ecdf,model\n");
        for &y in &grid {
            s.push_str(&format!("{y:.16e},{:.16e},{:.16e}\n", e.eval(y), law.cdf(y)));
        }
        return Ok(Output::Text(s));
    }
    let mut result = json!({
        "n": n,
        "m": m,
        "trials": results.len(),
        "K_m": k_m,
        "c_m": c_m,
        "ks": ks,
        "c_hat": c_hat,
        "c_hat_ratio": c_hat / c_m,
        "ecdf_table": table,
        "files": files,
    });
    if m == 1 {
        let (a_n, b_n) = classical_norming(n)?;
        let normed: Vec<f64> = results.iter().map(|r| a_n * (r.t - b_n)).collect();
        let classical_ks = ks_distance(&normed, classical_cdf)?;
        result["classical"] = json!({
            "a_n": a_n,
            "b_n": b_n,
            "ks": classical_ks,
            "ks_gap": (classical_ks - ks).abs(),
        });
    }
    Ok(Output::Json(envelope("gumbel-test", seed, &a, result)))
}

fn eigvec_test(a: EigvecArgs) -> CliResult {
    json_only(a.common.format, "eigvec-test")?;
    let (results, n, m, seed, files) = obtain_trials(&a.source, &a.common)?;
    let report = eigvec_law_test(&results, a.cutoff, seed)?;
    let rho = independence_diag(&results)?;
    let result = json!({
        "n": n,
        "m": m,
        "trials": results.len(),
        "eigvec_law": report,
        "independence_abs_corr": rho,
        "files": files,
    });
    Ok(Output::Json(envelope("eigvec-test", seed, &a, result)))
}

fn chen_stein(a: ChenSteinArgs) -> CliResult {
    json_only(a.common.format, "chen-stein")?;
    let report = run_chen_stein(
        a.n,
        a.m,
        a.y,
        a.trials,
        a.void_trials,
        a.common.seed,
        Workers(a.common.workers),
    )?;
    let result = serde_json::to_value(&report).expect("report serializes");
    Ok(Output::Json(envelope("chen-stein", a.common.seed, &a, result)))
}

fn scan(a: ScanArgs) -> CliResult {
    let g = read_matrix(&a.matrix).map_err(|e| match e {
        // a malformed file is bad input, not a runtime failure
        Error::Parse { .. } | Error::Io { .. } => usage(e.to_string()),
        e => Failure::from(e),
    })?;
    let r = scan_max_parallel(&g, a.m, !a.no_pruning, Workers(a.common.workers))?;
    if a.common.format == Format::Csv {
        let alpha = r.argmax.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";");
        let v = r.v_star.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(";");
        return Ok(Output::Text(format!(
            "T,alpha_star,v_star,minors_evaluated,minors_pruned\n{:.16e},{alpha},{v},{},{}\n",
            r.t, r.minors_evaluated, r.minors_pruned
        )));
    }
    let result = json!({
        "dim": g.dim(),
        "m": a.m,
        "T": r.t,
        "alpha_star": r.argmax,
        "v_star": r.v_star,
        "minors_evaluated": r.minors_evaluated,
        "minors_pruned": r.minors_pruned,
    });
    Ok(Output::Json(envelope("scan", a.common.seed, &a, result)))
}
