use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krydim::config::{load_config, parse_value};
use krydim::criterion::{estimate_dimension, CriterionConfig, PenaltyPolicy, Scaling};
use krydim::datagen::{gen_signal_data, gen_sparse_lowrank, SignalModelSpec, SparseModelSpec};
use krydim::harness::{
    chi2_chart, chi2_csv, parse_table1, run_chi2_check, run_sweep, run_table1, table1_csv, Chi2Config, SweepConfig,
    SweepSpec,
};
use krydim::krylov::OrthMode;
use krydim::mmio::{load_matrix_market, write_array, write_matrix};
use krydim::theory::DetectionReport;
use krydim::Error;

const WORKERS_ENV: &str = "KRYDIM_WORKERS";

#[derive(Parser)]
#[command(name = "krydim", version, about = "Principal-subspace dimension estimation with block Krylov methods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the dimension and basis of the principal subspace of a Matrix Market file.
    Estimate(EstimateArgs),
    /// Run a Monte-Carlo error-rate sweep.
    Sweep(RunArgs),
    /// Run the dimension/error table over files and generated matrices.
    Table1(RunArgs),
    /// Run the chi-square ratio check.
    Chi2(RunArgs),
    /// Print the closed-form detection conditions.
    Conditions(ConditionsArgs),
    /// Write a synthetic data set as Matrix Market.
    Generate(GenerateArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EstimateArgs {
    /// Matrix Market file holding the p x n observation matrix.
    matrix: PathBuf,
    /// Noise variance.
    #[arg(long)]
    sigma: f64,
    /// Penalty weight: `log` or a number.
    #[arg(long, default_value = "log")]
    cn: String,
    /// Krylov steps per iteration.
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value = "paper-truncated")]
    mode: String,
    #[arg(long, default_value = "eq2")]
    scaling: String,
    /// Use (1 - epsilon) sigma inside the criterion.
    #[arg(long)]
    sigma_adjust: bool,
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for result.json, ic_trace.csv, ritz_values.csv and subspace.mtx.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall times in the output.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (key = value or JSON).
    config: PathBuf,
    /// Directory for the CSV and SVG outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall times in the output.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ConditionsArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value = "log")]
    cn: String,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// File with observed eigenvalues, one per line, non-increasing.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Signal,
    Sparse,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    model: Model,
    /// Model config (key = value or JSON).
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn write_file(dir: &Path, name: &str, contents: &str) -> CmdResult {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn parse_penalty(s: &str) -> Result<PenaltyPolicy, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn estimate(args: EstimateArgs) -> CmdResult {
    let cfg = CriterionConfig {
        sigma: args.sigma,
        penalty: parse_penalty(&args.cn)?,
        m: args.m,
        epsilon: args.epsilon,
        scaling: args.scaling.parse::<Scaling>().map_err(|e| Failure::Usage(e.to_string()))?,
        sigma_adjust: args.sigma_adjust,
        max_k: args.max_k,
        mode: args.mode.parse::<OrthMode>().map_err(|e| Failure::Usage(e.to_string()))?,
        seed: args.seed,
    };
    let x = load_matrix_market(&args.matrix).map_err(|e| match e {
        Error::Io(io) => Failure::Data(format!("{}: {io}", args.matrix.display())),
        other => other.into(),
    })?;
    cfg.validate(x.n())?;
    let result = estimate_dimension(&x, &cfg)?;
    let mut doc = result.to_json(&cfg, x.p(), x.n(), args.timings);
    doc["input"] = serde_json::Value::String(args.matrix.display().to_string());
    let json = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    if let Some(dir) = &args.out {
        write_file(dir, "result.json", &json)?;
        write_file(dir, "ic_trace.csv", &result.ic_trace_csv())?;
        write_file(dir, "ritz_values.csv", &result.ritz_csv())?;
        write_array(dir.join("subspace.mtx"), &result.subspace)?;
    }
    print!("{json}");
    Ok(())
}

fn sweep(args: RunArgs) -> CmdResult {
    let mut config: SweepConfig = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let spec = SweepSpec::try_from(config)?;
    let result = run_sweep(&spec)?;
    let csv = result.to_csv(args.timings);
    if let Some(dir) = &args.out {
        write_file(dir, "sweep.csv", &csv)?;
        write_file(dir, "sweep.svg", &result.chart(&spec.title).render())?;
    }
    print!("{csv}");
    Ok(())
}

fn table1(args: RunArgs) -> CmdResult {
    let text = fs::read_to_string(&args.config)?;
    let mut entries = parse_table1(&parse_value(&text)?)?;
    if let Some(seed) = args.seed {
        entries.iter_mut().for_each(|(_, e)| e.seed = seed);
    }
    let rows = run_table1(&entries, args.config.parent());
    for row in &rows {
        if let Some(err) = &row.error {
            eprintln!("{}: {err}", row.dataset);
        }
    }
    let csv = table1_csv(&rows, args.timings);
    if let Some(dir) = &args.out {
        write_file(dir, "table1.csv", &csv)?;
    }
    print!("{csv}");
    if rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::Data("every data set failed".into()));
    }
    Ok(())
}

fn chi2(args: RunArgs) -> CmdResult {
    let mut config: Chi2Config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let points = run_chi2_check(&config.model(), &config.n_grid, config.trials)?;
    let csv = chi2_csv(&points);
    if let Some(dir) = &args.out {
        write_file(dir, "chi2.csv", &csv)?;
        write_file(dir, "chi2.svg", &chi2_chart(&points).render())?;
    }
    print!("{csv}");
    Ok(())
}

fn read_spectrum(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = fs::read_to_string(path)?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Failure::Data(format!("{}: bad eigenvalue {t:?}", path.display()))))
        .collect()
}

fn conditions(args: ConditionsArgs) -> CmdResult {
    let cn = parse_penalty(&args.cn)?.value(args.n);
    let spectrum = args.spectrum.as_deref().map(read_spectrum).transpose()?;
    let report = DetectionReport::new(args.sigma, cn, args.n, args.p, args.q, args.epsilon, spectrum.as_deref())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> CmdResult {
    let x = match args.model {
        Model::Signal => {
            let mut spec: SignalModelSpec = load_config(&args.config)?;
            spec.seed = args.seed.unwrap_or(spec.seed);
            gen_signal_data(&spec)?
        }
        Model::Sparse => {
            let mut spec: SparseModelSpec = load_config(&args.config)?;
            spec.seed = args.seed.unwrap_or(spec.seed);
            gen_sparse_lowrank(&spec)?
        }
    };
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_matrix(&args.out, &x)?;
    Ok(())
}

fn configure_workers() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|w| *w > 0)
        .ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    configure_workers()?;
    match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Sweep(a) => sweep(a),
        Command::Table1(a) => table1(a),
        Command::Chi2(a) => chi2(a),
        Command::Conditions(a) => conditions(a),
        Command::Generate(a) => generate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
