//! Monte-Carlo experiment harness: parameter sweeps of detection error rates,
//! the sparse test-matrix table, and the chi-square and noise-edge checks.
//!
//! Every trial draws its data from a seed derived from the configured seed,
//! the grid index and the trial index, so results do not depend on how many
//! worker threads run the trials. Wall times are only reported on request.

use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::one_or_many;
use crate::criterion::{
    estimate_dimension, ic_full_spectrum, mdl_estimate, sample_spectrum, CriterionConfig, PenaltyPolicy, Scaling,
};
use crate::datagen::{gen_signal_data, gen_sparse_lowrank, SignalModelSpec, SparseModelSpec};
use crate::error::{Error, Result};
use crate::krylov::{projection_error, OrthMode};
use crate::matrix::ObservationMatrix;
use crate::mmio::load_matrix_market;
use crate::rng::{derive_seed, grid_seed};
use crate::svg::{Chart, Series};
use crate::theory::chi_square_ratio;

/// Default signal eigenvalues of the detection experiments.
pub const DEFAULT_LAMBDAS: [f64; 5] = [20.0, 15.0, 10.0, 8.0, 6.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    MptKrylov,
    MptFull,
    Mdl,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::MptKrylov, Estimator::MptFull, Estimator::Mdl];

    pub fn name(self) -> &'static str {
        match self {
            Self::MptKrylov => "mpt-krylov",
            Self::MptFull => "mpt-full",
            Self::Mdl => "mdl",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    N,
    LambdaQ,
    Sigma,
    M,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            Self::N => "n",
            Self::LambdaQ => "lambda_q",
            Self::Sigma => "sigma",
            Self::M => "m",
        }
    }
}

/// Criterion parameters shared by every trial of an experiment.
#[derive(Clone, Debug)]
pub struct CriterionSettings {
    pub penalty: PenaltyPolicy,
    pub m: usize,
    pub epsilon: f64,
    pub scaling: Scaling,
    pub mode: OrthMode,
    pub sigma_adjust: bool,
    pub max_k: Option<usize>,
}

impl Default for CriterionSettings {
    fn default() -> Self {
        let d = CriterionConfig::default();
        Self {
            penalty: d.penalty,
            m: d.m,
            epsilon: d.epsilon,
            scaling: d.scaling,
            mode: d.mode,
            sigma_adjust: d.sigma_adjust,
            max_k: d.max_k,
        }
    }
}

impl CriterionSettings {
    pub fn config(&self, sigma: f64, seed: u64) -> CriterionConfig {
        CriterionConfig {
            sigma,
            penalty: self.penalty.clone(),
            m: self.m,
            epsilon: self.epsilon,
            scaling: self.scaling,
            sigma_adjust: self.sigma_adjust,
            max_k: self.max_k,
            mode: self.mode,
            seed,
        }
    }
}

/// Reads a `C_n` value given either as a number or as `log`.
pub fn penalty_from_value(v: &Value) -> Result<PenaltyPolicy> {
    match v {
        Value::Number(x) => Ok(PenaltyPolicy::Constant(x.as_f64().unwrap_or(f64::NAN))),
        Value::String(s) => s.parse(),
        other => Err(Error::Config(format!("cn must be `log` or a number, got {other}"))),
    }
}

fn default_cn() -> Value {
    Value::String("log".into())
}
fn default_m() -> usize {
    10
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_trials() -> usize {
    100
}
fn default_lambdas() -> Vec<f64> {
    DEFAULT_LAMBDAS.to_vec()
}
fn default_estimators() -> Vec<Estimator> {
    Estimator::ALL.to_vec()
}

/// Criterion keys accepted in every config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionKeys {
    #[serde(default = "default_cn")]
    pub cn: Value,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub scaling: Scaling,
    #[serde(default)]
    pub mode: OrthMode,
    #[serde(default)]
    pub sigma_adjust: bool,
    #[serde(default)]
    pub max_k: Option<usize>,
}

impl CriterionKeys {
    pub fn settings(&self) -> Result<CriterionSettings> {
        Ok(CriterionSettings {
            penalty: penalty_from_value(&self.cn)?,
            m: self.m,
            epsilon: self.epsilon,
            scaling: self.scaling,
            mode: self.mode,
            sigma_adjust: self.sigma_adjust,
            max_k: self.max_k,
        })
    }
}

/// File form of a sweep.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    #[serde(deserialize_with = "one_or_many")]
    pub grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub p: usize,
    pub n: usize,
    #[serde(default = "default_lambdas", deserialize_with = "one_or_many")]
    pub lambdas: Vec<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_estimators", deserialize_with = "one_or_many")]
    pub estimators: Vec<Estimator>,
    #[serde(default = "default_cn")]
    pub cn: Value,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub scaling: Scaling,
    #[serde(default)]
    pub mode: OrthMode,
    #[serde(default)]
    pub sigma_adjust: bool,
    #[serde(default)]
    pub max_k: Option<usize>,
    #[serde(default)]
    pub title: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub trials: usize,
    /// Model at the base point; `base.seed` seeds the whole sweep.
    pub base: SignalModelSpec,
    pub estimators: Vec<Estimator>,
    pub criterion: CriterionSettings,
    pub title: String,
}

impl TryFrom<SweepConfig> for SweepSpec {
    type Error = Error;

    fn try_from(c: SweepConfig) -> Result<Self> {
        let criterion = CriterionKeys {
            cn: c.cn,
            m: c.m,
            epsilon: c.epsilon,
            scaling: c.scaling,
            mode: c.mode,
            sigma_adjust: c.sigma_adjust,
            max_k: c.max_k,
        }
        .settings()?;
        let spec = SweepSpec {
            variable: c.variable,
            title: c.title.unwrap_or_else(|| format!("error rate vs {}", c.variable.name())),
            grid: c.grid,
            trials: c.trials,
            base: SignalModelSpec { p: c.p, n: c.n, lambdas: c.lambdas, sigma: c.sigma, seed: c.seed },
            estimators: c.estimators,
            criterion,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("grid must not be empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("grid must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        if matches!(self.variable, SweepVariable::N | SweepVariable::M)
            && self.grid.iter().any(|v| !(*v >= 1.0 && v.fract() == 0.0))
        {
            return Err(Error::Config(format!("{} grid values must be positive integers", self.variable.name())));
        }
        for g in 0..self.grid.len() {
            let (model, cfg) = self.point(g, 0);
            model.validate()?;
            cfg.validate(model.n)?;
        }
        Ok(())
    }

    /// Model and criterion configuration of trial `trial` at grid index `g`.
    ///
    /// A `lambda_q` grid value replaces the smallest signal eigenvalue and
    /// lifts any larger-index eigenvalue that would fall below it.
    pub fn point(&self, g: usize, trial: usize) -> (SignalModelSpec, CriterionConfig) {
        let value = self.grid[g];
        let seed = derive_seed(grid_seed(self.base.seed, g), trial as u64);
        let mut model = SignalModelSpec { seed, ..self.base.clone() };
        let mut settings = self.criterion.clone();
        match self.variable {
            SweepVariable::N => model.n = value as usize,
            SweepVariable::Sigma => model.sigma = value,
            SweepVariable::M => settings.m = value as usize,
            SweepVariable::LambdaQ => {
                for l in model.lambdas.iter_mut() {
                    *l = l.max(value);
                }
                if let Some(last) = model.lambdas.last_mut() {
                    *last = value;
                }
            }
        }
        let cfg = settings.config(model.sigma, seed);
        (model, cfg)
    }
}

/// Aggregate for one grid value and estimator.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub grid: f64,
    pub estimator: Estimator,
    /// Fraction of trials whose estimate differs from the true dimension;
    /// failed trials count as misses.
    pub error_rate: f64,
    /// Mean estimate over successful trials.
    pub mean_qhat: f64,
    pub mean_time: f64,
    pub failures: usize,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub q: usize,
    pub points: Vec<SweepPoint>,
}

struct TrialOutcome {
    estimates: Vec<(std::result::Result<usize, String>, f64)>,
}

/// Estimates of every requested estimator on one data set.
pub fn run_estimators(
    x: &ObservationMatrix,
    cfg: &CriterionConfig,
    estimators: &[Estimator],
) -> Vec<(Result<usize>, f64)> {
    let needs_spectrum = estimators.iter().any(|e| *e != Estimator::MptKrylov);
    let t = Instant::now();
    let spectrum = if needs_spectrum { Some(sample_spectrum(x)) } else { None };
    let spectrum_time = t.elapsed().as_secs_f64();
    let (p, n) = (x.p(), x.n());
    estimators
        .iter()
        .map(|e| {
            let t = Instant::now();
            let q = match e {
                Estimator::MptKrylov => estimate_dimension(x, cfg).map(|r| r.q_hat),
                Estimator::MptFull => match spectrum.as_ref().expect("spectrum") {
                    Ok(ell) => ic_full_spectrum(ell, cfg, n, p).map(|(q, _)| q),
                    Err(err) => Err(Error::Aborted(err.to_string())),
                },
                Estimator::Mdl => match spectrum.as_ref().expect("spectrum") {
                    Ok(ell) => {
                        let r = p.min(n);
                        mdl_estimate(&ell[..r], n, r)
                    }
                    Err(err) => Err(Error::Aborted(err.to_string())),
                },
            };
            let extra = if *e == Estimator::MptKrylov { 0.0 } else { spectrum_time };
            (q, t.elapsed().as_secs_f64() + extra)
        })
        .collect()
}

/// Runs every (grid value, trial) pair in parallel and tallies error rates.
///
/// Fails if more than half of the trials of any estimator at any grid value
/// end in an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let q = spec.base.q();
    let jobs: Vec<(usize, usize)> = (0..spec.grid.len()).flat_map(|g| (0..spec.trials).map(move |t| (g, t))).collect();
    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|&(g, t)| {
            let (model, cfg) = spec.point(g, t);
            let estimates = match gen_signal_data(&model) {
                Ok(x) => run_estimators(&x, &cfg, &spec.estimators)
                    .into_iter()
                    .map(|(r, time)| (r.map_err(|e| e.to_string()), time))
                    .collect(),
                Err(e) => spec.estimators.iter().map(|_| (Err(e.to_string()), 0.0)).collect(),
            };
            TrialOutcome { estimates }
        })
        .collect();

    let mut points = Vec::new();
    for (g, &value) in spec.grid.iter().enumerate() {
        let trials = &outcomes[g * spec.trials..(g + 1) * spec.trials];
        for (ei, &estimator) in spec.estimators.iter().enumerate() {
            let (mut misses, mut failures, mut sum_q, mut sum_t) = (0usize, 0usize, 0.0, 0.0);
            let mut first_error = None;
            for trial in trials {
                let (res, time) = &trial.estimates[ei];
                sum_t += time;
                match res {
                    Ok(qh) => {
                        sum_q += *qh as f64;
                        if *qh != q {
                            misses += 1;
                        }
                    }
                    Err(e) => {
                        failures += 1;
                        misses += 1;
                        first_error.get_or_insert_with(|| e.clone());
                    }
                }
            }
            if 2 * failures > spec.trials {
                return Err(Error::Aborted(format!(
                    "{} failed in {failures}/{} trials at {} = {value}: {}",
                    estimator.name(),
                    spec.trials,
                    spec.variable.name(),
                    first_error.unwrap_or_default()
                )));
            }
            let ok = spec.trials - failures;
            points.push(SweepPoint {
                grid: value,
                estimator,
                error_rate: misses as f64 / spec.trials as f64,
                mean_qhat: if ok > 0 { sum_q / ok as f64 } else { f64::NAN },
                mean_time: sum_t / spec.trials as f64,
                failures,
                trials: spec.trials,
            });
        }
    }
    Ok(SweepResult { variable: spec.variable, q, points })
}

fn opt_time(t: f64, timings: bool) -> String {
    if timings {
        format!("{t:.6}")
    } else {
        String::new()
    }
}

impl SweepResult {
    /// CSV with header `grid,estimator,error_rate,mean_qhat,mean_time`;
    /// `mean_time` is left empty unless `timings` is set.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = String::from("grid,estimator,error_rate,mean_qhat,mean_time\n");
        for pt in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                pt.grid,
                pt.estimator.name(),
                pt.error_rate,
                pt.mean_qhat,
                opt_time(pt.mean_time, timings)
            );
        }
        out
    }

    pub fn error_rates(&self, estimator: Estimator) -> Vec<(f64, f64)> {
        self.points.iter().filter(|p| p.estimator == estimator).map(|p| (p.grid, p.error_rate)).collect()
    }

    pub fn chart(&self, title: &str) -> Chart {
        let mut estimators: Vec<Estimator> = Vec::new();
        for p in &self.points {
            if !estimators.contains(&p.estimator) {
                estimators.push(p.estimator);
            }
        }
        Chart {
            title: title.to_string(),
            x_label: self.variable.name().to_string(),
            y_label: "Pr(q_est != q)".into(),
            log_x: self.variable == SweepVariable::N,
            series: estimators
                .into_iter()
                .map(|e| Series { name: e.name().to_string(), points: self.error_rates(e) })
                .collect(),
        }
    }
}

/// Number of inversions of a non-increasing trend: positions where a value
/// exceeds its predecessor by more than `tol`.
pub fn count_increases(values: &[f64], tol: f64) -> usize {
    values.windows(2).filter(|w| w[1] > w[0] + tol).count()
}

/// One data set of the sparse test-matrix table.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Entry {
    /// Matrix Market file; when absent the sparse low-rank generator is used.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Generator size.
    #[serde(default)]
    pub p: Option<usize>,
    /// Generator rank, reported as the actual dimension.
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub actual_q: Option<usize>,
    #[serde(default)]
    pub lambda_q: Option<f64>,
    #[serde(default)]
    pub density: Option<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cn")]
    pub cn: Value,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub scaling: Scaling,
    #[serde(default)]
    pub mode: OrthMode,
    #[serde(default)]
    pub sigma_adjust: bool,
    #[serde(default)]
    pub max_k: Option<usize>,
}

/// Default sparsity of generated test matrices.
pub const DEFAULT_DENSITY: f64 = 0.05;

impl Table1Entry {
    fn criterion(&self) -> Result<CriterionConfig> {
        let keys = CriterionKeys {
            cn: self.cn.clone(),
            m: self.m,
            epsilon: self.epsilon,
            scaling: self.scaling,
            mode: self.mode,
            sigma_adjust: self.sigma_adjust,
            max_k: self.max_k,
        };
        Ok(keys.settings()?.config(self.sigma, self.seed))
    }

    pub fn sparse_spec(&self) -> Result<SparseModelSpec> {
        let missing = |k: &str| Error::Config(format!("generated entries need `{k}`"));
        Ok(SparseModelSpec {
            p: self.p.ok_or_else(|| missing("p"))?,
            q: self.q.ok_or_else(|| missing("q"))?,
            lambda_q: self.lambda_q.ok_or_else(|| missing("lambda_q"))?,
            density: self.density.unwrap_or(DEFAULT_DENSITY),
            sigma: self.sigma,
            seed: self.seed,
        })
    }

    /// Loads or generates the matrix, resolving relative paths against `base_dir`.
    pub fn matrix(&self, base_dir: Option<&Path>) -> Result<ObservationMatrix> {
        match &self.path {
            Some(path) => {
                let full = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                load_matrix_market(&full)
            }
            None => gen_sparse_lowrank(&self.sparse_spec()?),
        }
    }
}

/// Named table entries in file order. Top-level scalar keys are defaults
/// applied to every section.
pub fn parse_table1(value: &Value) -> Result<Vec<(String, Table1Entry)>> {
    let obj = value.as_object().ok_or_else(|| Error::Config("table config must be an object".into()))?;
    let defaults: serde_json::Map<String, Value> =
        obj.iter().filter(|(_, v)| !v.is_object()).map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut out = Vec::new();
    for (name, v) in obj.iter().filter(|(_, v)| v.is_object()) {
        let mut merged = defaults.clone();
        for (k, x) in v.as_object().expect("object") {
            merged.insert(k.clone(), x.clone());
        }
        let entry: Table1Entry =
            serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(format!("[{name}]: {e}")))?;
        out.push((name.clone(), entry));
    }
    if out.is_empty() {
        return Err(Error::Config("table config lists no data sets".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub dataset: String,
    pub p: Option<usize>,
    pub actual_q: Option<usize>,
    pub lambda_q: Option<f64>,
    pub sigma: f64,
    pub estimated_q: Option<usize>,
    pub frob_error: Option<f64>,
    pub runtime: Option<f64>,
    pub error: Option<String>,
}

/// Runs the estimator on one entry; failures are captured in the row.
pub fn run_table1_entry(name: &str, entry: &Table1Entry, base_dir: Option<&Path>) -> Table1Row {
    let mut row = Table1Row {
        dataset: name.to_string(),
        p: entry.p,
        actual_q: entry.actual_q.or(if entry.path.is_none() { entry.q } else { None }),
        lambda_q: entry.lambda_q,
        sigma: entry.sigma,
        estimated_q: None,
        frob_error: None,
        runtime: None,
        error: None,
    };
    let outcome = (|| -> Result<(usize, usize, f64, f64)> {
        let cfg = entry.criterion()?;
        let x = entry.matrix(base_dir)?;
        let t = Instant::now();
        let r = estimate_dimension(&x, &cfg)?;
        let runtime = t.elapsed().as_secs_f64();
        let err = projection_error(&x, &r.subspace)?;
        Ok((x.p(), r.q_hat, err, runtime))
    })();
    match outcome {
        Ok((p, q, err, runtime)) => {
            row.p = Some(p);
            row.estimated_q = Some(q);
            row.frob_error = Some(err);
            row.runtime = Some(runtime);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every entry in order.
pub fn run_table1(entries: &[(String, Table1Entry)], base_dir: Option<&Path>) -> Vec<Table1Row> {
    entries.iter().map(|(name, e)| run_table1_entry(name, e, base_dir)).collect()
}

/// CSV with header `dataset,p,actual_q,lambda_q,sigma,estimated_q,frob_error,runtime`.
/// Failed rows leave the result columns empty; `runtime` is empty unless
/// `timings` is set.
pub fn table1_csv(rows: &[Table1Row], timings: bool) -> String {
    fn cell<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(ToString::to_string).unwrap_or_default()
    }
    let mut out = String::from("dataset,p,actual_q,lambda_q,sigma,estimated_q,frob_error,runtime\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.dataset,
            cell(&r.p),
            cell(&r.actual_q),
            cell(&r.lambda_q),
            r.sigma,
            cell(&r.estimated_q),
            r.frob_error.map(|e| format!("{e:.6}")).unwrap_or_default(),
            r.runtime.map(|t| opt_time(t, timings)).unwrap_or_default()
        );
    }
    out
}

/// File form of the chi-square check.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chi2Config {
    pub p: usize,
    #[serde(default = "default_lambdas", deserialize_with = "one_or_many")]
    pub lambdas: Vec<f64>,
    pub sigma: f64,
    #[serde(deserialize_with = "one_or_many")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_chi2_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_chi2_trials() -> usize {
    30
}

impl Chi2Config {
    pub fn model(&self) -> SignalModelSpec {
        SignalModelSpec {
            p: self.p,
            n: self.n_grid.first().copied().unwrap_or(1),
            lambdas: self.lambdas.clone(),
            sigma: self.sigma,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Chi2Point {
    pub n: usize,
    pub mean_ratio: f64,
}

/// Mean of the tail chi-square ratio over `trials` data sets per `n`.
pub fn run_chi2_check(spec: &SignalModelSpec, n_grid: &[usize], trials: usize) -> Result<Vec<Chi2Point>> {
    if n_grid.is_empty() || trials == 0 {
        return Err(Error::Config("need a non-empty n grid and at least one trial".into()));
    }
    let q = spec.q();
    let jobs: Vec<(usize, usize)> = (0..n_grid.len()).flat_map(|g| (0..trials).map(move |t| (g, t))).collect();
    let ratios: Vec<f64> = jobs
        .par_iter()
        .map(|&(g, t)| {
            let model =
                SignalModelSpec { n: n_grid[g], seed: derive_seed(grid_seed(spec.seed, g), t as u64), ..spec.clone() };
            let x = gen_signal_data(&model)?;
            chi_square_ratio(&sample_spectrum(&x)?, model.sigma, q)
        })
        .collect::<Result<_>>()?;
    Ok(n_grid
        .iter()
        .enumerate()
        .map(|(g, &n)| Chi2Point {
            n,
            mean_ratio: ratios[g * trials..(g + 1) * trials].iter().sum::<f64>() / trials as f64,
        })
        .collect())
}

pub fn chi2_csv(points: &[Chi2Point]) -> String {
    let mut out = String::from("n,mean_ratio\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.n, p.mean_ratio);
    }
    out
}

pub fn chi2_chart(points: &[Chi2Point]) -> Chart {
    Chart {
        title: "mean chi-square ratio".into(),
        x_label: "n".into(),
        y_label: "ratio".into(),
        log_x: true,
        series: vec![Series {
            name: "mean ratio".into(),
            points: points.iter().map(|p| (p.n as f64, p.mean_ratio)).collect(),
        }],
    }
}

/// Largest eigenvalue of pure-noise sample covariances, one per trial.
pub fn noise_top_eigenvalues(p: usize, n: usize, sigma: f64, trials: usize, seed: u64) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let model = SignalModelSpec { p, n, lambdas: Vec::new(), sigma, seed: derive_seed(seed, t as u64) };
            Ok(sample_spectrum(&gen_signal_data(&model)?)?[0])
        })
        .collect()
}
