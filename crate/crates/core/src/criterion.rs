//! The dimension-selection criterion `IC(k)`, the `Phi` shortcut that makes it
//! computable from the top-`k` eigenvalues alone, the incremental Krylov
//! estimation loop with early stopping, and the MDL baseline.
//!
//! For eigenvalues `l_1 >= ... >= l_p` of `S_n`,
//!
//! ```text
//! IC(k) = n / (2 sigma^2) * sum_{i>k} (l_i - sigma)^2 - C_n (p-k)(p-k-1)/2
//! ```
//!
//! and `sum_{i>k} (l_i - sigma)^2 = Phi - sum_{i<=k} (l_i - sigma)^2` with
//! `Phi = ||S_n - sigma I||_F^2`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::eig::symmetric_eig_small;
use crate::error::{Error, Result};
use crate::krylov::{draw_block, KrylovState, OrthMode, SpectrumEstimate};
use crate::matrix::{DenseMatrix, ObservationMatrix};
use crate::rng::SeedStream;

/// Penalty weight `C_n` as a function of the sample count.
#[derive(Clone, Default)]
pub enum PenaltyPolicy {
    /// `C_n = ln n`.
    #[default]
    LogN,
    Constant(f64),
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl PenaltyPolicy {
    pub fn value(&self, n: usize) -> f64 {
        match self {
            Self::LogN => (n as f64).ln(),
            Self::Constant(c) => *c,
            Self::Custom(f) => f(n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::LogN => "log".into(),
            Self::Constant(c) => format!("{c}"),
            Self::Custom(_) => "custom".into(),
        }
    }
}

impl fmt::Debug for PenaltyPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PenaltyPolicy({})", self.label())
    }
}

impl std::str::FromStr for PenaltyPolicy {
    type Err = Error;

    /// `log`, `logn` or a positive number.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" | "logn" | "log_n" | "ln" => Ok(Self::LogN),
            other => other
                .parse::<f64>()
                .map(Self::Constant)
                .map_err(|_| Error::Parameter(format!("C_n must be `log` or a number, got {other:?}"))),
        }
    }
}

/// Normalization of the goodness-of-fit term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `n / (2 sigma^2)` in front of the fit term.
    #[default]
    Eq2,
    /// Plain `n` in front of the fit term.
    Alg1Literal,
}

impl std::str::FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq2" => Ok(Self::Eq2),
            "alg1-literal" | "alg1" => Ok(Self::Alg1Literal),
            other => Err(Error::Parameter(format!("unknown scaling {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionConfig {
    /// Noise variance.
    pub sigma: f64,
    pub penalty: PenaltyPolicy,
    /// Krylov steps per iteration.
    pub m: usize,
    /// Krylov accuracy parameter, in `(0, 1)`.
    pub epsilon: f64,
    pub scaling: Scaling,
    /// Use `(1 - epsilon) sigma` inside the criterion.
    pub sigma_adjust: bool,
    /// Cap on the candidate dimension; `None` means `min(p, n) - 1`.
    pub max_k: Option<usize>,
    pub mode: OrthMode,
    pub seed: u64,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            penalty: PenaltyPolicy::LogN,
            m: 10,
            epsilon: 0.1,
            scaling: Scaling::Eq2,
            sigma_adjust: false,
            max_k: None,
            mode: OrthMode::PaperTruncated,
            seed: 0,
        }
    }
}

impl CriterionConfig {
    pub fn with_sigma(sigma: f64) -> Self {
        Self { sigma, ..Self::default() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Parameter(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        if n >= 2 {
            let cn = self.penalty.value(n);
            if !(cn > 0.0 && cn.is_finite()) {
                return Err(Error::Parameter(format!("C_n({n}) = {cn} must be positive")));
            }
        }
        Ok(())
    }

    /// The `sigma` actually used in `Phi` and `IC`.
    pub fn effective_sigma(&self) -> f64 {
        if self.sigma_adjust {
            (1.0 - self.epsilon) * self.sigma
        } else {
            self.sigma
        }
    }

    /// Krylov depth suggested by the accuracy target: `ceil(ln p / sqrt(epsilon))`.
    pub fn depth_for_accuracy(p: usize, epsilon: f64) -> usize {
        ((p as f64).ln() / epsilon.sqrt()).ceil().max(1.0) as usize
    }
}

/// `||S_n - sigma I||_F^2 = ||X^T X||_F^2 / n^2 - 2 sigma ||X||_F^2 / n + p sigma^2`.
pub fn phi(x: &ObservationMatrix, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("sigma must be positive, got {sigma}")));
    }
    let n = x.n() as f64;
    let value = x.gram_frob_sq() / (n * n) - 2.0 * sigma * x.frob_sq() / n + x.p() as f64 * sigma * sigma;
    // a squared norm; rounding can push an exact zero slightly negative
    Ok(value.max(0.0))
}

fn penalty_term(cn: f64, p: usize, k: usize) -> f64 {
    let r = (p - k) as f64;
    cn * r * (r - 1.0) / 2.0
}

fn fit_scale(scaling: Scaling, n: usize, sigma: f64) -> f64 {
    match scaling {
        Scaling::Eq2 => n as f64 / (2.0 * sigma * sigma),
        Scaling::Alg1Literal => n as f64,
    }
}

/// `IC(k)` from the top-`k` values and `Phi`.
pub fn ic_value(theta_prefix: &[f64], phi: f64, k: usize, cfg: &CriterionConfig, n: usize, p: usize) -> Result<f64> {
    if theta_prefix.len() != k {
        return Err(Error::Parameter(format!("expected {k} values, got {}", theta_prefix.len())));
    }
    if k > p {
        return Err(Error::Dimension(format!("k = {k} exceeds p = {p}")));
    }
    if let Some(i) = theta_prefix.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::Order(i + 1));
    }
    let sigma = cfg.effective_sigma();
    let partial: f64 = theta_prefix.iter().map(|t| (t - sigma) * (t - sigma)).sum();
    // relative slack plus an absolute floor at the scale of a single sigma^2 term
    if partial > phi * (1.0 + 1e-8) + 1e-12 * p as f64 * sigma * sigma {
        return Err(Error::InconsistentInput { partial, total: phi });
    }
    let cn = cfg.penalty.value(n);
    Ok(fit_scale(cfg.scaling, n, sigma) * (phi - partial) - penalty_term(cn, p, k))
}

/// Index of the smallest entry; ties go to the smaller index.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Evaluates `IC(k)` for `k = 0..p-1` from the full spectrum (exact tail sums)
/// and returns the global minimizer together with the trace.
pub fn ic_full_spectrum(ell: &[f64], cfg: &CriterionConfig, n: usize, p: usize) -> Result<(usize, Vec<f64>)> {
    if ell.len() != p {
        return Err(Error::Dimension(format!("expected {p} eigenvalues, got {}", ell.len())));
    }
    if p == 0 {
        return Err(Error::Dimension("empty spectrum".into()));
    }
    if let Some(i) = ell.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::Order(i + 1));
    }
    let sigma = cfg.effective_sigma();
    let cn = cfg.penalty.value(n);
    let scale = fit_scale(cfg.scaling, n, sigma);
    // tail[k] = sum_{i >= k} (l_i - sigma)^2, accumulated from the small end
    let mut tail = vec![0.0; p + 1];
    for i in (0..p).rev() {
        tail[i] = tail[i + 1] + (ell[i] - sigma) * (ell[i] - sigma);
    }
    let trace: Vec<f64> = (0..p).map(|k| scale * tail[k] - penalty_term(cn, p, k)).collect();
    Ok((argmin(&trace), trace))
}

/// `MDL(k)` for `k = 0..p-1`.
pub fn mdl_trace(ell: &[f64], n: usize, p: usize) -> Result<Vec<f64>> {
    if ell.len() != p || p == 0 {
        return Err(Error::Dimension(format!("expected {p} eigenvalues, got {}", ell.len())));
    }
    if n < 2 {
        return Err(Error::Domain("MDL needs n >= 2".into()));
    }
    if let Some(i) = ell.iter().position(|&l| !(l > 0.0)) {
        return Err(Error::Domain(format!("eigenvalue {} = {} is not positive", i + 1, ell[i])));
    }
    if let Some(i) = ell.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::Order(i + 1));
    }
    let logn = (n as f64).ln();
    let nf = n as f64;
    Ok((0..p)
        .map(|k| {
            let tail = &ell[k..];
            let len = tail.len() as f64;
            let log_geo = tail.iter().map(|l| l.ln()).sum::<f64>() / len;
            let log_arith = (tail.iter().sum::<f64>() / len).ln();
            let kf = k as f64;
            -nf * len * (log_geo - log_arith) + 0.5 * kf * (2.0 * p as f64 - kf) * logn
        })
        .collect())
}

/// Minimum-description-length estimate of the signal count.
pub fn mdl_estimate(ell: &[f64], n: usize, p: usize) -> Result<usize> {
    Ok(argmin(&mdl_trace(ell, n, p)?))
}

/// All `p` eigenvalues of `S_n`, non-increasing, from an explicit `p x p`
/// (or `n x n` Gram, when `n < p`) dense eigendecomposition.
pub fn sample_spectrum(x: &ObservationMatrix) -> Result<Vec<f64>> {
    let (p, n) = (x.p(), x.n());
    if p <= n {
        return Ok(symmetric_eig_small(&x.explicit_covariance())?.values);
    }
    let d = x.to_dense();
    let mut g = d.t_matmul(&d)?;
    let inv_n = 1.0 / n as f64;
    for j in 0..n {
        for i in 0..n {
            g.set(i, j, g.get(i, j) * inv_n);
        }
    }
    let mut values = symmetric_eig_small(&g)?.values;
    values.resize(p, 0.0);
    Ok(values)
}

/// Output of [`estimate_dimension`].
#[derive(Clone, Debug)]
pub struct EstimationResult {
    pub q_hat: usize,
    /// `IC(0), IC(1), ..., IC(k_stop)`.
    pub ic_trace: Vec<f64>,
    /// `theta_k` as computed in iteration `k`, for `k = 1..=k_stop`.
    pub theta_trace: Vec<f64>,
    /// `p x q_hat` orthonormal basis of the estimated principal subspace.
    pub subspace: DenseMatrix,
    /// Ritz values of the last iteration.
    pub theta: Vec<f64>,
    pub phi: f64,
    pub sigma_used: f64,
    pub cn: f64,
    pub stopped_early: bool,
    pub no_minimum_found: bool,
    pub dropped_columns: usize,
    pub wall_time: f64,
}

/// Estimates the principal-subspace dimension and basis with the incremental
/// Krylov loop.
///
/// `IC(0)` is evaluated first; iteration `k` adds one random Krylov block,
/// recomputes the Ritz values and evaluates `IC(k)`. The loop stops at the
/// first `k` with `IC(k) > IC(k-1)` and reports `q = k - 1`. If no increase
/// happens up to `max_k`, the global minimizer of the trace is reported and
/// `no_minimum_found` is set.
pub fn estimate_dimension(x: &ObservationMatrix, cfg: &CriterionConfig) -> Result<EstimationResult> {
    let start = Instant::now();
    let (p, n) = (x.p(), x.n());
    if p < 2 {
        return Err(Error::Dimension(format!("need p >= 2, got {p}")));
    }
    cfg.validate(n)?;
    let sigma = cfg.effective_sigma();
    let phi_value = phi(x, sigma)?;
    let cn = cfg.penalty.value(n);
    let max_k = cfg.max_k.unwrap_or(p.min(n).saturating_sub(1)).min(p);

    let op = x.covariance();
    let mut state = KrylovState::new(p, cfg.mode);
    let mut rng = SeedStream::new(cfg.seed);
    let mut ic_trace = vec![ic_value(&[], phi_value, 0, cfg, n, p)?];
    let mut theta_trace = Vec::new();
    let mut history: Vec<SpectrumEstimate> = Vec::new();
    let mut stopped_early = false;

    for k in 1..=max_k {
        let block = draw_block(x, cfg.m, &mut rng)?.unwrap_or_else(|| DenseMatrix::zeros(p, 0));
        let est = state.advance(&op, &block)?;
        let ic = ic_value(&est.theta, phi_value, k, cfg, n, p)?;
        theta_trace.push(est.theta[k - 1]);
        ic_trace.push(ic);
        history.push(est);
        if ic > ic_trace[k - 1] {
            stopped_early = true;
            break;
        }
    }

    let q_hat = if stopped_early { ic_trace.len() - 2 } else { argmin(&ic_trace) };
    let (subspace, theta) = match history.last() {
        Some(last) => {
            let cols = q_hat.min(last.vectors.cols());
            (last.leading_vectors(cols), last.theta.clone())
        }
        None => (DenseMatrix::zeros(p, 0), Vec::new()),
    };

    Ok(EstimationResult {
        q_hat,
        ic_trace,
        theta_trace,
        subspace,
        theta,
        phi: phi_value,
        sigma_used: sigma,
        cn,
        stopped_early,
        no_minimum_found: !stopped_early,
        dropped_columns: state.dropped(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Version tag of the JSON result document.
pub const JSON_SCHEMA: u32 = 1;

impl EstimationResult {
    /// JSON document with the estimate, the configuration echo and,
    /// when `timings` is set, the wall time.
    pub fn to_json(&self, cfg: &CriterionConfig, p: usize, n: usize, timings: bool) -> serde_json::Value {
        let mut doc = serde_json::json!({
            "schema": JSON_SCHEMA,
            "p": p,
            "n": n,
            "q_hat": self.q_hat,
            "phi": self.phi,
            "stopped_early": self.stopped_early,
            "no_minimum_found": self.no_minimum_found,
            "dropped_columns": self.dropped_columns,
            "ic_trace": self.ic_trace,
            "theta": self.theta,
            "config": {
                "sigma": cfg.sigma,
                "sigma_used": self.sigma_used,
                "cn": cfg.penalty.label(),
                "cn_value": self.cn,
                "m": cfg.m,
                "epsilon": cfg.epsilon,
                "scaling": cfg.scaling,
                "sigma_adjust": cfg.sigma_adjust,
                "max_k": cfg.max_k,
                "mode": cfg.mode,
                "seed": cfg.seed,
            },
        });
        if timings {
            doc["timings"] = serde_json::json!({ "wall_time": self.wall_time });
        }
        doc
    }

    /// `k,ic,theta_k` rows; `theta_k` is empty for `k = 0`.
    pub fn ic_trace_csv(&self) -> String {
        let mut out = String::from("k,ic,theta_k\n");
        for (k, ic) in self.ic_trace.iter().enumerate() {
            match k.checked_sub(1).and_then(|i| self.theta_trace.get(i)) {
                Some(t) => out.push_str(&format!("{k},{ic},{t}\n")),
                None => out.push_str(&format!("{k},{ic},\n")),
            }
        }
        out
    }

    /// `index,theta` rows for the final Ritz values, 1-based.
    pub fn ritz_csv(&self) -> String {
        let mut out = String::from("index,theta\n");
        for (i, t) in self.theta.iter().enumerate() {
            out.push_str(&format!("{},{t}\n", i + 1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    fn cfg_log(sigma: f64) -> CriterionConfig {
        CriterionConfig::with_sigma(sigma)
    }

    #[test]
    fn phi_simple_cases() {
        let z: ObservationMatrix = DenseMatrix::zeros(3, 4).into();
        assert!((phi(&z, 1.0).unwrap() - 3.0).abs() < 1e-15);
        let n = 6;
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, (n as f64).sqrt());
        }
        assert!(phi(&m.into(), 1.0).unwrap().abs() < 1e-12);
        assert!(matches!(phi(&z, 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn ic_noise_level_spectrum_prefers_zero() {
        let p = 8;
        let cfg = cfg_log(1.0);
        let ell = vec![1.0; p];
        let (q, trace) = ic_full_spectrum(&ell, &cfg, 50, p).unwrap();
        assert_eq!(q, 0);
        let cn = (50f64).ln();
        for (k, v) in trace.iter().enumerate() {
            let expected = -cn * ((p - k) * (p - k - 1)) as f64 / 2.0;
            assert!((v - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn ic_penalty_vanishes_at_p_minus_one() {
        let p = 5;
        let cfg = cfg_log(1.0);
        let theta = [4.0, 3.0, 2.0, 1.5];
        let phi = theta.iter().map(|t: &f64| (t - 1.0).powi(2)).sum::<f64>() + 0.25;
        let v = ic_value(&theta, phi, p - 1, &cfg, 10, p).unwrap();
        assert!((v - 10.0 / 2.0 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn planted_six_dimensional_spectrum() {
        // exhaustive evaluation gives IC = (4930.92, 1753.95, -27.63, -13.82, -4.61, 0)
        let ell = [9.0, 7.0, 1.0, 1.0, 1.0, 1.0];
        let cfg = CriterionConfig { sigma: 1.0, penalty: PenaltyPolicy::LogN, ..Default::default() };
        let (q, trace) = ic_full_spectrum(&ell, &cfg, 100, 6).unwrap();
        assert_eq!(q, 2);
        let frozen =
            [4930.922447210179, 1753.948298140119, -27.63102111592855, -13.815510557964275, -4.605170185988092, 0.0];
        for (a, b) in trace.iter().zip(frozen) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
        // the Phi route agrees with the tail sums
        let phi: f64 = ell.iter().map(|l| (l - 1.0).powi(2)).sum();
        for k in 0..6 {
            let v = ic_value(&ell[..k], phi, k, &cfg, 100, 6).unwrap();
            assert!((v - trace[k]).abs() < 1e-9 * trace[k].abs().max(1.0));
        }
    }

    #[test]
    fn ic_value_rejects_inconsistent_prefix() {
        let cfg = cfg_log(1.0);
        assert!(matches!(ic_value(&[10.0], 1.0, 1, &cfg, 10, 3), Err(Error::InconsistentInput { .. })));
        assert!(matches!(ic_value(&[1.0, 2.0], 10.0, 2, &cfg, 10, 3), Err(Error::Order(1))));
    }

    #[test]
    fn alg1_literal_scaling() {
        let cfg = CriterionConfig {
            scaling: Scaling::Alg1Literal,
            penalty: PenaltyPolicy::Constant(2.0),
            sigma: 2.0,
            ..Default::default()
        };
        let v = ic_value(&[5.0], 20.0, 1, &cfg, 10, 4).unwrap();
        assert!((v - (10.0 * (20.0 - 9.0) - 2.0 * 3.0)).abs() < 1e-12);
    }

    #[test]
    fn full_spectrum_single_spike() {
        let mut ell = vec![1.0; 20];
        ell[0] = 10.0;
        let (q, _) = ic_full_spectrum(&ell, &cfg_log(1.0), 100, 20).unwrap();
        assert_eq!(q, 1);
        assert!(matches!(ic_full_spectrum(&[1.0, 2.0], &cfg_log(1.0), 10, 2), Err(Error::Order(1))));
    }

    #[test]
    fn mdl_cases() {
        assert_eq!(mdl_estimate(&[2.0; 6], 100, 6).unwrap(), 0);
        assert_eq!(mdl_estimate(&[100.0, 1.0, 1.0, 1.0], 1000, 4).unwrap(), 1);
        let frozen = [8388.568322450888, 24.17714347643748, 41.44653167389282, 51.808164592366026];
        for (a, b) in mdl_trace(&[100.0, 1.0, 1.0, 1.0], 1000, 4).unwrap().iter().zip(frozen) {
            assert!((a - b).abs() < 1e-9 * b);
        }
        assert!(matches!(mdl_estimate(&[1.0, 0.0], 10, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn config_validation() {
        let mut cfg = CriterionConfig::default();
        assert!(cfg.validate(10).is_ok());
        cfg.epsilon = 1.0;
        assert!(cfg.validate(10).is_err());
        cfg.epsilon = 0.5;
        cfg.sigma = -1.0;
        assert!(cfg.validate(10).is_err());
        cfg.sigma = 1.0;
        cfg.penalty = PenaltyPolicy::Custom(Arc::new(|_| 0.0));
        assert!(cfg.validate(10).is_err());
        cfg.penalty = PenaltyPolicy::Custom(Arc::new(|n| (n as f64).sqrt()));
        assert!(cfg.validate(10).is_ok());
        cfg.sigma_adjust = true;
        assert!((cfg.effective_sigma() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sample_spectrum_wide_and_tall_agree_on_nonzeros() {
        let mut s = SeedStream::new(1);
        let m = DenseMatrix::new(6, 4, s.normal_vec(24)).unwrap();
        let tall = sample_spectrum(&m.clone().into()).unwrap();
        assert_eq!(tall.len(), 6);
        assert!(tall[4].abs() < 1e-12 && tall[5].abs() < 1e-12);
        let explicit = symmetric_eig_small(&ObservationMatrix::from(m).explicit_covariance()).unwrap();
        for (a, b) in tall.iter().zip(&explicit.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn estimate_recovers_obvious_rank() {
        // two strong directions plus small noise
        let (p, n) = (30, 200);
        let mut s = SeedStream::new(8);
        let mut m = DenseMatrix::new(p, n, s.normal_vec(p * n)).unwrap();
        for j in 0..n {
            let a = 5.0 * s.normal();
            let b = 4.0 * s.normal();
            m.set(0, j, m.get(0, j) + a);
            m.set(1, j, m.get(1, j) + b);
        }
        let x: ObservationMatrix = m.into();
        let cfg = CriterionConfig { sigma: 1.0, m: 6, seed: 3, ..Default::default() };
        let r = estimate_dimension(&x, &cfg).unwrap();
        assert_eq!(r.q_hat, 2);
        assert!(r.stopped_early);
        assert_eq!(r.ic_trace.len(), 4);
        assert_eq!(r.subspace.cols(), 2);
        assert!(r.subspace.orthonormality_defect() <= 1e-10);

        let csv = r.ic_trace_csv();
        assert!(csv.starts_with("k,ic,theta_k\n0,"));
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(r.ritz_csv().lines().count(), 1 + r.theta.len());
        let doc = r.to_json(&cfg, 30, 200, false);
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["q_hat"], 2);
        assert!(doc.get("timings").is_none());
        assert!(r.to_json(&cfg, 30, 200, true).get("timings").is_some());
    }
}
