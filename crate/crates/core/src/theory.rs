//! Closed-form finite-sample detection conditions.
//!
//! With exact eigenvalues, `IC(q-1) > IC(q)` holds iff `l_q` exceeds the
//! underestimation threshold, and `IC(q+1) > IC(q)` holds iff `l_{q+1}` stays
//! below the overestimation threshold.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("sigma must be positive, got {sigma}")))
    }
}

/// Smallest `l_q` for which `IC(q-1) > IC(q)`:
/// `sigma * (sqrt(2 C_n (p - q) / n) + 1)`.
pub fn underestimation_threshold(sigma: f64, cn: f64, n: usize, p: usize, q: usize) -> Result<f64> {
    check_sigma(sigma)?;
    if q >= p {
        return Err(Error::Domain(format!("need q < p, got q = {q}, p = {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(sigma * ((2.0 * cn * (p - q) as f64 / n as f64).sqrt() + 1.0))
}

/// Largest `l_{q+1}` for which `IC(q+1) > IC(q)`:
/// `sigma * (sqrt(C_n (p - q - 1) / n) + 1)`.
pub fn overestimation_threshold(sigma: f64, cn: f64, n: usize, p: usize, q: usize) -> Result<f64> {
    check_sigma(sigma)?;
    if q >= p {
        return Err(Error::Domain(format!("need q < p, got q = {q}, p = {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(sigma * ((cn * (p - q - 1) as f64 / n as f64).sqrt() + 1.0))
}

/// Exact break-even level of `l_{q+1}` for `IC(q+1) > IC(q)`:
/// `sigma * (sqrt(2 C_n (p - q - 1) / n) + 1)`. The closed form in
/// [`overestimation_threshold`] omits the factor 2 and is therefore a
/// sufficient but not necessary condition.
pub fn exact_overestimation_threshold(sigma: f64, cn: f64, n: usize, p: usize, q: usize) -> Result<f64> {
    let t = overestimation_threshold(sigma, cn, n, p, q)?;
    Ok(sigma + (t - sigma) * std::f64::consts::SQRT_2)
}

/// Approximate largest eigenvalue of a pure-noise sample covariance.
pub fn tracy_widom_edge(sigma: f64, p: usize, n: usize) -> f64 {
    let r = (p as f64 / n as f64).sqrt();
    sigma * (1.0 + r) * (1.0 + r)
}

/// Smallest `C_n` that keeps the noise edge below the overestimation threshold.
pub fn cn_lower_bound(p: usize, n: usize, q: usize) -> Result<f64> {
    if q + 2 > p {
        return Err(Error::Domain(format!("need q <= p - 2, got q = {q}, p = {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let (pf, nf) = (p as f64, n as f64);
    let top = pf + 2.0 * (nf * pf).sqrt();
    Ok(top * top / (nf * (p - q - 1) as f64))
}

/// Thresholds when the criterion is fed Ritz values with relative accuracy
/// `epsilon`; returns `(underestimation, overestimation)`.
pub fn krylov_adjusted_thresholds(
    sigma: f64,
    cn: f64,
    n: usize,
    p: usize,
    q: usize,
    epsilon: f64,
) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let f = 1.0 / (1.0 - epsilon);
    let under = underestimation_threshold(sigma, cn, n, p, q)? * f;
    let over = sigma * (f * (cn * (p - q - 1) as f64 / n as f64).sqrt() + 1.0);
    overestimation_threshold(sigma, cn, n, p, q)?;
    Ok((under, over))
}

/// Mean chi-square statistic of the noise tail normalised by its degrees of
/// freedom `(p-q)(p-q-1)/2`.
pub fn chi_square_ratio(ell: &[f64], sigma: f64, q: usize) -> Result<f64> {
    check_sigma(sigma)?;
    let p = ell.len();
    if q >= p || p - q < 2 {
        return Err(Error::Domain(format!("need p - q >= 2, got p = {p}, q = {q}")));
    }
    let tail = &ell[q..];
    let s: f64 = tail.iter().sum();
    let s2: f64 = tail.iter().map(|l| l * l).sum();
    let r = (p - q) as f64;
    let eta = r * (r - 1.0) / 2.0;
    Ok(((s * s - s2) / (2.0 * sigma * sigma)) / eta)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConditionChecks {
    /// `l_q` above the underestimation threshold.
    pub no_underestimation: Option<bool>,
    /// `l_{q+1}` below the overestimation threshold.
    pub no_overestimation: Option<bool>,
    /// Noise edge below the overestimation threshold.
    pub edge_below_overest: bool,
    /// `C_n` above its lower bound.
    pub cn_sufficient: bool,
    pub krylov_no_underestimation: Option<bool>,
    pub krylov_no_overestimation: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionReport {
    pub p: usize,
    pub n: usize,
    pub q: usize,
    pub sigma: f64,
    pub cn: f64,
    pub epsilon: f64,
    pub underest_threshold: f64,
    pub overest_threshold: f64,
    pub exact_overest_threshold: f64,
    pub tw_edge: f64,
    pub cn_lower_bound: f64,
    pub krylov_underest_threshold: f64,
    pub krylov_overest_threshold: f64,
    pub satisfied: ConditionChecks,
}

impl DetectionReport {
    /// Evaluates every threshold; `spectrum`, when given, supplies `l_q` and
    /// `l_{q+1}` for the observed-spectrum checks.
    pub fn new(
        sigma: f64,
        cn: f64,
        n: usize,
        p: usize,
        q: usize,
        epsilon: f64,
        spectrum: Option<&[f64]>,
    ) -> Result<Self> {
        let under = underestimation_threshold(sigma, cn, n, p, q)?;
        let over = overestimation_threshold(sigma, cn, n, p, q)?;
        let exact_over = exact_overestimation_threshold(sigma, cn, n, p, q)?;
        let (k_under, k_over) = krylov_adjusted_thresholds(sigma, cn, n, p, q, epsilon)?;
        let edge = tracy_widom_edge(sigma, p, n);
        let bound = cn_lower_bound(p, n, q)?;
        let lq = spectrum.and_then(|s| q.checked_sub(1).and_then(|i| s.get(i).copied()));
        let lq1 = spectrum.and_then(|s| s.get(q).copied());
        let satisfied = ConditionChecks {
            no_underestimation: lq.map(|l| l > under),
            no_overestimation: lq1.map(|l| l < over),
            edge_below_overest: edge < over,
            cn_sufficient: cn > bound,
            krylov_no_underestimation: lq.map(|l| l > k_under),
            krylov_no_overestimation: lq1.map(|l| l < k_over),
        };
        Ok(Self {
            p,
            n,
            q,
            sigma,
            cn,
            epsilon,
            underest_threshold: under,
            overest_threshold: over,
            exact_overest_threshold: exact_over,
            tw_edge: edge,
            cn_lower_bound: bound,
            krylov_underest_threshold: k_under,
            krylov_overest_threshold: k_over,
            satisfied,
        })
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let flag = |b: Option<bool>| match b {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let rows: Vec<(&str, String)> = vec![
            ("p", self.p.to_string()),
            ("n", self.n.to_string()),
            ("q", self.q.to_string()),
            ("sigma", format!("{}", self.sigma)),
            ("C_n", format!("{:.6}", self.cn)),
            ("epsilon", format!("{}", self.epsilon)),
            ("underestimation threshold", format!("{:.6}", self.underest_threshold)),
            ("overestimation threshold", format!("{:.6}", self.overest_threshold)),
            ("exact overestimation threshold", format!("{:.6}", self.exact_overest_threshold)),
            ("noise edge", format!("{:.6}", self.tw_edge)),
            ("C_n lower bound", format!("{:.6}", self.cn_lower_bound)),
            ("krylov underestimation threshold", format!("{:.6}", self.krylov_underest_threshold)),
            ("krylov overestimation threshold", format!("{:.6}", self.krylov_overest_threshold)),
            ("no underestimation", flag(self.satisfied.no_underestimation).into()),
            ("no overestimation", flag(self.satisfied.no_overestimation).into()),
            ("edge below overestimation", flag(Some(self.satisfied.edge_below_overest)).into()),
            ("C_n sufficient", flag(Some(self.satisfied.cn_sufficient)).into()),
            ("krylov no underestimation", flag(self.satisfied.krylov_no_underestimation).into()),
            ("krylov no overestimation", flag(self.satisfied.krylov_no_overestimation).into()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}
