//! Augmented Dickey–Fuller unit-root test and a differencing-order
//! recommender.
//!
//! The test regression is
//!
//! ```text
//! Δyₜ = α + β·t + γ·yₜ₋₁ + Σᵢ₌₁ᵏ ϑᵢ Δyₜ₋ᵢ + uₜ
//! ```
//!
//! with the deterministic terms chosen by [`Deterministic`]; the statistic is
//! the t-ratio on γ and the test rejects a unit root in the left tail.
//! Critical values come from MacKinnon's (2010) response surfaces, evaluated
//! at the effective sample size; [`simulate_critical_values`] re-derives them
//! by simulation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linreg::{ols_fit, DesignMatrix, RegressionFit};
use crate::series::AnnualSeries;
use crate::sim::{random_walk, stream_rng};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Deterministic {
    None,
    #[default]
    Constant,
    ConstantAndTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LagSelection {
    /// Use exactly `max_lag` lagged differences.
    Fixed,
    /// Pick k in `0..=max_lag` minimizing AIC on a common sample.
    #[default]
    Aic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Significance {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl Significance {
    pub const ALL: [Significance; 3] = [Significance::One, Significance::Five, Significance::Ten];

    pub fn level(self) -> f64 {
        match self {
            Significance::One => 0.01,
            Significance::Five => 0.05,
            Significance::Ten => 0.10,
        }
    }

    pub fn from_level(alpha: f64) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| (s.level() - alpha).abs() < 1e-12)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("significance must be 0.01, 0.05 or 0.10, got {alpha}"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdfSpec {
    pub deterministic: Deterministic,
    /// `None` uses the Schwert rule ⌊12·(n/100)^¼⌋, capped so that at least
    /// 12 observations remain.
    pub max_lag: Option<usize>,
    pub lag_selection: LagSelection,
}

impl Default for AdfSpec {
    fn default() -> Self {
        Self {
            deterministic: Deterministic::Constant,
            max_lag: None,
            lag_selection: LagSelection::Aic,
        }
    }
}

/// Values indexed by the three conventional significance levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ByLevel<T> {
    #[serde(rename = "1%")]
    pub one: T,
    #[serde(rename = "5%")]
    pub five: T,
    #[serde(rename = "10%")]
    pub ten: T,
}

impl<T: Copy> ByLevel<T> {
    pub fn at(&self, level: Significance) -> T {
        match level {
            Significance::One => self.one,
            Significance::Five => self.five,
            Significance::Ten => self.ten,
        }
    }

    fn map<U>(&self, f: impl Fn(T) -> U) -> ByLevel<U> {
        ByLevel {
            one: f(self.one),
            five: f(self.five),
            ten: f(self.ten),
        }
    }
}

pub type CriticalValues = ByLevel<f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdfResult {
    pub tau_stat: f64,
    pub chosen_lag: usize,
    pub critical_values: CriticalValues,
    pub reject_at: ByLevel<bool>,
    pub n_effective: usize,
    pub deterministic: Deterministic,
}

impl AdfResult {
    pub fn rejects(&self, level: Significance) -> bool {
        self.reject_at.at(level)
    }
}

// MacKinnon (2010), single-series tau: cv(T) = b0 + b1/T + b2/T² + b3/T³,
// rows are 1%, 5%, 10%.
const TAU_NONE: [[f64; 4]; 3] = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const TAU_CONSTANT: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const TAU_TREND: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

/// Response-surface critical values for `n_effective` regression observations.
pub fn critical_values(deterministic: Deterministic, n_effective: usize) -> CriticalValues {
    let table = match deterministic {
        Deterministic::None => &TAU_NONE,
        Deterministic::Constant => &TAU_CONSTANT,
        Deterministic::ConstantAndTrend => &TAU_TREND,
    };
    let t = n_effective as f64;
    let eval = |b: &[f64; 4]| b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
    ByLevel {
        one: eval(&table[0]),
        five: eval(&table[1]),
        ten: eval(&table[2]),
    }
}

/// ⌊12·(n/100)^¼⌋
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

const MIN_SPARE_OBS: usize = 12;

fn resolve_max_lag(n: usize, spec: &AdfSpec) -> Result<usize> {
    if n < MIN_SPARE_OBS {
        return Err(Error::insufficient("ADF test", MIN_SPARE_OBS, n));
    }
    match spec.max_lag {
        Some(k) => {
            if n < k + MIN_SPARE_OBS {
                Err(Error::insufficient(
                    format!("ADF test with max_lag {k}"),
                    k + MIN_SPARE_OBS,
                    n,
                ))
            } else {
                Ok(k)
            }
        }
        None => Ok(schwert_max_lag(n).min(n - MIN_SPARE_OBS)),
    }
}

/// Fit the test regression with `k` lagged differences, using observations
/// `t = first..n` (0-based, `first ≥ k + 1`).
fn adf_regression(y: &[f64], k: usize, first: usize, det: Deterministic) -> Result<RegressionFit> {
    let n = y.len();
    debug_assert!(first > k);
    let rows = n - first;
    let mut names = Vec::new();
    let mut cols = Vec::new();
    if det != Deterministic::None {
        names.push("const".to_string());
        cols.push(vec![1.0; rows]);
    }
    if det == Deterministic::ConstantAndTrend {
        names.push("trend".to_string());
        cols.push((first..n).map(|t| (t + 1) as f64).collect());
    }
    names.push("y_lag".to_string());
    let level_col = cols.len();
    cols.push((first..n).map(|t| y[t - 1]).collect());
    for i in 1..=k {
        names.push(format!("dy_lag{i}"));
        cols.push((first..n).map(|t| y[t - i] - y[t - i - 1]).collect());
    }
    let dy: Vec<f64> = (first..n).map(|t| y[t] - y[t - 1]).collect();
    let x = DesignMatrix::from_columns(names, cols)?;
    let fit = ols_fit(&x, &dy)?;
    debug_assert_eq!(fit.column_names[level_col], "y_lag");
    Ok(fit)
}

fn level_index(det: Deterministic) -> usize {
    match det {
        Deterministic::None => 0,
        Deterministic::Constant => 1,
        Deterministic::ConstantAndTrend => 2,
    }
}

fn tau_from(fit: &RegressionFit, det: Deterministic) -> Result<f64> {
    if fit.ssr <= 0.0 {
        return Err(Error::Degenerate("ADF regression fits exactly".into()));
    }
    Ok(fit.t_stat(level_index(det)))
}

/// Run the ADF test on `s`.
pub fn adf_test(s: &AnnualSeries, spec: &AdfSpec) -> Result<AdfResult> {
    let y = s.values();
    let first = y[0];
    if y.iter().all(|v| *v == first) {
        return Err(Error::Degenerate("series is constant".into()));
    }
    let max_lag = resolve_max_lag(y.len(), spec)?;
    let det = spec.deterministic;

    let chosen_lag = match spec.lag_selection {
        LagSelection::Fixed => max_lag,
        LagSelection::Aic => {
            let common_first = max_lag + 1;
            let mut best: Option<(f64, usize)> = None;
            for k in 0..=max_lag {
                let fit = adf_regression(y, k, common_first, det)?;
                let aic = fit.aic();
                // strict < keeps the smallest k on ties
                if best.map_or(true, |(b, _)| aic < b) {
                    best = Some((aic, k));
                }
            }
            best.map(|(_, k)| k).unwrap_or(0)
        }
    };

    let fit = adf_regression(y, chosen_lag, chosen_lag + 1, det)?;
    let tau_stat = tau_from(&fit, det)?;
    let critical_values = critical_values(det, fit.n_obs);
    let reject_at = critical_values.map(|cv| tau_stat < cv);
    Ok(AdfResult {
        tau_stat,
        chosen_lag,
        critical_values,
        reject_at,
        n_effective: fit.n_obs,
        deterministic: det,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferencingAdvice {
    pub d: usize,
    /// Set when even the second difference failed to reject.
    pub not_stationary_warning: bool,
    /// ADF results for d = 0, 1, … in the order they were run.
    pub tests: Vec<AdfResult>,
}

/// Smallest d ∈ {0, 1, 2} whose d-th difference rejects a unit root at
/// `alpha`; 2 with a warning if none does.
pub fn recommend_d(s: &AnnualSeries, alpha: Significance, spec: &AdfSpec) -> Result<DifferencingAdvice> {
    let mut tests = Vec::new();
    for d in 0..=2 {
        let result = adf_test(&s.difference(d)?, spec)?;
        let rejects = result.rejects(alpha);
        tests.push(result);
        if rejects {
            return Ok(DifferencingAdvice {
                d,
                not_stationary_warning: false,
                tests,
            });
        }
    }
    Ok(DifferencingAdvice {
        d: 2,
        not_stationary_warning: true,
        tests,
    })
}

const BATCH: usize = 500;

/// Dickey–Fuller τ under the random-walk null: `reps` walks of length `n`,
/// lag 0, the requested deterministic terms. Batches run in parallel, each
/// with its own stream of `seed`.
pub fn simulate_tau_null(det: Deterministic, n: usize, reps: usize, seed: u64) -> Result<Vec<f64>> {
    if n < MIN_SPARE_OBS {
        return Err(Error::insufficient("ADF simulation", MIN_SPARE_OBS, n));
    }
    let batches = reps.div_ceil(BATCH);
    let per_batch: Vec<Result<Vec<f64>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let count = BATCH.min(reps - b * BATCH);
            (0..count)
                .map(|_| {
                    let y = random_walk(&mut rng, n);
                    let fit = adf_regression(&y, 0, 1, det)?;
                    tau_from(&fit, det)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(reps);
    for batch in per_batch {
        out.extend(batch?);
    }
    Ok(out)
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Monte-Carlo critical values for a length-`n` series.
pub fn simulate_critical_values(det: Deterministic, n: usize, reps: usize, seed: u64) -> Result<CriticalValues> {
    let mut taus = simulate_tau_null(det, n, reps, seed)?;
    taus.sort_by(f64::total_cmp);
    Ok(ByLevel {
        one: quantile(&taus, 0.01),
        five: quantile(&taus, 0.05),
        ten: quantile(&taus, 0.10),
    })
}
