//! Forecast accuracy: error statistics, Theil's U₁ and the Diebold–Mariano
//! test of equal predictive accuracy.
//!
//! Errors are `eₜ = actualₜ − predictedₜ`; percentage metrics are fractions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{check_same_years, AnnualSeries};
use crate::special::{normal_two_sided, t_two_sided};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub me: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub mpe: f64,
    pub mape: f64,
    pub smape: f64,
    pub theil_u1: f64,
    pub n: usize,
}

fn checked_pair<'a>(actual: &'a AnnualSeries, predicted: &'a AnnualSeries) -> Result<(&'a [f64], &'a [f64])> {
    check_same_years(actual, predicted)?;
    if actual.is_empty() {
        return Err(Error::insufficient("forecast accuracy", 1, 0));
    }
    Ok((actual.values(), predicted.values()))
}

fn mean(it: impl Iterator<Item = f64>, n: usize) -> f64 {
    it.sum::<f64>() / n as f64
}

fn u1(a: &[f64], p: &[f64], rmse: f64) -> Result<f64> {
    let n = a.len();
    let denom = mean(a.iter().map(|v| v * v), n).sqrt() + mean(p.iter().map(|v| v * v), n).sqrt();
    if denom == 0.0 {
        return Err(Error::Degenerate("actual and predicted are both identically zero".into()));
    }
    Ok(rmse / denom)
}

/// Full error battery for `predicted` against `actual` (same years).
pub fn error_stats(actual: &AnnualSeries, predicted: &AnnualSeries) -> Result<AccuracyReport> {
    let (a, p) = checked_pair(actual, predicted)?;
    if let Some(i) = a.iter().position(|v| *v == 0.0) {
        return Err(Error::DivisionByZero {
            year: actual.start_year() + i as i32,
        });
    }
    let n = a.len();
    let e: Vec<f64> = a.iter().zip(p).map(|(x, y)| x - y).collect();
    let mse = mean(e.iter().map(|v| v * v), n);
    let rmse = mse.sqrt();
    Ok(AccuracyReport {
        me: mean(e.iter().copied(), n),
        mse,
        rmse,
        mae: mean(e.iter().map(|v| v.abs()), n),
        mpe: mean(e.iter().zip(a).map(|(e, x)| e / x), n),
        mape: mean(e.iter().zip(a).map(|(e, x)| (e / x).abs()), n),
        smape: mean(
            e.iter().zip(a).zip(p).map(|((e, x), y)| {
                let scale = (x.abs() + y.abs()) / 2.0;
                if scale == 0.0 {
                    0.0
                } else {
                    e.abs() / scale
                }
            }),
            n,
        ),
        theil_u1: u1(a, p, rmse)?,
        n,
    })
}

/// Theil's U₁ = RMSE / (√mean(actual²) + √mean(predicted²)), in [0, 1].
pub fn theil_u1(actual: &AnnualSeries, predicted: &AnnualSeries) -> Result<f64> {
    let (a, p) = checked_pair(actual, predicted)?;
    let rmse = mean(a.iter().zip(p).map(|(x, y)| (x - y).powi(2)), a.len()).sqrt();
    u1(a, p, rmse)
}

/// Loss applied to each forecast error in the DM test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    #[default]
    Squared,
    Absolute,
}

impl Loss {
    fn apply(self, e: f64) -> f64 {
        match self {
            Loss::Squared => e * e,
            Loss::Absolute => e.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DmResult {
    /// Negative when the first forecast has the smaller loss.
    pub dm_stat: f64,
    pub p_value: f64,
    pub loss: Loss,
    pub horizon: usize,
    pub small_sample_adjusted: bool,
}

/// Minimum number of paired errors for the DM test.
pub const DM_MIN_OBS: usize = 4;

/// Diebold–Mariano test with a standard-normal reference distribution.
pub fn dm_test(errors_a: &[f64], errors_b: &[f64], horizon: usize, loss: Loss) -> Result<DmResult> {
    dm_test_with(errors_a, errors_b, horizon, loss, false)
}

/// Diebold–Mariano test; with `small_sample` the statistic is scaled by the
/// Harvey–Leybourne–Newbold factor and referred to Student-t(n − 1).
pub fn dm_test_with(errors_a: &[f64], errors_b: &[f64], horizon: usize, loss: Loss, small_sample: bool) -> Result<DmResult> {
    if errors_a.len() != errors_b.len() {
        return Err(Error::Alignment(format!(
            "error vectors have lengths {} and {}",
            errors_a.len(),
            errors_b.len()
        )));
    }
    let n = errors_a.len();
    if n < DM_MIN_OBS {
        return Err(Error::insufficient("Diebold–Mariano test", DM_MIN_OBS, n));
    }
    if horizon == 0 || horizon >= n {
        return Err(Error::InvalidArgument(format!(
            "DM horizon must be in 1..{n}, got {horizon}"
        )));
    }
    let d: Vec<f64> = errors_a
        .iter()
        .zip(errors_b)
        .map(|(a, b)| loss.apply(*a) - loss.apply(*b))
        .collect();
    let nf = n as f64;
    let d_bar = d.iter().sum::<f64>() / nf;
    let gamma = |k: usize| -> f64 {
        d[k..]
            .iter()
            .zip(&d)
            .map(|(x, y)| (x - d_bar) * (y - d_bar))
            .sum::<f64>()
            / nf
    };
    let gamma0 = gamma(0);
    let mut v = gamma0 + 2.0 * (1..horizon).map(gamma).sum::<f64>();
    if v <= 0.0 {
        v = gamma0;
    }
    let result = |dm_stat: f64, p_value: f64| DmResult {
        dm_stat,
        p_value,
        loss,
        horizon,
        small_sample_adjusted: small_sample,
    };
    if !(v > 0.0) || d_bar == 0.0 {
        return Ok(result(0.0, 1.0));
    }
    let mut dm_stat = d_bar / (v / nf).sqrt();
    let p_value = if small_sample {
        let h = horizon as f64;
        dm_stat *= ((nf + 1.0 - 2.0 * h + h * (h - 1.0) / nf) / nf).sqrt();
        t_two_sided(dm_stat, nf - 1.0)
    } else {
        normal_two_sided(dm_stat)
    };
    Ok(result(dm_stat, p_value))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedModel {
    /// 1-based, by ascending RMSE (ties by name).
    pub rank: usize,
    pub name: String,
    pub report: AccuracyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseDm {
    pub first: String,
    pub second: String,
    /// `None` when the sample is shorter than [`DM_MIN_OBS`].
    pub result: Option<DmResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub ranking: Vec<RankedModel>,
    pub dm_tests: Vec<PairwiseDm>,
}

impl ModelComparison {
    pub fn best(&self) -> Option<&RankedModel> {
        self.ranking.first()
    }
}

/// Score every named prediction against `actual`, rank by RMSE and run
/// all pairwise one-step DM tests (squared loss, small-sample adjusted).
pub fn compare_models(actual: &AnnualSeries, predictions: &BTreeMap<String, AnnualSeries>) -> Result<ModelComparison> {
    let mut ranking = Vec::with_capacity(predictions.len());
    let mut errors = Vec::with_capacity(predictions.len());
    for (name, pred) in predictions {
        let report = error_stats(actual, pred)?;
        ranking.push(RankedModel {
            rank: 0,
            name: name.clone(),
            report,
        });
        errors.push((
            name,
            actual
                .values()
                .iter()
                .zip(pred.values())
                .map(|(a, p)| a - p)
                .collect::<Vec<f64>>(),
        ));
    }
    ranking.sort_by(|a, b| a.report.rmse.total_cmp(&b.report.rmse).then_with(|| a.name.cmp(&b.name)));
    for (i, r) in ranking.iter_mut().enumerate() {
        r.rank = i + 1;
    }

    let mut dm_tests = Vec::new();
    for i in 0..errors.len() {
        for j in i + 1..errors.len() {
            let result = if actual.len() >= DM_MIN_OBS {
                Some(dm_test_with(&errors[i].1, &errors[j].1, 1, Loss::Squared, true)?)
            } else {
                None
            };
            dm_tests.push(PairwiseDm {
                first: errors[i].0.clone(),
                second: errors[j].0.clone(),
                result,
            });
        }
    }
    Ok(ModelComparison { ranking, dm_tests })
}
