//! Granger-causality screening.
//!
//! `x` Granger-causes `y` at lag order L when adding x lags 1…L to an
//! autoregression of `y` on its own lags 1…L (plus a constant) improves the
//! fit by more than chance, judged by the nested F-test. The caller is
//! responsible for passing stationary series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linreg::{f_test_nested, ols_fit, DesignMatrix, FTestResult, INTERCEPT};
use crate::series::{check_same_years, AnnualSeries};

/// Significance level behind [`GrangerResult::causal_at_5pct`].
pub const GRANGER_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerResult {
    /// Candidate cause.
    pub cause: String,
    pub effect: String,
    pub max_lag: usize,
    pub f_test: FTestResult,
    pub causal_at_5pct: bool,
}

impl GrangerResult {
    /// Relabel the direction, e.g. with driver and target names.
    pub fn with_names(mut self, cause: impl Into<String>, effect: impl Into<String>) -> Self {
        self.cause = cause.into();
        self.effect = effect.into();
        self
    }
}

/// Minimum series length for a test at lag order `max_lag`.
pub fn min_length(max_lag: usize) -> usize {
    3 * max_lag + 10
}

fn lag_columns(prefix: &str, v: &[f64], max_lag: usize, names: &mut Vec<String>, cols: &mut Vec<Vec<f64>>) {
    for l in 1..=max_lag {
        names.push(format!("{prefix}_lag{l}"));
        cols.push((max_lag..v.len()).map(|t| v[t - l]).collect());
    }
}

/// Does `x` Granger-cause `y`?
pub fn granger_test(x: &AnnualSeries, y: &AnnualSeries, max_lag: usize) -> Result<GrangerResult> {
    if max_lag == 0 {
        return Err(Error::InvalidArgument("Granger max_lag must be at least 1".into()));
    }
    check_same_years(x, y)?;
    let n = y.len();
    if n < min_length(max_lag) {
        return Err(Error::insufficient(
            format!("Granger test at lag {max_lag}"),
            min_length(max_lag),
            n,
        ));
    }
    let (xv, yv) = (x.values(), y.values());
    let target: Vec<f64> = yv[max_lag..].to_vec();
    let rows = target.len();

    let mut names = vec![INTERCEPT.to_string()];
    let mut cols = vec![vec![1.0; rows]];
    lag_columns("y", yv, max_lag, &mut names, &mut cols);
    let restricted = ols_fit(&DesignMatrix::from_columns(names.clone(), cols.clone())?, &target)?;
    lag_columns("x", xv, max_lag, &mut names, &mut cols);
    let unrestricted = ols_fit(&DesignMatrix::from_columns(names, cols)?, &target)?;

    let f_test = f_test_nested(&restricted, &unrestricted)?;
    Ok(GrangerResult {
        cause: "x".into(),
        effect: "y".into(),
        max_lag,
        causal_at_5pct: f_test.p_value < GRANGER_ALPHA,
        f_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{stream_rng, white_noise};
    use rand_chacha::ChaCha8Rng;

    fn series(v: Vec<f64>) -> AnnualSeries {
        AnnualSeries::levels(1700, v).unwrap()
    }

    fn causal_pair(rng: &mut ChaCha8Rng, n: usize) -> (AnnualSeries, AnnualSeries) {
        let x = white_noise(rng, n, 1.0);
        let e = white_noise(rng, n, 1.0);
        let y: Vec<f64> = (0..n)
            .map(|t| if t == 0 { e[0] } else { 0.9 * x[t - 1] + e[t] })
            .collect();
        (series(x), series(y))
    }

    #[test]
    fn detects_constructed_causality_and_asymmetry() {
        let mut rng = stream_rng(14, 0);
        let (mut forward, mut asymmetric) = (0, 0);
        let draws = 500;
        for _ in 0..draws {
            let (x, y) = causal_pair(&mut rng, 300);
            let xy = granger_test(&x, &y, 2).unwrap();
            let yx = granger_test(&y, &x, 2).unwrap();
            assert_eq!(xy.causal_at_5pct, xy.f_test.p_value < 0.05);
            forward += xy.causal_at_5pct as usize;
            asymmetric += (xy.causal_at_5pct && !yx.causal_at_5pct) as usize;
        }
        assert!(forward as f64 >= 0.95 * draws as f64, "{forward}");
        assert!(asymmetric as f64 >= 0.80 * draws as f64, "{asymmetric}");
    }

    #[test]
    fn independent_noise_has_nominal_size() {
        let mut rng = stream_rng(15, 0);
        let draws = 500;
        let hits = (0..draws)
            .filter(|_| {
                let x = series(white_noise(&mut rng, 300, 1.0));
                let y = series(white_noise(&mut rng, 300, 1.0));
                granger_test(&x, &y, 2).unwrap().causal_at_5pct
            })
            .count();
        assert!(hits as f64 <= 0.08 * draws as f64, "{hits}");
    }

    #[test]
    fn shifted_copy_is_a_perfect_fit() {
        let x = white_noise(&mut stream_rng(16, 0), 40, 1.0);
        let mut y = vec![0.0];
        y.extend_from_slice(&x[..39]);
        let r = granger_test(&series(x), &series(y), 1).unwrap();
        assert!(r.f_test.p_value < 1e-12);
        assert!(r.causal_at_5pct);
    }

    #[test]
    fn scale_invariance() {
        let (x, y) = causal_pair(&mut stream_rng(17, 0), 60);
        let base = granger_test(&x, &y, 2).unwrap().f_test.f_stat;
        let xs = series(x.values().iter().map(|v| v * 1e4).collect());
        let ys = series(y.values().iter().map(|v| v * 0.003).collect());
        let scaled = granger_test(&xs, &ys, 2).unwrap().f_test.f_stat;
        assert!(((scaled - base) / base).abs() < 1e-8);
    }

    #[test]
    fn alignment_and_length_errors() {
        let a = series(vec![0.0; 20]);
        let b = AnnualSeries::levels(1701, vec![0.0; 20]).unwrap();
        assert!(matches!(granger_test(&a, &b, 1), Err(Error::Alignment(_))));
        let short_x = series((0..12).map(|i| (i as f64).cos()).collect());
        let short_y = series((0..12).map(|i| (i as f64).sin()).collect());
        assert!(matches!(
            granger_test(&short_x, &short_y, 1),
            Err(Error::InsufficientData { needed: 13, got: 12, .. })
        ));
    }

    #[test]
    fn names_and_degrees_of_freedom() {
        let (x, y) = causal_pair(&mut stream_rng(18, 0), 50);
        let r = granger_test(&x, &y, 3).unwrap().with_names("SOC", "PIT");
        assert_eq!((r.cause.as_str(), r.effect.as_str()), ("SOC", "PIT"));
        assert_eq!(r.f_test.df_num, 3);
        assert_eq!(r.f_test.df_den, 47 - 7);
    }
}
