//! Box–Jenkins toolkit: correlograms, ARIMA(p, d, q) estimation by
//! conditional sum of squares, order selection and point forecasts.
//!
//! After differencing `d` times the model is
//!
//! ```text
//! wₜ − μ = Σᵢ φᵢ (wₜ₋ᵢ − μ) + εₜ + Σⱼ θⱼ εₜ₋ⱼ
//! ```
//!
//! so `μ` is the drift of the level series when `d = 1`.

mod correlogram;
pub mod roots;
pub mod simplex;

pub use correlogram::{acf, autocorrelations, autocorrelations_direct, durbin_levinson, pacf, CorrelogramPoint};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{integrate, AnnualSeries};
use roots::{is_outside_unit_circle, reflect_outside};
use simplex::{minimize, SimplexOptions};

/// Number of optimizer starts: the origin plus four ±0.3 patterns.
pub const MULTI_STARTS: usize = 5;
const START_OFFSET: f64 = 0.3;
/// Extra observations required beyond p + q + d.
const MIN_SPARE_OBS: usize = 10;

/// A fitted (or hand-specified) ARIMA model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArimaModel {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    /// φ₁ … φ_p
    pub ar_coeffs: Vec<f64>,
    /// θ₁ … θ_q
    pub ma_coeffs: Vec<f64>,
    /// Mean of the differenced process.
    pub intercept: f64,
    pub sigma2: f64,
    /// Conditional sum of squared innovations at the estimate.
    pub css: f64,
    /// Innovations entering `css`.
    pub n_obs: usize,
}

impl ArimaModel {
    /// A model from known coefficients, for forecasting without estimation.
    pub fn from_coefficients(d: usize, ar_coeffs: Vec<f64>, ma_coeffs: Vec<f64>, intercept: f64, sigma2: f64) -> Result<Self> {
        let m = Self {
            p: ar_coeffs.len(),
            d,
            q: ma_coeffs.len(),
            ar_coeffs,
            ma_coeffs,
            intercept,
            sigma2,
            css: f64::NAN,
            n_obs: 0,
        };
        m.check_invariants()?;
        Ok(m)
    }

    /// n·ln(CSS/n) + 2(p + q + 1) on the model's own estimation sample.
    pub fn aic(&self) -> f64 {
        css_aic(self.css, self.n_obs, self.p + self.q)
    }

    fn check_invariants(&self) -> Result<()> {
        let ar: Vec<f64> = self.ar_coeffs.iter().map(|v| -v).collect();
        if !is_outside_unit_circle(&ar) {
            return Err(Error::InvalidArgument("AR polynomial has a root on or inside the unit circle".into()));
        }
        if !is_outside_unit_circle(&self.ma_coeffs) {
            return Err(Error::InvalidArgument("MA polynomial has a root on or inside the unit circle".into()));
        }
        if !(self.sigma2 >= 0.0) || !self.intercept.is_finite() {
            return Err(Error::InvalidArgument("sigma2 must be non-negative and the intercept finite".into()));
        }
        Ok(())
    }
}

fn css_aic(css: f64, n: usize, n_coeffs: usize) -> f64 {
    let n = n as f64;
    n * (css / n).ln() + 2.0 * (n_coeffs + 1) as f64
}

/// Innovations εₜ for t ≥ `offset` (zero before) and their sum of squares.
fn innovations(w: &[f64], ar: &[f64], ma: &[f64], mu: f64, offset: usize) -> (Vec<f64>, f64) {
    let mut e = vec![0.0; w.len()];
    let mut css = 0.0;
    for t in offset..w.len() {
        let mut v = w[t] - mu;
        for (i, phi) in ar.iter().enumerate() {
            v -= phi * (w[t - i - 1] - mu);
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j {
                v -= theta * e[t - j - 1];
            }
        }
        e[t] = v;
        css += v * v;
    }
    (e, css)
}

/// Map a raw parameter vector `[φ…, θ…, μ]` into the admissible region.
fn admissible(x: &[f64], p: usize, q: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let neg: Vec<f64> = x[..p].iter().map(|v| -v).collect();
    let ar = reflect_outside(&neg).into_iter().map(|v| -v).collect();
    let ma = reflect_outside(&x[p..p + q]);
    (ar, ma, x[p + q])
}

fn start_points(p: usize, q: usize) -> Vec<Vec<f64>> {
    let k = p + q;
    let pattern = |f: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..k).map(f).chain(std::iter::once(0.0)).collect() };
    vec![
        pattern(&|_| 0.0),
        pattern(&|_| START_OFFSET),
        pattern(&|_| -START_OFFSET),
        pattern(&|i| if i % 2 == 0 { START_OFFSET } else { -START_OFFSET }),
        pattern(&|i| if i % 2 == 0 { -START_OFFSET } else { START_OFFSET }),
    ]
}

/// Result of one CSS minimization on an already-differenced series.
struct CssFit {
    ar: Vec<f64>,
    ma: Vec<f64>,
    mu: f64,
    css: f64,
    n_obs: usize,
}

/// Minimize CSS over innovations `offset..n` of the differenced series `w`.
fn fit_css(w: &[f64], p: usize, q: usize, offset: usize) -> Result<CssFit> {
    let n = w.len();
    let mean = w.iter().sum::<f64>() / n as f64;
    let sd = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    if !(sd > 0.0) {
        return Err(Error::Degenerate("differenced series is constant".into()));
    }
    let n_obs = n - offset;

    if p + q == 0 {
        let tail = &w[offset..];
        let mu = tail.iter().sum::<f64>() / n_obs as f64;
        let css = tail.iter().map(|v| (v - mu).powi(2)).sum::<f64>();
        return Ok(CssFit {
            ar: vec![],
            ma: vec![],
            mu,
            css,
            n_obs,
        });
    }

    // optimize on the standardized series; φ and θ are scale-free
    let z: Vec<f64> = w.iter().map(|v| (v - mean) / sd).collect();
    let objective = |x: &[f64]| {
        let (ar, ma, mu) = admissible(x, p, q);
        innovations(&z, &ar, &ma, mu, offset).1
    };
    let opts = SimplexOptions::default();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut best_unconverged: Option<(f64, Vec<f64>, usize)> = None;
    for x0 in start_points(p, q) {
        let r = minimize(objective, &x0, &opts);
        if r.converged {
            if best.as_ref().map_or(true, |(v, _)| r.value < *v) {
                best = Some((r.value, r.x));
            }
        } else if best_unconverged.as_ref().map_or(true, |(v, _, _)| r.value < *v) {
            best_unconverged = Some((r.value, r.x, r.evaluations));
        }
    }
    let unscale = |x: &[f64]| {
        let (ar, ma, mu) = admissible(x, p, q);
        (ar, ma, mean + sd * mu)
    };
    let Some((value, x)) = best else {
        let (value, x, evaluations) = best_unconverged.expect("at least one start");
        let (ar, ma, mu) = unscale(&x);
        return Err(Error::NonConvergence {
            best: ar.into_iter().chain(ma).chain(std::iter::once(mu)).collect(),
            objective: value * sd * sd,
            evaluations,
        });
    };
    let (ar, ma, mu) = unscale(&x);
    Ok(CssFit {
        ar,
        ma,
        mu,
        css: value * sd * sd,
        n_obs,
    })
}

fn check_length(s: &AnnualSeries, p: usize, d: usize, q: usize) -> Result<()> {
    let needed = p + q + d + MIN_SPARE_OBS;
    if s.len() < needed {
        return Err(Error::insufficient(format!("ARIMA({p},{d},{q}) estimation"), needed, s.len()));
    }
    Ok(())
}

/// Estimate ARIMA(p, d, q) by conditional sum of squares.
pub fn fit_arima(s: &AnnualSeries, p: usize, d: usize, q: usize) -> Result<ArimaModel> {
    check_length(s, p, d, q)?;
    let w = s.difference(d)?;
    let fit = fit_css(w.values(), p, q, p)?;
    let model = ArimaModel {
        p,
        d,
        q,
        ar_coeffs: fit.ar,
        ma_coeffs: fit.ma,
        intercept: fit.mu,
        sigma2: fit.css / fit.n_obs as f64,
        css: fit.css,
        n_obs: fit.n_obs,
    };
    if !(model.sigma2 > 0.0) {
        return Err(Error::Degenerate("model fits the series exactly".into()));
    }
    model
        .check_invariants()
        .map_err(|e| Error::Degenerate(format!("fitted model violates admissibility: {e}")))?;
    Ok(model)
}

/// Point forecasts for the `horizon` years after `last_obs`, which must hold
/// at least max(p, q) + d trailing observations of the modelled series.
pub fn forecast(m: &ArimaModel, last_obs: &AnnualSeries, horizon: usize) -> Result<AnnualSeries> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    let needed = (m.p.max(m.q) + m.d).max(1);
    if last_obs.len() < needed {
        return Err(Error::InsufficientContext(format!(
            "ARIMA({},{},{}) forecast needs {needed} trailing observations, got {}",
            m.p,
            m.d,
            m.q,
            last_obs.len()
        )));
    }
    let w = if m.d < last_obs.len() {
        last_obs.difference(m.d)?.values().to_vec()
    } else {
        Vec::new()
    };
    let offset = m.p.min(w.len());
    let (mut e, _) = innovations(&w, &m.ar_coeffs, &m.ma_coeffs, m.intercept, offset);
    let mut path = w.clone();
    for _ in 0..horizon {
        let t = path.len();
        let mut v = m.intercept;
        for (i, phi) in m.ar_coeffs.iter().enumerate() {
            if t > i {
                v += phi * (path[t - i - 1] - m.intercept);
            }
        }
        for (j, theta) in m.ma_coeffs.iter().enumerate() {
            if t > j {
                v += theta * e[t - j - 1];
            }
        }
        path.push(v);
        e.push(0.0);
    }
    let future = &path[w.len()..];
    let values = last_obs.values();
    let anchors = &values[values.len() - m.d..];
    let first_year = last_obs.end_year() - m.d as i32 + 1;
    let levels = integrate(first_year, future, anchors)?;
    AnnualSeries::levels(last_obs.end_year() + 1, levels.values()[m.d..].to_vec())
}

/// One cell of the order-selection grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderCandidate {
    pub p: usize,
    pub q: usize,
    /// `None` when the fit failed.
    pub aic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSelection {
    pub p: usize,
    pub q: usize,
    pub aic: f64,
    pub candidates: Vec<OrderCandidate>,
}

/// AIC-minimizing (p, q) over `[0, p_max] × [0, q_max]`; see
/// [`select_order_with`].
pub fn select_order(s: &AnnualSeries, p_max: usize, d: usize, q_max: usize) -> Result<(usize, usize)> {
    select_order_with(s, p_max, d, q_max, true).map(|sel| (sel.p, sel.q))
}

/// Grid search by AIC. Every candidate is scored on the same innovations
/// (those after the first `p_max` differenced observations); ties within
/// 1e-9 go to the smaller p + q, then the smaller q.
pub fn select_order_with(s: &AnnualSeries, p_max: usize, d: usize, q_max: usize, parallel: bool) -> Result<OrderSelection> {
    check_length(s, p_max, d, q_max)?;
    let w = s.difference(d)?;
    let w = w.values();
    let grid: Vec<(usize, usize)> = (0..=p_max).flat_map(|p| (0..=q_max).map(move |q| (p, q))).collect();
    let score = |&(p, q): &(usize, usize)| OrderCandidate {
        p,
        q,
        aic: fit_css(w, p, q, p_max)
            .ok()
            .filter(|f| f.css > 0.0)
            .map(|f| css_aic(f.css, f.n_obs, p + q)),
    };
    let candidates: Vec<OrderCandidate> = if parallel {
        grid.par_iter().map(score).collect()
    } else {
        grid.iter().map(score).collect()
    };

    let mut best: Option<(usize, usize, f64)> = None;
    for c in &candidates {
        let Some(aic) = c.aic else { continue };
        let better = match best {
            None => true,
            Some((bp, bq, baic)) => {
                if (aic - baic).abs() <= 1e-9 * baic.abs().max(1.0) {
                    (c.p + c.q, c.q) < (bp + bq, bq)
                } else {
                    aic < baic
                }
            }
        };
        if better {
            best = Some((c.p, c.q, aic));
        }
    }
    let (p, q, aic) = best.ok_or(Error::SelectionFailed)?;
    Ok(OrderSelection { p, q, aic, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{arma, random_walk, stream_rng};

    fn series(v: Vec<f64>) -> AnnualSeries {
        AnnualSeries::levels(1900, v).unwrap()
    }

    #[test]
    fn recovers_arma11() {
        let y = arma(&mut stream_rng(21, 0), 2000, &[0.6], &[0.3], 5.0, 1.0);
        let m = fit_arima(&series(y), 1, 0, 1).unwrap();
        assert!((m.ar_coeffs[0] - 0.6).abs() < 0.05, "{m:?}");
        assert!((m.ma_coeffs[0] - 0.3).abs() < 0.08, "{m:?}");
        assert!((m.intercept - 5.0).abs() < 0.3);
        assert!((m.sigma2 - 1.0).abs() < 0.1);
    }

    #[test]
    fn random_walk_with_drift_closed_form() {
        let mut rng = stream_rng(4, 0);
        let y: Vec<f64> = random_walk(&mut rng, 40).iter().enumerate().map(|(i, v)| v + 0.7 * i as f64).collect();
        let m = fit_arima(&series(y.clone()), 0, 1, 0).unwrap();
        let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = dy.iter().sum::<f64>() / dy.len() as f64;
        let var = dy.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / dy.len() as f64;
        assert!((m.intercept - mean).abs() < 1e-12);
        assert!((m.sigma2 - var).abs() < 1e-12);
        assert_eq!(m.n_obs, 39);
    }

    #[test]
    fn too_short_and_constant_inputs() {
        let s = series((0..12).map(|i| (i as f64).sin()).collect());
        assert!(matches!(fit_arima(&s, 1, 1, 1), Err(Error::InsufficientData { .. })));
        let lin = series((0..30).map(|i| 2.0 * i as f64).collect());
        assert!(matches!(fit_arima(&lin, 1, 1, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn fitted_models_are_admissible() {
        for seed in 0..10 {
            let y = arma(&mut stream_rng(seed, 0), 60, &[0.9], &[-0.7], 0.0, 1.0);
            let m = fit_arima(&series(y), 2, 0, 2).unwrap();
            let ar: Vec<f64> = m.ar_coeffs.iter().map(|v| -v).collect();
            assert!(is_outside_unit_circle(&ar));
            assert!(is_outside_unit_circle(&m.ma_coeffs));
            assert!(m.sigma2 > 0.0);
        }
    }

    #[test]
    fn optimum_beats_every_start() {
        let y = arma(&mut stream_rng(31, 0), 80, &[0.4], &[0.4], 0.0, 2.0);
        let s = series(y);
        let m = fit_arima(&s, 1, 0, 1).unwrap();
        let w = s.values();
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let sd = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
        for x0 in start_points(1, 1) {
            let (ar, ma, mu) = admissible(&x0, 1, 1);
            let at_start = innovations(w, &ar, &ma, mean + sd * mu, 1).1;
            assert!(m.css <= at_start * (1.0 + 1e-12));
        }
    }

    #[test]
    fn forecast_examples() {
        let rw = ArimaModel::from_coefficients(1, vec![], vec![], 0.0, 1.0).unwrap();
        let hist = series(vec![90.0, 95.0, 100.0]);
        let f = forecast(&rw, &hist, 4).unwrap();
        assert_eq!(f.values(), &[100.0; 4]);
        assert_eq!(f.start_year(), 1903);

        let ar = ArimaModel::from_coefficients(0, vec![0.5], vec![], 0.0, 1.0).unwrap();
        let f = forecast(&ar, &series(vec![8.0]), 3).unwrap();
        assert_eq!(f.values(), &[4.0, 2.0, 1.0]);
    }

    #[test]
    fn forecast_requires_context() {
        let m = ArimaModel::from_coefficients(1, vec![0.5], vec![0.2], 0.0, 1.0).unwrap();
        assert!(matches!(
            forecast(&m, &series(vec![1.0]), 2),
            Err(Error::InsufficientContext(_))
        ));
        assert!(forecast(&m, &series(vec![1.0, 2.0]), 2).is_ok());
        assert!(matches!(forecast(&m, &series(vec![1.0, 2.0]), 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn forecast_is_continuous_with_history() {
        // ARIMA(1,1,0): one-step forecast moves by (1 + φ)·δ when the last
        // level moves by δ
        let m = ArimaModel::from_coefficients(1, vec![0.4], vec![], 0.5, 1.0).unwrap();
        let base = series(vec![10.0, 11.0, 12.5]);
        let bumped = series(vec![10.0, 11.0, 13.5]);
        let a = forecast(&m, &base, 1).unwrap().values()[0];
        let b = forecast(&m, &bumped, 1).unwrap().values()[0];
        assert!((b - a - 1.4).abs() < 1e-12);
    }

    #[test]
    fn drift_model_grows_linearly() {
        let m = ArimaModel::from_coefficients(1, vec![], vec![], 2.0, 1.0).unwrap();
        let f = forecast(&m, &series(vec![5.0, 7.0]), 3).unwrap();
        assert_eq!(f.values(), &[9.0, 11.0, 13.0]);
    }

    #[test]
    fn rejects_inadmissible_coefficients() {
        assert!(ArimaModel::from_coefficients(0, vec![1.2], vec![], 0.0, 1.0).is_err());
        assert!(ArimaModel::from_coefficients(0, vec![], vec![-1.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn selection_is_same_serial_and_parallel() {
        let y = arma(&mut stream_rng(5, 0), 150, &[0.5, 0.2], &[], 0.0, 1.0);
        let s = series(y);
        let a = select_order_with(&s, 2, 0, 2, false).unwrap();
        let b = select_order_with(&s, 2, 0, 2, true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.candidates.len(), 9);
    }
}
