//! Sample autocorrelation and partial autocorrelation functions.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::AnnualSeries;

/// One bar of a correlogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelogramPoint {
    pub lag: usize,
    pub value: f64,
    /// Half-width of the approximate 95% band, 1.96/√n.
    pub conf_band: f64,
}

fn check(values: &[f64], max_lag: usize) -> Result<()> {
    if max_lag >= values.len() {
        return Err(Error::insufficient(
            format!("correlogram up to lag {max_lag}"),
            max_lag + 1,
            values.len(),
        ));
    }
    Ok(())
}

fn centered(values: &[f64]) -> Result<Vec<f64>> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let x: Vec<f64> = values.iter().map(|v| v - mean).collect();
    if x.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate("series has zero variance".into()));
    }
    Ok(x)
}

/// Sample autocorrelations r₀ … r_max_lag (r₀ = 1) with the biased,
/// full-sample denominator, computed through a zero-padded FFT.
pub fn autocorrelations(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    check(values, max_lag)?;
    let x = centered(values)?;
    let n = x.len();
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .map(|v| Complex::new(*v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let c0 = buf[0].re;
    let mut out: Vec<f64> = buf[..=max_lag].iter().map(|c| c.re / c0).collect();
    out[0] = 1.0;
    Ok(out)
}

/// Same as [`autocorrelations`] by the O(n·k) definition.
pub fn autocorrelations_direct(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    check(values, max_lag)?;
    let x = centered(values)?;
    let c0: f64 = x.iter().map(|v| v * v).sum();
    Ok((0..=max_lag)
        .map(|k| x.iter().zip(&x[k..]).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect())
}

/// Partial autocorrelations φ₁₁ … φ_kk from autocorrelations r₀ … r_k by
/// the Durbin–Levinson recursion.
pub fn durbin_levinson(r: &[f64]) -> Vec<f64> {
    let k_max = r.len().saturating_sub(1);
    let mut pacf = Vec::with_capacity(k_max);
    let mut phi: Vec<f64> = Vec::new();
    let mut v = r.first().copied().unwrap_or(1.0);
    for k in 1..=k_max {
        let num = r[k] - phi.iter().enumerate().map(|(j, p)| p * r[k - 1 - j]).sum::<f64>();
        let kk = if v > 0.0 { num / v } else { 0.0 };
        let mut next: Vec<f64> = (0..phi.len()).map(|j| phi[j] - kk * phi[phi.len() - 1 - j]).collect();
        next.push(kk);
        phi = next;
        v *= 1.0 - kk * kk;
        pacf.push(kk);
    }
    pacf
}

fn band(n: usize) -> f64 {
    1.96 / (n as f64).sqrt()
}

/// ACF at lags 1 … `max_lag`.
pub fn acf(s: &AnnualSeries, max_lag: usize) -> Result<Vec<CorrelogramPoint>> {
    let r = autocorrelations(s.values(), max_lag)?;
    let conf_band = band(s.len());
    Ok(r.iter()
        .enumerate()
        .skip(1)
        .map(|(lag, v)| CorrelogramPoint {
            lag,
            value: v.clamp(-1.0, 1.0),
            conf_band,
        })
        .collect())
}

/// PACF at lags 1 … `max_lag`.
pub fn pacf(s: &AnnualSeries, max_lag: usize) -> Result<Vec<CorrelogramPoint>> {
    let r = autocorrelations(s.values(), max_lag)?;
    let conf_band = band(s.len());
    Ok(durbin_levinson(&r)
        .into_iter()
        .enumerate()
        .map(|(i, v)| CorrelogramPoint {
            lag: i + 1,
            value: v.clamp(-1.0, 1.0),
            conf_band,
        })
        .collect())
}
