//! C ABI over `taxcast-core`.
//!
//! Conventions:
//! - every fallible call returns a [`TaxcastStatus`]; `TAXCAST_STATUS_OK` is 0;
//! - results are written through caller-provided out-pointers;
//! - series and fitted models are opaque handles, freed with their `_free`
//!   function (passing NULL is a no-op);
//! - on failure the message is kept per thread and read with
//!   [`taxcast_last_error_message`];
//! - panics never cross the boundary; they surface as `TAXCAST_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use taxcast::accuracy::error_stats;
use taxcast::arima::{fit_arima, forecast, ArimaModel};
use taxcast::causality::granger_test;
use taxcast::stationarity::{adf_test, AdfSpec, Deterministic};
use taxcast::{apply_growth_path, AnnualSeries, Error, GrowthPath};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxcastStatus {
    Ok = 0,
    NullPointer = 1,
    Panic = 2,
    BufferTooSmall = 3,
    InsufficientData = 10,
    InsufficientContext = 11,
    DivisionByZero = 12,
    Arity = 13,
    NonFinite = 14,
    InvalidRate = 15,
    SingularDesign = 16,
    InvalidNesting = 17,
    Degenerate = 18,
    NonConvergence = 19,
    SelectionFailed = 20,
    Alignment = 21,
    Config = 22,
    InvalidArgument = 23,
    Io = 24,
}

impl From<&Error> for TaxcastStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InsufficientData { .. } => TaxcastStatus::InsufficientData,
            Error::InsufficientContext(_) => TaxcastStatus::InsufficientContext,
            Error::DivisionByZero { .. } => TaxcastStatus::DivisionByZero,
            Error::Arity { .. } => TaxcastStatus::Arity,
            Error::NonFinite { .. } => TaxcastStatus::NonFinite,
            Error::InvalidRate { .. } => TaxcastStatus::InvalidRate,
            Error::SingularDesign { .. } => TaxcastStatus::SingularDesign,
            Error::InvalidNesting { .. } => TaxcastStatus::InvalidNesting,
            Error::Degenerate(_) => TaxcastStatus::Degenerate,
            Error::NonConvergence { .. } => TaxcastStatus::NonConvergence,
            Error::SelectionFailed => TaxcastStatus::SelectionFailed,
            Error::Alignment(_) => TaxcastStatus::Alignment,
            Error::Config(_) => TaxcastStatus::Config,
            Error::InvalidArgument(_) => TaxcastStatus::InvalidArgument,
            // file-format errors only arise in the CLI, but map them anyway
            Error::MissingFile(_)
            | Error::MalformedHeader(_)
            | Error::YearGap { .. }
            | Error::DuplicateYear { .. }
            | Error::NonNumeric { .. }
            | Error::Io(_) => TaxcastStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), TaxcastStatus>) -> TaxcastStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TaxcastStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TaxcastStatus::Panic
        }
    }
}

fn fail(e: Error) -> TaxcastStatus {
    set_error(format!("error[{}]: {e}", e.code()));
    TaxcastStatus::from(&e)
}

fn null(what: &str) -> TaxcastStatus {
    set_error(format!("null pointer: {what}"));
    TaxcastStatus::NullPointer
}

/// # Safety
/// `p` must be NULL or point to `len` readable doubles.
unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], TaxcastStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be NULL or a live handle.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, TaxcastStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

fn out<T>(p: *mut T, what: &str) -> Result<*mut T, TaxcastStatus> {
    if p.is_null() {
        Err(null(what))
    } else {
        Ok(p)
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn taxcast_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn taxcast_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque annual series.
pub struct TaxcastSeries(AnnualSeries);

/// Opaque fitted ARIMA model.
pub struct TaxcastArimaModel(ArimaModel);

/// Copy `len` values into a new series starting at `start_year`.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_series_new(
    start_year: i32,
    values: *const f64,
    len: usize,
    out_series: *mut *mut TaxcastSeries,
) -> TaxcastStatus {
    guard(|| {
        let dst = out(out_series, "out_series")?;
        let v = slice(values, len, "values")?;
        let s = AnnualSeries::levels(start_year, v.to_vec()).map_err(fail)?;
        *dst = Box::into_raw(Box::new(TaxcastSeries(s)));
        Ok(())
    })
}

/// # Safety
/// `series` must be NULL or a handle from `taxcast_series_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn taxcast_series_free(series: *mut TaxcastSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of observations, or 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn taxcast_series_len(series: *const TaxcastSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// First year, or 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn taxcast_series_start_year(series: *const TaxcastSeries) -> i32 {
    series.as_ref().map_or(0, |s| s.0.start_year())
}

/// Deterministic terms of the ADF regression.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxcastDeterministic {
    None = 0,
    Constant = 1,
    ConstantAndTrend = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TaxcastAdfResult {
    pub tau_stat: f64,
    pub chosen_lag: usize,
    pub n_effective: usize,
    pub critical_1pct: f64,
    pub critical_5pct: f64,
    pub critical_10pct: f64,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

/// ADF test with AIC lag selection. `max_lag < 0` uses the default rule.
///
/// # Safety
/// `series` must be a live handle; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_adf_test(
    series: *const TaxcastSeries,
    deterministic: TaxcastDeterministic,
    max_lag: i32,
    out_result: *mut TaxcastAdfResult,
) -> TaxcastStatus {
    guard(|| {
        let s = deref(series, "series")?;
        let dst = out(out_result, "out_result")?;
        let spec = AdfSpec {
            deterministic: match deterministic {
                TaxcastDeterministic::None => Deterministic::None,
                TaxcastDeterministic::Constant => Deterministic::Constant,
                TaxcastDeterministic::ConstantAndTrend => Deterministic::ConstantAndTrend,
            },
            max_lag: usize::try_from(max_lag).ok(),
            ..Default::default()
        };
        let r = adf_test(&s.0, &spec).map_err(fail)?;
        *dst = TaxcastAdfResult {
            tau_stat: r.tau_stat,
            chosen_lag: r.chosen_lag,
            n_effective: r.n_effective,
            critical_1pct: r.critical_values.one,
            critical_5pct: r.critical_values.five,
            critical_10pct: r.critical_values.ten,
            reject_1pct: r.reject_at.one,
            reject_5pct: r.reject_at.five,
            reject_10pct: r.reject_at.ten,
        };
        Ok(())
    })
}

/// Fit ARIMA(p,d,q) by conditional sum of squares.
///
/// # Safety
/// `series` must be a live handle; `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_arima_fit(
    series: *const TaxcastSeries,
    p: usize,
    d: usize,
    q: usize,
    out_model: *mut *mut TaxcastArimaModel,
) -> TaxcastStatus {
    guard(|| {
        let s = deref(series, "series")?;
        let dst = out(out_model, "out_model")?;
        let m = fit_arima(&s.0, p, d, q).map_err(fail)?;
        *dst = Box::into_raw(Box::new(TaxcastArimaModel(m)));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from `taxcast_arima_fit` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn taxcast_arima_free(model: *mut TaxcastArimaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TaxcastArimaSummary {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub intercept: f64,
    pub sigma2: f64,
    pub aic: f64,
}

/// Orders and scalar statistics of a fitted model.
///
/// # Safety
/// `model` must be a live handle; `out_summary` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_arima_summary(
    model: *const TaxcastArimaModel,
    out_summary: *mut TaxcastArimaSummary,
) -> TaxcastStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let dst = out(out_summary, "out_summary")?;
        *dst = TaxcastArimaSummary {
            p: m.p,
            d: m.d,
            q: m.q,
            intercept: m.intercept,
            sigma2: m.sigma2,
            aic: m.aic(),
        };
        Ok(())
    })
}

/// Copy φ into `ar` (capacity `ar_cap ≥ p`) and θ into `ma` (`ma_cap ≥ q`).
///
/// # Safety
/// `ar`/`ma` must be writable for their capacities (may be NULL when p or q is 0).
#[no_mangle]
pub unsafe extern "C" fn taxcast_arima_coefficients(
    model: *const TaxcastArimaModel,
    ar: *mut f64,
    ar_cap: usize,
    ma: *mut f64,
    ma_cap: usize,
) -> TaxcastStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        for (src, dst, cap, what) in [(&m.ar_coeffs, ar, ar_cap, "ar"), (&m.ma_coeffs, ma, ma_cap, "ma")] {
            if src.is_empty() {
                continue;
            }
            if cap < src.len() {
                set_error(format!("{what} buffer holds {cap}, need {}", src.len()));
                return Err(TaxcastStatus::BufferTooSmall);
            }
            let dst = out(dst, what)?;
            ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
        }
        Ok(())
    })
}

/// Forecast `horizon` years after the end of `history` into `out_values`
/// (capacity `cap ≥ horizon`).
///
/// # Safety
/// Handles must be live; `out_values` must be writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn taxcast_arima_forecast(
    model: *const TaxcastArimaModel,
    history: *const TaxcastSeries,
    horizon: usize,
    out_values: *mut f64,
    cap: usize,
) -> TaxcastStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let h = &deref(history, "history")?.0;
        let dst = out(out_values, "out_values")?;
        if cap < horizon {
            set_error(format!("output buffer holds {cap}, need {horizon}"));
            return Err(TaxcastStatus::BufferTooSmall);
        }
        let f = forecast(m, h, horizon).map_err(fail)?;
        ptr::copy_nonoverlapping(f.values().as_ptr(), dst, horizon);
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TaxcastGrangerResult {
    pub f_stat: f64,
    pub p_value: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub causal_at_5pct: bool,
}

/// Does `cause` Granger-cause `effect` at `max_lag` lags?
///
/// # Safety
/// Handles must be live; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_granger_test(
    cause: *const TaxcastSeries,
    effect: *const TaxcastSeries,
    max_lag: usize,
    out_result: *mut TaxcastGrangerResult,
) -> TaxcastStatus {
    guard(|| {
        let x = &deref(cause, "cause")?.0;
        let y = &deref(effect, "effect")?.0;
        let dst = out(out_result, "out_result")?;
        let r = granger_test(x, y, max_lag).map_err(fail)?;
        *dst = TaxcastGrangerResult {
            f_stat: r.f_test.f_stat,
            p_value: r.f_test.p_value,
            df_num: r.f_test.df_num,
            df_den: r.f_test.df_den,
            causal_at_5pct: r.causal_at_5pct,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TaxcastAccuracy {
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

/// Accuracy statistics of `predicted` against `actual` (same years).
///
/// # Safety
/// Handles must be live; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn taxcast_error_stats(
    actual: *const TaxcastSeries,
    predicted: *const TaxcastSeries,
    out_report: *mut TaxcastAccuracy,
) -> TaxcastStatus {
    guard(|| {
        let a = &deref(actual, "actual")?.0;
        let p = &deref(predicted, "predicted")?.0;
        let dst = out(out_report, "out_report")?;
        let r = error_stats(a, p).map_err(fail)?;
        *dst = TaxcastAccuracy {
            me: r.me,
            mse: r.mse,
            rmse: r.rmse,
            mae: r.mae,
            mpe: r.mpe,
            mape: r.mape,
            smape: r.smape,
            theil_u1: r.theil_u1,
            n: r.n,
        };
        Ok(())
    })
}

/// Compound `base` along `n` growth rates; level k goes to `out_levels[k]`.
///
/// # Safety
/// `rates` must hold `n` doubles; `out_levels` must be writable for `n`.
#[no_mangle]
pub unsafe extern "C" fn taxcast_apply_growth_path(
    base: f64,
    rates: *const f64,
    n: usize,
    out_levels: *mut f64,
) -> TaxcastStatus {
    guard(|| {
        let r = slice(rates, n, "rates")?;
        let dst = out(out_levels, "out_levels")?;
        let path = GrowthPath::new(0, r.to_vec()).map_err(fail)?;
        let levels = apply_growth_path(base, &path).map_err(fail)?;
        ptr::copy_nonoverlapping(levels.values().as_ptr(), dst, n);
        Ok(())
    })
}
