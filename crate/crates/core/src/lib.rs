//! Annual tax-revenue forecasting toolkit.
//!
//! The pipeline runs from unit-root testing ([`stationarity`]) through ARIMA
//! baselines ([`arima`]), Granger-screened driver regressions
//! ([`causality`], [`scenario`]) to a forecast-accuracy battery
//! ([`accuracy`]). Everything operates on [`AnnualSeries`].

pub mod accuracy;
pub mod arima;
pub mod causality;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linreg;
pub mod report;
pub mod reproduce;
pub mod scenario;
pub mod series;
pub mod sim;
pub mod special;
pub mod stationarity;

pub use error::{Error, Result};
pub use series::{apply_growth_path, integrate, AnnualSeries, GrowthPath, UnitTag};
