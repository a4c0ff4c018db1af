//! Driver-based scenario forecasts.
//!
//! A target revenue series is regressed (in levels) on contemporaneous
//! driver levels over their common history. Each driver is then carried
//! forward from its base-year level along an assumed growth path, and the
//! fitted law turns those driver paths into conditional revenue projections.
//! Drivers can be screened for Granger causality on first differences.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::causality::{granger_test, GrangerResult};
use crate::error::{Error, Result};
use crate::linreg::{ols_fit, predict, DesignMatrix, RegressionFit};
use crate::series::{apply_growth_path, AnnualSeries, GrowthPath};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Driver {
    pub name: String,
    pub history: AnnualSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub target_name: String,
    pub target: AnnualSeries,
    /// Regressors, in design-column order.
    pub drivers: Vec<Driver>,
    /// Future growth rates per driver, starting the year after `base_year`.
    pub driver_paths: BTreeMap<String, GrowthPath>,
    /// Last year of observed history; projections start the year after.
    pub base_year: i32,
    pub horizon: usize,
    pub intercept: bool,
}

impl ScenarioSpec {
    /// Years `(first, last)` where the target and every driver are observed.
    pub fn estimation_window(&self) -> Result<(i32, i32)> {
        let mut first = self.target.start_year();
        let mut last = self.target.end_year();
        for d in &self.drivers {
            first = first.max(d.history.start_year());
            last = last.min(d.history.end_year());
        }
        if first > last {
            return Err(Error::Alignment(format!(
                "target '{}' and its drivers share no common year",
                self.target_name
            )));
        }
        Ok((first, last))
    }

    /// Check the scenario's internal consistency.
    pub fn validate(&self) -> Result<()> {
        if self.drivers.is_empty() {
            return Err(Error::Config("a scenario needs at least one driver".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Config("scenario horizon must be at least 1".into()));
        }
        for (i, d) in self.drivers.iter().enumerate() {
            if self.drivers[..i].iter().any(|o| o.name == d.name) {
                return Err(Error::Config(format!("driver '{}' is listed twice", d.name)));
            }
        }
        let (_, last) = self.estimation_window()?;
        if last != self.base_year {
            return Err(Error::Config(format!(
                "base year {} is not the last common historical year ({last})",
                self.base_year
            )));
        }
        for d in &self.drivers {
            let path = self.path(&d.name)?;
            if path.start_year() != self.base_year + 1 || path.len() < self.horizon {
                return Err(Error::Config(format!(
                    "path for driver '{}' covers {}..={}, needs {}..={}",
                    d.name,
                    path.start_year(),
                    path.end_year(),
                    self.base_year + 1,
                    self.base_year + self.horizon as i32
                )));
            }
        }
        Ok(())
    }

    fn path(&self, name: &str) -> Result<&GrowthPath> {
        self.driver_paths
            .get(name)
            .ok_or_else(|| Error::Config(format!("no growth path for driver '{name}'")))
    }

    fn design(&self, columns: Vec<Vec<f64>>) -> Result<DesignMatrix> {
        let names = self.drivers.iter().map(|d| d.name.clone()).collect();
        let x = DesignMatrix::from_columns(names, columns)?;
        if self.intercept {
            x.with_intercept()
        } else {
            Ok(x)
        }
    }

    fn historical_design(&self) -> Result<(DesignMatrix, AnnualSeries)> {
        let (first, last) = self.estimation_window()?;
        let columns = self
            .drivers
            .iter()
            .map(|d| Ok(d.history.window(first, last)?.values().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok((self.design(columns)?, self.target.window(first, last)?))
    }
}

/// Granger screen of every driver against the target, on first differences
/// over the common window. Non-causal drivers are reported, not dropped.
pub fn screen_drivers(spec: &ScenarioSpec, max_lag: usize) -> Result<BTreeMap<String, GrangerResult>> {
    let (first, last) = spec.estimation_window()?;
    let target = spec.target.window(first, last)?.difference(1)?;
    spec.drivers
        .iter()
        .map(|d| {
            let x = d.history.window(first, last)?.difference(1)?;
            let r = granger_test(&x, &target, max_lag)?.with_names(&d.name, &spec.target_name);
            Ok((d.name.clone(), r))
        })
        .collect()
}

/// OLS of target levels on driver levels over the estimation window.
pub fn fit_scenario(spec: &ScenarioSpec) -> Result<RegressionFit> {
    let (x, y) = spec.historical_design()?;
    let needed = x.n_cols() + 3;
    if y.len() < needed {
        return Err(Error::insufficient(
            format!("scenario regression for '{}'", spec.target_name),
            needed,
            y.len(),
        ));
    }
    ols_fit(&x, y.values())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioForecast {
    pub target_name: String,
    pub base_year: i32,
    pub fitted: RegressionFit,
    /// Observed target over the estimation window.
    pub historical: AnnualSeries,
    pub in_sample_predicted: AnnualSeries,
    /// Observed minus predicted.
    pub residuals: AnnualSeries,
    pub projected_levels: AnnualSeries,
    /// Projected driver levels over the horizon.
    pub driver_levels: BTreeMap<String, AnnualSeries>,
    /// Filled by [`run_scenario`]; empty from [`project`] alone.
    pub granger_screen: BTreeMap<String, GrangerResult>,
    pub warnings: Vec<String>,
}

/// Carry the drivers along their paths and apply the fitted law.
pub fn project(spec: &ScenarioSpec, fit: &RegressionFit) -> Result<ScenarioForecast> {
    spec.validate()?;
    let (x_hist, historical) = spec.historical_design()?;
    let predicted = predict(fit, &x_hist)?;
    let in_sample_predicted = AnnualSeries::levels(historical.start_year(), predicted)?;
    let residuals = AnnualSeries::levels(
        historical.start_year(),
        historical
            .values()
            .iter()
            .zip(in_sample_predicted.values())
            .map(|(y, p)| y - p)
            .collect(),
    )?;

    let mut driver_levels = BTreeMap::new();
    let mut future_columns = Vec::with_capacity(spec.drivers.len());
    for d in &spec.drivers {
        let path = spec.path(&d.name)?;
        let path = GrowthPath::new(path.start_year(), path.rates()[..spec.horizon].to_vec())?;
        let base = d.history.get(spec.base_year).ok_or_else(|| {
            Error::Config(format!("driver '{}' has no value in base year {}", d.name, spec.base_year))
        })?;
        let levels = apply_growth_path(base, &path)?;
        future_columns.push(levels.values().to_vec());
        driver_levels.insert(d.name.clone(), levels);
    }
    let projected = predict(fit, &spec.design(future_columns)?)?;

    Ok(ScenarioForecast {
        target_name: spec.target_name.clone(),
        base_year: spec.base_year,
        fitted: fit.clone(),
        historical,
        in_sample_predicted,
        residuals,
        projected_levels: AnnualSeries::levels(spec.base_year + 1, projected)?,
        driver_levels,
        granger_screen: BTreeMap::new(),
        warnings: Vec::new(),
    })
}

/// Screen, fit and project. A history too short for the Granger screen
/// becomes a warning rather than an error.
pub fn run_scenario(spec: &ScenarioSpec, granger_lag: usize) -> Result<ScenarioForecast> {
    spec.validate()?;
    let fit = fit_scenario(spec)?;
    let mut forecast = project(spec, &fit)?;
    match screen_drivers(spec, granger_lag) {
        Ok(screen) => {
            for r in screen.values().filter(|r| !r.causal_at_5pct) {
                forecast.warnings.push(format!(
                    "driver '{}' does not Granger-cause '{}' at 5% (p = {:.4})",
                    r.cause, r.effect, r.f_test.p_value
                ));
            }
            forecast.granger_screen = screen;
        }
        Err(e @ Error::InsufficientData { .. }) => {
            forecast.warnings.push(format!("Granger screen skipped: {e}"));
        }
        Err(e) => return Err(e),
    }
    Ok(forecast)
}

/// Which base-year level growth is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GrowthBase {
    /// The model's in-sample prediction for the base year, so that the
    /// projection and its base come from the same law.
    #[default]
    Fitted,
    /// The observed base-year value.
    Actual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub base_year: i32,
    pub base: GrowthBase,
    pub base_level: f64,
    /// Year-on-year growth fractions over the horizon.
    pub yearly: Vec<(i32, f64)>,
    /// Last projected level over the base level, minus one.
    pub cumulative: f64,
}

/// Year-on-year and cumulative growth of a projection.
pub fn summarize_growth(f: &ScenarioForecast, base: GrowthBase) -> Result<GrowthSummary> {
    let source = match base {
        GrowthBase::Fitted => &f.in_sample_predicted,
        GrowthBase::Actual => &f.historical,
    };
    let base_level = source
        .get(f.base_year)
        .ok_or_else(|| Error::Config(format!("no base-year value for {}", f.base_year)))?;
    growth_from(base_level, &f.projected_levels, f.base_year, base)
}

/// Growth of `projected` relative to `base_level` observed in `base_year`.
pub fn growth_from(base_level: f64, projected: &AnnualSeries, base_year: i32, base: GrowthBase) -> Result<GrowthSummary> {
    let mut chain = vec![base_level];
    chain.extend_from_slice(projected.values());
    let rates = AnnualSeries::levels(base_year, chain)?.pct_change()?;
    Ok(GrowthSummary {
        base_year,
        base,
        base_level,
        yearly: rates.iter().collect(),
        cumulative: projected.last() / base_level - 1.0,
    })
}
