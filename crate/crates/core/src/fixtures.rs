//! Published Bulgarian PIT/VAT figures (2010–2022, millions of BGN) embedded
//! at compile time, and the reconstructions built on top of them.
//!
//! Only predictions, residuals, deltas and growth rates were published, so
//! actual revenue and the driver levels are rebuilt here. Every helper is
//! deterministic; the files live in `fixtures/` next to this crate.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{parse_csv, Dataset};
use crate::scenario::{Driver, ScenarioSpec};
use crate::series::{apply_growth_path, AnnualSeries, GrowthPath};

pub const TABLE6_CSV: &str = include_str!("../fixtures/table6.csv");
pub const TABLE4_CSV: &str = include_str!("../fixtures/table4.csv");
pub const TABLE3C_CSV: &str = include_str!("../fixtures/table3c.csv");
pub const TABLE5_CSV: &str = include_str!("../fixtures/table5.csv");
pub const PIT_HISTORY_CSV: &str = include_str!("../fixtures/pit_history.csv");
pub const PIT_SCENARIO: &str = include_str!("../fixtures/pit.scenario");

/// Last year with observed revenue.
pub const BASE_YEAR: i32 = 2019;
/// Hold-out window of the published accuracy comparison.
pub const EVALUATION_WINDOW: (i32, i32) = (2015, 2019);

/// How published residuals relate actual and predicted values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidualSign {
    /// residual = predicted − actual. Matches the sign of the published
    /// mean error (actual − predicted) over the evaluation window.
    #[default]
    PredictedMinusActual,
    /// residual = actual − predicted.
    ActualMinusPredicted,
}

impl ResidualSign {
    fn actual(self, predicted: f64, residual: f64) -> f64 {
        match self {
            ResidualSign::PredictedMinusActual => predicted - residual,
            ResidualSign::ActualMinusPredicted => predicted + residual,
        }
    }
}

fn parse(text: &str, name: &str) -> Dataset {
    parse_csv(text, name).unwrap_or_else(|e| panic!("embedded fixture {name} is invalid: {e}"))
}

pub fn table6() -> Dataset {
    parse(TABLE6_CSV, "fixtures/table6.csv")
}

pub fn table4() -> Dataset {
    parse(TABLE4_CSV, "fixtures/table4.csv")
}

pub fn table3c() -> Dataset {
    parse(TABLE3C_CSV, "fixtures/table3c.csv")
}

/// The reconstructed PIT history shipped for the CLI scenario example.
pub fn pit_history() -> Dataset {
    parse(PIT_HISTORY_CSV, "fixtures/pit_history.csv")
}

/// One row of the published accuracy table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedMetric {
    pub panel: String,
    pub metric: String,
    pub regression: f64,
    pub arima: f64,
    pub official: f64,
}

pub fn table5() -> Vec<PublishedMetric> {
    let mut r = csv::Reader::from_reader(TABLE5_CSV.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.expect("embedded table5.csv");
            let f = |i: usize| rec[i].parse::<f64>().expect("numeric cell in table5.csv");
            PublishedMetric {
                panel: rec[0].to_string(),
                metric: rec[1].to_string(),
                regression: f(2),
                arima: f(3),
                official: f(4),
            }
        })
        .collect()
}

/// Look up one published metric, e.g. `("PIT", "RMSE")`.
pub fn published(panel: &str, metric: &str) -> Result<PublishedMetric> {
    table5()
        .into_iter()
        .find(|m| m.panel == panel && m.metric == metric)
        .ok_or_else(|| Error::Config(format!("no published {metric} for {panel}")))
}

fn series(d: &Dataset, name: &str) -> AnnualSeries {
    d.get(name).expect("fixture column").clone()
}

/// Published PIT predictions (three significant digits), 2010–2022.
pub fn pit_predicted_printed() -> AnnualSeries {
    series(&table6(), "pit_predicted")
}

/// PIT predictions at the precision of the published year-on-year deltas.
///
/// The deltas are printed to 10 kBGN while the levels are rounded to
/// 10 MBGN; the levels are rebuilt as `anchor + cumsum(Δ)` with the anchor
/// chosen to best match the rounded levels over the observed years.
pub fn pit_predicted_refined() -> AnnualSeries {
    let t6 = table6();
    let printed = series(&t6, "pit_predicted");
    let delta = series(&t6, "pit_delta_predicted");
    let mut cum = vec![0.0];
    for d in delta.values() {
        cum.push(cum.last().unwrap() + d);
    }
    let n_obs = (BASE_YEAR - printed.start_year() + 1) as usize;
    let anchor = printed.values()[..n_obs]
        .iter()
        .zip(&cum)
        .map(|(p, c)| p - c)
        .sum::<f64>()
        / n_obs as f64;
    AnnualSeries::levels(printed.start_year(), cum.iter().map(|c| anchor + c).collect()).expect("finite")
}

fn actual_from(predicted: &AnnualSeries, residual: &AnnualSeries, sign: ResidualSign) -> AnnualSeries {
    let values = residual
        .iter()
        .map(|(y, r)| sign.actual(predicted.get(y).expect("prediction for every residual year"), r))
        .collect();
    AnnualSeries::levels(residual.start_year(), values).expect("finite")
}

/// Reconstructed actual PIT revenue 2010–2019.
pub fn pit_actual(sign: ResidualSign) -> AnnualSeries {
    actual_from(&pit_predicted_refined(), &series(&table6(), "pit_residual"), sign)
}

/// Reconstructed actual VAT revenue 2010–2019 (from rounded predictions).
pub fn vat_actual(sign: ResidualSign) -> AnnualSeries {
    let t6 = table6();
    actual_from(&series(&t6, "vat_predicted"), &series(&t6, "vat_residual"), sign)
}

pub fn vat_predicted() -> AnnualSeries {
    series(&table6(), "vat_predicted")
}

/// Names of the PIT drivers, in regression order.
pub const PIT_DRIVERS: [&str; 3] = ["SOC", "WAGE", "PEN"];

fn growth_column(driver: &str) -> &'static str {
    match driver {
        "SOC" => "soc_growth",
        "WAGE" => "wage_growth",
        "PEN" => "pen_growth",
        _ => unreachable!("unknown driver {driver}"),
    }
}

/// 2010 level of a driver. SOC and PEN are recovered from the first
/// published delta over the first growth rate; WAGE is an index (2010 = 100).
pub fn driver_base(driver: &str) -> f64 {
    let t6 = table6();
    let t4 = table4();
    let g = |c: &str| series(&t4, c).values()[0];
    match driver {
        "SOC" => series(&t6, "soc_delta").values()[0] / g("soc_growth"),
        "PEN" => series(&t6, "pen_delta").values()[0] / g("pen_growth"),
        "WAGE" => 100.0,
        _ => unreachable!("unknown driver {driver}"),
    }
}

/// Growth rates of a driver over `from..=to`.
pub fn driver_rates(driver: &str, from: i32, to: i32) -> GrowthPath {
    let s = series(&table4(), growth_column(driver)).window(from, to).expect("covered years");
    GrowthPath::new(from, s.values().to_vec()).expect("rates above -1")
}

/// Driver levels 2010–2019 compounded from the base and the growth rates.
pub fn driver_history(driver: &str) -> AnnualSeries {
    let base = driver_base(driver);
    let grown = apply_growth_path(base, &driver_rates(driver, 2011, BASE_YEAR)).expect("finite");
    let mut v = vec![base];
    v.extend_from_slice(grown.values());
    AnnualSeries::levels(2010, v).expect("finite")
}

/// The PIT scenario: `target` regressed on SOC, WAGE and PEN over
/// 2010–2019 and projected 2020–2022 along the published growth rates.
pub fn pit_scenario(target: AnnualSeries) -> ScenarioSpec {
    let drivers = PIT_DRIVERS
        .iter()
        .map(|n| Driver {
            name: n.to_string(),
            history: driver_history(n),
        })
        .collect();
    let driver_paths = PIT_DRIVERS
        .iter()
        .map(|n| (n.to_string(), driver_rates(n, BASE_YEAR + 1, BASE_YEAR + 3)))
        .collect();
    ScenarioSpec {
        target_name: "PIT".into(),
        target,
        drivers,
        driver_paths,
        base_year: BASE_YEAR,
        horizon: 3,
        intercept: true,
    }
}

/// Build `n` forecast errors (actual − predicted) whose ME, MAE and RMSE
/// equal the given values.
///
/// Positive errors sum to `n(MAE+ME)/2`, negative ones to `n(MAE−ME)/2`.
/// The sign with the smaller total is carried by a single error; the others
/// share the remaining total evenly, spread by `±d` in alternation so the
/// sum of squares matches `n·RMSE²`.
pub fn synthesize_errors(me: f64, mae: f64, rmse: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || mae < me.abs() || rmse < mae {
        return Err(Error::InvalidArgument(format!(
            "no {n} errors have ME {me}, MAE {mae}, RMSE {rmse}"
        )));
    }
    let nf = n as f64;
    let pos = nf * (mae + me) / 2.0;
    let neg = nf * (mae - me) / 2.0;
    // (majority sign, majority total, minority value)
    let (sign, major, minor) = if pos >= neg { (1.0, pos, -neg) } else { (-1.0, neg, pos) };
    let m = if minor != 0.0 { n - 1 } else { n };
    let mean = major / m as f64;
    let remainder = nf * rmse * rmse - minor * minor - m as f64 * mean * mean;
    let k = 2 * (m / 2);
    let tol = 1e-9 * nf * rmse * rmse;
    if remainder < -tol || (k == 0 && remainder > tol) {
        return Err(Error::InvalidArgument(format!(
            "no {n} errors have ME {me}, MAE {mae}, RMSE {rmse}"
        )));
    }
    let d = if k == 0 { 0.0 } else { (remainder.max(0.0) / k as f64).sqrt() };
    if d >= mean && mean > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "spread {d} would flip signs of errors with mean magnitude {mean}"
        )));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..m {
        let spread = if i < k {
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        } else {
            0.0
        };
        out.push(sign * (mean + spread));
    }
    if m < n {
        out.push(minor);
    }
    Ok(out)
}

/// Predictions of the three published forecasters for `panel` ("PIT" or
/// "VAT") over the evaluation window, together with the actuals.
///
/// The regression predictions are the published ones; the ARIMA and
/// official forecasts were not published, so their errors are synthesized
/// from the published ME/MAE/RMSE.
pub fn evaluation_panel(panel: &str, sign: ResidualSign) -> Result<(AnnualSeries, BTreeMap<String, AnnualSeries>)> {
    let (from, to) = EVALUATION_WINDOW;
    let (actual, regression) = match panel {
        "PIT" => (pit_actual(sign), pit_predicted_refined()),
        "VAT" => (vat_actual(sign), vat_predicted()),
        _ => return Err(Error::InvalidArgument(format!("unknown panel '{panel}'"))),
    };
    let actual = actual.window(from, to)?;
    let n = actual.len();
    let me = published(panel, "ME")?;
    let mae = published(panel, "MAE")?;
    let rmse = published(panel, "RMSE")?;
    let mut models = BTreeMap::new();
    models.insert("Regression".to_string(), regression.window(from, to)?);
    for (name, pick) in [
        ("ARIMA", (|m: &PublishedMetric| m.arima) as fn(&PublishedMetric) -> f64),
        ("Official", |m: &PublishedMetric| m.official),
    ] {
        let e = synthesize_errors(pick(&me), pick(&mae), pick(&rmse), n)?;
        let pred = actual.values().iter().zip(&e).map(|(a, e)| a - e).collect();
        models.insert(name.to_string(), AnnualSeries::levels(from, pred)?);
    }
    Ok((actual, models))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(e: &[f64]) -> (f64, f64, f64) {
        let n = e.len() as f64;
        (
            e.iter().sum::<f64>() / n,
            e.iter().map(|x| x.abs()).sum::<f64>() / n,
            (e.iter().map(|x| x * x).sum::<f64>() / n).sqrt(),
        )
    }

    #[test]
    fn fixtures_parse() {
        assert_eq!(table6().get("pit_predicted").unwrap().len(), 13);
        assert_eq!(table6().get("pit_residual").unwrap().end_year(), 2019);
        assert_eq!(table4().get("gdp_growth").unwrap().start_year(), 2020);
        assert_eq!(table3c().get("gdp_growth").unwrap().len(), 3);
        assert_eq!(table5().len(), 16);
        assert!(table6().row_notes.contains_key(&2010));
    }

    #[test]
    fn refined_predictions_stay_within_print_rounding() {
        let printed = pit_predicted_printed();
        let refined = pit_predicted_refined();
        for (y, p) in printed.iter() {
            assert!((refined.get(y).unwrap() - p).abs() <= 20.0, "{y}");
        }
    }

    #[test]
    fn residual_sign_reproduces_published_mean_error() {
        // ME = mean(actual − predicted) over the window.
        let (from, to) = EVALUATION_WINDOW;
        let a = pit_actual(ResidualSign::default()).window(from, to).unwrap();
        let p = pit_predicted_refined().window(from, to).unwrap();
        let me = a.values().iter().zip(p.values()).map(|(a, p)| a - p).sum::<f64>() / 5.0;
        assert!((me - published("PIT", "ME").unwrap().regression).abs() < 1e-3, "{me}");
        let flipped = pit_actual(ResidualSign::ActualMinusPredicted).window(from, to).unwrap();
        assert!((flipped.values()[0] - a.values()[0] - 2.0 * 88.225181).abs() < 1e-9);
    }

    #[test]
    fn driver_reconstruction() {
        assert!((driver_base("SOC") - 8831.3).abs() < 0.1);
        assert!((driver_base("PEN") - 7650.7).abs() < 0.1);
        let wage = driver_history("WAGE");
        assert_eq!(wage.values()[0], 100.0);
        assert!((wage.values()[1] - 105.21).abs() < 1e-9);
        // second published SOC delta agrees with the compounded levels
        let soc = driver_history("SOC");
        assert!((soc.values()[2] - soc.values()[1] - 87.02).abs() < 0.5);
    }

    #[test]
    fn synthesized_errors_hit_targets() {
        for (me, mae, rmse) in [
            (-239.283, 287.667, 324.255),
            (-319.999, 319.999, 320.952),
            (711.099, 711.099, 742.449),
            (649.652, 649.652, 797.681),
            (-10.389, 29.892, 32.799),
        ] {
            let e = synthesize_errors(me, mae, rmse, 5).unwrap();
            let (m, a, r) = stats(&e);
            assert!((m - me).abs() < 1e-9 && (a - mae).abs() < 1e-9 && (r - rmse).abs() < 1e-9, "{e:?}");
        }
    }

    #[test]
    fn infeasible_targets_are_rejected() {
        assert!(synthesize_errors(5.0, 1.0, 10.0, 5).is_err());
        assert!(synthesize_errors(0.0, 1.0, 0.5, 5).is_err());
        assert!(synthesize_errors(1.0, 1.0, 100.0, 5).is_err());
    }

    #[test]
    fn evaluation_panels_cover_the_window() {
        for panel in ["PIT", "VAT"] {
            let (a, models) = evaluation_panel(panel, ResidualSign::default()).unwrap();
            assert_eq!((a.start_year(), a.end_year()), EVALUATION_WINDOW);
            assert_eq!(models.len(), 3);
        }
    }

    #[test]
    fn shipped_history_matches_reconstruction() {
        let h = pit_history();
        let close = |a: &AnnualSeries, b: &AnnualSeries| {
            a.start_year() == b.start_year()
                && a.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() < 1e-6)
        };
        assert!(close(h.get("PIT").unwrap(), &pit_actual(ResidualSign::default())));
        for d in PIT_DRIVERS {
            assert!(close(h.get(d).unwrap(), &driver_history(d)), "{d}");
        }
    }
}
