//! `taxcast` command-line interface.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use taxcast::accuracy::compare_models;
use taxcast::arima::{acf, fit_arima, forecast, pacf, select_order_with, ArimaModel};
use taxcast::causality::granger_test;
use taxcast::fixtures::{self, ResidualSign};
use taxcast::io::{load_scenario, parse_csv, Dataset};
use taxcast::report::{InputDigest, PlotData, PlotKind, RunReport};
use taxcast::reproduce::{run_all, tally, FullData, ReproduceOptions, Status};
use taxcast::scenario::{run_scenario, summarize_growth, GrowthBase};
use taxcast::stationarity::{adf_test, recommend_d, simulate_critical_values, AdfSpec, Deterministic, LagSelection, Significance};
use taxcast::{AnnualSeries, Error, Result};

#[derive(Parser)]
#[command(name = "taxcast", version, about = "Annual tax-revenue forecasting: unit roots, ARIMA, Granger screens, scenarios, accuracy")]
struct Cli {
    /// Emit the run report as JSON instead of a human-readable table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every Monte-Carlo step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write a tidy series,year,value,kind CSV of the plotted series.
    #[arg(long, global = true, value_name = "FILE")]
    emit_plot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augmented Dickey–Fuller unit-root test.
    Adf(AdfArgs),
    /// Autocorrelation and partial autocorrelation functions.
    Acf(AcfArgs),
    /// Fit an ARIMA model by conditional sum of squares.
    FitArima(FitArgs),
    /// Fit an ARIMA model and forecast ahead.
    Forecast(ForecastArgs),
    /// Granger-causality F-test.
    Granger(GrangerArgs),
    /// Compare predictions against actuals and rank them.
    Evaluate(EvaluateArgs),
    /// Driver regression projected along assumed growth paths.
    Scenario(ScenarioArgs),
    /// Run the bundled Bulgarian PIT/VAT reproduction checks.
    ReproducePaper(ReproduceArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// CSV with a `year` column followed by one column per series.
    #[arg(long, short)]
    input: PathBuf,
    /// Column to analyse.
    #[arg(long, short)]
    series: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetArg {
    None,
    Constant,
    ConstantAndTrend,
}

impl From<DetArg> for Deterministic {
    fn from(d: DetArg) -> Self {
        match d {
            DetArg::None => Deterministic::None,
            DetArg::Constant => Deterministic::Constant,
            DetArg::ConstantAndTrend => Deterministic::ConstantAndTrend,
        }
    }
}

#[derive(Args)]
struct AdfArgs {
    #[command(flatten)]
    data: SeriesArgs,
    #[arg(long, value_enum, default_value = "constant")]
    det: DetArg,
    /// Maximum lagged differences (default: Schwert rule).
    #[arg(long)]
    max_lag: Option<usize>,
    /// Use exactly --max-lag lags instead of AIC selection.
    #[arg(long, requires = "max_lag")]
    fixed_lag: bool,
    /// Also recommend a differencing order at this significance level.
    #[arg(long, value_name = "ALPHA")]
    recommend_d: Option<f64>,
    /// Also simulate critical values with this many replications.
    #[arg(long, value_name = "REPS")]
    simulate: Option<usize>,
}

#[derive(Args)]
struct AcfArgs {
    #[command(flatten)]
    data: SeriesArgs,
    #[arg(long, default_value_t = 10)]
    max_lag: usize,
    /// Difference the series this many times first.
    #[arg(long, default_value_t = 0)]
    d: usize,
}

#[derive(Args)]
struct OrderArgs {
    /// Model order as p,d,q.
    #[arg(long, value_parser = parse_order, conflicts_with = "auto")]
    order: Option<(usize, usize, usize)>,
    /// Select p and q by AIC up to --p-max/--q-max with --d differences.
    #[arg(long)]
    auto: bool,
    #[arg(long, default_value_t = 3)]
    p_max: usize,
    #[arg(long, default_value_t = 3)]
    q_max: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
}

fn parse_order(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match parts[..] {
        [Ok(p), Ok(d), Ok(q)] => Ok((p, d, q)),
        _ => Err(format!("expected p,d,q (e.g. 1,1,1), got '{s}'")),
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: SeriesArgs,
    #[command(flatten)]
    order: OrderArgs,
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    data: SeriesArgs,
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, default_value_t = 3)]
    horizon: usize,
}

#[derive(Args)]
struct GrangerArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Candidate cause column.
    #[arg(long)]
    cause: String,
    /// Effect column.
    #[arg(long)]
    effect: String,
    #[arg(long, default_value_t = 1)]
    max_lag: usize,
    /// Difference both series this many times first.
    #[arg(long, default_value_t = 0)]
    d: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Column holding actual values.
    #[arg(long)]
    actual: String,
    /// Prediction columns (default: every other column).
    #[arg(long = "model", visible_alias = "pred")]
    models: Vec<String>,
    /// First year of the evaluation window.
    #[arg(long)]
    from: Option<i32>,
    /// Last year of the evaluation window.
    #[arg(long)]
    to: Option<i32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Fitted,
    Actual,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario description (key=value lines).
    file: PathBuf,
    /// Data CSV (default: the scenario's `data=` entry, relative to the file).
    #[arg(long)]
    data: Option<PathBuf>,
    /// Level that growth is measured against.
    #[arg(long, value_enum, default_value = "fitted")]
    growth_base: BaseArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    PredictedMinusActual,
    ActualMinusPredicted,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Official annual PIT and VAT revenue (columns `PIT`, `VAT`) for the
    /// conditional ARIMA(1,1,1) check, in millions.
    #[arg(long, value_name = "CSV")]
    full_data: Option<PathBuf>,
    /// Exchange rate for converting BGN full data to EUR.
    #[arg(long, requires = "full_data")]
    bgn_per_eur: Option<f64>,
    /// Skip the seeded Monte-Carlo checks.
    #[arg(long)]
    no_monte_carlo: bool,
    #[arg(long, value_enum, default_value = "predicted-minus-actual")]
    residual_sign: SignArg,
    /// Exit with status 1 when any check fails.
    #[arg(long)]
    strict: bool,
}

/// Shared state for one invocation.
struct Ctx {
    command: Vec<String>,
    seed: u64,
    json: bool,
    inputs: Vec<InputDigest>,
    plot: PlotData,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<Dataset> {
        let bytes = std::fs::read(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.display().to_string()),
            _ => Error::Io(format!("{}: {e}", path.display())),
        })?;
        self.inputs.push(InputDigest::of(path.display().to_string(), &bytes));
        let text = String::from_utf8(bytes).map_err(|_| Error::Io(format!("{}: not UTF-8", path.display())))?;
        parse_csv(&text, &path.display().to_string())
    }

    fn series(&mut self, a: &SeriesArgs) -> Result<AnnualSeries> {
        Ok(self.load(&a.input)?.get(&a.series)?.clone())
    }

    /// Print the report; `human` renders the non-JSON form.
    fn emit<T: Serialize>(&mut self, payload: T, warnings: Vec<String>, human: impl FnOnce(&T) -> String) -> Result<()> {
        let mut report = RunReport::new(self.command.clone(), self.seed, std::mem::take(&mut self.inputs), payload);
        report.warnings = warnings;
        if self.json {
            println!("{}", report.to_json()?);
        } else {
            print!("{}", human(&report.payload));
            for w in &report.warnings {
                println!("warning: {w}");
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let mut lines = text.lines();
            let first = lines.next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            for l in lines {
                eprintln!("{l}");
            }
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error[config]: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let mut ctx = Ctx {
        command: std::env::args().skip(1).collect(),
        seed: cli.seed,
        json: cli.json,
        inputs: Vec::new(),
        plot: PlotData::default(),
    };
    let outcome = run(&cli, &mut ctx).and_then(|code| {
        if let Some(path) = &cli.emit_plot {
            ctx.plot.write(path)?;
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, ctx: &mut Ctx) -> Result<ExitCode> {
    match &cli.command {
        Command::Adf(a) => cmd_adf(a, ctx)?,
        Command::Acf(a) => cmd_acf(a, ctx)?,
        Command::FitArima(a) => cmd_fit(a, ctx)?,
        Command::Forecast(a) => cmd_forecast(a, ctx)?,
        Command::Granger(a) => cmd_granger(a, ctx)?,
        Command::Evaluate(a) => cmd_evaluate(a, ctx)?,
        Command::Scenario(a) => cmd_scenario(a, ctx)?,
        Command::ReproducePaper(a) => return cmd_reproduce(a, ctx),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AdfPayload {
    series: String,
    test: taxcast::stationarity::AdfResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulated_critical_values: Option<taxcast::stationarity::CriticalValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    differencing: Option<taxcast::stationarity::DifferencingAdvice>,
}

fn cmd_adf(a: &AdfArgs, ctx: &mut Ctx) -> Result<()> {
    let s = ctx.series(&a.data)?;
    let spec = AdfSpec {
        deterministic: a.det.into(),
        max_lag: a.max_lag,
        lag_selection: if a.fixed_lag { LagSelection::Fixed } else { LagSelection::Aic },
    };
    let test = adf_test(&s, &spec)?;
    let simulated_critical_values = match a.simulate {
        Some(reps) => Some(simulate_critical_values(spec.deterministic, s.len(), reps, ctx.seed)?),
        None => None,
    };
    let mut warnings = Vec::new();
    let differencing = match a.recommend_d {
        Some(alpha) => {
            let advice = recommend_d(&s, Significance::from_level(alpha)?, &spec)?;
            if advice.not_stationary_warning {
                warnings.push("series is not stationary after two differences".into());
            }
            Some(advice)
        }
        None => None,
    };
    ctx.plot.push(&a.data.series, &s, PlotKind::Actual);
    let payload = AdfPayload {
        series: a.data.series.clone(),
        test,
        simulated_critical_values,
        differencing,
    };
    ctx.emit(payload, warnings, |p| {
        let t = &p.test;
        let cv = &t.critical_values;
        let mut out = format!(
            "ADF test on {} ({:?}, lag {}, n_eff {})\n  tau = {:.4}\n  critical values: 1% {:.4}  5% {:.4}  10% {:.4}\n  reject unit root: 1% {}  5% {}  10% {}\n",
            p.series, t.deterministic, t.chosen_lag, t.n_effective, t.tau_stat, cv.one, cv.five, cv.ten,
            t.reject_at.one, t.reject_at.five, t.reject_at.ten
        );
        if let Some(s) = &p.simulated_critical_values {
            out += &format!("  simulated:       1% {:.4}  5% {:.4}  10% {:.4}\n", s.one, s.five, s.ten);
        }
        if let Some(d) = &p.differencing {
            out += &format!("  recommended differencing order: {}\n", d.d);
        }
        out
    })
}

#[derive(Serialize)]
struct AcfPayload {
    series: String,
    d: usize,
    acf: Vec<taxcast::arima::CorrelogramPoint>,
    pacf: Vec<taxcast::arima::CorrelogramPoint>,
}

fn cmd_acf(a: &AcfArgs, ctx: &mut Ctx) -> Result<()> {
    let s = ctx.series(&a.data)?.difference(a.d)?;
    let payload = AcfPayload {
        series: a.data.series.clone(),
        d: a.d,
        acf: acf(&s, a.max_lag)?,
        pacf: pacf(&s, a.max_lag)?,
    };
    ctx.plot.push(&a.data.series, &s, PlotKind::Actual);
    ctx.emit(payload, vec![], |p| {
        let band = p.acf.first().map(|c| c.conf_band).unwrap_or(0.0);
        let mut out = format!("Correlogram of {} (d = {}), band ±{:.4}\n  lag       acf      pacf\n", p.series, p.d, band);
        for (a, q) in p.acf.iter().zip(&p.pacf) {
            let mark = |v: f64| if v.abs() > band { "*" } else { " " };
            out += &format!("  {:>3}  {:>8.4}{} {:>8.4}{}\n", a.lag, a.value, mark(a.value), q.value, mark(q.value));
        }
        out
    })
}

#[derive(Serialize)]
struct FitPayload {
    series: String,
    model: ArimaModel,
    aic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    selection: Option<taxcast::arima::OrderSelection>,
}

fn fit_with(s: &AnnualSeries, o: &OrderArgs) -> Result<(ArimaModel, Option<taxcast::arima::OrderSelection>)> {
    match (o.order, o.auto) {
        (Some((p, d, q)), _) => Ok((fit_arima(s, p, d, q)?, None)),
        (None, true) => {
            let sel = select_order_with(s, o.p_max, o.d, o.q_max, true)?;
            Ok((fit_arima(s, sel.p, o.d, sel.q)?, Some(sel)))
        }
        (None, false) => Err(Error::InvalidArgument("give --order p,d,q or --auto".into())),
    }
}

fn describe_model(series: &str, m: &ArimaModel) -> String {
    format!(
        "ARIMA({},{},{}) on {series}\n  ar: {:?}\n  ma: {:?}\n  intercept: {:.6}\n  sigma2: {:.6}\n  aic: {:.4}\n",
        m.p, m.d, m.q, m.ar_coeffs, m.ma_coeffs, m.intercept, m.sigma2, m.aic()
    )
}

fn cmd_fit(a: &FitArgs, ctx: &mut Ctx) -> Result<()> {
    let s = ctx.series(&a.data)?;
    let (model, selection) = fit_with(&s, &a.order)?;
    ctx.plot.push(&a.data.series, &s, PlotKind::Actual);
    let payload = FitPayload {
        series: a.data.series.clone(),
        aic: model.aic(),
        model,
        selection,
    };
    ctx.emit(payload, vec![], |p| describe_model(&p.series, &p.model))
}

#[derive(Serialize)]
struct ForecastPayload {
    series: String,
    model: ArimaModel,
    forecast: AnnualSeries,
}

fn cmd_forecast(a: &ForecastArgs, ctx: &mut Ctx) -> Result<()> {
    let s = ctx.series(&a.data)?;
    let (model, _) = fit_with(&s, &a.order)?;
    let f = forecast(&model, &s, a.horizon)?;
    ctx.plot.push(&a.data.series, &s, PlotKind::Actual);
    ctx.plot.push(&a.data.series, &f, PlotKind::Forecast);
    let payload = ForecastPayload {
        series: a.data.series.clone(),
        model,
        forecast: f,
    };
    ctx.emit(payload, vec![], |p| {
        let mut out = describe_model(&p.series, &p.model);
        out += "  forecast:\n";
        for (y, v) in p.forecast.iter() {
            out += &format!("    {y}  {v:.4}\n");
        }
        out
    })
}

fn cmd_granger(a: &GrangerArgs, ctx: &mut Ctx) -> Result<()> {
    let data = ctx.load(&a.input)?;
    let x = data.get(&a.cause)?.difference(a.d)?;
    let y = data.get(&a.effect)?.difference(a.d)?;
    let (from, to) = (x.start_year().max(y.start_year()), x.end_year().min(y.end_year()));
    if from > to {
        return Err(Error::Alignment(format!("'{}' and '{}' share no common year", a.cause, a.effect)));
    }
    let result = granger_test(&x.window(from, to)?, &y.window(from, to)?, a.max_lag)?.with_names(&a.cause, &a.effect);
    ctx.emit(result, vec![], |r| {
        format!(
            "Granger test: {} → {} (lags {})\n  F = {:.4} (df {}, {})  p = {:.4}\n  causal at 5%: {}\n",
            r.cause, r.effect, r.max_lag, r.f_test.f_stat, r.f_test.df_num, r.f_test.df_den, r.f_test.p_value, r.causal_at_5pct
        )
    })
}

fn cmd_evaluate(a: &EvaluateArgs, ctx: &mut Ctx) -> Result<()> {
    let data = ctx.load(&a.input)?;
    let actual = data.get(&a.actual)?;
    let names: Vec<String> = if a.models.is_empty() {
        data.names.iter().filter(|n| **n != a.actual).cloned().collect()
    } else {
        a.models.clone()
    };
    if names.is_empty() {
        return Err(Error::Config("no prediction columns to evaluate".into()));
    }
    let mut from = a.from.unwrap_or(actual.start_year());
    let mut to = a.to.unwrap_or(actual.end_year());
    for n in &names {
        let s = data.get(n)?;
        from = from.max(s.start_year());
        to = to.min(s.end_year());
    }
    if from > to {
        return Err(Error::Alignment("actual and predictions share no common year".into()));
    }
    let actual = actual.window(from, to)?;
    let models = names
        .iter()
        .map(|n| Ok((n.clone(), data.get(n)?.window(from, to)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let cmp = compare_models(&actual, &models)?;
    ctx.plot.push(&a.actual, &actual, PlotKind::Actual);
    for (n, s) in &models {
        ctx.plot.push(n, s, PlotKind::Fitted);
    }
    ctx.emit(cmp, vec![], |c| {
        let mut out = format!(
            "Accuracy over {from}–{to}\n  {:<4} {:<14} {:>12} {:>14} {:>12} {:>12} {:>8} {:>8} {:>8} {:>8}\n",
            "rank", "model", "ME", "MSE", "RMSE", "MAE", "MPE", "MAPE", "SMAPE", "U1"
        );
        for m in &c.ranking {
            let r = &m.report;
            out += &format!(
                "  {:<4} {:<14} {:>12.3} {:>14.3} {:>12.3} {:>12.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}\n",
                m.rank, m.name, r.me, r.mse, r.rmse, r.mae, r.mpe, r.mape, r.smape, r.theil_u1
            );
        }
        for t in &c.dm_tests {
            match &t.result {
                Some(r) => out += &format!("  DM {} vs {}: stat {:.4}, p {:.4}\n", t.first, t.second, r.dm_stat, r.p_value),
                None => out += &format!("  DM {} vs {}: too few observations\n", t.first, t.second),
            }
        }
        out
    })
}

#[derive(Serialize)]
struct ScenarioPayload {
    forecast: taxcast::scenario::ScenarioForecast,
    growth: taxcast::scenario::GrowthSummary,
}

fn cmd_scenario(a: &ScenarioArgs, ctx: &mut Ctx) -> Result<()> {
    let bytes = std::fs::read(&a.file).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(a.file.display().to_string()),
        _ => Error::Io(format!("{}: {e}", a.file.display())),
    })?;
    ctx.inputs.push(InputDigest::of(a.file.display().to_string(), &bytes));
    let file = load_scenario(&a.file)?;
    let data_path = match (&a.data, &file.data) {
        (Some(p), _) => p.clone(),
        (None, Some(rel)) => a.file.parent().unwrap_or(Path::new(".")).join(rel),
        (None, None) => return Err(Error::Config("no data file: pass --data or set data= in the scenario".into())),
    };
    let data = ctx.load(&data_path)?;
    let spec = file.to_spec(&data)?;
    let forecast = run_scenario(&spec, file.granger_lag)?;
    let growth = summarize_growth(
        &forecast,
        match a.growth_base {
            BaseArg::Fitted => GrowthBase::Fitted,
            BaseArg::Actual => GrowthBase::Actual,
        },
    )?;
    let name = forecast.target_name.clone();
    ctx.plot.push(&name, &forecast.historical, PlotKind::Actual);
    ctx.plot.push(&name, &forecast.in_sample_predicted, PlotKind::Fitted);
    ctx.plot.push(&name, &forecast.projected_levels, PlotKind::Forecast);
    let warnings = forecast.warnings.clone();
    ctx.emit(ScenarioPayload { forecast, growth }, warnings, |p| {
        let f = &p.forecast;
        let mut out = format!("Scenario for {} (base year {})\n  coefficients:\n", f.target_name, f.base_year);
        for (n, b) in f.fitted.column_names.iter().zip(&f.fitted.beta) {
            out += &format!("    {n:<10} {b:>14.6}\n");
        }
        out += &format!("  R² {:.4}\n  projection:\n", f.fitted.r_squared);
        for ((y, v), (_, g)) in f.projected_levels.iter().zip(&p.growth.yearly) {
            out += &format!("    {y}  {v:>12.3}  ({:+.2}%)\n", g * 100.0);
        }
        out += &format!("  cumulative growth vs {}: {:+.2}%\n", p.growth.base_year, p.growth.cumulative * 100.0);
        for (d, g) in &f.granger_screen {
            out += &format!("  Granger {d} → {}: p = {:.4}\n", f.target_name, g.f_test.p_value);
        }
        out
    })
}

fn cmd_reproduce(a: &ReproduceArgs, ctx: &mut Ctx) -> Result<ExitCode> {
    for (name, text) in [
        ("fixtures/table4.csv", fixtures::TABLE4_CSV),
        ("fixtures/table5.csv", fixtures::TABLE5_CSV),
        ("fixtures/table6.csv", fixtures::TABLE6_CSV),
    ] {
        ctx.inputs.push(InputDigest::of(name, text.as_bytes()));
    }
    let full_data = match &a.full_data {
        Some(p) => Some(FullData {
            data: ctx.load(p)?,
            bgn_per_eur: a.bgn_per_eur,
        }),
        None => None,
    };
    let opts = ReproduceOptions {
        seed: ctx.seed,
        monte_carlo: !a.no_monte_carlo,
        residual_sign: match a.residual_sign {
            SignArg::PredictedMinusActual => ResidualSign::PredictedMinusActual,
            SignArg::ActualMinusPredicted => ResidualSign::ActualMinusPredicted,
        },
        full_data,
    };
    let outcomes = run_all(&opts);
    let (pass, fail, skip) = tally(&outcomes);
    let failed = outcomes.iter().any(|o| !o.diagnostic && o.status == Status::Fail);
    ctx.emit(outcomes, vec![], |os| {
        let mut out: String = os.iter().map(|o| o.line() + "\n").collect();
        out += &format!("{pass} passed, {fail} failed, {skip} skipped\n");
        out
    })?;
    Ok(if failed && a.strict { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
