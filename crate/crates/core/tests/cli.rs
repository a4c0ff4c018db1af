use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_taxcast"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn taxcast")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn adf_on_random_walk_does_not_reject() {
    let rw = fixture("random_walk.csv");
    let o = run(&["--json", "adf", "-i", rw.to_str().unwrap(), "--series", "RW", "--det", "constant"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["payload"]["test"]["reject_at"]["5%"], false);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let rw = fixture("random_walk.csv");
    let args = ["--json", "adf", "-i", rw.to_str().unwrap(), "-s", "RW", "--simulate", "2000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]:"), "{}", stderr(&o));
    let o = run(&["adf", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1_with_code_line() {
    let o = run(&["adf", "-i", "/definitely/missing.csv", "-s", "X"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[missing_file]:"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "year,A\n2000,1\n2002,2\n").unwrap();
    let o = run(&["adf", "-i", bad.to_str().unwrap(), "-s", "A"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[year_gap]:"), "{}", stderr(&o));

    let h = fixture("pit_history.csv");
    let o = run(&["granger", "-i", h.to_str().unwrap(), "--cause", "SOC", "--effect", "PIT"]);
    assert!(stderr(&o).starts_with("error[insufficient_data]:"), "{}", stderr(&o));
}

#[test]
fn scenario_runs_from_file_and_emits_plot() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let sc = fixture("pit.scenario");
    let o = run(&["--json", "--emit-plot", plot.to_str().unwrap(), "scenario", sc.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["payload"]["forecast"]["projected_levels"]["values"].as_array().unwrap().len(), 3);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    // 10-year history is too short for the Granger screen
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    let csv = std::fs::read_to_string(plot).unwrap();
    assert!(csv.starts_with("series,year,value,kind\n"));
    for kind in ["actual", "fitted", "forecast"] {
        assert!(csv.lines().any(|l| l.ends_with(kind)), "{kind}");
    }
}

#[test]
fn forecast_and_evaluate() {
    let rw = fixture("random_walk.csv");
    let o = run(&["--json", "forecast", "-i", rw.to_str().unwrap(), "-s", "RW", "--order", "0,1,0", "--horizon", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["payload"]["forecast"]["start_year"], 2020);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("eval.csv");
    std::fs::write(&f, "year,actual,good,bad\n2015,100,101,110\n2016,102,101,95\n2017,105,106,120\n2018,107,107,99\n2019,110,109,125\n").unwrap();
    let o = run(&["--json", "evaluate", "-i", f.to_str().unwrap(), "--actual", "actual"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["payload"]["ranking"][0]["name"], "good");
}

#[test]
fn acf_and_fit_arima_human_output() {
    let rw = fixture("random_walk.csv");
    let o = run(&["acf", "-i", rw.to_str().unwrap(), "-s", "RW", "--max-lag", "3", "--d", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pacf"));
    let o = run(&["fit-arima", "-i", rw.to_str().unwrap(), "-s", "RW", "--order", "1,1,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("ARIMA(1,1,0)"));
}

#[test]
fn reproduce_lists_every_criterion() {
    let o = run(&["--json", "reproduce-paper", "--no-monte-carlo"]);
    assert!(o.status.success());
    let v = json(&o);
    let ids: Vec<&str> = v["payload"].as_array().unwrap().iter().map(|o| o["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["1", "2", "3", "3d", "4", "5", "6", "7", "8", "9", "10"]);
    // strict mode turns a failing criterion into exit status 1
    let o = run(&["reproduce-paper", "--no-monte-carlo", "--strict"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reproduce_full_data_in_bgn() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("official.csv");
    // smooth synthetic revenue, BGN millions
    let mut text = String::from("year,PIT,VAT\n");
    for (i, y) in (1995..=2019).enumerate() {
        let t = i as f64;
        text += &format!("{y},{},{}\n", 300.0 * 1.08f64.powf(t) + 5.0 * t.sin(), 2000.0 * 1.065f64.powf(t) + 20.0 * t.cos());
    }
    std::fs::write(&f, text).unwrap();
    let o = run(&["--json", "reproduce-paper", "--no-monte-carlo", "--full-data", f.to_str().unwrap(), "--bgn-per-eur", "1.95583"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let c10 = v["payload"].as_array().unwrap().iter().find(|o| o["id"] == "10").unwrap();
    assert_ne!(c10["status"], "skipped");
    assert_eq!(c10["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn evaluate_identical_prediction_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("same.csv");
    std::fs::write(&f, "year,A,P\n2015,1,1\n2016,2,2\n2017,3,3\n2018,4,4\n2019,5,5\n").unwrap();
    let o = run(&["--json", "evaluate", "-i", f.to_str().unwrap(), "--actual", "A", "--pred", "P"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = &json(&o)["payload"]["ranking"][0]["report"];
    for k in ["me", "mse", "rmse", "mae", "mpe", "mape", "smape", "theil_u1"] {
        assert_eq!(r[k], 0.0, "{k}");
    }
}
