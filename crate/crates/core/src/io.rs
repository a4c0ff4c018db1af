//! File formats: wide annual CSV (`year,<name>,...`) and the key=value
//! scenario description.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::{Driver, ScenarioSpec};
use crate::series::{AnnualSeries, GrowthPath};

/// Name of the optional free-text column carrying per-row source notes.
pub const PROVENANCE_COLUMN: &str = "provenance";

/// Series loaded from one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    /// Column names in file order (excluding `year` and `provenance`).
    pub names: Vec<String>,
    pub series: BTreeMap<String, AnnualSeries>,
    /// Series name → where it came from (the file, plus a column note).
    pub provenance: BTreeMap<String, String>,
    /// Year → contents of the `provenance` column, when present.
    pub row_notes: BTreeMap<i32, String>,
}

impl Dataset {
    pub fn get(&self, name: &str) -> Result<&AnnualSeries> {
        self.series.get(name).ok_or_else(|| {
            Error::Config(format!(
                "no series named '{name}' (available: {})",
                self.names.join(", ")
            ))
        })
    }

    /// Multiply every series by `factor` (unit conversion).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        for s in out.series.values_mut() {
            let v = s.values().iter().map(|x| x * factor).collect();
            *s = AnnualSeries::new(s.start_year(), v, s.unit())?;
        }
        Ok(out)
    }
}

/// Load a CSV file from disk.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = read_file(path)?;
    parse_csv(&text, &path.display().to_string())
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.display().to_string()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

/// Parse CSV text. `source` is recorded as each series' provenance.
///
/// Rules: the first column is `year`; years are integers, unique and
/// contiguous once sorted; empty cells are allowed only before a series'
/// first or after its last value.
pub fn parse_csv(text: &str, source: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::MalformedHeader(e.to_string()))?
        .clone();
    if header.is_empty() || &header[0] != "year" {
        return Err(Error::MalformedHeader(format!(
            "first column must be 'year', found '{}'",
            header.get(0).unwrap_or("")
        )));
    }
    let mut columns: Vec<(usize, String)> = Vec::new();
    let mut note_col = None;
    for (i, name) in header.iter().enumerate().skip(1) {
        if name.is_empty() {
            return Err(Error::MalformedHeader(format!("column {} has no name", i + 1)));
        }
        if name == "year" || columns.iter().any(|(_, n)| n == name) || (name == PROVENANCE_COLUMN && note_col.is_some()) {
            return Err(Error::MalformedHeader(format!("duplicate column '{name}'")));
        }
        if name == PROVENANCE_COLUMN {
            note_col = Some(i);
        } else {
            columns.push((i, name.to_string()));
        }
    }
    if columns.is_empty() {
        return Err(Error::MalformedHeader("no series columns after 'year'".into()));
    }

    // year -> cells
    let mut rows: BTreeMap<i32, Vec<Option<f64>>> = BTreeMap::new();
    let mut row_notes = BTreeMap::new();
    for (r, record) in reader.records().enumerate() {
        let line = r + 2;
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { .. } => {
                Error::MalformedHeader(format!("row {line} has a different number of fields than the header"))
            }
            _ => Error::Io(e.to_string()),
        })?;
        let year: i32 = record[0].parse().map_err(|_| Error::NonNumeric {
            row: line,
            column: "year".into(),
            value: record[0].to_string(),
        })?;
        let mut cells = Vec::with_capacity(columns.len());
        for (i, name) in &columns {
            let raw = &record[*i];
            if raw.is_empty() {
                cells.push(None);
                continue;
            }
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => cells.push(Some(v)),
                _ => {
                    return Err(Error::NonNumeric {
                        row: line,
                        column: name.clone(),
                        value: raw.to_string(),
                    })
                }
            }
        }
        if rows.insert(year, cells).is_some() {
            return Err(Error::DuplicateYear {
                series: "year".into(),
                year,
            });
        }
        if let Some(c) = note_col {
            if !record[c].is_empty() {
                row_notes.insert(year, record[c].to_string());
            }
        }
    }
    let (Some(&first), Some(&last)) = (rows.keys().next(), rows.keys().next_back()) else {
        return Err(Error::insufficient(format!("{source}: data rows"), 1, 0));
    };
    if let Some(year) = (first..=last).find(|y| !rows.contains_key(y)) {
        return Err(Error::YearGap {
            series: "year".into(),
            year,
        });
    }

    let mut series = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for (j, (_, name)) in columns.iter().enumerate() {
        let cells: Vec<(i32, Option<f64>)> = rows.iter().map(|(y, c)| (*y, c[j])).collect();
        let Some(lo) = cells.iter().position(|c| c.1.is_some()) else {
            return Err(Error::Config(format!("series '{name}' has no values")));
        };
        let hi = cells.iter().rposition(|c| c.1.is_some()).unwrap_or(lo);
        let mut values = Vec::with_capacity(hi - lo + 1);
        for (year, cell) in &cells[lo..=hi] {
            match cell {
                Some(v) => values.push(*v),
                None => {
                    return Err(Error::YearGap {
                        series: name.clone(),
                        year: *year,
                    })
                }
            }
        }
        series.insert(name.clone(), AnnualSeries::levels(cells[lo].0, values)?);
        provenance.insert(name.clone(), format!("{source}, column '{name}'"));
    }
    Ok(Dataset {
        names: columns.into_iter().map(|(_, n)| n).collect(),
        series,
        provenance,
        row_notes,
    })
}

/// Parsed scenario file, before it is bound to data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioFile {
    /// Column holding the target history.
    pub target: String,
    /// Optional data CSV, relative to the scenario file.
    pub data: Option<String>,
    pub drivers: Vec<DriverEntry>,
    /// Defaults to the last year every series is observed.
    pub base_year: Option<i32>,
    /// Defaults to the shortest driver path.
    pub horizon: Option<usize>,
    pub intercept: bool,
    pub granger_lag: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriverEntry {
    pub name: String,
    /// Column holding the driver's history.
    pub history: Option<String>,
    /// Growth rates as fractions.
    pub path: Option<Vec<f64>>,
}

/// Parse the key=value scenario format. Blank lines and lines starting with
/// `#` are ignored. Recognised keys: `target`, `data`, `base_year`,
/// `horizon`, `intercept`, `granger_lag`, `driver.<name>.history`,
/// `driver.<name>.path` (comma-separated fractions).
pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    let mut target = None;
    let mut data = None;
    let mut drivers: Vec<DriverEntry> = Vec::new();
    let mut base_year = None;
    let mut horizon = None;
    let mut intercept = true;
    let mut granger_lag = 1;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let bad = |msg: String| Error::Config(format!("line {lineno}: {msg}"));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "target" => target = Some(value.to_string()),
            "data" => data = Some(value.to_string()),
            "base_year" => base_year = Some(value.parse().map_err(|_| bad(format!("base_year '{value}' is not a year")))?),
            "horizon" => horizon = Some(value.parse().map_err(|_| bad(format!("horizon '{value}' is not a count")))?),
            "granger_lag" => granger_lag = value.parse().map_err(|_| bad(format!("granger_lag '{value}' is not a count")))?,
            "intercept" => {
                intercept = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(bad(format!("intercept must be true or false, got '{value}'"))),
                }
            }
            _ => {
                let parts: Vec<&str> = key.splitn(3, '.').collect();
                let [ "driver", name, field ] = parts[..] else {
                    return Err(bad(format!("unknown key '{key}'")));
                };
                if name.is_empty() {
                    return Err(bad("empty driver name".into()));
                }
                let idx = match drivers.iter().position(|d| d.name == name) {
                    Some(i) => i,
                    None => {
                        drivers.push(DriverEntry {
                            name: name.to_string(),
                            history: None,
                            path: None,
                        });
                        drivers.len() - 1
                    }
                };
                match field {
                    "history" => drivers[idx].history = Some(value.to_string()),
                    "path" => {
                        let rates = value
                            .split(',')
                            .map(|r| r.trim().parse::<f64>().map_err(|_| bad(format!("rate '{}' is not a number", r.trim()))))
                            .collect::<Result<Vec<_>>>()?;
                        drivers[idx].path = Some(rates);
                    }
                    _ => return Err(bad(format!("unknown driver field '{field}'"))),
                }
            }
        }
    }
    let target = target.ok_or_else(|| Error::Config("missing key 'target'".into()))?;
    if drivers.is_empty() {
        return Err(Error::Config("no drivers declared".into()));
    }
    Ok(ScenarioFile {
        target,
        data,
        drivers,
        base_year,
        horizon,
        intercept,
        granger_lag,
    })
}

/// Load a scenario file from disk.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioFile> {
    parse_scenario(&read_file(path.as_ref())?)
}

impl ScenarioFile {
    /// Bind column references to `data` and build a [`ScenarioSpec`].
    /// A driver without `history` uses the column named like the driver.
    pub fn to_spec(&self, data: &Dataset) -> Result<ScenarioSpec> {
        let target = data.get(&self.target)?.clone();
        let mut drivers = Vec::new();
        let mut rates = Vec::new();
        for d in &self.drivers {
            let column = d.history.as_deref().unwrap_or(&d.name);
            drivers.push(Driver {
                name: d.name.clone(),
                history: data.get(column)?.clone(),
            });
            let path = d
                .path
                .clone()
                .ok_or_else(|| Error::Config(format!("driver '{}' has no path", d.name)))?;
            rates.push((d.name.clone(), path));
        }
        let base_year = match self.base_year {
            Some(y) => y,
            None => drivers
                .iter()
                .map(|d| d.history.end_year())
                .fold(target.end_year(), i32::min),
        };
        let horizon = self
            .horizon
            .unwrap_or_else(|| rates.iter().map(|(_, r)| r.len()).min().unwrap_or(0));
        let driver_paths = rates
            .into_iter()
            .map(|(n, r)| Ok((n, GrowthPath::new(base_year + 1, r)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let spec = ScenarioSpec {
            target_name: self.target.clone(),
            target,
            drivers,
            driver_paths,
            base_year,
            horizon,
            intercept: self.intercept,
        };
        spec.validate()?;
        Ok(spec)
    }
}
