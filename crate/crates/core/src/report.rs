//! The envelope every CLI command emits, plus the tidy plot-CSV writer.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::AnnualSeries;

/// sha256 of one input, so a report can be tied to the exact bytes read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(source: impl Into<String>, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        Self {
            source: source.into(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Output of one command. Contains no timestamps or host details, so the
/// same inputs and seed give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    /// Command-line arguments after the program name.
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub payload: T,
    pub warnings: Vec<String>,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(command: Vec<String>, seed: u64, inputs: Vec<InputDigest>, payload: T) -> Self {
        Self {
            tool: "taxcast",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            inputs,
            payload,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Actual,
    Fitted,
    Forecast,
}

impl PlotKind {
    fn as_str(self) -> &'static str {
        match self {
            PlotKind::Actual => "actual",
            PlotKind::Fitted => "fitted",
            PlotKind::Forecast => "forecast",
        }
    }
}

/// Rows of a tidy `series,year,value,kind` file.
#[derive(Debug, Clone, Default)]
pub struct PlotData {
    rows: Vec<(String, i32, f64, PlotKind)>,
}

impl PlotData {
    pub fn push(&mut self, name: &str, s: &AnnualSeries, kind: PlotKind) {
        self.rows.extend(s.iter().map(|(y, v)| (name.to_string(), y, v, kind)));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,year,value,kind\n");
        for (name, year, value, kind) in &self.rows {
            out.push_str(&format!("{name},{year},{value},{}\n", kind.as_str()));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        f.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
