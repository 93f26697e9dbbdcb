//! Tabular results and their CSV form.

use std::fmt::Write as _;

use super::RunError;

/// Header fields written as the first CSV line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

impl Provenance {
    pub fn line(&self) -> String {
        format!("# config-hash={} seed={} version={}", self.config_hash, self.seed, self.version)
    }
}

/// One output table.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    /// File stem suffix: the table is written to `<prefix>_<name>.csv`.
    pub name: String,
    pub columns: Vec<String>,
    /// Free-text description of units, copied into the plot script.
    pub units: String,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl ScanResult {
    pub fn new(name: impl Into<String>, columns: Vec<String>, units: impl Into<String>) -> Self {
        Self { name: name.into(), columns, units: units.into(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<(), RunError> {
        if row.len() != self.columns.len() {
            return Err(RunError::Runtime(format!(
                "table {}: row has {} values for {} columns",
                self.name,
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let mut s = String::new();
        s.push_str(&provenance.line());
        s.push('\n');
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}
