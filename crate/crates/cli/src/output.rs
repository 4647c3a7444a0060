use std::io::Write;
use std::path::Path;

use num_rational::BigRational;

use crate::error::{CliError, CliResult};

/// First line of every CSV artifact.
pub const CSV_HEADER: &str = "# sctk-format v1";

/// Seventeen significant digits, enough to recover the `f64` exactly.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn rational(r: &BigRational) -> String {
    r.to_string()
}

/// The single report file of a command.
#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Csv { columns: Vec<&'static str>, rows: Vec<Vec<String>> },
    Json(serde_json::Value),
}

impl Artifact {
    pub fn render(&self) -> CliResult<Vec<u8>> {
        match self {
            Artifact::Csv { columns, rows } => {
                let mut out = Vec::new();
                writeln!(out, "{CSV_HEADER}")?;
                let mut w = csv::Writer::from_writer(&mut out);
                let csv_err = |e: csv::Error| CliError::Io(e.to_string());
                w.write_record(columns).map_err(csv_err)?;
                for r in rows {
                    w.write_record(r).map_err(csv_err)?;
                }
                w.flush()?;
                drop(w);
                Ok(out)
            }
            Artifact::Json(v) => {
                let mut out = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    /// Write to `path`, or standard output without one.
    pub fn write(&self, path: Option<&Path>) -> CliResult<()> {
        let bytes = self.render()?;
        match path {
            Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&bytes)?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}
