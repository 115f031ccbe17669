//! On-disk formats. CSV files use LF line endings and nine decimals for
//! every real value.

pub mod counts_csv;
pub mod fit_json;
pub mod hom_csv;
pub mod ledger_json;
pub mod surface_csv;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Fixed nine-decimal rendering used in every CSV column.
pub fn fmt9(x: f64) -> String {
    format!("{x:.9}")
}

/// Where a command writes its main output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn open(&self) -> CliResult<Box<dyn Write>> {
        match self {
            Sink::Stdout => Ok(Box::new(io::stdout().lock())),
            Sink::File(path) => {
                let f = File::create(path).map_err(|e| CliError::io(path, e))?;
                Ok(Box::new(BufWriter::new(f)))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Sink::Stdout => "<stdout>".into(),
            Sink::File(p) => p.display().to_string(),
        }
    }

    /// Maps a write failure to an error naming this sink.
    pub fn err(&self, e: io::Error) -> CliError {
        CliError::io(self.describe(), e)
    }
}

pub(crate) fn open_csv(path: &Path) -> CliResult<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file))
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub(crate) fn csv_err(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::parse(path, line, format!("{other:?}")),
    }
}

/// Parses a real from a CSV cell.
pub(crate) fn real(path: &Path, line: u64, column: &str, cell: &str) -> CliResult<f64> {
    cell.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| {
            CliError::parse(
                path,
                line,
                format!("{column}: '{cell}' is not a finite number"),
            )
        })
}

/// Checks that `headers` starts with exactly `expected`.
pub(crate) fn expect_header(
    path: &Path,
    headers: &csv::StringRecord,
    expected: &[&str],
) -> CliResult<()> {
    let got: Vec<&str> = headers.iter().collect();
    if got.len() < expected.len() || got[..expected.len()] != *expected {
        return Err(CliError::parse(
            path,
            1,
            format!(
                "expected header '{}', found '{}'",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}
