//! Dip scans: `position_mm,counts` with an optional `phi` column.

use std::io::Write;
use std::path::Path;

use super::{csv_err, csv_writer, fmt9, open_csv, real};
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomPoint {
    pub phi: Option<f64>,
    pub position_mm: f64,
    pub counts: f64,
}

pub fn read_hom_points(path: &Path) -> CliResult<Vec<HomPoint>> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(xi), Some(yi)) = (col("position_mm"), col("counts")) else {
        return Err(CliError::parse(
            path,
            1,
            "header needs 'position_mm' and 'counts' columns",
        ));
    };
    let phi_i = col("phi");

    let mut points = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let get = |i: usize, name: &str| {
            row.get(i)
                .ok_or_else(|| CliError::parse(path, line, format!("missing {name}")))
                .and_then(|c| real(path, line, name, c))
        };
        let counts = get(yi, "counts")?;
        if counts < 0.0 {
            return Err(CliError::parse(path, line, "counts must be non-negative"));
        }
        points.push(HomPoint {
            phi: phi_i.map(|i| get(i, "phi")).transpose()?,
            position_mm: get(xi, "position_mm")?,
            counts,
        });
    }
    Ok(points)
}

/// Model curve rows `phi,position_mm,counts_model` (phi empty for a
/// single dip).
pub fn write_curve<W: Write>(w: W, rows: &[(Option<f64>, f64, f64)]) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["phi", "position_mm", "counts_model"])?;
    for &(phi, x, y) in rows {
        out.write_record([phi.map(fmt9).unwrap_or_default(), fmt9(x), fmt9(y)])?;
    }
    out.flush()?;
    Ok(())
}
