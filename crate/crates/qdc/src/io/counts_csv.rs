//! `phi,alpha,delta,s,c,a,bit,count`, one row per non-empty bin.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use qdc_core::counts::{BinKey, CountRecord};
use qdc_core::optics::ExperimentSetting;

use super::{csv_err, csv_writer, expect_header, fmt9, open_csv, real};
use crate::error::{CliError, CliResult};

pub const COUNTS_HEADER: [&str; 8] = ["phi", "alpha", "delta", "s", "c", "a", "bit", "count"];

/// Writes all 16 bins of every record, zeros included.
pub fn write_counts<W: Write>(w: W, records: &[CountRecord]) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(COUNTS_HEADER)?;
    for rec in records {
        let s = rec.setting();
        for key in BinKey::all() {
            let [sc, cc, ac, bc] = key.codes();
            out.write_record([
                fmt9(s.phi).as_str(),
                &fmt9(s.alpha),
                &fmt9(s.delta),
                sc,
                cc,
                ac,
                bc,
                &rec.get(key).to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads counts grouped by setting in order of first appearance. Bins
/// missing from the file count as zero; the trial total of each record is
/// the sum of its bins.
pub fn read_counts(path: &Path) -> CliResult<Vec<CountRecord>> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    expect_header(path, &headers, &COUNTS_HEADER)?;

    let mut order: Vec<(ExperimentSetting, [Option<u64>; 16])> = Vec::new();
    let mut index: HashMap<[u64; 3], usize> = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != COUNTS_HEADER.len() {
            return Err(CliError::parse(
                path,
                line,
                format!("expected 8 fields, found {}", row.len()),
            ));
        }
        let phi = real(path, line, "phi", &row[0])?;
        let alpha = real(path, line, "alpha", &row[1])?;
        let delta = real(path, line, "delta", &row[2])?;
        let key = BinKey::from_codes(&row[3], &row[4], &row[5], &row[6]).ok_or_else(|| {
            CliError::parse(
                path,
                line,
                format!(
                    "bad outcome codes '{},{},{},{}'",
                    &row[3], &row[4], &row[5], &row[6]
                ),
            )
        })?;
        let count: u64 = row[7].parse().map_err(|_| {
            CliError::parse(
                path,
                line,
                format!("count: '{}' is not a non-negative integer", &row[7]),
            )
        })?;

        let id = [phi.to_bits(), alpha.to_bits(), delta.to_bits()];
        let slot = *index.entry(id).or_insert_with(|| {
            order.push((ExperimentSetting::new(phi, alpha, delta), [None; 16]));
            order.len() - 1
        });
        let bin = &mut order[slot].1[key.index()];
        if bin.is_some() {
            return Err(CliError::parse(path, line, format!("duplicate bin {key}")));
        }
        *bin = Some(count);
    }
    if order.is_empty() {
        return Err(CliError::parse(path, 1, "no count rows"));
    }
    order
        .into_iter()
        .map(|(setting, bins)| {
            let counts = bins.map(|b| b.unwrap_or(0));
            let total = counts.iter().sum();
            Ok(CountRecord::new(setting, counts, total)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdc_core::counts::simulate_counts;
    use qdc_core::optics::NoiseModel;

    #[test]
    fn round_trip() {
        let recs: Vec<CountRecord> = [0.3, 1.2]
            .iter()
            .map(|&phi| {
                let st = ExperimentSetting::new(phi, 0.7, -0.4);
                simulate_counts(&st, &NoiseModel::MEASURED, 500, 3).unwrap()
            })
            .collect();
        let file = tempfile::NamedTempFile::new().unwrap();
        write_counts(file.reopen().unwrap(), &recs).unwrap();
        let back = read_counts(file.path()).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.counts(), b.counts());
            assert!((a.setting().phi - b.setting().phi).abs() < 1e-9);
        }
    }

    #[test]
    fn duplicate_bin_is_reported_with_line() {
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(
            file.path(),
            "phi,alpha,delta,s,c,a,bit,count\n0,0,0,H,P,A,0,1\n0,0,0,H,P,A,0,2\n",
        )
        .unwrap();
        match read_counts(file.path()) {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other:?}"),
        }
    }
}
