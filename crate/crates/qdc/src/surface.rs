//! Grid evaluation for the `surface` command.

use qdc_core::counts::{
    estimate_classical, estimate_quantum, point_seed, simulate_counts, CountRecord,
};
use qdc_core::optics::{closed_form_table, QrngBit};
use qdc_core::qcore::Polarization;
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};
use crate::io::surface_csv::SurfaceRow;

/// Rows of a sweep, plus sampled counts when `trials > 0`.
#[derive(Clone, Debug)]
pub struct Surface {
    pub rows: Vec<SurfaceRow>,
    pub counts: Vec<CountRecord>,
}

impl Surface {
    /// Rows whose analytic P_Q is undefined.
    pub fn degenerate_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.analytic[2].is_none() || r.analytic[3].is_none())
            .count()
    }
}

/// Evaluates every grid point on a pool of `jobs` workers (0 picks the
/// default). Each point draws from its own seed, so results do not depend
/// on the worker count.
pub fn compute_surface(config: &SweepConfig, jobs: usize) -> CliResult<Surface> {
    config.validate()?;
    let points = config.grid.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;

    let evaluated: Vec<CliResult<(SurfaceRow, Option<CountRecord>)>> = pool.install(|| {
        points
            .par_iter()
            .map(|(index, setting)| {
                let table = closed_form_table(setting, &config.noise);
                let analytic = [
                    table.classical(Polarization::H).ok(),
                    table.classical(Polarization::V).ok(),
                    table.quantum(Polarization::H).ok(),
                    table.quantum(Polarization::V).ok(),
                ];
                if config.trials == 0 {
                    return Ok((
                        SurfaceRow {
                            setting: *setting,
                            analytic,
                            sampled: None,
                        },
                        None,
                    ));
                }
                let seed = point_seed(config.seed, &index.as_array());
                let rec = simulate_counts(setting, &config.noise, config.trials, seed)?;
                let bins = rec.to_bins();
                let (ch, cv) = estimate_classical(&bins, QrngBit::Zero)
                    .map(|(h, v)| (Some(h), Some(v)))
                    .unwrap_or((None, None));
                let (qh, qv) = estimate_quantum(&bins, QrngBit::Zero)
                    .map(|(h, v)| (Some(h), Some(v)))
                    .unwrap_or((None, None));
                Ok((
                    SurfaceRow {
                        setting: *setting,
                        analytic,
                        sampled: Some([ch, cv, qh, qv]),
                    },
                    Some(rec),
                ))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(evaluated.len());
    let mut counts = Vec::new();
    for item in evaluated {
        let (row, rec) = item?;
        rows.push(row);
        counts.extend(rec);
    }
    Ok(Surface { rows, counts })
}
