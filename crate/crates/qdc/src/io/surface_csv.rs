//! `phi,alpha,delta,p_c_h,p_c_v,p_q_h,p_q_v` plus `_hat`/`_err` columns
//! for sampled runs. Undefined values are written as empty cells.

use std::io::Write;

use qdc_core::counts::Estimate;
use qdc_core::optics::ExperimentSetting;

use super::{csv_writer, fmt9};

pub const QUANTITIES: [&str; 4] = ["p_c_h", "p_c_v", "p_q_h", "p_q_v"];

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRow {
    pub setting: ExperimentSetting,
    /// Analytic P_C(H), P_C(V), P_Q(H), P_Q(V).
    pub analytic: [Option<f64>; 4],
    /// Count-based estimates in the same order, when sampling.
    pub sampled: Option<[Option<Estimate>; 4]>,
}

pub fn surface_header(sampled: bool) -> Vec<String> {
    let mut h: Vec<String> = ["phi", "alpha", "delta"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(QUANTITIES.iter().map(|s| s.to_string()));
    if sampled {
        for q in QUANTITIES {
            h.push(format!("{q}_hat"));
            h.push(format!("{q}_err"));
        }
    }
    h
}

fn cell(x: Option<f64>) -> String {
    x.map(fmt9).unwrap_or_default()
}

pub fn write_surface<W: Write>(w: W, rows: &[SurfaceRow], sampled: bool) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(surface_header(sampled))?;
    for row in rows {
        let s = &row.setting;
        let mut rec = vec![fmt9(s.phi), fmt9(s.alpha), fmt9(s.delta)];
        rec.extend(row.analytic.iter().map(|&x| cell(x)));
        if sampled {
            let est = row.sampled.unwrap_or([None; 4]);
            for e in est {
                rec.push(cell(e.map(|e| e.value)));
                rec.push(cell(e.map(|e| e.error)));
            }
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
