//! Ledgers as a JSON array of `{label, x_m, y_m, z_m, t_ns}`.

use std::path::Path;

use qdc_core::spacetime::{Ledger, LocalityReport, SpacetimeEvent};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventJson {
    pub label: String,
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
    pub t_ns: f64,
}

impl From<&SpacetimeEvent> for EventJson {
    fn from(e: &SpacetimeEvent) -> Self {
        let [x_m, y_m, z_m] = e.position_m;
        Self {
            label: e.label.clone(),
            x_m,
            y_m,
            z_m,
            t_ns: e.time_ns,
        }
    }
}

pub fn ledger_to_json(ledger: &Ledger) -> Vec<EventJson> {
    ledger.events().iter().map(EventJson::from).collect()
}

pub fn read_ledger(path: &Path) -> CliResult<Ledger> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let events: Vec<EventJson> = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })?;
    let events = events
        .into_iter()
        .map(|e| SpacetimeEvent::new(e.label, [e.x_m, e.y_m, e.z_m], e.t_ns))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ledger::new(events)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairJson {
    pub a: String,
    pub b: String,
    pub interval: &'static str,
    pub margin_m: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub pass: bool,
    pub min_margin_m: f64,
    pub pairs: Vec<PairJson>,
    pub assumptions: Vec<String>,
    pub ledger: Vec<EventJson>,
}

pub fn report_to_json(report: &LocalityReport, ledger: &Ledger) -> ReportJson {
    ReportJson {
        pass: report.pass,
        min_margin_m: report.min_margin_m(),
        pairs: report
            .pairs
            .iter()
            .map(|p| PairJson {
                a: p.a.clone(),
                b: p.b.clone(),
                interval: p.class.name(),
                margin_m: p.margin_m,
            })
            .collect(),
        assumptions: report.assumptions.clone(),
        ledger: ledger_to_json(ledger),
    }
}
