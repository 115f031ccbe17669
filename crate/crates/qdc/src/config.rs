//! Sweep configuration: JSON file form and command-line grid syntax.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use qdc_core::grid::{GridSpec, SurfaceGrid};
use qdc_core::optics::NoiseModel;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A grid axis as written in a config file: either a list of values or a
/// `{start, stop, count}` object (endpoint included).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridJson {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl From<GridJson> for GridSpec {
    fn from(g: GridJson) -> Self {
        match g {
            GridJson::Values(v) => GridSpec::values(v),
            GridJson::Range { start, stop, count } => GridSpec::linspace(start, stop, count),
        }
    }
}

/// Config file contents. Every field is optional; flags on the command line
/// take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfigFile {
    pub phi_grid: Option<GridJson>,
    pub alpha_grid: Option<GridJson>,
    pub delta_grid: Option<GridJson>,
    pub noise: Option<[f64; 3]>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
}

impl SweepConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.into(),
            source,
        })
    }
}

/// A fully resolved surface sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub grid: SurfaceGrid,
    pub noise: NoiseModel,
    /// 0 means analytic only.
    pub trials: u64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: SurfaceGrid::default(),
            noise: NoiseModel::IDEAL,
            trials: 0,
            seed: 0,
            output_path: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.grid.validate()?;
        Ok(())
    }
}

/// Parses one radian value. Accepts plain numbers and multiples of pi such
/// as `pi`, `-pi/2`, `3pi/4` or `0.5*pi`. Degree units are rejected.
pub fn parse_radians(text: &str) -> CliResult<f64> {
    let t = text.trim().to_ascii_lowercase();
    if t.contains("deg") || t.contains('°') {
        return Err(CliError::usage(format!(
            "'{text}': angles are given in radians, degrees are not accepted"
        )));
    }
    let bad = || CliError::usage(format!("'{text}' is not a number of radians"));
    let Some(at) = t.find("pi") else {
        return t
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(bad);
    };
    let coef = t[..at].trim_end_matches('*');
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &t[at + 2..];
    let div = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    let v = coef * PI / div;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses a grid axis: `a,b,c` lists values and `start:stop:count` spaces
/// `count` points evenly with both ends included.
pub fn parse_grid(text: &str) -> CliResult<GridSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let spec = match parts.as_slice() {
        [single] => GridSpec::values(
            single
                .split(',')
                .map(parse_radians)
                .collect::<CliResult<Vec<_>>>()?,
        ),
        [start, stop, count] => {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("'{count}' is not a point count")))?;
            GridSpec::linspace(parse_radians(start)?, parse_radians(stop)?, count)
        }
        _ => {
            return Err(CliError::usage(format!(
                "'{text}': expected 'a,b,c' or 'start:stop:count'"
            )))
        }
    };
    if spec.is_empty() {
        return Err(CliError::usage(format!("'{text}' describes an empty grid")));
    }
    Ok(spec)
}

/// Parses `f1,f2,f3`.
pub fn parse_noise(text: &str) -> CliResult<NoiseModel> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("'{s}' is not a number")))
        })
        .collect::<CliResult<_>>()?;
    let f: [f64; 3] = v
        .try_into()
        .map_err(|_| CliError::usage(format!("'{text}': noise needs three values f1,f2,f3")))?;
    Ok(NoiseModel::from_array(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radians_accept_pi_forms() {
        assert_eq!(parse_radians("pi").unwrap(), PI);
        assert_eq!(parse_radians("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_radians("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_radians("0.5*pi").unwrap(), PI / 2.0);
        assert_eq!(parse_radians(" 1.25 ").unwrap(), 1.25);
    }

    #[test]
    fn degrees_are_rejected() {
        for t in ["90deg", "45°", "1.5 degrees", "30d", "abc", "pi/x", "inf"] {
            assert!(parse_radians(t).is_err(), "{t}");
        }
    }

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0,pi").unwrap().points(), vec![0.0, PI]);
        let g = parse_grid("0:1:5").unwrap().points();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn noise_triple() {
        assert_eq!(parse_noise("0.98,0.90,0.61").unwrap(), NoiseModel::MEASURED);
        assert!(parse_noise("1,1").is_err());
        assert!(parse_noise("1,1,2").is_err());
    }

    #[test]
    fn config_file_accepts_both_grid_forms() {
        let cfg: SweepConfigFile = serde_json::from_str(
            r#"{"phi_grid": [0.0, 1.0], "alpha_grid": {"start": 0, "stop": 1, "count": 3},
                "noise": [1, 1, 0.5], "trials": 10}"#,
        )
        .unwrap();
        assert_eq!(cfg.phi_grid, Some(GridJson::Values(vec![0.0, 1.0])));
        let a: GridSpec = cfg.alpha_grid.unwrap().into();
        assert_eq!(a.points(), vec![0.0, 0.5, 1.0]);
        assert!(serde_json::from_str::<SweepConfigFile>(r#"{"bogus": 1}"#).is_err());
    }
}
