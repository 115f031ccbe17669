//! Parameter grids for surface scans.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::optics::ExperimentSetting;
use crate::{Error, Result};

/// One axis of a scan: explicit values or an evenly spaced range.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    Values(Vec<f64>),
    Linspace {
        start: f64,
        stop: f64,
        count: usize,
        /// Whether `stop` itself is a sample.
        endpoint: bool,
    },
}

impl GridSpec {
    pub fn values(values: Vec<f64>) -> Self {
        Self::Values(values)
    }

    pub fn linspace(start: f64, stop: f64, count: usize) -> Self {
        Self::Linspace {
            start,
            stop,
            count,
            endpoint: true,
        }
    }

    /// Twelve φ values k·π/6 on [0, 2π).
    pub fn default_phi() -> Self {
        Self::Linspace {
            start: 0.0,
            stop: TAU,
            count: 12,
            endpoint: false,
        }
    }

    /// Nine α values on [0, π/2].
    pub fn default_alpha() -> Self {
        Self::linspace(0.0, FRAC_PI_2, 9)
    }

    /// Nine δ values on [−0.05π, −1.95π].
    pub fn default_delta() -> Self {
        Self::linspace(-0.05 * PI, -1.95 * PI, 9)
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Values(v) => v.len(),
            Self::Linspace { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Self::Values(v) => v.clone(),
            Self::Linspace {
                start,
                stop,
                count,
                endpoint,
            } => {
                let n = *count;
                let intervals = if *endpoint { n.saturating_sub(1) } else { n };
                let step = if intervals == 0 {
                    0.0
                } else {
                    (stop - start) / intervals as f64
                };
                (0..n).map(|k| start + k as f64 * step).collect()
            }
        }
    }

    pub fn validate(&self, axis: &str) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{axis} grid is empty"
            )));
        }
        if self.points().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "{axis} grid has non-finite values"
            )));
        }
        Ok(())
    }
}

/// Indices of a point within a [`SurfaceGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridIndex {
    pub phi: usize,
    pub alpha: usize,
    pub delta: usize,
}

impl GridIndex {
    pub fn as_array(&self) -> [u64; 3] {
        [self.phi as u64, self.alpha as u64, self.delta as u64]
    }
}

/// Cartesian product of φ, α and δ axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGrid {
    pub phi: GridSpec,
    pub alpha: GridSpec,
    pub delta: GridSpec,
}

impl SurfaceGrid {
    /// 12 φ × 9 α at δ = 0.
    pub fn alpha_sweep() -> Self {
        Self {
            phi: GridSpec::default_phi(),
            alpha: GridSpec::default_alpha(),
            delta: GridSpec::values(alloc::vec![0.0]),
        }
    }

    /// 12 φ × 9 δ at α = π/4.
    pub fn delta_sweep() -> Self {
        Self {
            phi: GridSpec::default_phi(),
            alpha: GridSpec::values(alloc::vec![FRAC_PI_4]),
            delta: GridSpec::default_delta(),
        }
    }

    /// 12 φ × 9 α × 9 δ.
    pub fn full() -> Self {
        Self {
            phi: GridSpec::default_phi(),
            alpha: GridSpec::default_alpha(),
            delta: GridSpec::default_delta(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.phi.validate("phi")?;
        self.alpha.validate("alpha")?;
        self.delta.validate("delta")
    }

    pub fn len(&self) -> usize {
        self.phi.len() * self.alpha.len() * self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every point in φ-major, then α, then δ order.
    pub fn points(&self) -> Vec<(GridIndex, ExperimentSetting)> {
        let (phis, alphas, deltas) = (self.phi.points(), self.alpha.points(), self.delta.points());
        let mut out = Vec::with_capacity(self.len());
        for (i, &phi) in phis.iter().enumerate() {
            for (j, &alpha) in alphas.iter().enumerate() {
                for (k, &delta) in deltas.iter().enumerate() {
                    out.push((
                        GridIndex {
                            phi: i,
                            alpha: j,
                            delta: k,
                        },
                        ExperimentSetting::new(phi, alpha, delta),
                    ));
                }
            }
        }
        out
    }
}

impl Default for SurfaceGrid {
    fn default() -> Self {
        Self::alpha_sweep()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_phi_contains_pi_and_excludes_two_pi() {
        let p = GridSpec::default_phi().points();
        assert_eq!(p.len(), 12);
        assert_eq!(p[0], 0.0);
        assert!((p[6] - PI).abs() < 1e-15);
        assert!(p[11] < TAU);
    }

    #[test]
    fn default_delta_endpoints() {
        let d = GridSpec::default_delta().points();
        assert_eq!(d.len(), 9);
        assert!((d[0] + 0.05 * PI).abs() < 1e-15);
        assert!((d[8] + 1.95 * PI).abs() < 1e-12);
    }

    #[test]
    fn single_point_linspace() {
        assert_eq!(GridSpec::linspace(0.3, 1.0, 1).points(), alloc::vec![0.3]);
    }

    #[test]
    fn grid_size_and_order() {
        let g = SurfaceGrid::full();
        let pts = g.points();
        assert_eq!(pts.len(), 12 * 9 * 9);
        assert_eq!(
            pts[1].0,
            GridIndex {
                phi: 0,
                alpha: 0,
                delta: 1
            }
        );
        assert!(SurfaceGrid {
            phi: GridSpec::values(alloc::vec![]),
            ..g
        }
        .validate()
        .is_err());
    }
}
