use alloc::string::String;
use core::fmt;

use libm::sqrt;

use crate::{Error, Result};

use super::SPEED_OF_LIGHT_M_PER_NS;

/// Slack on the light cone, in meters.
pub const LIGHT_CONE_EPSILON_M: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeEvent {
    pub label: String,
    pub position_m: [f64; 3],
    pub time_ns: f64,
}

impl SpacetimeEvent {
    pub fn new(label: impl Into<String>, position_m: [f64; 3], time_ns: f64) -> Result<Self> {
        let event = Self {
            label: label.into(),
            position_m,
            time_ns,
        };
        if position_m.iter().chain([&time_ns]).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "event {} has non-finite coordinates",
                event.label
            )));
        }
        Ok(event)
    }

    /// An event on the x axis.
    pub fn on_axis(label: impl Into<String>, x_m: f64, time_ns: f64) -> Result<Self> {
        Self::new(label, [x_m, 0.0, 0.0], time_ns)
    }

    pub fn distance_m(&self, other: &SpacetimeEvent) -> f64 {
        let d: f64 = (0..3)
            .map(|i| {
                let x = self.position_m[i] - other.position_m[i];
                x * x
            })
            .sum();
        sqrt(d)
    }

    /// |Δx| − c|Δt|: positive when no light signal connects the events.
    pub fn margin_m(&self, other: &SpacetimeEvent) -> f64 {
        self.distance_m(other) - SPEED_OF_LIGHT_M_PER_NS * (self.time_ns - other.time_ns).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalClass {
    SpaceLike,
    TimeLike,
    LightLike,
}

impl IntervalClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::SpaceLike => "space_like",
            Self::TimeLike => "time_like",
            Self::LightLike => "light_like",
        }
    }
}

impl fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_interval(a: &SpacetimeEvent, b: &SpacetimeEvent) -> IntervalClass {
    let margin = a.margin_m(b);
    if margin > LIGHT_CONE_EPSILON_M {
        IntervalClass::SpaceLike
    } else if margin < -LIGHT_CONE_EPSILON_M {
        IntervalClass::TimeLike
    } else {
        IntervalClass::LightLike
    }
}
