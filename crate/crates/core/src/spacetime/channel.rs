use crate::{Error, Result};

/// Speed of light in m/ns.
pub const SPEED_OF_LIGHT_M_PER_NS: f64 = 0.299_792_458;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Fiber,
    FreeSpace,
    Coax,
}

impl ChannelKind {
    /// Fiber 1.5, free space 1.0, coax 1.5.
    pub fn default_group_index(self) -> f64 {
        match self {
            Self::Fiber | Self::Coax => 1.5,
            Self::FreeSpace => 1.0,
        }
    }
}

/// A signal path of given length and group index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub length_m: f64,
    pub group_index: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, length_m: f64) -> Self {
        Self {
            kind,
            length_m,
            group_index: kind.default_group_index(),
        }
    }

    pub fn with_group_index(self, group_index: f64) -> Self {
        Self {
            group_index,
            ..self
        }
    }

    pub fn fiber(length_m: f64) -> Self {
        Self::new(ChannelKind::Fiber, length_m)
    }
}

/// Propagation delay in ns.
pub fn channel_delay(spec: &ChannelSpec) -> Result<f64> {
    if !(spec.group_index >= 1.0) {
        return Err(Error::UnphysicalMedium(spec.group_index));
    }
    if !(spec.length_m >= 0.0) || !spec.length_m.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "channel length {} m",
            spec.length_m
        )));
    }
    Ok(spec.length_m * spec.group_index / SPEED_OF_LIGHT_M_PER_NS)
}
