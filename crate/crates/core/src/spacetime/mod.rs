//! Light-cone bookkeeping for the interference, choice and detection events.

mod channel;
mod event;
mod ledger;

pub use channel::{channel_delay, ChannelKind, ChannelSpec, SPEED_OF_LIGHT_M_PER_NS};
pub use event::{classify_interval, IntervalClass, SpacetimeEvent, LIGHT_CONE_EPSILON_M};
pub use ledger::{
    build_default_timeline, check_locality, Ledger, LocalityReport, PairReport, TwoLabTimeline,
};
