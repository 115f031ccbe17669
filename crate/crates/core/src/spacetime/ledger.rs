use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

use super::{classify_interval, IntervalClass, SpacetimeEvent};

/// Events with unique labels plus free-text notes on how they were placed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ledger {
    events: Vec<SpacetimeEvent>,
    notes: Vec<String>,
}

impl Ledger {
    pub fn new(events: Vec<SpacetimeEvent>) -> Result<Self> {
        let mut ledger = Self::default();
        for e in events {
            ledger.push(e)?;
        }
        Ok(ledger)
    }

    pub fn push(&mut self, event: SpacetimeEvent) -> Result<()> {
        if self.get(&event.label).is_some() {
            return Err(Error::DuplicateEvent(event.label));
        }
        self.events.push(event);
        Ok(())
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn events(&self) -> &[SpacetimeEvent] {
        &self.events
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn get(&self, label: &str) -> Option<&SpacetimeEvent> {
        self.events.iter().find(|e| e.label == label)
    }

    pub fn require(&self, label: &str) -> Result<&SpacetimeEvent> {
        self.get(label)
            .ok_or_else(|| Error::UnknownEvent(label.to_string()))
    }
}

/// Event times of the two-lab layout. Defaults: 930 ns of fiber plus 29 ns
/// of short fiber and free space before interference, 1075 ns of fiber to
/// Lab 2, 88 ns from switching to detection and 80 ns of QRNG response.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLabTimeline {
    pub lab2_distance_m: f64,
    pub fiber_delay_ns: f64,
    pub extra_delay_ns: f64,
    pub lab2_fiber_delay_ns: f64,
    pub switch_to_detect_ns: f64,
    pub qrng_response_ns: f64,
    /// Also emit `I_start` and `I_end` bracketing the passage through the
    /// interferometer. For a stationary interferometer the light-cone
    /// margin over the passage is smallest at one of the two ends.
    pub interference_window: bool,
}

impl Default for TwoLabTimeline {
    fn default() -> Self {
        Self {
            lab2_distance_m: 141.0,
            fiber_delay_ns: 930.0,
            extra_delay_ns: 29.0,
            lab2_fiber_delay_ns: 1075.0,
            switch_to_detect_ns: 88.0,
            qrng_response_ns: 80.0,
            interference_window: false,
        }
    }
}

impl TwoLabTimeline {
    pub fn build(&self) -> Result<Ledger> {
        let d = self.lab2_fiber_delay_ns;
        let r = d - self.switch_to_detect_ns;
        let f = r - self.qrng_response_ns;
        let i = self.fiber_delay_ns + self.extra_delay_ns;
        let x2 = self.lab2_distance_m;

        let mut ledger = Ledger::new(alloc::vec![
            SpacetimeEvent::on_axis("G", 0.0, 0.0)?,
            SpacetimeEvent::on_axis("I", 0.0, i)?,
            SpacetimeEvent::on_axis("F", x2, f)?,
            SpacetimeEvent::on_axis("R", x2, r)?,
            SpacetimeEvent::on_axis("D", x2, d)?,
        ])?;
        if self.interference_window {
            ledger.push(SpacetimeEvent::on_axis(
                "I_start",
                0.0,
                self.fiber_delay_ns,
            )?)?;
            ledger.push(SpacetimeEvent::on_axis("I_end", 0.0, i)?)?;
        }
        ledger.note(alloc::format!(
            "F is placed from D backwards: D - {} ns - {} ns",
            self.switch_to_detect_ns,
            self.qrng_response_ns
        ));
        ledger.note(alloc::format!(
            "labs on one axis, {} m apart; I is a single instant at the end of the delay",
            x2
        ));
        Ok(ledger)
    }
}

/// The default two-lab ledger.
pub fn build_default_timeline() -> Ledger {
    TwoLabTimeline::default().build().expect("valid defaults")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub a: String,
    pub b: String,
    pub class: IntervalClass,
    pub margin_m: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalityReport {
    pub pass: bool,
    pub pairs: Vec<PairReport>,
    pub assumptions: Vec<String>,
}

impl LocalityReport {
    pub fn min_margin_m(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.margin_m)
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for LocalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:<8} {:<11} {:>12}  verdict",
            "a", "b", "interval", "margin_m"
        )?;
        for p in &self.pairs {
            let verdict = if p.class == IntervalClass::SpaceLike {
                "ok"
            } else {
                "VIOLATION"
            };
            writeln!(
                f,
                "{:<8} {:<8} {:<11} {:>12.3}  {}",
                p.a, p.b, p.class, p.margin_m, verdict
            )?;
        }
        for a in &self.assumptions {
            writeln!(f, "note: {a}")?;
        }
        write!(f, "locality: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Checks every pair across the two groups for space-like separation.
pub fn check_locality(
    ledger: &Ledger,
    group_a: &[&str],
    group_b: &[&str],
) -> Result<LocalityReport> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::InvalidArgument(
            "event groups must be non-empty".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(group_a.len() * group_b.len());
    for a in group_a {
        let ea = ledger.require(a)?;
        for b in group_b {
            let eb = ledger.require(b)?;
            pairs.push(PairReport {
                a: ea.label.clone(),
                b: eb.label.clone(),
                class: classify_interval(ea, eb),
                margin_m: ea.margin_m(eb),
            });
        }
    }
    Ok(LocalityReport {
        pass: pairs.iter().all(|p| p.class == IntervalClass::SpaceLike),
        pairs,
        assumptions: ledger.notes().to_vec(),
    })
}
