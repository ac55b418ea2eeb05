//! The bound store: one interval per invariant key, plus the log of every
//! tightening and why it happened.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ext::{ExtNat, Fin, Inf};
use crate::interval::Interval;
use crate::key::{FactId, InvariantKey, Side};
use crate::rules::RuleId;

/// Position of a [`Justification`] in the store's log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JustId(pub u32);

impl JustId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Where a bound came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Origin {
    /// The scene's `bound` statement with this index.
    Asserted { bound: usize },
    /// Output of a rule instance.
    Rule {
        rule: RuleId,
        instance: usize,
        constraint: usize,
    },
}

impl Origin {
    pub fn rule(&self) -> Option<RuleId> {
        match self {
            Origin::Rule { rule, .. } => Some(*rule),
            Origin::Asserted { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Origin::Rule { rule, .. } => rule.as_str(),
            Origin::Asserted { .. } => "asserted",
        }
    }
}

/// A bound that was read when a rule fired.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Premise {
    pub key: InvariantKey,
    pub side: Side,
    pub value: ExtNat,
    /// The justification that had established `value`, or `None` for a default.
    pub source: Option<JustId>,
}

/// One recorded tightening: `side(key)` moved to `value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Justification {
    pub key: InvariantKey,
    pub side: Side,
    pub value: ExtNat,
    pub origin: Origin,
    pub facts: Vec<FactId>,
    pub premises: Vec<Premise>,
}

/// Read access to current bounds, as rules see them.
pub trait BoundView {
    fn lo(&self, key: InvariantKey) -> ExtNat;
    fn hi(&self, key: InvariantKey) -> ExtNat;

    fn get(&self, key: InvariantKey, side: Side) -> ExtNat {
        match side {
            Side::Lo => self.lo(key),
            Side::Hi => self.hi(key),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Slot {
    lo: ExtNat,
    hi: ExtNat,
    lo_source: Option<JustId>,
    hi_source: Option<JustId>,
    history: Vec<JustId>,
}

impl Default for Slot {
    fn default() -> Self {
        Slot {
            lo: Fin(0),
            hi: Inf,
            lo_source: None,
            hi_source: None,
            history: Vec::new(),
        }
    }
}

/// Result of offering a bound to the store.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tighten {
    /// The store already knew at least as much.
    Unchanged,
    Tightened(JustId),
    /// Recorded, but the key's lower bound now exceeds its upper bound.
    Conflict(JustId),
}

/// Per-key intervals with provenance.
///
/// Bounds only ever move inwards: `lo` rises and `hi` falls. A key whose
/// bounds cross is *poisoned*: it no longer describes any interval and the
/// scene is contradictory. The store keeps such keys (and keeps refining
/// them) so that a saturation run still ends in an order-independent state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundStore {
    slots: Vec<Slot>,
    log: Vec<Justification>,
}

impl BoundStore {
    /// A store with every invariant of `maps` maps at `[0, ∞]`.
    pub fn new(maps: usize) -> Self {
        BoundStore {
            slots: vec![Slot::default(); maps * 2],
            log: Vec::new(),
        }
    }

    /// Rebuild a store by re-applying a justification log in order.
    pub fn replay(maps: usize, log: &[Justification]) -> Self {
        let mut store = BoundStore::new(maps);
        for just in log {
            store.tighten(just.clone());
        }
        store
    }

    pub fn keys(&self) -> impl Iterator<Item = InvariantKey> + '_ {
        (0..self.slots.len()).map(InvariantKey::from_slot)
    }

    pub fn bounds(&self, key: InvariantKey) -> (ExtNat, ExtNat) {
        let slot = &self.slots[key.slot()];
        (slot.lo, slot.hi)
    }

    /// The key's interval, or `None` if the key is poisoned.
    pub fn interval(&self, key: InvariantKey) -> Option<Interval> {
        let (lo, hi) = self.bounds(key);
        Interval::new(lo, hi)
    }

    pub fn is_poisoned(&self, key: InvariantKey) -> bool {
        let (lo, hi) = self.bounds(key);
        lo > hi
    }

    pub fn poisoned(&self) -> impl Iterator<Item = InvariantKey> + '_ {
        self.keys().filter(|&k| self.is_poisoned(k))
    }

    /// The justification that set the current value of `side(key)`.
    pub fn source(&self, key: InvariantKey, side: Side) -> Option<JustId> {
        let slot = &self.slots[key.slot()];
        match side {
            Side::Lo => slot.lo_source,
            Side::Hi => slot.hi_source,
        }
    }

    /// Every tightening of `key`, oldest first.
    pub fn history(&self, key: InvariantKey) -> &[JustId] {
        &self.slots[key.slot()].history
    }

    pub fn log(&self) -> &[Justification] {
        &self.log
    }

    pub fn justification(&self, id: JustId) -> &Justification {
        &self.log[id.index()]
    }

    /// Would `value` tighten `side(key)`?
    pub fn improves(&self, key: InvariantKey, side: Side, value: ExtNat) -> bool {
        let (lo, hi) = self.bounds(key);
        match side {
            Side::Lo => value > lo,
            Side::Hi => value < hi,
        }
    }

    /// Meet `side(key)` with the justification's value, logging it if it
    /// tightens anything.
    pub fn tighten(&mut self, just: Justification) -> Tighten {
        if !self.improves(just.key, just.side, just.value) {
            return Tighten::Unchanged;
        }
        let id = JustId(u32::try_from(self.log.len()).expect("justification log overflow"));
        let slot = &mut self.slots[just.key.slot()];
        match just.side {
            Side::Lo => {
                slot.lo = just.value;
                slot.lo_source = Some(id);
            }
            Side::Hi => {
                slot.hi = just.value;
                slot.hi_source = Some(id);
            }
        }
        slot.history.push(id);
        let poisoned = slot.lo > slot.hi;
        self.log.push(just);
        if poisoned {
            Tighten::Conflict(id)
        } else {
            Tighten::Tightened(id)
        }
    }

    /// Intervals only, for comparing the outcome of two runs.
    pub fn snapshot(&self) -> Vec<(ExtNat, ExtNat)> {
        self.slots.iter().map(|s| (s.lo, s.hi)).collect()
    }
}

impl BoundView for BoundStore {
    fn lo(&self, key: InvariantKey) -> ExtNat {
        self.slots[key.slot()].lo
    }

    fn hi(&self, key: InvariantKey) -> ExtNat {
        self.slots[key.slot()].hi
    }
}

impl fmt::Display for JustId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
