//! Closed intervals over [`ExtNat`], the knowledge held about one invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ext::{ExtNat, Fin, Inf};

/// `[lo, hi]` with `lo ≤ hi`.
///
/// An interval records what is *known* about a value. `[0, ∞]` means
/// nothing is known; it does not mean the value is `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: ExtNat,
    hi: ExtNat,
}

/// The two intervals whose meet is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("empty meet of {left} and {right}")]
pub struct EmptyMeet {
    pub left: Interval,
    pub right: Interval,
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval { lo: Fin(0), hi: Inf };

    pub fn new(lo: ExtNat, hi: ExtNat) -> Option<Interval> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn exact(value: ExtNat) -> Interval {
        Interval { lo: value, hi: value }
    }

    pub fn at_most(hi: ExtNat) -> Interval {
        Interval { lo: Fin(0), hi }
    }

    pub fn at_least(lo: ExtNat) -> Interval {
        Interval { lo, hi: Inf }
    }

    pub fn lo(self) -> ExtNat {
        self.lo
    }

    pub fn hi(self) -> ExtNat {
        self.hi
    }

    pub fn is_unbounded(self) -> bool {
        self == Self::UNBOUNDED
    }

    pub fn contains(self, value: ExtNat) -> bool {
        self.lo <= value && value <= self.hi
    }

    /// Lattice meet: the intersection of the two intervals.
    pub fn meet(self, other: Interval) -> Result<Interval, EmptyMeet> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)).ok_or(EmptyMeet {
            left: self,
            right: other,
        })
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::UNBOUNDED
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: ExtNat,
    hi: ExtNat,
}

impl TryFrom<RawInterval> for Interval {
    type Error = String;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi).ok_or_else(|| format!("lo {} exceeds hi {}", raw.lo, raw.hi))
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval { lo: i.lo, hi: i.hi }
    }
}
