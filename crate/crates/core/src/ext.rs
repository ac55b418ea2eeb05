//! Natural numbers extended with a top element.
//!
//! Every invariant this crate reasons about takes values in `ℕ ∪ {∞}`:
//! a count of cone attachments, or `∞` when no finite decomposition exists.
//! Arithmetic saturates at `∞`, and the two "inverse" operations
//! ([`ExtNat::monus`], [`ExtNat::ceil_div`]) round towards the value that is
//! safe to use as a *lower* bound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A natural number or `∞`.
///
/// The derived order puts every `Fin(n)` below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub use ExtNat::{Fin, Inf};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);
    pub const ONE: ExtNat = Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            Inf => None,
        }
    }

    /// Truncated subtraction `max(self - rhs, 0)`.
    ///
    /// `∞ ∸ n = ∞` for finite `n`, while anything minus `∞` is `0`:
    /// nothing is known about the difference once the subtrahend is unbounded.
    pub fn monus(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (_, Inf) => Fin(0),
            (Inf, Fin(_)) => Inf,
            (Fin(a), Fin(b)) => Fin(a.saturating_sub(b)),
        }
    }

    /// Ceiling division: the least `q` with `q · rhs ≥ self`.
    ///
    /// `∞ / n = ∞` for finite `n`; dividing by `∞` gives `0` for `0` and `1`
    /// otherwise.
    ///
    /// # Panics
    ///
    /// If `rhs` is zero.
    pub fn ceil_div(self, rhs: ExtNat) -> ExtNat {
        assert!(rhs != Fin(0), "ExtNat::ceil_div by zero");
        match (self, rhs) {
            (Fin(0), _) => Fin(0),
            (_, Inf) => Fin(1),
            (Inf, Fin(_)) => Inf,
            (Fin(a), Fin(b)) => Fin(a.div_ceil(b)),
        }
    }

    pub fn succ(self) -> ExtNat {
        self + Fin(1)
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        Fin(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(a), Fin(b)) => a.checked_add(b).map_or(Inf, Fin),
            _ => Inf,
        }
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    /// `0 · ∞ = 0`, so multiplication is total.
    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (Fin(a), Fin(b)) => a.checked_mul(b).map_or(Inf, Fin),
            _ => Inf,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(Fin(0), Add::add)
    }
}

impl PartialEq<u64> for ExtNat {
    fn eq(&self, other: &u64) -> bool {
        *self == Fin(*other)
    }
}

impl PartialOrd<u64> for ExtNat {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&Fin(*other)))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected natural number or 'inf', found '{0}'")]
pub struct ParseExtNatError(pub String);

impl FromStr for ExtNat {
    type Err = ParseExtNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "∞" => Ok(Inf),
            _ if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => {
                s.parse().map(Fin).map_err(|_| ParseExtNatError(s.to_owned()))
            }
            _ => Err(ParseExtNatError(s.to_owned())),
        }
    }
}

// JSON has no infinity; it is spelled as the string "inf".
impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(n) => serializer.serialize_u64(*n),
            Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(n) => Ok(Fin(n)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
