//! Identifiers for spaces, maps, facts and the invariants attached to maps.
//!
//! Space invariants are not separate keys: `cl(X)` is the cone length of the
//! canonical map `* → X`, `cat(X)` its category, and `kl(X)`, `kit(X)` the same
//! pair for `X → *`. The elaborated scene owns the canonical maps and the
//! naming that turns a key back into `cl(X)` and friends.

use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! index_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(u32::try_from(i).expect("index overflow"))
            }
        }
    };
}

index_type!(
    /// Index of a space in an elaborated scene. `SpaceId(0)` is the point.
    SpaceId
);
index_type!(
    /// Index of a map in an elaborated scene.
    MapId
);
index_type!(
    /// Index of a fact in an elaborated scene.
    FactId
);

impl SpaceId {
    pub const POINT: SpaceId = SpaceId(0);
}

/// Which of the two invariants of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// `L(f)`, the cone length of a map.
    ConeLength,
    /// `Lcat(f)`, the category of a map.
    Category,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::ConeLength, Kind::Category];

    pub fn map_prefix(self) -> &'static str {
        match self {
            Kind::ConeLength => "L",
            Kind::Category => "Lcat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lo,
    Hi,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lo => "lo",
            Side::Hi => "hi",
        })
    }
}

/// One invariant of one map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantKey {
    pub map: MapId,
    pub kind: Kind,
}

impl InvariantKey {
    pub fn new(map: MapId, kind: Kind) -> Self {
        InvariantKey { map, kind }
    }

    pub fn cone_length(map: MapId) -> Self {
        Self::new(map, Kind::ConeLength)
    }

    pub fn category(map: MapId) -> Self {
        Self::new(map, Kind::Category)
    }

    /// Dense index used by the bound store.
    pub fn slot(self) -> usize {
        self.map.index() * 2
            + match self.kind {
                Kind::ConeLength => 0,
                Kind::Category => 1,
            }
    }

    pub fn from_slot(slot: usize) -> Self {
        let kind = if slot.is_multiple_of(2) { Kind::ConeLength } else { Kind::Category };
        InvariantKey::new(MapId::from(slot / 2), kind)
    }
}
