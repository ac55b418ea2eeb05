//! Scene files: the declared spaces, maps and facts a run starts from.
//!
//! A scene is parsed from a small line-oriented language, rendered back to
//! canonical text, and elaborated into an [`Elaborated`] scene with dense
//! ids and the facts that follow from the declarations alone.

mod elaborate;
mod fact;
mod lexer;
mod parser;
mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::ext::ExtNat;
use crate::key::Kind;

pub use elaborate::{
    elaborate, ElabError, Elaborated, FactEntry, FactOrigin, MapInfo, MapRole, SpaceInfo,
};
pub use fact::{validate, Arg, ArgKind, Fact, FactHead, ShapeError, ShapeLookup};
pub use parser::{parse_inv, parse_scene};
pub use render::render_scene;

/// Spelling of the point space.
pub const POINT: &str = "*";

/// Closure properties of the scene's collection.
///
/// `all` stands for the collection of all spaces and implies every other
/// flag; the accessors report the effective closure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Profile {
    pub all: bool,
    pub wedges: bool,
    pub suspensions: bool,
    pub joins: bool,
    pub smash_ideal: bool,
}

/// One closure property, as named by rule guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    AllSpaces,
    Wedges,
    Suspensions,
    Joins,
    SmashIdeal,
}

impl Closure {
    pub const ALL: [Closure; 5] = [
        Closure::AllSpaces,
        Closure::Wedges,
        Closure::Suspensions,
        Closure::Joins,
        Closure::SmashIdeal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Closure::AllSpaces => "all",
            Closure::Wedges => "wedges",
            Closure::Suspensions => "suspensions",
            Closure::Joins => "joins",
            Closure::SmashIdeal => "smash_ideal",
        }
    }
}

impl Profile {
    pub const ALL_SPACES: Profile = Profile {
        all: true,
        wedges: false,
        suspensions: false,
        joins: false,
        smash_ideal: false,
    };

    /// The profile whose declared flags are the bits of `bits`, in
    /// [`Closure::ALL`] order. Used to enumerate all 32 profiles.
    pub fn from_bits(bits: u8) -> Profile {
        Profile {
            all: bits & 1 != 0,
            wedges: bits & 2 != 0,
            suspensions: bits & 4 != 0,
            joins: bits & 8 != 0,
            smash_ideal: bits & 16 != 0,
        }
    }

    pub fn has(self, closure: Closure) -> bool {
        self.all
            || match closure {
                Closure::AllSpaces => false,
                Closure::Wedges => self.wedges,
                Closure::Suspensions => self.suspensions,
                Closure::Joins => self.joins,
                Closure::SmashIdeal => self.smash_ideal,
            }
    }

    /// Declared flags, in canonical order.
    pub fn declared(self) -> Vec<Closure> {
        if self.all {
            return vec![Closure::AllSpaces];
        }
        Closure::ALL[1..]
            .iter()
            .copied()
            .filter(|&c| self.has(c))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collection {
    pub name: String,
    pub profile: Profile,
}

/// A map as written in a scene: a declared name or a canonical map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MapRef {
    Named(String),
    /// `init(X)`, the map `* → X`.
    Init(String),
    /// `term(X)`, the map `X → *`.
    Term(String),
}

impl fmt::Display for MapRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapRef::Named(n) => f.write_str(n),
            MapRef::Init(x) => write!(f, "init({x})"),
            MapRef::Term(x) => write!(f, "term({x})"),
        }
    }
}

/// An invariant as written in a scene.
///
/// `cl(X)` and `L(init(X))` parse to the same value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvRef {
    pub kind: Kind,
    pub map: MapRef,
}

impl fmt::Display for InvRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alias = match (&self.map, self.kind) {
            (MapRef::Init(x), Kind::ConeLength) => Some(("cl", x)),
            (MapRef::Init(x), Kind::Category) => Some(("cat", x)),
            (MapRef::Term(x), Kind::ConeLength) => Some(("kl", x)),
            (MapRef::Term(x), Kind::Category) => Some(("kit", x)),
            (MapRef::Named(_), _) => None,
        };
        match alias {
            Some((name, x)) => write!(f, "{name}({x})"),
            None => write!(f, "{}({})", self.kind.map_prefix(), self.map),
        }
    }
}

/// A scene fact with parse-level names.
pub type SceneFact = Fact<String, MapRef, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactStmt {
    /// Name other facts use to refer to this one.
    pub label: Option<String>,
    pub fact: SceneFact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rel {
    AtMost,
    AtLeast,
    Equal,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::AtMost => "<=",
            Rel::AtLeast => ">=",
            Rel::Equal => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundStmt {
    pub inv: InvRef,
    pub rel: Rel,
    pub value: ExtNat,
}

impl BoundStmt {
    /// The `(lo, hi)` pair this statement asserts.
    pub fn as_bounds(&self) -> (Option<ExtNat>, Option<ExtNat>) {
        match self.rel {
            Rel::AtMost => (None, Some(self.value)),
            Rel::AtLeast => (Some(self.value), None),
            Rel::Equal => (Some(self.value), Some(self.value)),
        }
    }
}

/// A claimed cone decomposition of the target's map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertStmt {
    pub target: InvRef,
    /// The cone spaces `A₀ … A_{n−1}`.
    pub cones: Vec<String>,
    /// Intermediate spaces, when given instead of generated.
    pub through: Option<Vec<String>>,
}

/// A parsed scene. All references resolve and all facts are well shaped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scene {
    pub collection: Collection,
    /// Declared spaces, excluding the implicit point.
    pub spaces: BTreeSet<String>,
    /// Declared maps with their domain and codomain.
    pub maps: BTreeMap<String, (String, String)>,
    pub facts: Vec<FactStmt>,
    pub bounds: Vec<BoundStmt>,
    pub certs: Vec<CertStmt>,
    pub queries: Vec<InvRef>,
}

impl Scene {
    pub fn new(collection: Collection) -> Scene {
        Scene {
            collection,
            spaces: BTreeSet::new(),
            maps: BTreeMap::new(),
            facts: Vec::new(),
            bounds: Vec::new(),
            certs: Vec::new(),
            queries: Vec::new(),
        }
    }

    pub fn has_space(&self, name: &str) -> bool {
        name == POINT || self.spaces.contains(name)
    }

    /// Endpoints of a map reference, if it resolves.
    pub fn endpoints(&self, map: &MapRef) -> Option<(String, String)> {
        match map {
            MapRef::Named(n) => self.maps.get(n).cloned(),
            MapRef::Init(x) => self.has_space(x).then(|| (POINT.to_owned(), x.clone())),
            MapRef::Term(x) => self.has_space(x).then(|| (x.clone(), POINT.to_owned())),
        }
    }
}

/// A positioned parse error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("line {line}: {message} (column {column})")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Every error found in one scene text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseErrors(pub Vec<Diagnostic>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
