//! The rule catalog: guarded inequality schemas over invariant keys.
//!
//! Each rule has a stable id, a guard naming the closure properties the
//! collection must have, and a statement of what it concludes. Instances
//! are produced by [`instantiate`] and evaluated through [`Constraint`].

mod constraint;
mod instantiate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scene::{Closure, Profile};

pub use constraint::{Constraint, Derived, Read, Term};
pub use instantiate::{instantiate, RuleInstance};

macro_rules! rules {
    ($($variant:ident => $id:literal, [$($guard:ident),*], $name:literal, $statement:literal;)*) => {
        /// Stable identifier of a catalog rule.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId {
            $($variant,)*
        }

        impl RuleId {
            /// Every rule, in catalog order.
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $id,)*
                }
            }

            pub fn rule(self) -> &'static Rule {
                match self {
                    $(RuleId::$variant => &Rule {
                        id: RuleId::$variant,
                        guard: &[$(Closure::$guard),*],
                        name: $name,
                        statement: $statement,
                    },)*
                }
            }
        }
    };
}

rules! {
    AxHtpy => "AX-HTPY", [], "homotopy invariance",
        "f ≃ g ⇒ L(f) = L(g) and Lcat(f) = Lcat(g)";
    AxNorm => "AX-NORM", [], "equivalences are free",
        "f a homotopy equivalence ⇒ L(f) = Lcat(f) = 0";
    P7Eq => "P7-EQ", [], "zero category detects equivalences",
        "Lcat(f) = 0 ⇒ f is a homotopy equivalence, so L(f) = 0";
    AxComp => "AX-COMP", [], "composition",
        "h = g∘f ⇒ L(h) ≤ L(f) + L(g), Lcat(h) ≤ Lcat(f) + Lcat(g)";
    AxMc => "AX-MC", [], "one cone attachment",
        "A → X → C a mapping cone sequence with A in the collection ⇒ L(X → C) ≤ 1";
    AxDom => "AX-DOM", [], "domination",
        "f dominated by g ⇒ Lcat(f) ≤ Lcat(g)";
    AxEqm => "AX-EQM", [], "equivalent maps",
        "f and g homotopy equivalent as maps ⇒ L(f) = L(g) and Lcat(f) = Lcat(g)";
    RelCl => "REL-CL", [], "category below cone length",
        "Lcat(f) ≤ L(f) for every map";
    RelPi0 => "REL-PI0", [], "not onto path components",
        "f not surjective on path components ⇒ L(f) = Lcat(f) = ∞";
    RelMem => "REL-MEM", [], "members are killed in one step",
        "A in the collection ⇒ kl(A) ≤ 1";
    RelAll => "REL-ALL", [AllSpaces], "every space is a member",
        "collection of all spaces ⇒ kl(X) ≤ 1 and kit(X) ≤ 1";
    T32 => "T32", [Wedges, Suspensions], "map of pushouts",
        "d ≤ a + max(b, c) for a map of pushout squares";
    T32W => "T32-W", [Wedges], "map of pushouts, fixed apex",
        "a an equivalence ⇒ d ≤ max(b, c)";
    T32S => "T32-S", [Suspensions], "map of pushouts, fixed legs",
        "b and c equivalences ⇒ d ≤ a";
    C34 => "C34", [Suspensions], "map of pushouts without wedges",
        "d ≤ a + b + c for a map of pushout squares";
    C34Nc => "C34-NC", [], "map of pushouts, no closure",
        "a an equivalence ⇒ d ≤ b + c";
    C41Leg => "C41-1", [], "pushout leg",
        "B → D is bounded by A → C (and C → D by A → B), both invariants";
    C41Diag => "C41-4", [Wedges], "pushout diagonal",
        "A → D ≤ max(A → B, A → C), both invariants";
    C42 => "C42", [Wedges, Suspensions], "space invariants of a pushout",
        "cl(D) ≤ cl(A) + max(cl(B), cl(C)); same for cat, kl and kit";
    C44Cone => "C44-1", [], "mapping cone from the attaching map",
        "cl(C) ≤ L(f), cat(C) ≤ Lcat(f) for a cofiber sequence A → B → C";
    C44Quotient => "C44-2", [], "quotient map from the cone space",
        "L(B → C) ≤ kl(A), Lcat(B → C) ≤ kit(A)";
    C44Sum => "C44-3", [], "mapping cone cone length",
        "cl(C) ≤ kl(A) + cl(B), cat(C) ≤ kit(A) + cat(B)";
    C44Kill => "C44-4", [], "killing length on a cofibration",
        "kl(B) ≤ kl(A) + kl(C), kit(B) ≤ kit(A) + kit(C)";
    C46 => "C46", [Suspensions], "map of mapping cone sequences",
        "γ ≤ α + β, both invariants";
    C48 => "C48", [], "suspension",
        "cl(ΣB) ≤ kl(B), cat(ΣB) ≤ kit(B)";
    C410Map => "C410-1", [Suspensions], "map between spaces",
        "L(f: A → B) ≤ cl(A) + cl(B), Lcat(f) ≤ cat(A) + cat(B)";
    C410Space => "C410-2", [Suspensions], "killing length below cone length",
        "kl(A) ≤ cl(A), kit(A) ≤ cat(A)";
    C410Cancel => "C410-3", [Suspensions], "left factor of a composite",
        "L(g) ≤ L(f) + L(g∘f), both invariants";
    C410Retract => "C410-4", [Suspensions], "retraction by category",
        "g∘f = id with g: B → A ⇒ Lcat(g) ≤ cat(B)";
    C410Section => "C410-5", [Suspensions], "retraction by section",
        "g∘f = id ⇒ L(g) ≤ L(f), Lcat(g) ≤ Lcat(f)";
    C411 => "C411", [Suspensions], "lower bounds for a map",
        "L(f: A → B) ≥ |kl(B) − kl(A)| and L(f) ≥ cl(B) − cl(A); kit and cat for Lcat";
    T51 => "T51", [Wedges, Joins], "product of maps",
        "L(f × g) ≤ L(f) + L(g) + max(cl(A), cl(B)); Lcat likewise with the same cl terms";
    C52 => "C52", [Wedges, Joins], "product of spaces",
        "cl(X×Y) ≤ cl(X) + cl(Y), kl(X×Y) ≤ kl(X) + kl(Y) + max(cl(X), cl(Y)); cat and kit likewise";
    P54 => "P54", [SmashIdeal, Wedges, Suspensions], "product over a smash ideal",
        "kl(X×Y) ≤ kl(X) + kl(Y), kit(X×Y) ≤ kit(X) + kit(Y)";
    P54Smash => "P54-SM", [SmashIdeal], "smash over a smash ideal",
        "kl(X∧Y) ≤ min(kl(X), kl(Y))";
    L61 => "L61", [Joins], "projection with a member fiber",
        "p: A×B → B with A in the collection ⇒ L(p) ≤ cl(B) + 1, Lcat(p) ≤ cat(B) + 1";
    T62 => "T62", [Wedges, Joins], "pullback along a fibration",
        "L(A → B) ≤ L(C → D)·(cl(F) + 1), Lcat(A → B) ≤ Lcat(C → D)·(cat(F) + 1)";
    C63 => "C63", [Wedges, Joins], "total space of a fibration",
        "cl(E) + 1 ≤ (cl(B) + 1)(cl(F) + 1); cat likewise";
    P72Cone => "P72-A", [Wedges], "wedge of maps, cone length",
        "L(f ∨ g) ≤ max(L(f), L(g))";
    P72Cat => "P72-B", [Wedges], "wedge of maps, category",
        "Lcat(f ∨ g) = max(Lcat(f), Lcat(g))";
    C73 => "C73", [Wedges], "trivial map",
        "L(X → Y null) ≤ max(kl(X), cl(Y)), Lcat = max(kit(X), cat(Y))";
}

/// A catalog entry.
#[derive(Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    /// Closure properties the collection must have.
    pub guard: &'static [Closure],
    pub name: &'static str,
    /// The inequality, in words and symbols.
    pub statement: &'static str,
}

impl Rule {
    pub fn applies(&self, profile: Profile) -> bool {
        self.guard.iter().all(|&c| profile.has(c))
    }

    /// The guard as text, `any` when there is none.
    pub fn guard_text(&self) -> String {
        if self.guard.is_empty() {
            "any".to_owned()
        } else {
            self.guard
                .iter()
                .map(|c| c.name())
                .collect::<Vec<_>>()
                .join(" & ")
        }
    }
}

/// Every rule, in catalog order.
///
/// ```
/// use conebound::rules::{catalog, RuleId};
/// use conebound::scene::Profile;
///
/// assert_eq!(catalog().len(), 41);
/// let suspensions_only = Profile { suspensions: true, ..Profile::default() };
/// assert!(!RuleId::T51.rule().applies(suspensions_only));
/// assert!(RuleId::AxMc.rule().applies(Profile::default()));
/// ```
pub fn catalog() -> Vec<&'static Rule> {
    RuleId::ALL.iter().map(|id| id.rule()).collect()
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule id '{0}'")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| UnknownRule(s.to_owned()))
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The rules reference as markdown, one section per rule.
pub fn rules_markdown() -> String {
    let mut out = String::from(
        "# Rule catalog\n\nGenerated by `conebound rules`. Ids are stable and appear in JSON output.\n\n\
         | id | guard | name | statement |\n|---|---|---|---|\n",
    );
    for rule in catalog() {
        out.push_str(&format!(
            "| `{}` | {} | {} | {} |\n",
            rule.id,
            rule.guard_text(),
            rule.name,
            rule.statement
        ));
    }
    out
}
