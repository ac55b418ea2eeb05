//! Structural facts, generic over how spaces, maps and other facts are named.
//!
//! The parser works with `Fact<String, MapRef, String>` and the elaborator
//! with `Fact<SpaceId, MapId, FactId>`. Both share one argument table and
//! one shape validator.

use std::fmt;

use serde::Serialize;

/// One structural fact about spaces and maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fact<S, M, F> {
    Member(S),
    Contractible(S),
    Equiv(M),
    Homotopic(M, M),
    EquivMaps(M, M),
    /// `h = g ∘ f`.
    Compose { h: M, g: M, f: M },
    /// `A --f--> X --j--> C` is a mapping cone sequence.
    Cofiber { f: M, j: M, cone: S },
    /// Homotopy pushout of `C <-g- A -f-> B` with induced maps into `D`.
    Pushout { f: M, g: M, ib: M, ic: M, diag: M },
    /// A map of pushout squares, componentwise `a, b, c, d`.
    PushoutMap { source: F, target: F, a: M, b: M, c: M, d: M },
    /// A map of cofiber sequences, componentwise `alpha, beta, gamma`.
    CofiberMap { source: F, target: F, alpha: M, beta: M, gamma: M },
    /// `f` is dominated by `g`.
    Dominates { g: M, f: M },
    /// `g ∘ f = id`.
    Section { f: M, g: M },
    /// `h = f × g`.
    ProductMap { h: M, f: M, g: M },
    ProductSpace { product: S, x: S, y: S },
    /// `w = f ∨ g`.
    WedgeMap { w: M, f: M, g: M },
    WedgeSpace { wedge: S, x: S, y: S },
    SuspSpace { susp: S, base: S },
    JoinSpace { join: S, a: S, b: S },
    SmashSpace { smash: S, x: S, y: S },
    /// `X ∨ Y → X × Y → X ∧ Y`.
    SmashDecomp { x: S, y: S, wedge: S, product: S, smash: S },
    /// `p: A × B → B` is the second projection.
    Projection { p: M, factor: S },
    /// `p: E → B` is a fibration with fiber `F`.
    Fibration { p: M, fiber: S },
    /// Pullback square `A → B`, `A → C`, `B → D`, `C → D` with `bd` a fibration.
    Pullback { ab: M, ac: M, bd: M, cd: M, fiber: S },
    Null(M),
    Pi0NotOnto(M),
}

/// What an argument position holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Space,
    Map,
    Fact,
}

/// One argument of a fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg<S, M, F> {
    Space(S),
    Map(M),
    Fact(F),
}

impl<S, M, F> Arg<S, M, F> {
    pub fn kind(&self) -> ArgKind {
        match self {
            Arg::Space(_) => ArgKind::Space,
            Arg::Map(_) => ArgKind::Map,
            Arg::Fact(_) => ArgKind::Fact,
        }
    }
}

/// The head of a fact: its surface name and argument signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactHead {
    Member,
    Contractible,
    Equiv,
    Homotopic,
    EquivMaps,
    Compose,
    Cofiber,
    Pushout,
    PushoutMap,
    CofiberMap,
    Dominates,
    Section,
    ProductMap,
    ProductSpace,
    WedgeMap,
    WedgeSpace,
    SuspSpace,
    JoinSpace,
    SmashSpace,
    SmashDecomp,
    Projection,
    Fibration,
    Pullback,
    Null,
    Pi0NotOnto,
}

use ArgKind::{Fact as Fc, Map as Mp, Space as Sp};

impl FactHead {
    pub const ALL: [FactHead; 25] = [
        FactHead::Member,
        FactHead::Contractible,
        FactHead::Equiv,
        FactHead::Homotopic,
        FactHead::EquivMaps,
        FactHead::Compose,
        FactHead::Cofiber,
        FactHead::Pushout,
        FactHead::PushoutMap,
        FactHead::CofiberMap,
        FactHead::Dominates,
        FactHead::Section,
        FactHead::ProductMap,
        FactHead::ProductSpace,
        FactHead::WedgeMap,
        FactHead::WedgeSpace,
        FactHead::SuspSpace,
        FactHead::JoinSpace,
        FactHead::SmashSpace,
        FactHead::SmashDecomp,
        FactHead::Projection,
        FactHead::Fibration,
        FactHead::Pullback,
        FactHead::Null,
        FactHead::Pi0NotOnto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FactHead::Member => "member",
            FactHead::Contractible => "contractible",
            FactHead::Equiv => "equiv",
            FactHead::Homotopic => "homotopic",
            FactHead::EquivMaps => "equiv_maps",
            FactHead::Compose => "compose",
            FactHead::Cofiber => "cofiber",
            FactHead::Pushout => "pushout",
            FactHead::PushoutMap => "pushout_map",
            FactHead::CofiberMap => "cofiber_map",
            FactHead::Dominates => "dominates",
            FactHead::Section => "section",
            FactHead::ProductMap => "product_map",
            FactHead::ProductSpace => "product_space",
            FactHead::WedgeMap => "wedge_map",
            FactHead::WedgeSpace => "wedge_space",
            FactHead::SuspSpace => "susp_space",
            FactHead::JoinSpace => "join_space",
            FactHead::SmashSpace => "smash_space",
            FactHead::SmashDecomp => "smash_decomp",
            FactHead::Projection => "projection",
            FactHead::Fibration => "fibration",
            FactHead::Pullback => "pullback",
            FactHead::Null => "null",
            FactHead::Pi0NotOnto => "pi0_not_onto",
        }
    }

    pub fn from_name(name: &str) -> Option<FactHead> {
        FactHead::ALL.into_iter().find(|h| h.name() == name)
    }

    pub fn signature(self) -> &'static [ArgKind] {
        match self {
            FactHead::Member | FactHead::Contractible => &[Sp],
            FactHead::Equiv | FactHead::Null | FactHead::Pi0NotOnto => &[Mp],
            FactHead::Homotopic | FactHead::EquivMaps | FactHead::Dominates | FactHead::Section => {
                &[Mp, Mp]
            }
            FactHead::Compose | FactHead::ProductMap | FactHead::WedgeMap => &[Mp, Mp, Mp],
            FactHead::Cofiber => &[Mp, Mp, Sp],
            FactHead::Pushout => &[Mp, Mp, Mp, Mp, Mp],
            FactHead::PushoutMap => &[Fc, Fc, Mp, Mp, Mp, Mp],
            FactHead::CofiberMap => &[Fc, Fc, Mp, Mp, Mp],
            FactHead::ProductSpace
            | FactHead::WedgeSpace
            | FactHead::JoinSpace
            | FactHead::SmashSpace => &[Sp, Sp, Sp],
            FactHead::SuspSpace => &[Sp, Sp],
            FactHead::SmashDecomp => &[Sp, Sp, Sp, Sp, Sp],
            FactHead::Projection | FactHead::Fibration => &[Mp, Sp],
            FactHead::Pullback => &[Mp, Mp, Mp, Mp, Sp],
        }
    }

    /// Build a fact from arguments matching [`FactHead::signature`].
    ///
    /// Returns `None` if the count or kinds do not match.
    pub fn build<S, M, F>(self, args: Vec<Arg<S, M, F>>) -> Option<Fact<S, M, F>> {
        let sig = self.signature();
        if args.len() != sig.len() || args.iter().zip(sig).any(|(a, k)| a.kind() != *k) {
            return None;
        }
        let mut it = args.into_iter();
        macro_rules! s {
            () => {
                match it.next() {
                    Some(Arg::Space(x)) => x,
                    _ => unreachable!(),
                }
            };
        }
        macro_rules! m {
            () => {
                match it.next() {
                    Some(Arg::Map(x)) => x,
                    _ => unreachable!(),
                }
            };
        }
        macro_rules! f {
            () => {
                match it.next() {
                    Some(Arg::Fact(x)) => x,
                    _ => unreachable!(),
                }
            };
        }
        Some(match self {
            FactHead::Member => Fact::Member(s!()),
            FactHead::Contractible => Fact::Contractible(s!()),
            FactHead::Equiv => Fact::Equiv(m!()),
            FactHead::Homotopic => Fact::Homotopic(m!(), m!()),
            FactHead::EquivMaps => Fact::EquivMaps(m!(), m!()),
            FactHead::Compose => Fact::Compose { h: m!(), g: m!(), f: m!() },
            FactHead::Cofiber => Fact::Cofiber { f: m!(), j: m!(), cone: s!() },
            FactHead::Pushout => Fact::Pushout { f: m!(), g: m!(), ib: m!(), ic: m!(), diag: m!() },
            FactHead::PushoutMap => Fact::PushoutMap {
                source: f!(),
                target: f!(),
                a: m!(),
                b: m!(),
                c: m!(),
                d: m!(),
            },
            FactHead::CofiberMap => Fact::CofiberMap {
                source: f!(),
                target: f!(),
                alpha: m!(),
                beta: m!(),
                gamma: m!(),
            },
            FactHead::Dominates => Fact::Dominates { g: m!(), f: m!() },
            FactHead::Section => Fact::Section { f: m!(), g: m!() },
            FactHead::ProductMap => Fact::ProductMap { h: m!(), f: m!(), g: m!() },
            FactHead::ProductSpace => Fact::ProductSpace { product: s!(), x: s!(), y: s!() },
            FactHead::WedgeMap => Fact::WedgeMap { w: m!(), f: m!(), g: m!() },
            FactHead::WedgeSpace => Fact::WedgeSpace { wedge: s!(), x: s!(), y: s!() },
            FactHead::SuspSpace => Fact::SuspSpace { susp: s!(), base: s!() },
            FactHead::JoinSpace => Fact::JoinSpace { join: s!(), a: s!(), b: s!() },
            FactHead::SmashSpace => Fact::SmashSpace { smash: s!(), x: s!(), y: s!() },
            FactHead::SmashDecomp => Fact::SmashDecomp {
                x: s!(),
                y: s!(),
                wedge: s!(),
                product: s!(),
                smash: s!(),
            },
            FactHead::Projection => Fact::Projection { p: m!(), factor: s!() },
            FactHead::Fibration => Fact::Fibration { p: m!(), fiber: s!() },
            FactHead::Pullback => Fact::Pullback {
                ab: m!(),
                ac: m!(),
                bd: m!(),
                cd: m!(),
                fiber: s!(),
            },
            FactHead::Null => Fact::Null(m!()),
            FactHead::Pi0NotOnto => Fact::Pi0NotOnto(m!()),
        })
    }
}

impl fmt::Display for FactHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<S, M, F> Fact<S, M, F> {
    pub fn head(&self) -> FactHead {
        match self {
            Fact::Member(..) => FactHead::Member,
            Fact::Contractible(..) => FactHead::Contractible,
            Fact::Equiv(..) => FactHead::Equiv,
            Fact::Homotopic(..) => FactHead::Homotopic,
            Fact::EquivMaps(..) => FactHead::EquivMaps,
            Fact::Compose { .. } => FactHead::Compose,
            Fact::Cofiber { .. } => FactHead::Cofiber,
            Fact::Pushout { .. } => FactHead::Pushout,
            Fact::PushoutMap { .. } => FactHead::PushoutMap,
            Fact::CofiberMap { .. } => FactHead::CofiberMap,
            Fact::Dominates { .. } => FactHead::Dominates,
            Fact::Section { .. } => FactHead::Section,
            Fact::ProductMap { .. } => FactHead::ProductMap,
            Fact::ProductSpace { .. } => FactHead::ProductSpace,
            Fact::WedgeMap { .. } => FactHead::WedgeMap,
            Fact::WedgeSpace { .. } => FactHead::WedgeSpace,
            Fact::SuspSpace { .. } => FactHead::SuspSpace,
            Fact::JoinSpace { .. } => FactHead::JoinSpace,
            Fact::SmashSpace { .. } => FactHead::SmashSpace,
            Fact::SmashDecomp { .. } => FactHead::SmashDecomp,
            Fact::Projection { .. } => FactHead::Projection,
            Fact::Fibration { .. } => FactHead::Fibration,
            Fact::Pullback { .. } => FactHead::Pullback,
            Fact::Null(..) => FactHead::Null,
            Fact::Pi0NotOnto(..) => FactHead::Pi0NotOnto,
        }
    }

    /// Arguments in surface order.
    pub fn into_args(self) -> Vec<Arg<S, M, F>> {
        use Arg::{Fact as A, Map as B, Space as C};
        match self {
            Fact::Member(x) | Fact::Contractible(x) => vec![C(x)],
            Fact::Equiv(f) | Fact::Null(f) | Fact::Pi0NotOnto(f) => vec![B(f)],
            Fact::Homotopic(f, g) | Fact::EquivMaps(f, g) => vec![B(f), B(g)],
            Fact::Compose { h, g, f } => vec![B(h), B(g), B(f)],
            Fact::Cofiber { f, j, cone } => vec![B(f), B(j), C(cone)],
            Fact::Pushout { f, g, ib, ic, diag } => vec![B(f), B(g), B(ib), B(ic), B(diag)],
            Fact::PushoutMap { source, target, a, b, c, d } => {
                vec![A(source), A(target), B(a), B(b), B(c), B(d)]
            }
            Fact::CofiberMap { source, target, alpha, beta, gamma } => {
                vec![A(source), A(target), B(alpha), B(beta), B(gamma)]
            }
            Fact::Dominates { g, f } => vec![B(g), B(f)],
            Fact::Section { f, g } => vec![B(f), B(g)],
            Fact::ProductMap { h, f, g } => vec![B(h), B(f), B(g)],
            Fact::WedgeMap { w, f, g } => vec![B(w), B(f), B(g)],
            Fact::ProductSpace { product: p, x, y }
            | Fact::WedgeSpace { wedge: p, x, y }
            | Fact::SmashSpace { smash: p, x, y } => vec![C(p), C(x), C(y)],
            Fact::JoinSpace { join, a, b } => vec![C(join), C(a), C(b)],
            Fact::SuspSpace { susp, base } => vec![C(susp), C(base)],
            Fact::SmashDecomp { x, y, wedge, product, smash } => {
                vec![C(x), C(y), C(wedge), C(product), C(smash)]
            }
            Fact::Projection { p, factor } => vec![B(p), C(factor)],
            Fact::Fibration { p, fiber } => vec![B(p), C(fiber)],
            Fact::Pullback { ab, ac, bd, cd, fiber } => vec![B(ab), B(ac), B(bd), B(cd), C(fiber)],
        }
    }

    /// Rename every argument, stopping at the first failure.
    pub fn try_map<S2, M2, F2, E>(
        self,
        mut space: impl FnMut(S) -> Result<S2, E>,
        mut map: impl FnMut(M) -> Result<M2, E>,
        mut fact: impl FnMut(F) -> Result<F2, E>,
    ) -> Result<Fact<S2, M2, F2>, E> {
        let head = self.head();
        let args = self
            .into_args()
            .into_iter()
            .map(|a| {
                Ok(match a {
                    Arg::Space(x) => Arg::Space(space(x)?),
                    Arg::Map(x) => Arg::Map(map(x)?),
                    Arg::Fact(x) => Arg::Fact(fact(x)?),
                })
            })
            .collect::<Result<Vec<_>, E>>()?;
        Ok(head.build(args).expect("renaming preserves the signature"))
    }
}

impl<S: Clone, M: Clone, F: Clone> Fact<S, M, F> {
    pub fn args(&self) -> Vec<Arg<S, M, F>> {
        self.clone().into_args()
    }

    pub fn maps(&self) -> Vec<M> {
        self.args()
            .into_iter()
            .filter_map(|a| match a {
                Arg::Map(m) => Some(m),
                _ => None,
            })
            .collect()
    }
}

/// Prints `head(arg, ...)` using the arguments' own `Display`.
impl<S: fmt::Display + Clone, M: fmt::Display + Clone, F: fmt::Display + Clone> fmt::Display
    for Fact<S, M, F>
{
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}(", self.head())?;
        for (i, arg) in self.args().into_iter().enumerate() {
            if i > 0 {
                out.write_str(", ")?;
            }
            match arg {
                Arg::Space(x) => write!(out, "{x}")?,
                Arg::Map(x) => write!(out, "{x}")?,
                Arg::Fact(x) => write!(out, "{x}")?,
            }
        }
        out.write_str(")")
    }
}

/// Endpoint and fact lookups needed to check a fact's shape.
pub trait ShapeLookup {
    type Space: PartialEq + Clone + fmt::Display;
    type Map: Clone + fmt::Display;
    type FactRef: Clone + fmt::Display;

    fn dom(&self, map: &Self::Map) -> Self::Space;
    fn cod(&self, map: &Self::Map) -> Self::Space;
    fn fact(&self, fact: &Self::FactRef) -> Option<Fact<Self::Space, Self::Map, Self::FactRef>>;
}

/// A fact whose maps do not fit together.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ShapeError(pub String);

/// Check that the domains and codomains of a fact's maps fit its shape.
pub fn validate<L: ShapeLookup>(
    fact: &Fact<L::Space, L::Map, L::FactRef>,
    lookup: &L,
) -> Result<(), ShapeError> {
    let head = fact.head();
    let endpoint = |m: &L::Map, end: &str, space: L::Space| (format!("{end}({m})"), space);
    let dom = |m: &L::Map| endpoint(m, "dom", lookup.dom(m));
    let cod = |m: &L::Map| endpoint(m, "cod", lookup.cod(m));
    let same = |(ln, l): (String, L::Space), (rn, r): (String, L::Space)| {
        if l == r {
            Ok(())
        } else {
            Err(ShapeError(format!("{head}: {ln} is {l} but {rn} is {r}")))
        }
    };
    match fact {
        Fact::Homotopic(f, g) => {
            same(dom(f), dom(g))?;
            same(cod(f), cod(g))
        }
        Fact::Compose { h, g, f } => {
            same(dom(h), dom(f))?;
            same(cod(h), cod(g))?;
            same(cod(f), dom(g))
        }
        Fact::Cofiber { f, j, cone } => {
            same(cod(f), dom(j))?;
            same(cod(j), ("cone".to_owned(), cone.clone()))
        }
        Fact::Pushout { f, g, ib, ic, diag } => {
            same(dom(f), dom(g))?;
            same(dom(f), dom(diag))?;
            same(cod(f), dom(ib))?;
            same(cod(g), dom(ic))?;
            same(cod(ib), cod(ic))?;
            same(cod(ib), cod(diag))
        }
        Fact::PushoutMap { source, target, a, b, c, d } => {
            let (Some(Fact::Pushout { f, g, ib, .. }), Some(Fact::Pushout { f: f2, g: g2, ib: ib2, .. })) =
                (lookup.fact(source), lookup.fact(target))
            else {
                return Err(ShapeError(format!("{head}: {source} and {target} must name pushout facts")));
            };
            same(dom(a), dom(&f))?;
            same(cod(a), dom(&f2))?;
            same(dom(b), cod(&f))?;
            same(cod(b), cod(&f2))?;
            same(dom(c), cod(&g))?;
            same(cod(c), cod(&g2))?;
            same(dom(d), cod(&ib))?;
            same(cod(d), cod(&ib2))
        }
        Fact::CofiberMap { source, target, alpha, beta, gamma } => {
            let (Some(Fact::Cofiber { f, j, .. }), Some(Fact::Cofiber { f: f2, j: j2, .. })) =
                (lookup.fact(source), lookup.fact(target))
            else {
                return Err(ShapeError(format!("{head}: {source} and {target} must name cofiber facts")));
            };
            same(dom(alpha), dom(&f))?;
            same(cod(alpha), dom(&f2))?;
            same(dom(beta), cod(&f))?;
            same(cod(beta), cod(&f2))?;
            same(dom(gamma), cod(&j))?;
            same(cod(gamma), cod(&j2))
        }
        Fact::Section { f, g } => {
            same(dom(f), cod(g))?;
            same(cod(f), dom(g))
        }
        Fact::Pullback { ab, ac, bd, cd, .. } => {
            same(dom(ab), dom(ac))?;
            same(cod(ab), dom(bd))?;
            same(cod(ac), dom(cd))?;
            same(cod(bd), cod(cd))
        }
        Fact::Member(_)
        | Fact::Contractible(_)
        | Fact::Equiv(_)
        | Fact::EquivMaps(..)
        | Fact::Dominates { .. }
        | Fact::ProductMap { .. }
        | Fact::ProductSpace { .. }
        | Fact::WedgeMap { .. }
        | Fact::WedgeSpace { .. }
        | Fact::SuspSpace { .. }
        | Fact::JoinSpace { .. }
        | Fact::SmashSpace { .. }
        | Fact::SmashDecomp { .. }
        | Fact::Projection { .. }
        | Fact::Fibration { .. }
        | Fact::Null(_)
        | Fact::Pi0NotOnto(_) => Ok(()),
    }
}
