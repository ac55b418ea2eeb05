//! Elaboration: dense ids, canonical maps, and the facts implied by the
//! declarations alone.

use std::collections::HashMap;
use std::fmt;

use super::fact::{validate, Fact, ShapeLookup};
use super::{CertStmt, Collection, InvRef, MapRef, Profile, Rel, Scene, POINT};
use crate::ext::ExtNat;
use crate::key::{FactId, InvariantKey, Kind, MapId, SpaceId};
use crate::scene::Closure;

/// A fact over elaborated ids.
pub type ElabFact = Fact<SpaceId, MapId, FactId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceInfo {
    pub name: String,
    /// `* → X`.
    pub init: MapId,
    /// `X → *`.
    pub term: MapId,
    /// Created by elaboration rather than declared.
    pub generated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapRole {
    Declared,
    Init(SpaceId),
    Term(SpaceId),
    Generated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapInfo {
    pub name: String,
    pub dom: SpaceId,
    pub cod: SpaceId,
    pub role: MapRole,
}

impl MapInfo {
    pub fn is_canonical(&self) -> bool {
        matches!(self.role, MapRole::Init(_) | MapRole::Term(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactOrigin {
    /// The scene's fact statement with this index.
    Declared { index: usize },
    /// Added by elaboration, for the stated reason.
    Derived { reason: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactEntry {
    pub fact: ElabFact,
    pub origin: FactOrigin,
    pub label: Option<String>,
}

/// An asserted bound, resolved to its key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Asserted {
    pub key: InvariantKey,
    pub rel: Rel,
    pub value: ExtNat,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElabError {
    #[error("generated map '{name}' must go {want}, but a map of that name goes {have}")]
    MapClash {
        name: String,
        want: String,
        have: String,
    },
    #[error("decomposition of {target}: cone space '{space}' is not in the collection")]
    NotMember { target: String, space: String },
    #[error("generated fact {fact} is malformed: {reason}")]
    Shape { fact: String, reason: String },
    #[error("unresolved reference '{0}'")]
    Unresolved(String),
}

/// A scene with dense ids and every structural consequence of its
/// declarations spelled out as facts.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub collection: Collection,
    spaces: Vec<SpaceInfo>,
    maps: Vec<MapInfo>,
    facts: Vec<FactEntry>,
    fact_ids: HashMap<ElabFact, FactId>,
    space_ids: HashMap<String, SpaceId>,
    map_ids: HashMap<String, MapId>,
    members: Vec<Option<FactId>>,
    bounds: Vec<Asserted>,
    queries: Vec<InvariantKey>,
    /// Cone spaces each certificate needs in the collection.
    required: Vec<(String, SpaceId)>,
}

impl Elaborated {
    fn empty(collection: Collection) -> Self {
        let mut e = Elaborated {
            collection,
            spaces: Vec::new(),
            maps: Vec::new(),
            facts: Vec::new(),
            fact_ids: HashMap::new(),
            space_ids: HashMap::new(),
            map_ids: HashMap::new(),
            members: Vec::new(),
            bounds: Vec::new(),
            queries: Vec::new(),
            required: Vec::new(),
        };
        e.add_space(POINT, false);
        e
    }

    pub fn profile(&self) -> Profile {
        self.collection.profile
    }

    pub fn spaces(&self) -> &[SpaceInfo] {
        &self.spaces
    }

    pub fn maps(&self) -> &[MapInfo] {
        &self.maps
    }

    pub fn facts(&self) -> &[FactEntry] {
        &self.facts
    }

    pub fn space(&self, id: SpaceId) -> &SpaceInfo {
        &self.spaces[id.index()]
    }

    pub fn map(&self, id: MapId) -> &MapInfo {
        &self.maps[id.index()]
    }

    pub fn fact(&self, id: FactId) -> &FactEntry {
        &self.facts[id.index()]
    }

    pub fn space_ids(&self) -> impl Iterator<Item = SpaceId> {
        (0..self.spaces.len()).map(SpaceId::from)
    }

    pub fn map_ids(&self) -> impl Iterator<Item = MapId> {
        (0..self.maps.len()).map(MapId::from)
    }

    pub fn fact_ids(&self) -> impl Iterator<Item = FactId> {
        (0..self.facts.len()).map(FactId::from)
    }

    pub fn space_id(&self, name: &str) -> Option<SpaceId> {
        self.space_ids.get(name).copied()
    }

    pub fn map_id(&self, name: &str) -> Option<MapId> {
        self.map_ids.get(name).copied()
    }

    pub fn find_fact(&self, fact: &ElabFact) -> Option<FactId> {
        self.fact_ids.get(fact).copied()
    }

    pub fn init(&self, space: SpaceId) -> MapId {
        self.space(space).init
    }

    pub fn term(&self, space: SpaceId) -> MapId {
        self.space(space).term
    }

    pub fn dom(&self, map: MapId) -> SpaceId {
        self.map(map).dom
    }

    pub fn cod(&self, map: MapId) -> SpaceId {
        self.map(map).cod
    }

    /// The `member` fact placing `space` in the collection, if any.
    pub fn member_fact(&self, space: SpaceId) -> Option<FactId> {
        self.members[space.index()]
    }

    pub fn bounds(&self) -> &[Asserted] {
        &self.bounds
    }

    pub fn queries(&self) -> &[InvariantKey] {
        &self.queries
    }

    /// Resolve an invariant written in scene syntax.
    pub fn resolve(&self, inv: &InvRef) -> Option<InvariantKey> {
        let map = match &inv.map {
            MapRef::Named(n) => self.map_id(n)?,
            MapRef::Init(x) => self.init(self.space_id(x)?),
            MapRef::Term(x) => self.term(self.space_id(x)?),
        };
        Some(InvariantKey::new(map, inv.kind))
    }

    /// `cl(X)`, `kit(Y)` or `L(f)` as appropriate.
    pub fn key_name(&self, key: InvariantKey) -> String {
        let info = self.map(key.map);
        let alias = match (info.role, key.kind) {
            (MapRole::Init(s), Kind::ConeLength) => Some(("cl", s)),
            (MapRole::Init(s), Kind::Category) => Some(("cat", s)),
            (MapRole::Term(s), Kind::ConeLength) => Some(("kl", s)),
            (MapRole::Term(s), Kind::Category) => Some(("kit", s)),
            _ => None,
        };
        match alias {
            Some((name, s)) => format!("{name}({})", self.space(s).name),
            None => format!("{}({})", key.kind.map_prefix(), info.name),
        }
    }

    /// A fact in scene syntax, facts referred to by label or `#id`.
    pub fn fact_text(&self, id: FactId) -> String {
        self.fact_display(&self.fact(id).fact)
    }

    pub fn fact_display(&self, fact: &ElabFact) -> String {
        let named: Result<Fact<String, String, String>, ()> = fact.clone().try_map(
            |s| Ok(self.space(s).name.clone()),
            |m| Ok(self.map(m).name.clone()),
            |f| {
                Ok(self
                    .fact(f)
                    .label
                    .clone()
                    .unwrap_or_else(|| format!("#{}", f.0)))
            },
        );
        named.expect("renaming is infallible").to_string()
    }

    fn add_space(&mut self, name: &str, generated: bool) -> SpaceId {
        if let Some(id) = self.space_id(name) {
            return id;
        }
        let id = SpaceId::from(self.spaces.len());
        let init = MapId::from(self.maps.len());
        let term = MapId::from(self.maps.len() + 1);
        let point = SpaceId::POINT;
        self.maps.push(MapInfo {
            name: format!("init({name})"),
            dom: point,
            cod: id,
            role: MapRole::Init(id),
        });
        self.maps.push(MapInfo {
            name: format!("term({name})"),
            dom: id,
            cod: point,
            role: MapRole::Term(id),
        });
        self.spaces.push(SpaceInfo { name: name.to_owned(), init, term, generated });
        self.space_ids.insert(name.to_owned(), id);
        self.members.push(None);
        id
    }

    fn add_map(&mut self, name: &str, dom: SpaceId, cod: SpaceId, role: MapRole) -> MapId {
        let id = MapId::from(self.maps.len());
        self.maps.push(MapInfo { name: name.to_owned(), dom, cod, role });
        self.map_ids.insert(name.to_owned(), id);
        id
    }

    /// A map between two spaces: canonical when either end is the point,
    /// otherwise the named map, created if needed.
    fn generated_map(&mut self, name: &str, dom: SpaceId, cod: SpaceId) -> Result<MapId, ElabError> {
        if cod == SpaceId::POINT {
            return Ok(self.term(dom));
        }
        if dom == SpaceId::POINT {
            return Ok(self.init(cod));
        }
        match self.map_id(name) {
            Some(id) if self.dom(id) == dom && self.cod(id) == cod => Ok(id),
            Some(id) => Err(ElabError::MapClash {
                name: name.to_owned(),
                want: self.arrow(dom, cod),
                have: self.arrow(self.dom(id), self.cod(id)),
            }),
            None => Ok(self.add_map(name, dom, cod, MapRole::Generated)),
        }
    }

    fn arrow(&self, dom: SpaceId, cod: SpaceId) -> String {
        format!("{} -> {}", self.space(dom).name, self.space(cod).name)
    }

    /// Add a fact unless already present. Returns its id and whether it is new.
    fn add_fact(
        &mut self,
        fact: ElabFact,
        origin: FactOrigin,
        label: Option<String>,
    ) -> Result<(FactId, bool), ElabError> {
        if let Some(id) = self.find_fact(&fact) {
            return Ok((id, false));
        }
        if let Err(e) = validate(&fact, &*self) {
            return Err(ElabError::Shape { fact: self.fact_display(&fact), reason: e.0 });
        }
        let id = FactId::from(self.facts.len());
        if let Fact::Member(s) = fact {
            self.members[s.index()].get_or_insert(id);
        }
        self.fact_ids.insert(fact.clone(), id);
        self.facts.push(FactEntry { fact, origin, label });
        Ok((id, true))
    }

    fn derive(&mut self, fact: ElabFact, reason: &'static str) -> Result<(), ElabError> {
        self.add_fact(fact, FactOrigin::Derived { reason }, None).map(|_| ())
    }

    fn resolve_map(&self, map: &MapRef) -> Result<MapId, ElabError> {
        self.resolve(&InvRef { kind: Kind::ConeLength, map: map.clone() })
            .map(|k| k.map)
            .ok_or_else(|| ElabError::Unresolved(map.to_string()))
    }

    fn resolve_space(&self, name: &str) -> Result<SpaceId, ElabError> {
        self.space_id(name).ok_or_else(|| ElabError::Unresolved(name.to_owned()))
    }

    /// Apply every elaboration step until nothing new appears.
    ///
    /// Returns the number of facts added; a second call returns 0.
    pub fn close(&mut self) -> Result<usize, ElabError> {
        let before = self.facts.len();
        loop {
            let round = self.facts.len();
            let mut i = 0;
            while i < self.facts.len() {
                self.expand(FactId::from(i))?;
                i += 1;
            }
            self.canonical_facts()?;
            self.membership()?;
            if self.facts.len() == round {
                return Ok(self.facts.len() - before);
            }
        }
    }

    /// Facts that one fact expands into.
    fn expand(&mut self, id: FactId) -> Result<(), ElabError> {
        let fact = self.fact(id).fact.clone();
        match fact {
            Fact::Contractible(x) => {
                self.derive(Fact::Equiv(self.init(x)), "contractible space")?;
                self.derive(Fact::Equiv(self.term(x)), "contractible space")?;
            }
            Fact::WedgeSpace { wedge, x, y } => {
                let w = self.space(wedge).name.clone();
                let in1 = self.generated_map(&format!("{w}.in1"), x, wedge)?;
                let in2 = self.generated_map(&format!("{w}.in2"), y, wedge)?;
                let pushout = Fact::Pushout {
                    f: self.init(x),
                    g: self.init(y),
                    ib: in1,
                    ic: in2,
                    diag: self.init(wedge),
                };
                self.derive(pushout, "wedge as a pushout")?;
            }
            Fact::SuspSpace { susp, base } => {
                let s = self.space(susp).name.clone();
                let null = self.generated_map(&format!("{s}.null"), base, susp)?;
                let pushout = Fact::Pushout {
                    f: self.term(base),
                    g: self.term(base),
                    ib: self.init(susp),
                    ic: self.init(susp),
                    diag: null,
                };
                self.derive(pushout, "suspension as a pushout")?;
                if null != self.init(susp) {
                    self.derive(Fact::Null(null), "suspension as a pushout")?;
                    let through_point = Fact::Compose {
                        h: null,
                        g: self.init(susp),
                        f: self.term(base),
                    };
                    self.derive(through_point, "suspension as a pushout")?;
                }
            }
            Fact::SmashDecomp { x, y, wedge, product, smash } => {
                let reason = "smash decomposition";
                self.derive(Fact::WedgeSpace { wedge, x, y }, reason)?;
                self.derive(Fact::ProductSpace { product, x, y }, reason)?;
                self.derive(Fact::SmashSpace { smash, x, y }, reason)?;
                let (w, p, s) = (
                    self.space(wedge).name.clone(),
                    self.space(product).name.clone(),
                    self.space(smash).name.clone(),
                );
                let include = self.generated_map(&format!("{w}.to.{p}"), wedge, product)?;
                let collapse = self.generated_map(&format!("{p}.to.{s}"), product, smash)?;
                self.derive(Fact::Cofiber { f: include, j: collapse, cone: smash }, reason)?;
            }
            Fact::Projection { p, factor } => {
                let product = Fact::ProductSpace {
                    product: self.dom(p),
                    x: factor,
                    y: self.cod(p),
                };
                self.derive(product, "projection from a product")?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Composites through the point for every map, and maps into or out of
    /// the point identified with the canonical ones.
    fn canonical_facts(&mut self) -> Result<(), ElabError> {
        for m in 0..self.maps.len() {
            let m = MapId::from(m);
            if self.map(m).is_canonical() {
                continue;
            }
            let (x, y) = (self.dom(m), self.cod(m));
            let reason = "composite with a canonical map";
            if y == SpaceId::POINT {
                self.derive(Fact::Homotopic(m, self.term(x)), "map into the point")?;
            }
            if x == SpaceId::POINT {
                self.derive(Fact::Homotopic(m, self.init(y)), "map out of the point")?;
            }
            self.derive(Fact::Compose { h: self.init(y), g: m, f: self.init(x) }, reason)?;
            self.derive(Fact::Compose { h: self.term(x), g: self.term(y), f: m }, reason)?;
        }
        Ok(())
    }

    fn membership(&mut self) -> Result<(), ElabError> {
        let profile = self.profile();
        if profile.has(Closure::AllSpaces) {
            for s in 0..self.spaces.len() {
                self.derive(Fact::Member(SpaceId::from(s)), "collection of all spaces")?;
            }
        }
        let mut i = 0;
        while i < self.facts.len() {
            let fact = self.fact(FactId::from(i)).fact.clone();
            let is = |s: SpaceId| self.members[s.index()].is_some();
            let derived = match fact {
                Fact::SuspSpace { susp, base } if profile.has(Closure::Suspensions) && is(base) => {
                    Some((susp, "closed under suspensions"))
                }
                Fact::WedgeSpace { wedge, x, y } if profile.has(Closure::Wedges) && is(x) && is(y) => {
                    Some((wedge, "closed under wedges"))
                }
                Fact::JoinSpace { join, a, b } if profile.has(Closure::Joins) && is(a) && is(b) => {
                    Some((join, "closed under joins"))
                }
                Fact::SmashSpace { smash, x, y } if profile.has(Closure::SmashIdeal) && (is(x) || is(y)) => {
                    Some((smash, "smash ideal"))
                }
                _ => None,
            };
            if let Some((space, reason)) = derived {
                self.derive(Fact::Member(space), reason)?;
            }
            i += 1;
        }
        Ok(())
    }

    /// Expand one decomposition certificate into cofiber and composition facts.
    fn certificate(&mut self, cert: &CertStmt) -> Result<(), ElabError> {
        let target_name = cert.target.to_string();
        let key = self
            .resolve(&cert.target)
            .ok_or_else(|| ElabError::Unresolved(target_name.clone()))?;
        let t = key.map;
        let slug = target_name.replace('(', ".").replace(')', "");
        let n = cert.cones.len();
        let cones = cert
            .cones
            .iter()
            .map(|c| self.resolve_space(c))
            .collect::<Result<Vec<_>, _>>()?;
        let stages = match key.kind {
            Kind::ConeLength => n - 1,
            Kind::Category => n,
        };
        let mut xs = vec![self.dom(t)];
        for k in 1..=stages {
            let x = match &cert.through {
                Some(through) => self.resolve_space(&through[k - 1])?,
                None => self.add_space(&format!("{slug}.stage{k}"), true),
            };
            xs.push(x);
        }
        if key.kind == Kind::ConeLength {
            xs.push(self.cod(t));
        }

        let reason = "decomposition certificate";
        let mut steps = Vec::with_capacity(n);
        for (i, &cone) in cones.iter().enumerate() {
            self.required.push((target_name.clone(), cone));
            let attach = self.generated_map(&format!("{slug}.cone{i}"), cone, xs[i])?;
            let step = self.generated_map(&format!("{slug}.step{i}"), xs[i], xs[i + 1])?;
            self.derive(Fact::Cofiber { f: attach, j: step, cone: xs[i + 1] }, reason)?;
            steps.push(step);
        }

        let last = n - 1;
        let mut chain = steps[0];
        for (k, &step) in steps.iter().enumerate().skip(1) {
            if key.kind == Kind::ConeLength && k == last {
                self.derive(Fact::Compose { h: t, g: step, f: chain }, reason)?;
                return Ok(());
            }
            let next = self.generated_map(&format!("{slug}.chain{}", k + 1), xs[0], xs[k + 1])?;
            self.derive(Fact::Compose { h: next, g: step, f: chain }, reason)?;
            chain = next;
        }
        match key.kind {
            Kind::ConeLength => {
                if chain != t {
                    self.derive(Fact::Homotopic(chain, t), reason)?;
                }
            }
            Kind::Category => {
                let top = xs[n];
                let y = self.cod(t);
                let last_map = self.generated_map(&format!("{slug}.final"), top, y)?;
                let section = self.generated_map(&format!("{slug}.section"), y, top)?;
                self.derive(Fact::Section { f: section, g: last_map }, reason)?;
                self.derive(Fact::Compose { h: t, g: last_map, f: chain }, reason)?;
                self.derive(Fact::Dominates { g: chain, f: t }, reason)?;
            }
        }
        Ok(())
    }
}

impl ShapeLookup for Elaborated {
    type Space = SpaceId;
    type Map = MapId;
    type FactRef = FactId;

    fn dom(&self, map: &MapId) -> SpaceId {
        Elaborated::dom(self, *map)
    }

    fn cod(&self, map: &MapId) -> SpaceId {
        Elaborated::cod(self, *map)
    }

    fn fact(&self, fact: &FactId) -> Option<ElabFact> {
        self.facts.get(fact.index()).map(|e| e.fact.clone())
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "space#{}", self.0)
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map#{}", self.0)
    }
}

impl fmt::Display for FactId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Elaborate a parsed scene.
///
/// ```
/// use conebound::scene::{elaborate, parse_scene, Fact};
///
/// let scene = parse_scene("collection C {}\nspace X, Y\nmap f : X -> Y").unwrap();
/// let elab = elaborate(&scene).unwrap();
/// let f = elab.map_id("f").unwrap();
/// let composites = elab
///     .facts()
///     .iter()
///     .filter(|e| matches!(e.fact, Fact::Compose { g, f: inner, .. } if g == f || inner == f))
///     .count();
/// assert_eq!(composites, 2);
/// ```
pub fn elaborate(scene: &Scene) -> Result<Elaborated, ElabError> {
    let mut e = Elaborated::empty(scene.collection.clone());
    for s in &scene.spaces {
        e.add_space(s, false);
    }
    for (name, (dom, cod)) in &scene.maps {
        let (dom, cod) = (e.resolve_space(dom)?, e.resolve_space(cod)?);
        e.add_map(name, dom, cod, MapRole::Declared);
    }
    e.derive(Fact::Contractible(SpaceId::POINT), "the point")?;
    e.derive(Fact::Member(SpaceId::POINT), "the point")?;

    // Facts naming other facts wait until every label has an id.
    let mut labels: HashMap<String, FactId> = HashMap::new();
    let (plain, referring): (Vec<_>, Vec<_>) = scene
        .facts
        .iter()
        .enumerate()
        .partition(|(_, s)| !s.fact.args().iter().any(|a| matches!(a, super::Arg::Fact(_))));
    for (index, stmt) in plain.into_iter().chain(referring) {
        let fact = stmt.fact.clone().try_map(
            |s| e.resolve_space(&s),
            |m| e.resolve_map(&m),
            |l| labels.get(&l).copied().ok_or(ElabError::Unresolved(l)),
        )?;
        let (id, _) = e.add_fact(fact, FactOrigin::Declared { index }, stmt.label.clone())?;
        if let Some(label) = &stmt.label {
            labels.insert(label.clone(), id);
        }
    }

    for b in &scene.bounds {
        let key = e
            .resolve(&b.inv)
            .ok_or_else(|| ElabError::Unresolved(b.inv.to_string()))?;
        e.bounds.push(Asserted { key, rel: b.rel, value: b.value });
    }
    for q in &scene.queries {
        let key = e.resolve(q).ok_or_else(|| ElabError::Unresolved(q.to_string()))?;
        e.queries.push(key);
    }
    for cert in &scene.certs {
        e.certificate(cert)?;
    }

    e.close()?;

    for (target, space) in std::mem::take(&mut e.required) {
        if e.member_fact(space).is_none() {
            return Err(ElabError::NotMember { target, space: e.space(space).name.clone() });
        }
    }
    Ok(e)
}
