//! Matching catalog rules against an elaborated scene.

use serde::Serialize;

use super::constraint::{Constraint, Term};
use super::RuleId;
use crate::ext::Fin;
use crate::key::{FactId, InvariantKey, Kind, MapId, SpaceId};
use crate::scene::{Elaborated, Fact};

/// One rule applied to particular facts, as a list of constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleInstance {
    pub rule: RuleId,
    /// Facts the instance was matched against.
    pub facts: Vec<FactId>,
    pub constraints: Vec<Constraint>,
}

impl RuleInstance {
    /// Whether every constraint yields a fixed bound, so firing once suffices.
    pub fn is_constant(&self) -> bool {
        self.constraints.iter().all(|c| match c {
            Constraint::AtMost { terms, .. } => terms.iter().all(|t| matches!(t, Term::Const(_))),
            Constraint::Unbounded { .. } => true,
            _ => false,
        })
    }
}

fn key(map: MapId, kind: Kind) -> InvariantKey {
    InvariantKey::new(map, kind)
}

fn at_most(target: InvariantKey, terms: Vec<Term>) -> Constraint {
    Constraint::AtMost { target, terms }
}

fn le(target: InvariantKey, bound: InvariantKey) -> Constraint {
    at_most(target, vec![Term::Key(bound)])
}

fn sum(target: InvariantKey, keys: &[InvariantKey]) -> Constraint {
    at_most(target, keys.iter().map(|&k| Term::Key(k)).collect())
}

fn le_max(target: InvariantKey, keys: &[InvariantKey]) -> Constraint {
    at_most(target, vec![Term::Max(keys.to_vec())])
}

fn le_const(target: InvariantKey, value: u64) -> Constraint {
    at_most(target, vec![Term::Const(Fin(value))])
}

fn when_equiv(e: &Elaborated, maps: &[MapId], then: Constraint) -> Constraint {
    let _ = e;
    Constraint::WhenZero {
        zero: maps.iter().map(|&m| InvariantKey::cone_length(m)).collect(),
        then: Box::new(then),
    }
}

/// Space invariants: `cl`, `cat`, `kl`, `kit`.
struct Spaces<'a>(&'a Elaborated);

impl Spaces<'_> {
    fn cl(&self, s: SpaceId) -> InvariantKey {
        InvariantKey::cone_length(self.0.init(s))
    }
    fn cat(&self, s: SpaceId) -> InvariantKey {
        InvariantKey::category(self.0.init(s))
    }
    fn kl(&self, s: SpaceId) -> InvariantKey {
        InvariantKey::cone_length(self.0.term(s))
    }
    fn kit(&self, s: SpaceId) -> InvariantKey {
        InvariantKey::category(self.0.term(s))
    }
    /// `cl`/`cat` for the given kind.
    fn start(&self, s: SpaceId, kind: Kind) -> InvariantKey {
        key(self.0.init(s), kind)
    }
    /// `kl`/`kit` for the given kind.
    fn kill(&self, s: SpaceId, kind: Kind) -> InvariantKey {
        key(self.0.term(s), kind)
    }
}

struct Builder<'a> {
    elab: &'a Elaborated,
    out: Vec<RuleInstance>,
}

impl Builder<'_> {
    fn push(&mut self, rule: RuleId, facts: Vec<FactId>, constraints: Vec<Constraint>) {
        self.out.push(RuleInstance { rule, facts, constraints });
    }

    /// One instance per matching fact, both kinds from `per_kind`.
    fn each_kind(
        &mut self,
        rule: RuleId,
        fact: FactId,
        mut per_kind: impl FnMut(Kind) -> Vec<Constraint>,
    ) {
        let constraints = Kind::BOTH.into_iter().flat_map(&mut per_kind).collect();
        self.push(rule, vec![fact], constraints);
    }
}

/// Every instance of every rule whose guard the scene's collection meets.
///
/// Instances come in catalog order, and within a rule in the order of the
/// facts, maps or spaces they match.
pub fn instantiate(elab: &Elaborated) -> Vec<RuleInstance> {
    let profile = elab.profile();
    let mut b = Builder { elab, out: Vec::new() };
    for &rule in RuleId::ALL {
        if rule.rule().applies(profile) {
            instances_of(&mut b, rule);
        }
    }
    b.out
}

fn instances_of(b: &mut Builder, rule: RuleId) {
    let e = b.elab;
    let sp = Spaces(e);
    let facts: Vec<(FactId, Fact<SpaceId, MapId, FactId>)> =
        e.fact_ids().map(|id| (id, e.fact(id).fact.clone())).collect();
    let plain_maps: Vec<MapId> = e.map_ids().filter(|&m| !e.map(m).is_canonical()).collect();

    match rule {
        RuleId::AxHtpy | RuleId::AxEqm => {
            for (id, fact) in &facts {
                let (f, g) = match (rule, fact) {
                    (RuleId::AxHtpy, Fact::Homotopic(f, g)) => (*f, *g),
                    (RuleId::AxEqm, Fact::EquivMaps(f, g)) => (*f, *g),
                    _ => continue,
                };
                b.each_kind(rule, *id, |k| vec![le(key(f, k), key(g, k)), le(key(g, k), key(f, k))]);
            }
        }
        RuleId::AxNorm => {
            for (id, fact) in &facts {
                if let Fact::Equiv(f) = fact {
                    b.each_kind(rule, *id, |k| vec![le_const(key(*f, k), 0)]);
                }
            }
        }
        RuleId::P7Eq => {
            for m in e.map_ids() {
                let c = Constraint::WhenZero {
                    zero: vec![InvariantKey::category(m)],
                    then: Box::new(le_const(InvariantKey::cone_length(m), 0)),
                };
                b.push(rule, vec![], vec![c]);
            }
        }
        RuleId::AxComp => {
            for (id, fact) in &facts {
                if let Fact::Compose { h, g, f } = fact {
                    b.each_kind(rule, *id, |k| vec![sum(key(*h, k), &[key(*f, k), key(*g, k)])]);
                }
            }
        }
        RuleId::AxMc => {
            for (id, fact) in &facts {
                if let Fact::Cofiber { f, j, .. } = fact {
                    if let Some(member) = e.member_fact(e.dom(*f)) {
                        b.push(rule, vec![*id, member], vec![le_const(InvariantKey::cone_length(*j), 1)]);
                    }
                }
            }
        }
        RuleId::AxDom => {
            for (id, fact) in &facts {
                if let Fact::Dominates { g, f } = fact {
                    let c = le(InvariantKey::category(*f), InvariantKey::category(*g));
                    b.push(rule, vec![*id], vec![c]);
                }
            }
        }
        RuleId::RelCl => {
            for m in e.map_ids() {
                let c = le(InvariantKey::category(m), InvariantKey::cone_length(m));
                b.push(rule, vec![], vec![c]);
            }
        }
        RuleId::RelPi0 => {
            for (id, fact) in &facts {
                if let Fact::Pi0NotOnto(f) = fact {
                    b.each_kind(rule, *id, |k| vec![Constraint::Unbounded { target: key(*f, k) }]);
                }
            }
        }
        RuleId::RelMem => {
            for (id, fact) in &facts {
                if let Fact::Member(a) = fact {
                    b.push(rule, vec![*id], vec![le_const(sp.kl(*a), 1)]);
                }
            }
        }
        RuleId::RelAll => {
            for s in e.space_ids() {
                b.push(rule, vec![], vec![le_const(sp.kl(s), 1), le_const(sp.kit(s), 1)]);
            }
        }
        RuleId::T32 | RuleId::T32W | RuleId::T32S | RuleId::C34 | RuleId::C34Nc => {
            for (id, fact) in &facts {
                let Fact::PushoutMap { a, b: bm, c, d, .. } = *fact else { continue };
                b.each_kind(rule, *id, |k| {
                    let (ka, kb, kc, kd) = (key(a, k), key(bm, k), key(c, k), key(d, k));
                    vec![match rule {
                        RuleId::T32 => at_most(kd, vec![Term::Key(ka), Term::Max(vec![kb, kc])]),
                        RuleId::T32W => when_equiv(e, &[a], le_max(kd, &[kb, kc])),
                        RuleId::T32S => when_equiv(e, &[bm, c], le(kd, ka)),
                        RuleId::C34 => sum(kd, &[ka, kb, kc]),
                        _ => when_equiv(e, &[a], sum(kd, &[kb, kc])),
                    }]
                });
            }
        }
        RuleId::C41Leg => {
            for (id, fact) in &facts {
                let Fact::Pushout { f, g, ib, ic, .. } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![le(key(ib, k), key(g, k))]);
                b.each_kind(rule, *id, |k| vec![le(key(ic, k), key(f, k))]);
            }
        }
        RuleId::C41Diag => {
            for (id, fact) in &facts {
                let Fact::Pushout { f, g, diag, .. } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![le_max(key(diag, k), &[key(f, k), key(g, k)])]);
            }
        }
        RuleId::C42 => {
            for (id, fact) in &facts {
                let Fact::Pushout { f, g, ib, .. } = *fact else { continue };
                let (a, pb, pc, d) = (e.dom(f), e.cod(f), e.cod(g), e.cod(ib));
                b.each_kind(rule, *id, |k| {
                    let start = |s| sp.start(s, k);
                    let kill = |s| sp.kill(s, k);
                    vec![
                        at_most(start(d), vec![Term::Key(start(a)), Term::Max(vec![start(pb), start(pc)])]),
                        at_most(kill(d), vec![Term::Key(kill(a)), Term::Max(vec![kill(pb), kill(pc)])]),
                    ]
                });
            }
        }
        RuleId::C44Cone | RuleId::C44Quotient | RuleId::C44Sum | RuleId::C44Kill => {
            for (id, fact) in &facts {
                let Fact::Cofiber { f, j, cone } = *fact else { continue };
                let (a, x) = (e.dom(f), e.cod(f));
                b.each_kind(rule, *id, |k| {
                    vec![match rule {
                        RuleId::C44Cone => le(sp.start(cone, k), key(f, k)),
                        RuleId::C44Quotient => le(key(j, k), sp.kill(a, k)),
                        RuleId::C44Sum => sum(sp.start(cone, k), &[sp.kill(a, k), sp.start(x, k)]),
                        _ => sum(sp.kill(x, k), &[sp.kill(a, k), sp.kill(cone, k)]),
                    }]
                });
            }
        }
        RuleId::C46 => {
            for (id, fact) in &facts {
                let Fact::CofiberMap { alpha, beta, gamma, .. } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![sum(key(gamma, k), &[key(alpha, k), key(beta, k)])]);
            }
        }
        RuleId::C48 => {
            for (id, fact) in &facts {
                let Fact::SuspSpace { susp, base } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![le(sp.start(susp, k), sp.kill(base, k))]);
            }
        }
        RuleId::C410Map => {
            for &f in &plain_maps {
                let (a, c) = (e.dom(f), e.cod(f));
                let constraints = Kind::BOTH
                    .into_iter()
                    .map(|k| sum(key(f, k), &[sp.start(a, k), sp.start(c, k)]))
                    .collect();
                b.push(rule, vec![], constraints);
            }
        }
        RuleId::C410Space => {
            for s in e.space_ids() {
                let constraints = Kind::BOTH
                    .into_iter()
                    .map(|k| le(sp.kill(s, k), sp.start(s, k)))
                    .collect();
                b.push(rule, vec![], constraints);
            }
        }
        RuleId::C410Cancel => {
            for (id, fact) in &facts {
                let Fact::Compose { h, g, f } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![sum(key(g, k), &[key(f, k), key(h, k)])]);
            }
        }
        RuleId::C410Retract => {
            for (id, fact) in &facts {
                let Fact::Section { g, .. } = *fact else { continue };
                let c = le(InvariantKey::category(g), sp.cat(e.dom(g)));
                b.push(rule, vec![*id], vec![c]);
            }
        }
        RuleId::C410Section => {
            for (id, fact) in &facts {
                let Fact::Section { f, g } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![le(key(g, k), key(f, k))]);
            }
        }
        RuleId::C411 => {
            for &f in &plain_maps {
                let (a, c) = (e.dom(f), e.cod(f));
                let mut constraints = Vec::new();
                for k in Kind::BOTH {
                    let target = key(f, k);
                    let monus = |minuend, subtrahend| Constraint::AtLeastMonus { target, minuend, subtrahend };
                    constraints.push(monus(sp.kill(a, k), sp.kill(c, k)));
                    constraints.push(monus(sp.kill(c, k), sp.kill(a, k)));
                    constraints.push(monus(sp.start(c, k), sp.start(a, k)));
                }
                b.push(rule, vec![], constraints);
            }
        }
        RuleId::T51 => {
            for (id, fact) in &facts {
                let Fact::ProductMap { h, f, g } = *fact else { continue };
                let spread = Term::Max(vec![sp.cl(e.dom(f)), sp.cl(e.dom(g))]);
                b.each_kind(rule, *id, |k| {
                    vec![at_most(
                        key(h, k),
                        vec![Term::Key(key(f, k)), Term::Key(key(g, k)), spread.clone()],
                    )]
                });
            }
        }
        RuleId::C52 => {
            for (id, fact) in &facts {
                let Fact::ProductSpace { product, x, y } = *fact else { continue };
                let spread = Term::Max(vec![sp.cl(x), sp.cl(y)]);
                b.each_kind(rule, *id, |k| {
                    vec![
                        sum(sp.start(product, k), &[sp.start(x, k), sp.start(y, k)]),
                        at_most(
                            sp.kill(product, k),
                            vec![Term::Key(sp.kill(x, k)), Term::Key(sp.kill(y, k)), spread.clone()],
                        ),
                    ]
                });
            }
        }
        RuleId::P54 => {
            for (id, fact) in &facts {
                let Fact::ProductSpace { product, x, y } = *fact else { continue };
                b.each_kind(rule, *id, |k| vec![sum(sp.kill(product, k), &[sp.kill(x, k), sp.kill(y, k)])]);
            }
        }
        RuleId::P54Smash => {
            for (id, fact) in &facts {
                let Fact::SmashSpace { smash, x, y } = *fact else { continue };
                let c = at_most(sp.kl(smash), vec![Term::Min(vec![sp.kl(x), sp.kl(y)])]);
                b.push(rule, vec![*id], vec![c]);
            }
        }
        RuleId::L61 => {
            for (id, fact) in &facts {
                let Fact::Projection { p, factor } = *fact else { continue };
                let Some(member) = e.member_fact(factor) else { continue };
                let base = e.cod(p);
                let constraints = Kind::BOTH
                    .into_iter()
                    .map(|k| at_most(key(p, k), vec![Term::Key(sp.start(base, k)), Term::Const(Fin(1))]))
                    .collect();
                b.push(rule, vec![*id, member], constraints);
            }
        }
        RuleId::T62 => {
            for (id, fact) in &facts {
                let Fact::Pullback { ab, cd, fiber, .. } = *fact else { continue };
                b.each_kind(rule, *id, |k| {
                    vec![Constraint::ScaledSucc {
                        target: key(ab, k),
                        factor: key(cd, k),
                        succ: sp.start(fiber, k),
                    }]
                });
            }
        }
        RuleId::C63 => {
            for (id, fact) in &facts {
                let Fact::Fibration { p, fiber } = *fact else { continue };
                let (total, base) = (e.dom(p), e.cod(p));
                b.each_kind(rule, *id, |k| {
                    vec![Constraint::SuccProduct {
                        target: sp.start(total, k),
                        left: sp.start(base, k),
                        right: sp.start(fiber, k),
                    }]
                });
            }
        }
        RuleId::P72Cone => {
            for (id, fact) in &facts {
                let Fact::WedgeMap { w, f, g } = *fact else { continue };
                let c = le_max(InvariantKey::cone_length(w), &[InvariantKey::cone_length(f), InvariantKey::cone_length(g)]);
                b.push(rule, vec![*id], vec![c]);
            }
        }
        RuleId::P72Cat => {
            for (id, fact) in &facts {
                let Fact::WedgeMap { w, f, g } = *fact else { continue };
                let c = InvariantKey::category;
                max_equality(b, rule, *id, c(w), c(f), c(g));
            }
        }
        RuleId::C73 => {
            for (id, fact) in &facts {
                let Fact::Null(f) = *fact else { continue };
                let (x, y) = (e.dom(f), e.cod(f));
                let (whole, left, right) = (InvariantKey::category(f), sp.kit(x), sp.cat(y));
                let cone = le_max(InvariantKey::cone_length(f), &[sp.kl(x), sp.cl(y)]);
                let start = b.out.len();
                max_equality(b, rule, *id, whole, left, right);
                b.out[start].constraints.insert(0, cone);
            }
        }
    }
}

/// `whole = max(left, right)`, as two instances: one per operand that may
/// attain the maximum.
fn max_equality(
    b: &mut Builder,
    rule: RuleId,
    fact: FactId,
    whole: InvariantKey,
    left: InvariantKey,
    right: InvariantKey,
) {
    b.push(
        rule,
        vec![fact],
        vec![
            le_max(whole, &[left, right]),
            Constraint::AtLeastMax { target: whole, sources: vec![left, right] },
            le(left, whole),
            Constraint::ArgMax { target: left, rival: right, whole },
        ],
    );
    b.push(
        rule,
        vec![fact],
        vec![le(right, whole), Constraint::ArgMax { target: right, rival: left, whole }],
    );
}
