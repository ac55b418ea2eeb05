//! Saturation: firing rule instances against the bound store until nothing
//! tightens.

mod explain;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::ext::{ExtNat, Fin, Inf};
use crate::interval::Interval;
use crate::key::{InvariantKey, Side};
use crate::rules::{instantiate, RuleId, RuleInstance};
use crate::scene::{Elaborated, Rel};
use crate::store::{BoundStore, BoundView, JustId, Origin, Premise, Tighten};

pub use explain::{explain, verify_tree, DerivationTree, ExplainError};

/// Caps that keep a run from spinning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_rounds: usize,
    /// Largest finite lower bound a rule may derive.
    pub max_finite: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rounds: 10_000,
            max_finite: 65_536,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub limits: Limits,
    /// Derive lower bounds by rearranging sums and products.
    pub rearrange: bool,
    /// Processing order of rule instances, as a permutation of their indices.
    pub order: Option<Vec<usize>>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            limits: Limits::default(),
            rearrange: true,
            order: None,
        }
    }
}

/// A key whose lower bound ended above its upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub key: InvariantKey,
    pub lower: ExtNat,
    pub upper: ExtNat,
    pub lower_source: JustId,
    pub upper_source: JustId,
    /// Nodes in the two derivation trees together.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "limit", rename_all = "snake_case")]
pub enum Exhaustion {
    Rounds { rounds: usize },
    Finite { key: InvariantKey, value: ExtNat },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub exhausted: Exhaustion,
    /// Keys that changed during the last round: the part still moving.
    pub active: Vec<InvariantKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Fixpoint,
    Contradiction(Contradiction),
    BudgetExhausted(Budget),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Fixpoint => "fixpoint",
            Status::Contradiction(_) => "contradiction",
            Status::BudgetExhausted(_) => "budget_exhausted",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub store: BoundStore,
    pub status: Status,
    pub rounds: usize,
    /// Store changes made by rule instances after seeding.
    pub firings: usize,
    pub instances: Vec<RuleInstance>,
    pub rearrange: bool,
}

/// Saturate with default options.
pub fn saturate(elab: &Elaborated) -> SaturationResult {
    saturate_with(elab, &Options::default())
}

/// Apply the asserted bounds, then fire rule instances round by round.
///
/// Round one fires every instance; later rounds fire only the instances that
/// read a key changed in the round before. A contradiction does not stop the
/// run: the poisoned store is still saturated, so the outcome is the same in
/// every processing order.
///
/// ```
/// use conebound::engine::saturate;
/// use conebound::scene::{elaborate, parse_scene};
///
/// let scene = parse_scene("collection Empty {}").unwrap();
/// let result = saturate(&elaborate(&scene).unwrap());
/// assert_eq!(result.status.name(), "fixpoint");
/// assert_eq!((result.rounds, result.firings), (1, 0));
/// ```
pub fn saturate_with(elab: &Elaborated, options: &Options) -> SaturationResult {
    let instances = instantiate(elab);
    let order: Vec<usize> = match &options.order {
        Some(order) => {
            assert_eq!(order.len(), instances.len(), "order must permute the instances");
            order.clone()
        }
        None => (0..instances.len()).collect(),
    };
    let mut rank = vec![0; instances.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }

    let mut readers: HashMap<InvariantKey, Vec<usize>> = HashMap::new();
    for (i, inst) in instances.iter().enumerate() {
        let keys: BTreeSet<InvariantKey> = inst.constraints.iter().flat_map(|c| c.reads()).collect();
        for key in keys {
            readers.entry(key).or_default().push(i);
        }
    }

    let mut run = Run {
        store: BoundStore::new(elab.maps().len()),
        instances: &instances,
        rearrange: options.rearrange,
        max_finite: options.limits.max_finite,
        changed: BTreeSet::new(),
        tripped: None,
    };

    for (index, a) in elab.bounds().iter().enumerate() {
        let origin = Origin::Asserted { bound: index };
        if matches!(a.rel, Rel::AtLeast | Rel::Equal) {
            run.record(a.key, Side::Lo, a.value, origin.clone(), Vec::new(), Vec::new());
        }
        if matches!(a.rel, Rel::AtMost | Rel::Equal) {
            run.record(a.key, Side::Hi, a.value, origin, Vec::new(), Vec::new());
        }
    }
    for &i in &order {
        if instances[i].is_constant() {
            run.fire(i);
        }
    }
    run.changed.clear();
    run.tripped = None;

    let mut dirty: Vec<usize> = order.iter().copied().filter(|&i| !instances[i].is_constant()).collect();
    let mut rounds = 0;
    let mut firings = 0;
    let mut budget = None;
    loop {
        if rounds == options.limits.max_rounds {
            budget = Some(Budget {
                exhausted: Exhaustion::Rounds { rounds },
                active: dirty_keys(&instances, &dirty),
            });
            break;
        }
        rounds += 1;
        let before = run.store.log().len();
        for &i in &dirty {
            run.fire(i);
            if run.tripped.is_some() {
                break;
            }
        }
        firings += run.store.log().len() - before;
        if let Some(exhausted) = run.tripped.take() {
            budget = Some(Budget {
                exhausted,
                active: run.changed.iter().copied().collect(),
            });
            break;
        }
        if run.changed.is_empty() {
            break;
        }
        let mut next: Vec<usize> = run
            .changed
            .iter()
            .flat_map(|k| readers.get(k).into_iter().flatten().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        next.sort_by_key(|&i| rank[i]);
        dirty = next;
        run.changed.clear();
    }

    let store = run.store;
    let status = match pick_contradiction(&store) {
        Some(c) => Status::Contradiction(c),
        None => match budget {
            Some(b) => Status::BudgetExhausted(b),
            None => Status::Fixpoint,
        },
    };
    SaturationResult {
        store,
        status,
        rounds,
        firings,
        instances,
        rearrange: options.rearrange,
    }
}

fn dirty_keys(instances: &[RuleInstance], dirty: &[usize]) -> Vec<InvariantKey> {
    let keys: BTreeSet<InvariantKey> = dirty
        .iter()
        .flat_map(|&i| instances[i].constraints.iter().flat_map(|c| c.writes()))
        .collect();
    keys.into_iter().collect()
}

struct Run<'a> {
    store: BoundStore,
    instances: &'a [RuleInstance],
    rearrange: bool,
    max_finite: u64,
    changed: BTreeSet<InvariantKey>,
    tripped: Option<Exhaustion>,
}

impl Run<'_> {
    fn fire(&mut self, index: usize) {
        let inst = &self.instances[index];
        for (ci, constraint) in inst.constraints.iter().enumerate() {
            let derived: Vec<_> = constraint
                .evaluate(&self.store, self.rearrange)
                .into_iter()
                .map(|d| {
                    let premises: Vec<Premise> = d
                        .reads
                        .iter()
                        .map(|&(key, side)| Premise {
                            key,
                            side,
                            value: self.store.get(key, side),
                            source: self.store.source(key, side),
                        })
                        .collect();
                    (d, premises)
                })
                .collect();
            for (d, premises) in derived {
                if !self.store.improves(d.key, d.side, d.value) {
                    continue;
                }
                if d.side == Side::Lo && matches!(d.value, Fin(v) if v > self.max_finite) {
                    self.tripped = Some(Exhaustion::Finite { key: d.key, value: d.value });
                    return;
                }
                let origin = Origin::Rule {
                    rule: inst.rule,
                    instance: index,
                    constraint: ci,
                };
                self.record(d.key, d.side, d.value, origin, inst.facts.clone(), premises);
            }
        }
    }

    fn record(
        &mut self,
        key: InvariantKey,
        side: Side,
        value: ExtNat,
        origin: Origin,
        facts: Vec<crate::key::FactId>,
        premises: Vec<Premise>,
    ) {
        let just = crate::store::Justification { key, side, value, origin, facts, premises };
        if self.store.tighten(just) != Tighten::Unchanged {
            self.changed.insert(key);
        }
    }
}

/// The poisoned key with the smallest pair of derivation trees.
fn pick_contradiction(store: &BoundStore) -> Option<Contradiction> {
    let mut sizes = HashMap::new();
    store
        .poisoned()
        .map(|key| {
            let lower_source = store.source(key, Side::Lo).expect("raised lower bound");
            let upper_source = store.source(key, Side::Hi).expect("lowered upper bound");
            let nodes = explain::tree_size(store, lower_source, &mut sizes)
                .saturating_add(explain::tree_size(store, upper_source, &mut sizes));
            let (lower, upper) = store.bounds(key);
            Contradiction { key, lower, upper, lower_source, upper_source, nodes }
        })
        .min_by_key(|c| (c.nodes, c.key))
}

/// How a side of a queried interval was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "by", content = "rule", rename_all = "snake_case")]
pub enum Tightness {
    Default,
    Asserted,
    Derived(RuleId),
}

impl fmt::Display for Tightness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tightness::Default => f.write_str("default"),
            Tightness::Asserted => f.write_str("asserted"),
            Tightness::Derived(rule) => write!(f, "derived({rule})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub key: InvariantKey,
    pub lo: ExtNat,
    pub hi: ExtNat,
    /// `None` when the key is poisoned.
    pub interval: Option<Interval>,
    pub status: &'static str,
    pub lo_tightness: Tightness,
    pub hi_tightness: Tightness,
}

impl SaturationResult {
    pub fn tightness(&self, key: InvariantKey, side: Side) -> Tightness {
        match self.store.source(key, side) {
            None => Tightness::Default,
            Some(id) => match self.store.justification(id).origin {
                Origin::Asserted { .. } => Tightness::Asserted,
                Origin::Rule { rule, .. } => Tightness::Derived(rule),
            },
        }
    }

    /// Whether another full pass over every instance would change nothing.
    pub fn is_stable(&self) -> bool {
        let mut run = Run {
            store: self.store.clone(),
            instances: &self.instances,
            rearrange: self.rearrange,
            max_finite: u64::MAX,
            changed: BTreeSet::new(),
            tripped: None,
        };
        for i in 0..self.instances.len() {
            run.fire(i);
        }
        run.changed.is_empty()
    }
}

/// The stored interval for `key` and how each side got there.
///
/// ```
/// use conebound::engine::{query, saturate, Tightness};
/// use conebound::scene::{elaborate, parse_inv, parse_scene};
///
/// let elab = elaborate(&parse_scene("collection C { all }\nspace X").unwrap()).unwrap();
/// let result = saturate(&elab);
/// let point = elab.resolve(&parse_inv("cl(*)").unwrap()).unwrap();
/// let answer = query(&result, point);
/// assert_eq!(answer.interval.unwrap().to_string(), "[0, 0]");
/// assert_eq!(answer.hi_tightness, Tightness::Derived("AX-NORM".parse().unwrap()));
/// ```
pub fn query(result: &SaturationResult, key: InvariantKey) -> Answer {
    let (lo, hi) = result.store.bounds(key);
    Answer {
        key,
        lo,
        hi,
        interval: result.store.interval(key),
        status: result.status.name(),
        lo_tightness: result.tightness(key, Side::Lo),
        hi_tightness: result.tightness(key, Side::Hi),
    }
}

/// The value `side` takes on a fresh key.
pub fn default_value(side: Side) -> ExtNat {
    match side {
        Side::Lo => Fin(0),
        Side::Hi => Inf,
    }
}
