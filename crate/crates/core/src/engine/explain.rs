//! Derivation trees: why a bound holds, back to asserted bounds and facts.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::{default_value, SaturationResult, Status};
use crate::ext::ExtNat;
use crate::key::{FactId, InvariantKey, Side};
use crate::rules::RuleId;
use crate::scene::Elaborated;
use crate::store::{BoundStore, BoundView, JustId, Origin};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum DerivationTree {
    /// A side nothing has tightened.
    Default { key: InvariantKey, side: Side, value: ExtNat },
    Fact { fact: FactId },
    Asserted {
        key: InvariantKey,
        side: Side,
        value: ExtNat,
        bound: usize,
    },
    Rule {
        key: InvariantKey,
        side: Side,
        value: ExtNat,
        rule: RuleId,
        instance: usize,
        constraint: usize,
        premises: Vec<DerivationTree>,
        facts: Vec<DerivationTree>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExplainError {
    #[error("saturation stopped early, so {0} may not be final")]
    Incomplete(String),
}

impl DerivationTree {
    /// The tree establishing the justification `id`.
    pub fn build(store: &BoundStore, id: JustId) -> DerivationTree {
        let just = store.justification(id);
        match just.origin {
            Origin::Asserted { bound } => DerivationTree::Asserted {
                key: just.key,
                side: just.side,
                value: just.value,
                bound,
            },
            Origin::Rule { rule, instance, constraint } => DerivationTree::Rule {
                key: just.key,
                side: just.side,
                value: just.value,
                rule,
                instance,
                constraint,
                premises: just
                    .premises
                    .iter()
                    .map(|p| match p.source {
                        Some(source) => DerivationTree::build(store, source),
                        None => DerivationTree::Default {
                            key: p.key,
                            side: p.side,
                            value: p.value,
                        },
                    })
                    .collect(),
                facts: just.facts.iter().map(|&fact| DerivationTree::Fact { fact }).collect(),
            },
        }
    }

    pub fn value(&self) -> Option<(InvariantKey, Side, ExtNat)> {
        match *self {
            DerivationTree::Fact { .. } => None,
            DerivationTree::Default { key, side, value }
            | DerivationTree::Asserted { key, side, value, .. }
            | DerivationTree::Rule { key, side, value, .. } => Some((key, side, value)),
        }
    }

    fn children(&self) -> impl Iterator<Item = &DerivationTree> {
        let (premises, facts): (&[DerivationTree], &[DerivationTree]) = match self {
            DerivationTree::Rule { premises, facts, .. } => (premises, facts),
            _ => (&[], &[]),
        };
        premises.iter().chain(facts)
    }

    pub fn nodes(&self) -> usize {
        1 + self.children().map(DerivationTree::nodes).sum::<usize>()
    }

    /// Rules cited anywhere in the tree.
    pub fn rules(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let DerivationTree::Rule { rule, .. } = t {
                out.insert(*rule);
            }
        });
        out
    }

    /// Facts at the leaves, in order of first appearance.
    pub fn fact_leaves(&self) -> Vec<FactId> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let DerivationTree::Fact { fact } = t {
                if !out.contains(fact) {
                    out.push(*fact);
                }
            }
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a DerivationTree)) {
        visit(self);
        for child in self.children() {
            child.walk(visit);
        }
    }

    /// Indented text, one node per line.
    pub fn render(&self, elab: &Elaborated) -> String {
        let mut out = String::new();
        self.render_into(elab, 0, &mut out);
        out
    }

    fn render_into(&self, elab: &Elaborated, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let bound = |key, side: Side, value| {
            let op = match side {
                Side::Lo => ">=",
                Side::Hi => "<=",
            };
            format!("{} {op} {value}", elab.key_name(key))
        };
        match *self {
            DerivationTree::Default { key, .. } => {
                writeln!(out, "{pad}{} default [0, inf]", elab.key_name(key)).unwrap()
            }
            DerivationTree::Fact { fact } => writeln!(out, "{pad}fact {}", elab.fact_text(fact)).unwrap(),
            DerivationTree::Asserted { key, side, value, .. } => {
                writeln!(out, "{pad}{}  [asserted]", bound(key, side, value)).unwrap()
            }
            DerivationTree::Rule { key, side, value, rule, .. } => {
                writeln!(out, "{pad}{}  [{rule}]", bound(key, side, value)).unwrap()
            }
        }
        for child in self.children() {
            child.render_into(elab, depth + 1, out);
        }
    }

    /// JSON with invariants and facts spelled by name.
    pub fn to_json(&self, elab: &Elaborated) -> Value {
        match *self {
            DerivationTree::Default { key, side, value } => json!({
                "node": "default", "key": elab.key_name(key), "side": side, "value": value,
            }),
            DerivationTree::Fact { fact } => json!({ "node": "fact", "fact": elab.fact_text(fact) }),
            DerivationTree::Asserted { key, side, value, .. } => json!({
                "node": "asserted", "key": elab.key_name(key), "side": side, "value": value,
            }),
            DerivationTree::Rule { key, side, value, rule, .. } => json!({
                "node": "rule",
                "rule": rule,
                "key": elab.key_name(key),
                "side": side,
                "value": value,
                "children": self.children().map(|c| c.to_json(elab)).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Tree nodes behind justification `id`, counting shared subtrees each time.
pub(super) fn tree_size(store: &BoundStore, id: JustId, memo: &mut HashMap<JustId, u64>) -> u64 {
    if let Some(&n) = memo.get(&id) {
        return n;
    }
    let just = store.justification(id);
    let mut n = 1 + just.facts.len() as u64;
    for p in &just.premises {
        let sub = match p.source {
            Some(source) => tree_size(store, source, memo),
            None => 1,
        };
        n = n.saturating_add(sub);
    }
    memo.insert(id, n);
    n
}

/// The derivation of the final value of `side(key)`.
///
/// A side still at its default is a single [`DerivationTree::Default`] leaf.
pub fn explain(
    result: &SaturationResult,
    key: InvariantKey,
    side: Side,
) -> Result<DerivationTree, ExplainError> {
    if let Status::BudgetExhausted(_) = result.status {
        return Err(ExplainError::Incomplete(format!("{side} of key {}", key.slot())));
    }
    Ok(match result.store.source(key, side) {
        Some(id) => DerivationTree::build(&result.store, id),
        None => DerivationTree::Default {
            key,
            side,
            value: default_value(side),
        },
    })
}

struct PremiseView(HashMap<(InvariantKey, Side), ExtNat>);

impl BoundView for PremiseView {
    fn lo(&self, key: InvariantKey) -> ExtNat {
        self.0.get(&(key, Side::Lo)).copied().unwrap_or(default_value(Side::Lo))
    }

    fn hi(&self, key: InvariantKey) -> ExtNat {
        self.0.get(&(key, Side::Hi)).copied().unwrap_or(default_value(Side::Hi))
    }
}

/// Re-fire every rule node on its premises' values and check that it
/// reproduces the node's value.
pub fn verify_tree(result: &SaturationResult, tree: &DerivationTree) -> Result<(), String> {
    if let DerivationTree::Rule { key, side, value, rule, instance, constraint, premises, .. } = tree {
        let view = PremiseView(premises.iter().filter_map(|p| p.value()).map(|(k, s, v)| ((k, s), v)).collect());
        let inst = &result.instances[*instance];
        let reproduced = inst.constraints[*constraint]
            .evaluate(&view, result.rearrange)
            .into_iter()
            .any(|d| d.key == *key && d.side == *side && d.value == *value);
        if inst.rule != *rule || !reproduced {
            return Err(format!("{rule} instance {instance} does not reproduce {side} {value} for key {}", key.slot()));
        }
    }
    tree.children().try_for_each(|c| verify_tree(result, c))
}
