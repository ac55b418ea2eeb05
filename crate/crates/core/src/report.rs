//! Text and JSON renderings of a saturation run.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::engine::{explain, Budget, Exhaustion, SaturationResult, Status, Tightness};
use crate::ext::ExtNat;
use crate::key::{InvariantKey, Side};
use crate::scene::Elaborated;

/// The keys a report lists: the scene's queries, or else every key with a
/// bound tighter than `[0, ∞]`.
pub fn report_keys(elab: &Elaborated, result: &SaturationResult) -> Vec<InvariantKey> {
    if !elab.queries().is_empty() {
        return elab.queries().to_vec();
    }
    result
        .store
        .keys()
        .filter(|&k| result.store.source(k, Side::Lo).is_some() || result.store.source(k, Side::Hi).is_some())
        .collect()
}

fn rule_name(t: Tightness) -> String {
    match t {
        Tightness::Default => "default".into(),
        Tightness::Asserted => "asserted".into(),
        Tightness::Derived(rule) => rule.to_string(),
    }
}

fn bound_json(result: &SaturationResult, key: InvariantKey) -> Value {
    let (lo, hi) = result.store.bounds(key);
    json!({
        "lo": lo,
        "hi": hi,
        "lo_rule": rule_name(result.tightness(key, Side::Lo)),
        "hi_rule": rule_name(result.tightness(key, Side::Hi)),
    })
}

fn chain_json(elab: &Elaborated, result: &SaturationResult, key: InvariantKey, side: Side) -> Value {
    explain(result, key, side).map_or(Value::Null, |t| t.to_json(elab))
}

/// `{status, rounds, bounds, contradiction?, budget?}`.
///
/// ```
/// use conebound::engine::saturate;
/// use conebound::report::{json_report, report_keys};
/// use conebound::scene::{elaborate, parse_scene};
///
/// let text = "collection H { all }\nspace B, E, F\nmap p : E -> B\nfact fibration(p, F)\n\
///             bound cl(B) = 1\nbound cl(F) = 1\nquery cl(E)";
/// let elab = elaborate(&parse_scene(text).unwrap()).unwrap();
/// let result = saturate(&elab);
/// let report = json_report(&elab, &result, &report_keys(&elab, &result));
/// assert_eq!(report["bounds"]["cl(E)"]["hi"], 3);
/// assert_eq!(report["bounds"]["cl(E)"]["hi_rule"], "C63");
/// assert_eq!(report["bounds"]["cl(E)"]["lo_rule"], "default");
/// ```
pub fn json_report(elab: &Elaborated, result: &SaturationResult, keys: &[InvariantKey]) -> Value {
    let mut bounds = Map::new();
    for &key in keys {
        bounds.insert(elab.key_name(key), bound_json(result, key));
    }
    let mut out = Map::new();
    out.insert("status".into(), json!(result.status.name()));
    out.insert("rounds".into(), json!(result.rounds));
    out.insert("bounds".into(), Value::Object(bounds));
    match &result.status {
        Status::Fixpoint => {}
        Status::Contradiction(c) => {
            out.insert(
                "contradiction".into(),
                json!({
                    "key": elab.key_name(c.key),
                    "lower": c.lower,
                    "upper": c.upper,
                    "lower_chain": chain_json(elab, result, c.key, Side::Lo),
                    "upper_chain": chain_json(elab, result, c.key, Side::Hi),
                }),
            );
        }
        Status::BudgetExhausted(b) => {
            out.insert("budget".into(), budget_json(elab, b));
        }
    }
    Value::Object(out)
}

fn budget_json(elab: &Elaborated, b: &Budget) -> Value {
    let active: Vec<String> = b.active.iter().map(|&k| elab.key_name(k)).collect();
    match &b.exhausted {
        Exhaustion::Rounds { rounds } => json!({ "limit": "max_rounds", "rounds": rounds, "active": active }),
        Exhaustion::Finite { key, value } => json!({
            "limit": "max_finite",
            "key": elab.key_name(*key),
            "value": value,
            "active": active,
        }),
    }
}

/// One line per key: `name = [lo, hi]   lo: rule   hi: rule`.
pub fn bound_line(elab: &Elaborated, result: &SaturationResult, key: InvariantKey) -> String {
    let (lo, hi) = result.store.bounds(key);
    let mut line = format!(
        "{} = [{lo}, {hi}]   lo: {}   hi: {}",
        elab.key_name(key),
        rule_name(result.tightness(key, Side::Lo)),
        rule_name(result.tightness(key, Side::Hi)),
    );
    if lo > hi {
        line.push_str("   (empty)");
    }
    line
}

fn side_word(side: Side, value: ExtNat) -> String {
    match side {
        Side::Lo => format!("lower bound {value}"),
        Side::Hi => format!("upper bound {value}"),
    }
}

pub fn text_report(elab: &Elaborated, result: &SaturationResult, keys: &[InvariantKey]) -> String {
    let mut out = String::new();
    writeln!(out, "status: {} after {} rounds", result.status, result.rounds).unwrap();
    for &key in keys {
        writeln!(out, "{}", bound_line(elab, result, key)).unwrap();
    }
    match &result.status {
        Status::Fixpoint => {}
        Status::Contradiction(c) => {
            writeln!(
                out,
                "contradiction on {}: {} exceeds {}",
                elab.key_name(c.key),
                side_word(Side::Lo, c.lower),
                side_word(Side::Hi, c.upper)
            )
            .unwrap();
            for side in [Side::Lo, Side::Hi] {
                let value = if side == Side::Lo { c.lower } else { c.upper };
                writeln!(out, "{}:", side_word(side, value)).unwrap();
                if let Ok(tree) = explain(result, c.key, side) {
                    for line in tree.render(elab).lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                }
            }
        }
        Status::BudgetExhausted(b) => {
            match &b.exhausted {
                Exhaustion::Rounds { rounds } => writeln!(out, "budget: stopped after {rounds} rounds").unwrap(),
                Exhaustion::Finite { key, value } => writeln!(
                    out,
                    "budget: lower bound {value} on {} exceeds the finite cap",
                    elab.key_name(*key)
                )
                .unwrap(),
            }
            let active: Vec<String> = b.active.iter().map(|&k| elab.key_name(k)).collect();
            writeln!(out, "still moving: {}", active.join(", ")).unwrap();
        }
    }
    out
}
