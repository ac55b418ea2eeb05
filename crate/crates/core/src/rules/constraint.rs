//! Constraint forms and their evaluation against current bounds.
//!
//! A constraint states one inequality. Evaluating it yields the bound it
//! implies directly and, when rearrangement is on, the lower bounds that
//! follow by moving terms across the inequality.

use serde::Serialize;

use crate::ext::{ExtNat, Fin, Inf};
use crate::key::{InvariantKey, Side};
use crate::store::BoundView;

/// A summand on the right of an upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Term {
    Key(InvariantKey),
    Const(ExtNat),
    Max(Vec<InvariantKey>),
    Min(Vec<InvariantKey>),
}

impl Term {
    fn keys(&self) -> &[InvariantKey] {
        match self {
            Term::Key(k) => std::slice::from_ref(k),
            Term::Const(_) => &[],
            Term::Max(ks) | Term::Min(ks) => ks,
        }
    }

    fn hi(&self, view: &impl BoundView) -> ExtNat {
        match self {
            Term::Key(k) => view.hi(*k),
            Term::Const(c) => *c,
            Term::Max(ks) => ks.iter().map(|&k| view.hi(k)).max().unwrap_or(Fin(0)),
            Term::Min(ks) => ks.iter().map(|&k| view.hi(k)).min().unwrap_or(Inf),
        }
    }
}

/// One inequality between invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    /// `target ≤ Σ terms`.
    AtMost {
        target: InvariantKey,
        terms: Vec<Term>,
    },
    /// `target + 1 ≤ (left + 1)(right + 1)`.
    SuccProduct {
        target: InvariantKey,
        left: InvariantKey,
        right: InvariantKey,
    },
    /// `target ≤ factor · (succ + 1)`.
    ScaledSucc {
        target: InvariantKey,
        factor: InvariantKey,
        succ: InvariantKey,
    },
    /// `target ≥ max(sources)`.
    AtLeastMax {
        target: InvariantKey,
        sources: Vec<InvariantKey>,
    },
    /// `target ≥ minuend ∸ subtrahend`.
    AtLeastMonus {
        target: InvariantKey,
        minuend: InvariantKey,
        subtrahend: InvariantKey,
    },
    /// `target = ∞`.
    Unbounded { target: InvariantKey },
    /// With `whole = max(target, rival)`: once `rival < whole` is certain,
    /// the maximum is attained by `target`, so `target ≥ whole`.
    ArgMax {
        target: InvariantKey,
        rival: InvariantKey,
        whole: InvariantKey,
    },
    /// `then` holds once every key in `zero` is known to be `0`.
    WhenZero {
        zero: Vec<InvariantKey>,
        then: Box<Constraint>,
    },
}

/// A bound read while evaluating a constraint.
pub type Read = (InvariantKey, Side);

/// One bound implied by a constraint under the current store.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub key: InvariantKey,
    pub side: Side,
    pub value: ExtNat,
    /// Whether this came from rearranging the inequality.
    pub rearranged: bool,
    pub reads: Vec<Read>,
}

fn his(keys: impl IntoIterator<Item = InvariantKey>) -> impl Iterator<Item = Read> {
    keys.into_iter().map(|k| (k, Side::Hi))
}

impl Constraint {
    /// Keys whose bounds this constraint reads.
    pub fn reads(&self) -> Vec<InvariantKey> {
        let mut keys = match self {
            Constraint::AtMost { target, terms } => {
                let mut v = vec![*target];
                v.extend(terms.iter().flat_map(|t| t.keys().iter().copied()));
                v
            }
            Constraint::SuccProduct { target, left, right } => vec![*target, *left, *right],
            Constraint::ScaledSucc { target, factor, succ } => vec![*target, *factor, *succ],
            Constraint::AtLeastMax { sources, .. } => sources.clone(),
            Constraint::AtLeastMonus { minuend, subtrahend, .. } => vec![*minuend, *subtrahend],
            Constraint::Unbounded { .. } => vec![],
            Constraint::ArgMax { rival, whole, .. } => vec![*rival, *whole],
            Constraint::WhenZero { zero, then } => {
                let mut v = zero.clone();
                v.extend(then.reads());
                v
            }
        };
        keys.sort();
        keys.dedup();
        keys
    }

    /// Keys this constraint can tighten.
    pub fn writes(&self) -> Vec<InvariantKey> {
        let mut keys = match self {
            Constraint::AtMost { target, terms } => {
                let mut v = vec![*target];
                v.extend(terms.iter().flat_map(|t| t.keys().iter().copied()));
                v
            }
            Constraint::SuccProduct { target, left, right } => vec![*target, *left, *right],
            Constraint::ScaledSucc { target, factor, succ } => vec![*target, *factor, *succ],
            Constraint::AtLeastMax { target, .. }
            | Constraint::AtLeastMonus { target, .. }
            | Constraint::Unbounded { target }
            | Constraint::ArgMax { target, .. } => vec![*target],
            Constraint::WhenZero { then, .. } => then.writes(),
        };
        keys.sort();
        keys.dedup();
        keys
    }

    /// The bounds implied under `view`.
    ///
    /// Bounds that say nothing (`lo ≥ 0`, `hi ≤ ∞`) are omitted. With
    /// `rearrange` off, only the stated direction is produced; single-term
    /// upper bounds still yield their lower-bound mirror, since `a ≤ b` is
    /// stated for both sides at once.
    pub fn evaluate(&self, view: &impl BoundView, rearrange: bool) -> Vec<Derived> {
        let mut out = Vec::new();
        self.eval_into(view, rearrange, &mut Vec::new(), &mut out);
        out
    }

    fn eval_into(
        &self,
        view: &impl BoundView,
        rearrange: bool,
        guard_reads: &mut Vec<Read>,
        out: &mut Vec<Derived>,
    ) {
        let mut emit = |key, side, value: ExtNat, rearranged, reads: Vec<Read>| {
            let trivial = match side {
                Side::Lo => value == Fin(0),
                Side::Hi => value == Inf,
            };
            if !trivial {
                let mut all = guard_reads.clone();
                all.extend(reads);
                out.push(Derived { key, side, value, rearranged, reads: all });
            }
        };
        match self {
            Constraint::AtMost { target, terms } => {
                let sum: ExtNat = terms.iter().map(|t| t.hi(view)).sum();
                let reads = his(terms.iter().flat_map(|t| t.keys().iter().copied())).collect();
                emit(*target, Side::Hi, sum, false, reads);

                let single = terms.len() == 1;
                if !(rearrange || single) {
                    return;
                }
                let lo = view.lo(*target);
                for (i, term) in terms.iter().enumerate() {
                    let (Term::Key(_) | Term::Min(_)) = term else { continue };
                    let others = terms
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, t)| t);
                    let rest: ExtNat = others.clone().map(|t| t.hi(view)).sum();
                    let value = lo.monus(rest);
                    let mut reads = vec![(*target, Side::Lo)];
                    reads.extend(his(others.flat_map(|t| t.keys().iter().copied())));
                    for &k in term.keys() {
                        emit(k, Side::Lo, value, !single, reads.clone());
                    }
                }
            }
            Constraint::SuccProduct { target, left, right } => {
                let (l, r) = (view.hi(*left), view.hi(*right));
                let value = (l.succ() * r.succ()).monus(Fin(1));
                emit(*target, Side::Hi, value, false, his([*left, *right]).collect());
                if rearrange {
                    let lo = view.lo(*target).succ();
                    for (a, b) in [(*left, *right), (*right, *left)] {
                        let value = lo.ceil_div(view.hi(b).succ()).monus(Fin(1));
                        emit(a, Side::Lo, value, true, vec![(*target, Side::Lo), (b, Side::Hi)]);
                    }
                }
            }
            Constraint::ScaledSucc { target, factor, succ } => {
                let (f, s) = (view.hi(*factor), view.hi(*succ));
                emit(*target, Side::Hi, f * s.succ(), false, his([*factor, *succ]).collect());
                if rearrange {
                    let lo = view.lo(*target);
                    let value = lo.ceil_div(s.succ());
                    emit(*factor, Side::Lo, value, true, vec![(*target, Side::Lo), (*succ, Side::Hi)]);
                    if lo > Fin(0) {
                        // f = 0 forces target = 0, so a positive target admits any succ.
                        let value = if f == Fin(0) { Inf } else { lo.ceil_div(f).monus(Fin(1)) };
                        emit(*succ, Side::Lo, value, true, vec![(*target, Side::Lo), (*factor, Side::Hi)]);
                    }
                }
            }
            Constraint::AtLeastMax { target, sources } => {
                let value = sources.iter().map(|&k| view.lo(k)).max().unwrap_or(Fin(0));
                let reads = sources.iter().map(|&k| (k, Side::Lo)).collect();
                emit(*target, Side::Lo, value, false, reads);
            }
            Constraint::AtLeastMonus { target, minuend, subtrahend } => {
                let value = view.lo(*minuend).monus(view.hi(*subtrahend));
                emit(
                    *target,
                    Side::Lo,
                    value,
                    false,
                    vec![(*minuend, Side::Lo), (*subtrahend, Side::Hi)],
                );
            }
            Constraint::Unbounded { target } => emit(*target, Side::Lo, Inf, false, vec![]),
            Constraint::ArgMax { target, rival, whole } => {
                let whole_lo = view.lo(*whole);
                if view.hi(*rival) < whole_lo {
                    emit(
                        *target,
                        Side::Lo,
                        whole_lo,
                        false,
                        vec![(*rival, Side::Hi), (*whole, Side::Lo)],
                    );
                }
            }
            Constraint::WhenZero { zero, then } => {
                if zero.iter().all(|&k| view.hi(k) == Fin(0)) {
                    let before = guard_reads.len();
                    guard_reads.extend(his(zero.iter().copied()));
                    then.eval_into(view, rearrange, guard_reads, out);
                    guard_reads.truncate(before);
                }
            }
        }
    }
}
