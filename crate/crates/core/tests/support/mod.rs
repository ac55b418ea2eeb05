//! Shared test helpers: a seeded random scene generator and an independent
//! post-hoc checker for saturated stores.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conebound::engine::SaturationResult;
use conebound::ext::ExtNat;
use conebound::key::{InvariantKey, Kind, MapId, SpaceId};
use conebound::scene::{Closure, Elaborated, Fact};

pub const CORPUS_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");

/// Every bundled scene as `(file name, text)`, sorted by name.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = std::fs::read_dir(CORPUS_DIR)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "scene"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

pub fn corpus_scene(name: &str) -> String {
    std::fs::read_to_string(format!("{CORPUS_DIR}/{name}")).unwrap()
}

/// A scene using every fact kind; `{FLAGS}` stands for the collection's flags.
pub const PROBE: &str = "\
collection Probe { {FLAGS} }
space A, B, C, D, E, F, J, M, M2, P, P2, S, W, W2, X, Y, Z
map f : A -> B
map g : A -> C
map ib : B -> D
map ic : C -> D
map d : A -> D
map d2 : A -> D
map j : B -> E
map r : B -> A
map a : A -> A
map b : B -> B
map c : C -> C
map e : D -> D
map k : E -> E
map p : P -> Y
map pr : P2 -> X
fact member(A)
fact contractible(Z)
fact equiv(e)
fact homotopic(d, d2)
fact equiv_maps(f, g)
fact compose(d, ib, f)
fact CF: cofiber(f, j, E)
fact PO: pushout(f, g, ib, ic, d)
fact pushout_map(PO, PO, a, b, c, e)
fact cofiber_map(CF, CF, a, b, k)
fact dominates(d, d2)
fact section(f, r)
fact product_map(d, f, g)
fact product_space(P, X, Y)
fact wedge_map(d, f, g)
fact wedge_space(W, X, Y)
fact susp_space(S, X)
fact join_space(J, X, Y)
fact smash_space(M, X, Y)
fact smash_decomp(X, Y, W2, P, M2)
fact projection(pr, A)
fact fibration(p, F)
fact pullback(f, g, ib, ic, F)
fact null(f)
fact pi0_not_onto(g)
";

/// The probe scene under the collection given by a five-bit mask.
pub fn probe_scene(bits: u8) -> String {
    let mut flags: Vec<&str> = Closure::ALL
        .iter()
        .enumerate()
        .filter(|(i, _)| bits & (1 << i) != 0)
        .map(|(_, c)| c.name())
        .collect();
    if flags.contains(&Closure::AllSpaces.name()) {
        flags = vec![Closure::AllSpaces.name()];
    }
    PROBE.replace("{FLAGS}", &flags.join(", "))
}

// ---------------------------------------------------------------------------
// Random scenes

const MAX_SPACES: usize = 8;
const MAX_MAPS: usize = 12;
const POINT: usize = usize::MAX;

struct Gen {
    rng: ChaCha8Rng,
    spaces: usize,
    maps: Vec<(usize, usize)>,
    facts: Vec<String>,
    /// Spaces already used as the result of a construction.
    built: BTreeSet<usize>,
    labels: usize,
}

impl Gen {
    fn space_name(s: usize) -> String {
        if s == POINT {
            "*".into()
        } else {
            format!("S{s}")
        }
    }

    fn space(&mut self) -> usize {
        if self.rng.gen_ratio(1, 12) {
            POINT
        } else {
            self.rng.gen_range(0..self.spaces)
        }
    }

    fn real_space(&mut self) -> usize {
        self.rng.gen_range(0..self.spaces)
    }

    /// A space not yet built by a construction fact.
    fn fresh_result(&mut self) -> Option<usize> {
        let free: Vec<usize> = (0..self.spaces).filter(|s| !self.built.contains(s)).collect();
        let s = *free.choose(&mut self.rng)?;
        self.built.insert(s);
        Some(s)
    }

    /// A map `a → b`: a canonical one when an end is the point, otherwise a
    /// new or existing declared map.
    fn map(&mut self, a: usize, b: usize) -> Option<String> {
        match (a, b) {
            (POINT, _) => return Some(format!("init({})", Self::space_name(b))),
            (_, POINT) => return Some(format!("term({})", Self::space_name(a))),
            _ => {}
        }
        let existing: Vec<usize> = (0..self.maps.len()).filter(|&i| self.maps[i] == (a, b)).collect();
        if (self.maps.len() >= MAX_MAPS || self.rng.gen_bool(0.3)) && !existing.is_empty() {
            return Some(format!("m{}", existing.choose(&mut self.rng).unwrap()));
        }
        if self.maps.len() >= MAX_MAPS {
            return None;
        }
        self.maps.push((a, b));
        Some(format!("m{}", self.maps.len() - 1))
    }

    fn any_map(&mut self) -> Option<String> {
        let (a, b) = (self.space(), self.space());
        self.map(a, b)
    }

    fn label(&mut self) -> String {
        self.labels += 1;
        format!("F{}", self.labels)
    }

    fn fact(&mut self, text: String) {
        self.facts.push(format!("fact {text}"));
    }

    fn cofiber(&mut self) -> Option<(String, usize, usize, usize)> {
        let (a, x, c) = (self.space(), self.space(), self.space());
        let f = self.map(a, x)?;
        let j = self.map(x, c)?;
        let label = self.label();
        self.facts.push(format!("fact {label}: cofiber({f}, {j}, {})", Self::space_name(c)));
        Some((label, a, x, c))
    }

    /// A pushout `A → * ← A`, `* → D ← *` with diagonal `A → D`.
    fn cone_pushout(&mut self) -> Option<(String, usize, usize)> {
        let (a, d) = (self.real_space(), self.space());
        let diag = self.map(a, d)?;
        let (an, dn) = (Self::space_name(a), Self::space_name(d));
        let label = self.label();
        self.facts.push(format!("fact {label}: pushout(term({an}), term({an}), init({dn}), init({dn}), {diag})"));
        Some((label, a, d))
    }

    fn random_fact(&mut self) -> Option<()> {
        let s = |g: &mut Gen| Gen::space_name(g.real_space());
        match self.rng.gen_range(0..25) {
            0 => {
                let x = s(self);
                self.fact(format!("member({x})"));
            }
            1 => {
                let x = s(self);
                self.fact(format!("contractible({x})"));
            }
            2 => {
                let f = self.any_map()?;
                self.fact(format!("equiv({f})"));
            }
            3 => {
                let (a, b) = (self.space(), self.space());
                let (f, g) = (self.map(a, b)?, self.map(a, b)?);
                self.fact(format!("homotopic({f}, {g})"));
            }
            4 => {
                let (f, g) = (self.any_map()?, self.any_map()?);
                self.fact(format!("equiv_maps({f}, {g})"));
            }
            5 => {
                let (a, b, c) = (self.space(), self.space(), self.space());
                let (f, g, h) = (self.map(a, b)?, self.map(b, c)?, self.map(a, c)?);
                self.fact(format!("compose({h}, {g}, {f})"));
            }
            6 => {
                self.cofiber()?;
            }
            7 => {
                let (a, b, c, d) = (self.space(), self.space(), self.space(), self.space());
                let f = self.map(a, b)?;
                let g = self.map(a, c)?;
                let ib = self.map(b, d)?;
                let ic = self.map(c, d)?;
                let diag = self.map(a, d)?;
                self.fact(format!("pushout({f}, {g}, {ib}, {ic}, {diag})"));
            }
            8 => {
                let (p1, a1, d1) = self.cone_pushout()?;
                let (p2, a2, d2) = self.cone_pushout()?;
                let a = self.map(a1, a2)?;
                let d = self.map(d1, d2)?;
                self.fact(format!("pushout_map({p1}, {p2}, {a}, init(*), init(*), {d})"));
            }
            9 => {
                let (c1, a1, x1, k1) = self.cofiber()?;
                let (c2, a2, x2, k2) = self.cofiber()?;
                let alpha = self.map(a1, a2)?;
                let beta = self.map(x1, x2)?;
                let gamma = self.map(k1, k2)?;
                self.fact(format!("cofiber_map({c1}, {c2}, {alpha}, {beta}, {gamma})"));
            }
            10 => {
                let (f, g) = (self.any_map()?, self.any_map()?);
                self.fact(format!("dominates({g}, {f})"));
            }
            11 => {
                let (a, b) = (self.space(), self.space());
                let (f, g) = (self.map(a, b)?, self.map(b, a)?);
                self.fact(format!("section({f}, {g})"));
            }
            12 => {
                let (h, f, g) = (self.any_map()?, self.any_map()?, self.any_map()?);
                self.fact(format!("product_map({h}, {f}, {g})"));
            }
            13 => {
                let p = Gen::space_name(self.fresh_result()?);
                let (x, y) = (s(self), s(self));
                self.fact(format!("product_space({p}, {x}, {y})"));
            }
            14 => {
                let (w, f, g) = (self.any_map()?, self.any_map()?, self.any_map()?);
                self.fact(format!("wedge_map({w}, {f}, {g})"));
            }
            15 => {
                let w = self.fresh_result()?;
                let (x, y) = (self.real_space(), self.real_space());
                if w == x || w == y {
                    return None;
                }
                self.fact(format!("wedge_space({}, {}, {})", Gen::space_name(w), Gen::space_name(x), Gen::space_name(y)));
            }
            16 => {
                let w = self.fresh_result()?;
                let b = self.real_space();
                if w == b {
                    return None;
                }
                self.fact(format!("susp_space({}, {})", Gen::space_name(w), Gen::space_name(b)));
            }
            17 => {
                let j = Gen::space_name(self.fresh_result()?);
                let (a, b) = (s(self), s(self));
                self.fact(format!("join_space({j}, {a}, {b})"));
            }
            18 => {
                let m = Gen::space_name(self.fresh_result()?);
                let (x, y) = (s(self), s(self));
                self.fact(format!("smash_space({m}, {x}, {y})"));
            }
            19 => {
                let picks: BTreeSet<usize> = (0..3).filter_map(|_| self.fresh_result()).collect();
                let (x, y) = (self.real_space(), self.real_space());
                if picks.len() < 3 || picks.contains(&x) || picks.contains(&y) {
                    return None;
                }
                let v: Vec<String> = picks.into_iter().map(Gen::space_name).collect();
                let (x, y) = (Gen::space_name(x), Gen::space_name(y));
                self.fact(format!("smash_decomp({x}, {y}, {}, {}, {})", v[0], v[1], v[2]));
            }
            20 => {
                let e = self.fresh_result()?;
                let b = self.real_space();
                if e == b {
                    return None;
                }
                let p = self.map(e, b)?;
                let a = s(self);
                self.fact(format!("projection({p}, {a})"));
            }
            21 => {
                let p = self.any_map()?;
                let fiber = s(self);
                self.fact(format!("fibration({p}, {fiber})"));
            }
            22 => {
                let (a, b, c, d) = (self.space(), self.space(), self.space(), self.space());
                let ab = self.map(a, b)?;
                let ac = self.map(a, c)?;
                let bd = self.map(b, d)?;
                let cd = self.map(c, d)?;
                let fiber = s(self);
                self.fact(format!("pullback({ab}, {ac}, {bd}, {cd}, {fiber})"));
            }
            23 => {
                let f = self.any_map()?;
                self.fact(format!("null({f})"));
            }
            _ => {
                let f = self.any_map()?;
                self.fact(format!("pi0_not_onto({f})"));
            }
        }
        Some(())
    }
}

/// A random, well-formed scene: at most eight declared spaces and twelve
/// declared maps, random facts and a few asserted bounds.
pub fn random_scene(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = rng.gen_range(1..=MAX_SPACES);
    let profile = rng.gen_range(0u8..32);
    let mut g = Gen {
        rng,
        spaces,
        maps: Vec::new(),
        facts: Vec::new(),
        built: BTreeSet::new(),
        labels: 0,
    };
    let facts = g.rng.gen_range(0..10);
    for _ in 0..facts {
        let before = (g.maps.len(), g.facts.len(), g.labels);
        if g.random_fact().is_none() {
            // Roll back any partial construction.
            g.maps.truncate(before.0);
            g.facts.truncate(before.1);
            g.labels = before.2;
        }
    }

    let mut out = String::new();
    let mut flags: Vec<&str> = Closure::ALL
        .iter()
        .enumerate()
        .filter(|(i, _)| profile & (1 << i) != 0)
        .map(|(_, c)| c.name())
        .collect();
    if flags.contains(&Closure::AllSpaces.name()) {
        flags = vec![Closure::AllSpaces.name()];
    }
    writeln!(out, "collection R {{ {} }}", flags.join(", ")).unwrap();
    let names: Vec<String> = (0..spaces).map(Gen::space_name).collect();
    writeln!(out, "space {}", names.join(", ")).unwrap();
    for (i, &(a, b)) in g.maps.iter().enumerate() {
        writeln!(out, "map m{i} : {} -> {}", Gen::space_name(a), Gen::space_name(b)).unwrap();
    }
    for f in &g.facts {
        writeln!(out, "{f}").unwrap();
    }

    let mut invs: Vec<String> = Vec::new();
    for name in &names {
        for inv in ["cl", "cat", "kl", "kit"] {
            invs.push(format!("{inv}({name})"));
        }
    }
    for i in 0..g.maps.len() {
        invs.push(format!("L(m{i})"));
        invs.push(format!("Lcat(m{i})"));
    }
    invs.shuffle(&mut g.rng);
    let count = g.rng.gen_range(0..=4.min(invs.len()));
    for inv in invs.into_iter().take(count) {
        let value = g.rng.gen_range(0..6);
        let rel = ["<=", ">=", "="][g.rng.gen_range(0..3)];
        writeln!(out, "bound {inv} {rel} {value}").unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// Post-hoc checker

/// Extended naturals as `None = ∞`.
type N = Option<u128>;

fn n(x: ExtNat) -> N {
    x.finite().map(u128::from)
}

fn add(a: N, b: N) -> N {
    Some(a? + b?)
}

fn le(a: N, b: N) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

fn lt(a: N, b: N) -> bool {
    !le(b, a)
}

fn monus(a: N, b: N) -> N {
    match (a, b) {
        (None, None) => Some(0),
        (None, _) => None,
        (_, None) => Some(0),
        (Some(a), Some(b)) => Some(a.saturating_sub(b)),
    }
}

fn mul(a: N, b: N) -> N {
    match (a, b) {
        (Some(0), _) | (_, Some(0)) => Some(0),
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    }
}

fn ceil_div(a: N, b: N) -> N {
    match (a, b) {
        (None, None) => Some(1),
        (None, Some(_)) => None,
        (Some(_), None) => Some(if a == Some(0) { 0 } else { 1 }),
        (Some(a), Some(b)) => Some(a.div_ceil(b)),
    }
}

fn max_n(v: impl IntoIterator<Item = N>) -> N {
    let mut out = Some(0);
    for x in v {
        out = match (out, x) {
            (None, _) | (_, None) => None,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
    }
    out
}

fn min_n(v: impl IntoIterator<Item = N>) -> N {
    v.into_iter().fold(None, |acc, x| match (acc, x) {
        (None, x) => x,
        (a, None) => a,
        (Some(a), Some(b)) => Some(a.min(b)),
    })
}

#[derive(Clone, Debug)]
enum T {
    K(InvariantKey),
    C(u128),
    Max(Vec<InvariantKey>),
    Min(Vec<InvariantKey>),
}

/// Inequalities as stated by the catalog.
#[derive(Clone, Debug)]
enum Ineq {
    /// `t ≤ Σ terms`
    Le(InvariantKey, Vec<T>),
    /// `t + 1 ≤ (l + 1)(r + 1)`
    SuccProd(InvariantKey, InvariantKey, InvariantKey),
    /// `t ≤ f · (s + 1)`
    Scaled(InvariantKey, InvariantKey, InvariantKey),
    /// `t = max(a, b)`
    EqMax(InvariantKey, InvariantKey, InvariantKey),
    /// `t ≥ a − b`
    GeMonus(InvariantKey, InvariantKey, InvariantKey),
    Infinite(InvariantKey),
    /// Holds when every listed map has cone length zero.
    When(Vec<MapId>, Box<Ineq>),
}

pub struct Checker<'a> {
    elab: &'a Elaborated,
    lo: Box<dyn Fn(InvariantKey) -> N + 'a>,
    hi: Box<dyn Fn(InvariantKey) -> N + 'a>,
    pub checked: usize,
    pub violations: Vec<String>,
}

fn k(m: MapId, kind: Kind) -> InvariantKey {
    InvariantKey::new(m, kind)
}

const BOTH: [Kind; 2] = [Kind::ConeLength, Kind::Category];

/// Guard of each rule, by id, restated from the catalog table.
pub fn guard(rule: &str) -> &'static [Closure] {
    use Closure::*;
    match rule {
        "REL-ALL" => &[AllSpaces],
        "T32" | "C42" => &[Wedges, Suspensions],
        "T32-W" | "C41-4" | "P72-A" | "P72-B" | "C73" => &[Wedges],
        "T32-S" | "C34" | "C46" | "C410-1" | "C410-2" | "C410-3" | "C410-4" | "C410-5" | "C411" => {
            &[Suspensions]
        }
        "T51" | "C52" | "T62" | "C63" => &[Wedges, Joins],
        "P54" => &[SmashIdeal, Wedges, Suspensions],
        "P54-SM" => &[SmashIdeal],
        "L61" => &[Joins],
        _ => &[],
    }
}

impl<'a> Checker<'a> {
    pub fn new(elab: &'a Elaborated, result: &'a SaturationResult) -> Self {
        Checker {
            elab,
            lo: Box::new(move |key| n(result.store.bounds(key).0)),
            hi: Box::new(move |key| n(result.store.bounds(key).1)),
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn applies(&self, rule: &str) -> bool {
        let p = self.elab.profile();
        guard(rule).iter().all(|&c| p.has(c))
    }

    fn cl(&self, s: SpaceId, kind: Kind) -> InvariantKey {
        k(self.elab.init(s), kind)
    }

    fn kl(&self, s: SpaceId, kind: Kind) -> InvariantKey {
        k(self.elab.term(s), kind)
    }

    fn term_hi(&self, t: &T) -> N {
        match t {
            T::K(key) => (self.hi)(*key),
            T::C(c) => Some(*c),
            T::Max(keys) => max_n(keys.iter().map(|&k| (self.hi)(k))),
            T::Min(keys) => min_n(keys.iter().map(|&k| (self.hi)(k))),
        }
    }

    fn fail(&mut self, rule: &str, what: String) {
        self.violations.push(format!("{rule}: {what}"));
    }

    fn name(&self, key: InvariantKey) -> String {
        self.elab.key_name(key)
    }

    fn check(&mut self, rule: &str, ineq: &Ineq) {
        if !self.applies(rule) {
            return;
        }
        self.checked += 1;
        let (lo, hi) = (&self.lo, &self.hi);
        let mut bad = Vec::new();
        match ineq {
            Ineq::Le(t, terms) => {
                let total = terms.iter().map(|x| self.term_hi(x)).fold(Some(0), add);
                if !le(hi(*t), total) {
                    bad.push(format!("hi {} above {:?}", self.name(*t), total));
                }
                for (i, term) in terms.iter().enumerate() {
                    let keys = match term {
                        T::K(key) => vec![*key],
                        T::Min(keys) => keys.clone(),
                        _ => continue,
                    };
                    let rest = terms
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, x)| self.term_hi(x))
                        .fold(Some(0), add);
                    let need = monus(lo(*t), rest);
                    for key in keys {
                        if !le(need, lo(key)) {
                            bad.push(format!("lo {} below {:?}", self.name(key), need));
                        }
                    }
                }
            }
            Ineq::SuccProd(t, l, r) => {
                let one = Some(1);
                let bound = monus(mul(add(hi(*l), one), add(hi(*r), one)), one);
                if !le(hi(*t), bound) {
                    bad.push(format!("hi {} above {:?}", self.name(*t), bound));
                }
                for (a, b) in [(*l, *r), (*r, *l)] {
                    let need = monus(ceil_div(add(lo(*t), one), add(hi(b), one)), one);
                    if !le(need, lo(a)) {
                        bad.push(format!("lo {} below {:?}", self.name(a), need));
                    }
                }
            }
            Ineq::Scaled(t, f, s) => {
                let bound = mul(hi(*f), add(hi(*s), Some(1)));
                if !le(hi(*t), bound) {
                    bad.push(format!("hi {} above {:?}", self.name(*t), bound));
                }
                let need = ceil_div(lo(*t), add(hi(*s), Some(1)));
                if !le(need, lo(*f)) {
                    bad.push(format!("lo {} below {:?}", self.name(*f), need));
                }
                if lo(*t) != Some(0) {
                    let need = if hi(*f) == Some(0) { None } else { monus(ceil_div(lo(*t), hi(*f)), Some(1)) };
                    if !le(need, lo(*s)) {
                        bad.push(format!("lo {} below {:?}", self.name(*s), need));
                    }
                }
            }
            Ineq::EqMax(t, a, b) => {
                let top = max_n([hi(*a), hi(*b)]);
                if !le(hi(*t), top) {
                    bad.push(format!("hi {} above {:?}", self.name(*t), top));
                }
                let bottom = max_n([lo(*a), lo(*b)]);
                if !le(bottom, lo(*t)) {
                    bad.push(format!("lo {} below {:?}", self.name(*t), bottom));
                }
                for (x, y) in [(*a, *b), (*b, *a)] {
                    if !le(hi(x), hi(*t)) {
                        bad.push(format!("hi {} above hi {}", self.name(x), self.name(*t)));
                    }
                    // If the rival is certainly smaller, x attains the maximum.
                    if lt(hi(y), lo(*t)) && !le(lo(*t), lo(x)) {
                        bad.push(format!("lo {} below lo {}", self.name(x), self.name(*t)));
                    }
                }
            }
            Ineq::GeMonus(t, a, b) => {
                let need = monus(lo(*a), hi(*b));
                if !le(need, lo(*t)) {
                    bad.push(format!("lo {} below {:?}", self.name(*t), need));
                }
            }
            Ineq::Infinite(t) => {
                if lo(*t).is_some() {
                    bad.push(format!("lo {} finite", self.name(*t)));
                }
            }
            Ineq::When(maps, inner) => {
                if maps.iter().all(|&m| hi(k(m, Kind::ConeLength)) == Some(0)) {
                    self.checked -= 1;
                    self.check(rule, inner);
                }
                return;
            }
        }
        for b in bad {
            self.fail(rule, b);
        }
    }

    /// Check every applicable inequality; returns the number of violations.
    pub fn run(&mut self) -> usize {
        let e = self.elab;
        for m in e.map_ids() {
            self.check("REL-CL", &Ineq::Le(k(m, Kind::Category), vec![T::K(k(m, Kind::ConeLength))]));
            if (self.hi)(k(m, Kind::Category)) == Some(0) {
                self.check("P7-EQ", &Ineq::Le(k(m, Kind::ConeLength), vec![T::C(0)]));
            }
            if e.map(m).is_canonical() {
                continue;
            }
            let (a, b) = (e.dom(m), e.cod(m));
            for kind in BOTH {
                self.check("C410-1", &Ineq::Le(k(m, kind), vec![T::K(self.cl(a, kind)), T::K(self.cl(b, kind))]));
                let f = k(m, kind);
                self.check("C411", &Ineq::GeMonus(f, self.kl(b, kind), self.kl(a, kind)));
                self.check("C411", &Ineq::GeMonus(f, self.kl(a, kind), self.kl(b, kind)));
                self.check("C411", &Ineq::GeMonus(f, self.cl(b, kind), self.cl(a, kind)));
            }
        }
        for s in e.space_ids() {
            self.check("REL-ALL", &Ineq::Le(self.kl(s, Kind::ConeLength), vec![T::C(1)]));
            self.check("REL-ALL", &Ineq::Le(self.kl(s, Kind::Category), vec![T::C(1)]));
            for kind in BOTH {
                self.check("C410-2", &Ineq::Le(self.kl(s, kind), vec![T::K(self.cl(s, kind))]));
            }
        }
        for id in e.fact_ids() {
            let fact = e.fact(id).fact.clone();
            self.fact(&fact);
        }
        self.violations.len()
    }

    fn fact(&mut self, fact: &Fact<SpaceId, MapId, conebound::key::FactId>) {
        let e = self.elab;
        let le1 = |a: InvariantKey, b: InvariantKey| Ineq::Le(a, vec![T::K(b)]);
        match *fact {
            Fact::Homotopic(f, g) | Fact::EquivMaps(f, g) => {
                let rule = if matches!(fact, Fact::Homotopic(..)) { "AX-HTPY" } else { "AX-EQM" };
                for kind in BOTH {
                    self.check(rule, &le1(k(f, kind), k(g, kind)));
                    self.check(rule, &le1(k(g, kind), k(f, kind)));
                }
            }
            Fact::Equiv(f) => {
                for kind in BOTH {
                    self.check("AX-NORM", &Ineq::Le(k(f, kind), vec![T::C(0)]));
                }
            }
            Fact::Compose { h, g, f } => {
                for kind in BOTH {
                    self.check("AX-COMP", &Ineq::Le(k(h, kind), vec![T::K(k(f, kind)), T::K(k(g, kind))]));
                    self.check("C410-3", &Ineq::Le(k(g, kind), vec![T::K(k(f, kind)), T::K(k(h, kind))]));
                }
            }
            Fact::Cofiber { f, j, cone } => {
                let (a, x) = (e.dom(f), e.cod(f));
                if e.member_fact(a).is_some() {
                    self.check("AX-MC", &Ineq::Le(k(j, Kind::ConeLength), vec![T::C(1)]));
                }
                for kind in BOTH {
                    self.check("C44-1", &le1(self.cl(cone, kind), k(f, kind)));
                    self.check("C44-2", &le1(k(j, kind), self.kl(a, kind)));
                    self.check(
                        "C44-3",
                        &Ineq::Le(self.cl(cone, kind), vec![T::K(self.kl(a, kind)), T::K(self.cl(x, kind))]),
                    );
                    self.check(
                        "C44-4",
                        &Ineq::Le(self.kl(x, kind), vec![T::K(self.kl(a, kind)), T::K(self.kl(cone, kind))]),
                    );
                }
            }
            Fact::Dominates { g, f } => {
                self.check("AX-DOM", &le1(k(f, Kind::Category), k(g, Kind::Category)));
            }
            Fact::Pi0NotOnto(f) => {
                for kind in BOTH {
                    self.check("REL-PI0", &Ineq::Infinite(k(f, kind)));
                }
            }
            Fact::Member(s) => {
                self.check("REL-MEM", &Ineq::Le(self.kl(s, Kind::ConeLength), vec![T::C(1)]));
            }
            Fact::PushoutMap { a, b, c, d, .. } => {
                for kind in BOTH {
                    let (ka, kb, kc, kd) = (k(a, kind), k(b, kind), k(c, kind), k(d, kind));
                    self.check("T32", &Ineq::Le(kd, vec![T::K(ka), T::Max(vec![kb, kc])]));
                    self.check("T32-W", &Ineq::When(vec![a], Box::new(Ineq::Le(kd, vec![T::Max(vec![kb, kc])]))));
                    self.check("T32-S", &Ineq::When(vec![b, c], Box::new(le1(kd, ka))));
                    self.check("C34", &Ineq::Le(kd, vec![T::K(ka), T::K(kb), T::K(kc)]));
                    self.check("C34-NC", &Ineq::When(vec![a], Box::new(Ineq::Le(kd, vec![T::K(kb), T::K(kc)]))));
                }
            }
            Fact::Pushout { f, g, ib, ic, diag } => {
                let (a, pb, pc, d) = (e.dom(f), e.cod(f), e.cod(g), e.cod(ib));
                for kind in BOTH {
                    self.check("C41-1", &le1(k(ib, kind), k(g, kind)));
                    self.check("C41-1", &le1(k(ic, kind), k(f, kind)));
                    self.check("C41-4", &Ineq::Le(k(diag, kind), vec![T::Max(vec![k(f, kind), k(g, kind)])]));
                    for end in [Self::cl as fn(&Self, SpaceId, Kind) -> InvariantKey, Self::kl] {
                        let t = end(self, d, kind);
                        let terms = vec![T::K(end(self, a, kind)), T::Max(vec![end(self, pb, kind), end(self, pc, kind)])];
                        self.check("C42", &Ineq::Le(t, terms));
                    }
                }
            }
            Fact::CofiberMap { alpha, beta, gamma, .. } => {
                for kind in BOTH {
                    self.check("C46", &Ineq::Le(k(gamma, kind), vec![T::K(k(alpha, kind)), T::K(k(beta, kind))]));
                }
            }
            Fact::SuspSpace { susp, base } => {
                for kind in BOTH {
                    self.check("C48", &le1(self.cl(susp, kind), self.kl(base, kind)));
                }
            }
            Fact::Section { f, g } => {
                self.check("C410-4", &le1(k(g, Kind::Category), self.cl(e.dom(g), Kind::Category)));
                for kind in BOTH {
                    self.check("C410-5", &le1(k(g, kind), k(f, kind)));
                }
            }
            Fact::ProductMap { h, f, g } => {
                let spread = T::Max(vec![self.cl(e.dom(f), Kind::ConeLength), self.cl(e.dom(g), Kind::ConeLength)]);
                for kind in BOTH {
                    self.check("T51", &Ineq::Le(k(h, kind), vec![T::K(k(f, kind)), T::K(k(g, kind)), spread.clone()]));
                }
            }
            Fact::ProductSpace { product, x, y } => {
                let spread = T::Max(vec![self.cl(x, Kind::ConeLength), self.cl(y, Kind::ConeLength)]);
                for kind in BOTH {
                    self.check(
                        "C52",
                        &Ineq::Le(self.cl(product, kind), vec![T::K(self.cl(x, kind)), T::K(self.cl(y, kind))]),
                    );
                    self.check(
                        "C52",
                        &Ineq::Le(
                            self.kl(product, kind),
                            vec![T::K(self.kl(x, kind)), T::K(self.kl(y, kind)), spread.clone()],
                        ),
                    );
                    self.check(
                        "P54",
                        &Ineq::Le(self.kl(product, kind), vec![T::K(self.kl(x, kind)), T::K(self.kl(y, kind))]),
                    );
                }
            }
            Fact::SmashSpace { smash, x, y } => {
                let t = self.kl(smash, Kind::ConeLength);
                let terms = vec![T::Min(vec![self.kl(x, Kind::ConeLength), self.kl(y, Kind::ConeLength)])];
                self.check("P54-SM", &Ineq::Le(t, terms));
            }
            Fact::Projection { p, factor } => {
                if e.member_fact(factor).is_some() {
                    for kind in BOTH {
                        self.check("L61", &Ineq::Le(k(p, kind), vec![T::K(self.cl(e.cod(p), kind)), T::C(1)]));
                    }
                }
            }
            Fact::Pullback { ab, cd, fiber, .. } => {
                for kind in BOTH {
                    self.check("T62", &Ineq::Scaled(k(ab, kind), k(cd, kind), self.cl(fiber, kind)));
                }
            }
            Fact::Fibration { p, fiber } => {
                for kind in BOTH {
                    let (t, l, r) = (self.cl(e.dom(p), kind), self.cl(e.cod(p), kind), self.cl(fiber, kind));
                    self.check("C63", &Ineq::SuccProd(t, l, r));
                }
            }
            Fact::WedgeMap { w, f, g } => {
                let c = Kind::ConeLength;
                self.check("P72-A", &Ineq::Le(k(w, c), vec![T::Max(vec![k(f, c), k(g, c)])]));
                let c = Kind::Category;
                self.check("P72-B", &Ineq::EqMax(k(w, c), k(f, c), k(g, c)));
            }
            Fact::Null(f) => {
                let (x, y) = (e.dom(f), e.cod(f));
                let c = Kind::ConeLength;
                self.check("C73", &Ineq::Le(k(f, c), vec![T::Max(vec![self.kl(x, c), self.cl(y, c)])]));
                let c = Kind::Category;
                self.check("C73", &Ineq::EqMax(k(f, c), self.kl(x, c), self.cl(y, c)));
            }
            Fact::Contractible(_)
            | Fact::WedgeSpace { .. }
            | Fact::JoinSpace { .. }
            | Fact::SmashDecomp { .. } => {}
        }
    }
}
