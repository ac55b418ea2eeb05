//! Recursive-descent parser for scene files.
//!
//! Every statement fits on one line, so a syntax error abandons the rest of
//! its line and parsing resumes on the next one. Name resolution and shape
//! checks run once all lines are read, so declarations may follow their use.

use std::collections::{BTreeMap, HashMap};

use super::fact::{validate, Arg, ArgKind, Fact, FactHead, ShapeLookup};
use super::lexer::{lex_line, Tok, Token};
use super::{
    BoundStmt, CertStmt, Collection, Diagnostic, FactStmt, InvRef, MapRef, ParseErrors, Profile,
    Rel, Scene, POINT,
};
use crate::ext::ExtNat;
use crate::key::Kind;

/// A value and the 1-based column it started at.
#[derive(Clone, Debug)]
struct Sp<T> {
    value: T,
    column: usize,
}

type PErr = (usize, String);

enum Stmt {
    Collection(Sp<String>, Profile),
    Spaces(Vec<Sp<String>>),
    Map {
        name: Sp<String>,
        dom: Sp<String>,
        cod: Sp<String>,
    },
    Fact {
        label: Option<Sp<String>>,
        head: Sp<FactHead>,
        args: Vec<Sp<Arg<String, MapRef, String>>>,
    },
    Bound(Sp<InvRef>, Rel, ExtNat),
    Query(Sp<InvRef>),
    Cert {
        target: Sp<InvRef>,
        cones: Vec<Sp<String>>,
        through: Option<Vec<Sp<String>>>,
    },
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end_column: usize,
}

fn describe(tok: Option<&Tok>) -> String {
    match tok {
        Some(t) => format!("'{t}'"),
        None => "end of line".to_owned(),
    }
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            end_column: line_len + 1,
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, PErr> {
        Err((
            self.column(),
            format!("expected {expected}, found {}", describe(self.peek())),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), PErr> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(&format!("'{tok}'"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Sp<String>, PErr> {
        let column = self.column();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Sp { value: s.clone(), column })
            }
            _ => self.fail(what),
        }
    }

    /// A space name or `*`.
    fn space(&mut self) -> Result<Sp<String>, PErr> {
        let column = self.column();
        if self.eat(&Tok::Star) {
            return Ok(Sp { value: POINT.to_owned(), column });
        }
        self.ident("space name")
    }

    fn map_ref(&mut self) -> Result<Sp<MapRef>, PErr> {
        let name = self.ident("map name")?;
        let column = name.column;
        let value = match name.value.as_str() {
            "init" | "term" if self.peek() == Some(&Tok::LParen) => {
                self.pos += 1;
                let x = self.space()?.value;
                self.expect(Tok::RParen)?;
                if name.value == "init" {
                    MapRef::Init(x)
                } else {
                    MapRef::Term(x)
                }
            }
            _ => MapRef::Named(name.value),
        };
        Ok(Sp { value, column })
    }

    fn inv(&mut self) -> Result<Sp<InvRef>, PErr> {
        let column = self.column();
        let head = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.fail("invariant"),
        };
        let space_form = |kind, init: bool| (kind, Some(init));
        let (kind, canonical) = match head.as_str() {
            "L" => (Kind::ConeLength, None),
            "Lcat" => (Kind::Category, None),
            "cl" => space_form(Kind::ConeLength, true),
            "cat" => space_form(Kind::Category, true),
            "kl" => space_form(Kind::ConeLength, false),
            "kit" => space_form(Kind::Category, false),
            _ => return self.fail("invariant (L, Lcat, cl, cat, kl or kit)"),
        };
        self.pos += 1;
        self.expect(Tok::LParen)?;
        let map = match canonical {
            None => self.map_ref()?.value,
            Some(true) => MapRef::Init(self.space()?.value),
            Some(false) => MapRef::Term(self.space()?.value),
        };
        self.expect(Tok::RParen)?;
        Ok(Sp { value: InvRef { kind, map }, column })
    }

    fn value(&mut self) -> Result<ExtNat, PErr> {
        let column = self.column();
        let text = match self.peek() {
            Some(Tok::Ident(s) | Tok::Nat(s)) => s.clone(),
            other => {
                return Err((
                    column,
                    format!("expected natural number or 'inf', found {}", describe(other)),
                ))
            }
        };
        self.pos += 1;
        text.parse().map_err(|e: crate::ext::ParseExtNatError| (column, e.to_string()))
    }

    fn list<T>(
        &mut self,
        open: Tok,
        close: Tok,
        mut item: impl FnMut(&mut Self) -> Result<T, PErr>,
    ) -> Result<Vec<T>, PErr> {
        self.expect(open)?;
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn finish(&self) -> Result<(), PErr> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err((self.column(), format!("unexpected '{t}' after statement"))),
        }
    }
}

fn collection(c: &mut Cursor) -> Result<Stmt, PErr> {
    let name = c.ident("collection name")?;
    c.expect(Tok::LBrace)?;
    let mut profile = Profile::default();
    if !c.eat(&Tok::RBrace) {
        loop {
            let flag = c.ident("collection flag")?;
            let slot = match flag.value.as_str() {
                "all" => &mut profile.all,
                "wedges" => &mut profile.wedges,
                "suspensions" => &mut profile.suspensions,
                "joins" => &mut profile.joins,
                "smash_ideal" => &mut profile.smash_ideal,
                other => return Err((flag.column, format!("unknown collection flag '{other}'"))),
            };
            *slot = true;
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        c.expect(Tok::RBrace)?;
        if profile.all && profile != Profile::ALL_SPACES {
            return Err((name.column, "'all' cannot be combined with other flags".to_owned()));
        }
    }
    Ok(Stmt::Collection(name, profile))
}

fn fact(c: &mut Cursor) -> Result<Stmt, PErr> {
    let first = c.ident("fact")?;
    let (label, head) = if c.eat(&Tok::Colon) {
        (Some(first), c.ident("fact")?)
    } else {
        (None, first)
    };
    let Some(kind) = FactHead::from_name(&head.value) else {
        return Err((head.column, format!("unknown fact '{}'", head.value)));
    };
    let sig = kind.signature();
    c.expect(Tok::LParen)?;
    let mut args = Vec::with_capacity(sig.len());
    for (i, arg) in sig.iter().enumerate() {
        if i > 0 {
            if c.peek() == Some(&Tok::RParen) {
                return Err((
                    c.column(),
                    format!("{} takes {} arguments, found {i}", kind, sig.len()),
                ));
            }
            c.expect(Tok::Comma)?;
        }
        let column = c.column();
        let value = match arg {
            ArgKind::Space => Arg::Space(c.space()?.value),
            ArgKind::Map => Arg::Map(c.map_ref()?.value),
            ArgKind::Fact => Arg::Fact(c.ident("fact label")?.value),
        };
        args.push(Sp { value, column });
    }
    if c.peek() == Some(&Tok::Comma) {
        return Err((c.column(), format!("{} takes {} arguments", kind, sig.len())));
    }
    c.expect(Tok::RParen)?;
    Ok(Stmt::Fact {
        label,
        head: Sp { value: kind, column: head.column },
        args,
    })
}

fn statement(c: &mut Cursor) -> Result<Option<Stmt>, PErr> {
    let Some(Tok::Ident(keyword)) = c.peek() else {
        return match c.peek() {
            None => Ok(None),
            Some(_) => c.fail("statement"),
        };
    };
    let column = c.column();
    c.pos += 1;
    let stmt = match keyword.as_str() {
        "collection" => collection(c)?,
        "space" => {
            let mut names = vec![c.space()?];
            while c.eat(&Tok::Comma) {
                names.push(c.space()?);
            }
            Stmt::Spaces(names)
        }
        "map" => {
            let name = c.ident("map name")?;
            c.expect(Tok::Colon)?;
            let dom = c.space()?;
            c.expect(Tok::Arrow)?;
            let cod = c.space()?;
            Stmt::Map { name, dom, cod }
        }
        "fact" => fact(c)?,
        "bound" => {
            let inv = c.inv()?;
            let rel = if c.eat(&Tok::Le) {
                Rel::AtMost
            } else if c.eat(&Tok::Ge) {
                Rel::AtLeast
            } else if c.eat(&Tok::Eq) {
                Rel::Equal
            } else {
                return c.fail("'<=', '>=' or '='");
            };
            Stmt::Bound(inv, rel, c.value()?)
        }
        "query" => Stmt::Query(c.inv()?),
        "decomposition" => {
            let target = c.inv()?;
            match c.ident("'via'")? {
                v if v.value == "via" => {}
                v => return Err((v.column, format!("expected 'via', found '{}'", v.value))),
            }
            let cones = c.list(Tok::LBracket, Tok::RBracket, Cursor::space)?;
            let through = match c.peek() {
                Some(Tok::Ident(s)) if s == "through" => {
                    c.pos += 1;
                    Some(c.list(Tok::LBracket, Tok::RBracket, Cursor::space)?)
                }
                _ => None,
            };
            Stmt::Cert { target, cones, through }
        }
        other => return Err((column, format!("unknown statement '{other}'"))),
    };
    c.finish()?;
    Ok(Some(stmt))
}

/// Parse one invariant expression such as `cl(X)` or `L(init(Y))`.
///
/// Names are not resolved; that needs a scene.
pub fn parse_inv(text: &str) -> Result<InvRef, Diagnostic> {
    let positioned = |(column, message): PErr| Diagnostic { line: 1, column, message };
    let toks = lex_line(text).map_err(positioned)?;
    let mut c = Cursor::new(&toks, text.chars().count());
    let inv = c.inv().map_err(positioned)?;
    c.finish().map_err(positioned)?;
    Ok(inv.value)
}

/// Name lookups for shape checks over a scene that is still being built.
struct Names<'a> {
    scene: &'a Scene,
    labelled: &'a HashMap<String, Fact<String, MapRef, String>>,
}

impl ShapeLookup for Names<'_> {
    type Space = String;
    type Map = MapRef;
    type FactRef = String;

    fn dom(&self, map: &MapRef) -> String {
        self.scene.endpoints(map).map(|e| e.0).unwrap_or_default()
    }

    fn cod(&self, map: &MapRef) -> String {
        self.scene.endpoints(map).map(|e| e.1).unwrap_or_default()
    }

    fn fact(&self, label: &String) -> Option<Fact<String, MapRef, String>> {
        self.labelled.get(label).cloned()
    }
}

struct Resolver {
    errors: Vec<Diagnostic>,
    line: usize,
}

impl Resolver {
    fn error(&mut self, column: usize, message: String) {
        self.errors.push(Diagnostic { line: self.line, column, message });
    }

    fn space(&mut self, scene: &Scene, name: &Sp<String>) -> bool {
        let ok = scene.has_space(&name.value);
        if !ok {
            self.error(name.column, format!("unknown space '{}'", name.value));
        }
        ok
    }

    fn map(&mut self, scene: &Scene, map: &MapRef, column: usize) -> bool {
        match map {
            MapRef::Named(n) if !scene.maps.contains_key(n) => {
                self.error(column, format!("unknown map '{n}'"));
                false
            }
            MapRef::Init(x) | MapRef::Term(x) if !scene.has_space(x) => {
                self.error(column, format!("unknown space '{x}'"));
                false
            }
            _ => true,
        }
    }

    fn inv(&mut self, scene: &Scene, inv: &Sp<InvRef>) -> bool {
        self.map(scene, &inv.value.map, inv.column)
    }
}

/// Parse a scene, reporting every error found.
///
/// # Examples
///
/// ```
/// use conebound::scene::parse_scene;
///
/// let scene = parse_scene(
///     "collection All { all }\nspace X\nmap f : X -> X\nfact equiv(f)\nquery L(f)",
/// )
/// .unwrap();
/// assert_eq!(scene.spaces.len(), 1);
/// assert_eq!(scene.maps.len(), 1);
/// assert_eq!(scene.facts.len(), 1);
/// assert_eq!(scene.queries.len(), 1);
///
/// let err = parse_scene("collection C {}\nspace X\nspace X").unwrap_err();
/// assert_eq!(err.0[0].to_string(), "line 3: duplicate space 'X' (column 7)");
/// ```
pub fn parse_scene(text: &str) -> Result<Scene, ParseErrors> {
    let mut errors = Vec::new();
    let mut stmts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let positioned = |(column, message): PErr| Diagnostic { line: i + 1, column, message };
        let toks = match lex_line(line) {
            Ok(t) => t,
            Err(e) => {
                errors.push(positioned(e));
                continue;
            }
        };
        let mut c = Cursor::new(&toks, line.chars().count());
        match statement(&mut c) {
            Ok(Some(stmt)) => stmts.push((i + 1, stmt)),
            Ok(None) => {}
            Err(e) => errors.push(positioned(e)),
        }
    }
    let mut r = Resolver { errors, line: 1 };
    let scene = resolve(&mut r, stmts);
    let mut errors = r.errors;
    errors.sort_by_key(|d| (d.line, d.column));
    match scene {
        Some(scene) if errors.is_empty() => Ok(scene),
        _ => Err(ParseErrors(errors)),
    }
}

fn resolve(r: &mut Resolver, stmts: Vec<(usize, Stmt)>) -> Option<Scene> {
    let mut collection = None;
    let mut scene = Scene::new(Collection {
        name: String::new(),
        profile: Profile::default(),
    });

    // Declarations first, so later statements may use names declared below them.
    for (line, stmt) in &stmts {
        r.line = *line;
        match stmt {
            Stmt::Collection(name, profile) => {
                if collection.is_some() {
                    r.error(name.column, "multiple collection declarations".to_owned());
                } else {
                    collection = Some(Collection { name: name.value.clone(), profile: *profile });
                }
            }
            Stmt::Spaces(names) => {
                for name in names {
                    if name.value == POINT {
                        r.error(name.column, "the point space '*' is implicit".to_owned());
                    } else if !scene.spaces.insert(name.value.clone()) {
                        r.error(name.column, format!("duplicate space '{}'", name.value));
                    }
                }
            }
            _ => {}
        }
    }
    for (line, stmt) in &stmts {
        r.line = *line;
        if let Stmt::Map { name, dom, cod } = stmt {
            let ends = r.space(&scene, dom) & r.space(&scene, cod);
            if scene.maps.contains_key(&name.value) {
                r.error(name.column, format!("duplicate map '{}'", name.value));
            } else if ends {
                scene
                    .maps
                    .insert(name.value.clone(), (dom.value.clone(), cod.value.clone()));
            }
        }
    }

    let mut labelled = HashMap::new();
    for (line, stmt) in &stmts {
        r.line = *line;
        if let Stmt::Fact { label: Some(label), head, args } = stmt {
            let fact = head.value.build(args.iter().map(|a| a.value.clone()).collect());
            if labelled.contains_key(&label.value) {
                r.error(label.column, format!("duplicate fact label '{}'", label.value));
            } else if let Some(fact) = fact {
                labelled.insert(label.value.clone(), fact);
            }
        }
    }

    let mut literal: BTreeMap<InvRef, (ExtNat, ExtNat)> = BTreeMap::new();
    for (line, stmt) in stmts {
        r.line = line;
        match stmt {
            Stmt::Collection(..) | Stmt::Spaces(_) | Stmt::Map { .. } => {}
            Stmt::Fact { label, head, args } => {
                let mut ok = true;
                for arg in &args {
                    ok &= match &arg.value {
                        Arg::Space(s) => r.space(&scene, &Sp { value: s.clone(), column: arg.column }),
                        Arg::Map(m) => r.map(&scene, m, arg.column),
                        Arg::Fact(l) => {
                            let known = labelled.contains_key(l);
                            if !known {
                                r.error(arg.column, format!("unknown fact label '{l}'"));
                            }
                            known
                        }
                    };
                }
                if !ok {
                    continue;
                }
                let fact = head
                    .value
                    .build(args.into_iter().map(|a| a.value).collect())
                    .expect("arguments follow the signature");
                let names = Names { scene: &scene, labelled: &labelled };
                if let Err(e) = validate(&fact, &names) {
                    r.error(head.column, e.0);
                    continue;
                }
                scene.facts.push(FactStmt { label: label.map(|l| l.value), fact });
            }
            Stmt::Bound(inv, rel, value) => {
                if !r.inv(&scene, &inv) {
                    continue;
                }
                let bound = BoundStmt { inv: inv.value, rel, value };
                let (lo, hi) = bound.as_bounds();
                let entry = literal
                    .entry(bound.inv.clone())
                    .or_insert((ExtNat::ZERO, ExtNat::Inf));
                entry.0 = entry.0.max(lo.unwrap_or(ExtNat::ZERO));
                entry.1 = entry.1.min(hi.unwrap_or(ExtNat::Inf));
                if entry.0 > entry.1 {
                    r.error(
                        inv.column,
                        format!(
                            "conflicting bounds on {}: lower bound {} exceeds upper bound {}",
                            bound.inv, entry.0, entry.1
                        ),
                    );
                    continue;
                }
                scene.bounds.push(bound);
            }
            Stmt::Query(inv) => {
                if r.inv(&scene, &inv) {
                    scene.queries.push(inv.value);
                }
            }
            Stmt::Cert { target, cones, through } => {
                let mut ok = r.inv(&scene, &target);
                for s in cones.iter().chain(through.iter().flatten()) {
                    ok &= r.space(&scene, s);
                }
                let n = cones.len();
                let needed = match target.value.kind {
                    Kind::ConeLength => n - 1,
                    Kind::Category => n,
                };
                if let Some(through) = &through {
                    if through.len() != needed {
                        r.error(
                            through.first().map_or(target.column, |s| s.column),
                            format!(
                                "decomposition of {} with {n} cones needs {needed} intermediate spaces, found {}",
                                target.value,
                                through.len()
                            ),
                        );
                        ok = false;
                    }
                }
                if ok {
                    scene.certs.push(CertStmt {
                        target: target.value,
                        cones: cones.into_iter().map(|s| s.value).collect(),
                        through: through.map(|t| t.into_iter().map(|s| s.value).collect()),
                    });
                }
            }
        }
    }

    match collection {
        Some(c) => {
            scene.collection = c;
            Some(scene)
        }
        None => {
            r.errors.push(Diagnostic {
                line: 1,
                column: 1,
                message: "missing collection declaration".to_owned(),
            });
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn messages(text: &str) -> Vec<String> {
        parse_scene(text)
            .unwrap_err()
            .0
            .into_iter()
            .map(|d| d.to_string())
            .collect()
    }

    #[test]
    fn minimal_scene() {
        let s = parse_scene("collection All { all }\nspace X\nmap f : X -> X\nfact equiv(f)\nquery L(f)")
            .unwrap();
        assert!(s.collection.profile.all);
        assert_eq!(s.facts[0].fact, Fact::Equiv(MapRef::Named("f".into())));
        assert_eq!(
            s.queries,
            vec![InvRef { kind: Kind::ConeLength, map: MapRef::Named("f".into()) }]
        );
    }

    #[test]
    fn duplicate_space_is_reported_on_its_line() {
        let m = messages("collection C {}\nspace X\nspace X");
        assert_eq!(m, vec!["line 3: duplicate space 'X' (column 7)"]);
    }

    #[test]
    fn bad_bound_value() {
        let m = messages("collection C {}\nspace X\nbound cl(X) <= banana");
        assert_eq!(
            m,
            vec!["line 3: expected natural number or 'inf', found 'banana' (column 16)"]
        );
    }

    #[test]
    fn missing_arrow() {
        let m = messages("collection C {}\nspace X, Y\nmap f : X Y");
        assert!(m[0].starts_with("line 3: expected '->'"), "{m:?}");
    }

    #[test]
    fn recovers_and_reports_every_line() {
        let m = messages("collection C {}\nspace X\nmap f : X -> Q\nfact equiv(g)\nquery kl(Z)\ncollection D {}");
        assert_eq!(
            m,
            vec![
                "line 3: unknown space 'Q' (column 14)",
                "line 4: unknown map 'g' (column 12)",
                "line 5: unknown space 'Z' (column 7)",
                "line 6: multiple collection declarations (column 12)",
            ]
        );
    }

    #[test]
    fn missing_collection() {
        assert_eq!(messages("space X"), vec!["line 1: missing collection declaration (column 1)"]);
    }

    #[test]
    fn shape_mismatch() {
        let m = messages(
            "collection C {}\nspace A, B, C\nmap f : A -> B\nmap g : C -> A\nmap h : A -> C\nfact compose(h, g, f)",
        );
        assert_eq!(m, vec!["line 6: compose: cod(h) is C but cod(g) is A (column 6)"]);
    }

    #[test]
    fn arity_mismatch() {
        let m = messages("collection C {}\nspace X\nmap f : X -> X\nfact homotopic(f)");
        assert_eq!(m, vec!["line 4: homotopic takes 2 arguments, found 1 (column 17)"]);
        let m = messages("collection C {}\nspace X\nfact member(X, X)");
        assert_eq!(m, vec!["line 3: member takes 1 arguments (column 14)"]);
    }

    #[test]
    fn conflicting_literal_bounds() {
        let m = messages("collection C {}\nspace X\nbound cl(X) >= 4\nbound L(init(X)) <= 2");
        assert_eq!(
            m,
            vec!["line 4: conflicting bounds on cl(X): lower bound 4 exceeds upper bound 2 (column 7)"]
        );
    }

    #[test]
    fn labels_and_forward_references() {
        let s = parse_scene(
            "collection C { wedges }\nfact P: cofiber(f, j, Z)\nmap f : X -> Y\nmap j : Y -> Z\nspace X, Y, Z",
        )
        .unwrap();
        assert_eq!(s.facts[0].label.as_deref(), Some("P"));
    }

    #[test]
    fn certificate_arity() {
        let m = messages("collection C { suspensions }\nspace A, X\ndecomposition kl(X) via [A, A] through [X, A]");
        assert_eq!(
            m,
            vec!["line 3: decomposition of kl(X) with 2 cones needs 1 intermediate spaces, found 2 (column 41)"]
        );
    }

    #[test]
    fn standalone_invariants() {
        assert_eq!(
            parse_inv("L(init(X))").unwrap(),
            InvRef { kind: Kind::ConeLength, map: MapRef::Init("X".into()) }
        );
        assert_eq!(parse_inv("kit(*)").unwrap().to_string(), "kit(*)");
        assert!(parse_inv("cl(X) extra").is_err());
    }
}
