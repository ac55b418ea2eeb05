//! Canonical text for a scene.

use std::fmt::Write;

use super::{Scene, POINT};

/// Render a scene so that parsing the output gives back the same scene.
///
/// Declarations come out sorted by name; facts, bounds, certificates and
/// queries keep their order. The point space is never declared.
///
/// ```
/// use conebound::scene::{parse_scene, render_scene};
///
/// let text = "collection S { suspensions }\nspace Y, X\nmap f : X -> Y\nbound L(f) <= 3\n";
/// let scene = parse_scene(text).unwrap();
/// let out = render_scene(&scene);
/// assert_eq!(out, "collection S { suspensions }\nspace X, Y\nmap f : X -> Y\nbound L(f) <= 3\n");
/// assert_eq!(parse_scene(&out).unwrap(), scene);
/// ```
pub fn render_scene(scene: &Scene) -> String {
    let mut out = String::new();
    let flags: Vec<&str> = scene
        .collection
        .profile
        .declared()
        .into_iter()
        .map(|c| c.name())
        .collect();
    if flags.is_empty() {
        writeln!(out, "collection {} {{}}", scene.collection.name).unwrap();
    } else {
        writeln!(out, "collection {} {{ {} }}", scene.collection.name, flags.join(", ")).unwrap();
    }
    let spaces: Vec<&str> = scene
        .spaces
        .iter()
        .map(String::as_str)
        .filter(|s| *s != POINT)
        .collect();
    if !spaces.is_empty() {
        writeln!(out, "space {}", spaces.join(", ")).unwrap();
    }
    for (name, (dom, cod)) in &scene.maps {
        writeln!(out, "map {name} : {dom} -> {cod}").unwrap();
    }
    for stmt in &scene.facts {
        match &stmt.label {
            Some(label) => writeln!(out, "fact {label}: {}", stmt.fact).unwrap(),
            None => writeln!(out, "fact {}", stmt.fact).unwrap(),
        }
    }
    for b in &scene.bounds {
        writeln!(out, "bound {} {} {}", b.inv, b.rel.symbol(), b.value).unwrap();
    }
    for cert in &scene.certs {
        write!(out, "decomposition {} via [{}]", cert.target, cert.cones.join(", ")).unwrap();
        if let Some(through) = &cert.through {
            write!(out, " through [{}]", through.join(", ")).unwrap();
        }
        out.push('\n');
    }
    for q in &scene.queries {
        writeln!(out, "query {q}").unwrap();
    }
    out
}
