//! Scenes shipped with the crate, each with its expected JSON report.

/// A bundled scene and its golden report.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub scene: &'static str,
    pub golden: &'static str,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// The bundled scenes, ordered by file name.
        pub const BUNDLED: &[Scenario] = &[$(Scenario {
            name: concat!($name, ".scene"),
            scene: include_str!(concat!("../corpus/", $name, ".scene")),
            golden: include_str!(concat!("../corpus/", $name, ".json")),
        }),*];
    };
}

bundled!(
    "cp3-cofiber",
    "example74",
    "example75",
    "hopf",
    "problem78",
    "product-grid",
    "varadarajan",
    "wedge-equality",
);

pub fn find(name: &str) -> Option<&'static Scenario> {
    BUNDLED
        .iter()
        .find(|s| s.name == name || s.name.strip_suffix(".scene") == Some(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_is_sorted_and_complete() {
        let names: Vec<&str> = BUNDLED.iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        let on_disk = std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "scene"))
            .count();
        assert_eq!(on_disk, BUNDLED.len());
        assert!(find("hopf").is_some());
    }
}
