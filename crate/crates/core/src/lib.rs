//! Bounds on cone length and category invariants of maps and spaces,
//! derived by saturating a scene of homotopy facts against a fixed rule
//! catalog.
//!
//! A run goes scene text → [`scene::parse_scene`] → [`scene::elaborate`] →
//! [`engine::saturate`], and every bound it reports can be traced back to
//! asserted bounds and facts with [`engine::explain`].
//!
//! ```
//! use conebound::engine::{saturate, Status};
//! use conebound::scene::{elaborate, parse_inv, parse_scene};
//!
//! let scene = parse_scene(
//!     "collection Hopf { all }
//!      space S1, S2, S3
//!      map p : S3 -> S2
//!      fact fibration(p, S1)
//!      bound cl(S1) = 1
//!      bound cl(S2) = 1",
//! )
//! .unwrap();
//! let elab = elaborate(&scene).unwrap();
//! let result = saturate(&elab);
//! assert_eq!(result.status, Status::Fixpoint);
//! let key = elab.resolve(&parse_inv("cl(S3)").unwrap()).unwrap();
//! assert_eq!(result.store.interval(key).unwrap().to_string(), "[0, 3]");
//! ```

pub mod cli;
pub mod corpus;
pub mod engine;
pub mod ext;
pub mod interval;
pub mod key;
pub mod report;
pub mod rules;
pub mod scene;
pub mod store;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/values.md")]
    mod values {}
    #[doc = include_str!("../../../book/src/scenes.md")]
    mod scenes {}
    #[doc = include_str!("../../../book/src/rules.md")]
    mod rules {}
    #[doc = include_str!("../../../book/src/saturation.md")]
    mod saturation {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
