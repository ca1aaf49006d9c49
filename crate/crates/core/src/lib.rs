//! Polyhedra with identified faces: validation, orbit analysis, quotient
//! classification, cycle-2 moves and minimization.
//!
//! A [`Polyhedron`] is a [`CellDividedBall`] together with a perfect matching
//! of its faces. Everything downstream (scar complex, links, homology,
//! minimization, census) is a pure function of that value.

mod canon;
pub mod catalog;
pub mod error;
pub mod export;
pub mod moves;
pub mod pif;
pub mod quotient;
pub mod report;
pub mod scheme;
pub mod smith;
pub mod surface_map;
mod union_find;

pub use error::{Error, Result};
pub use moves::{AttachPoint, MinimizeResult, Outcome, Verdict};
pub use quotient::{audit, HomologyResult, LinkSurface, LocalModel, ScarComplex};
pub use report::Classification;
pub use scheme::{CanonicalForm, EdgeClass, FacePairing, Polyhedron, VertexClass};
pub use surface_map::{CellDividedBall, Dart, FaceId, FaceWord, LabelId, Sign, SignedLabel, VertexId};
