//! Minimal width, strict antipodality and reducedness of convex polytopes in
//! three dimensions, plus a solver for a twelve-vertex reduced family.
//!
//! Polytopes are built with [`convex_hull`] or [`Polytope::from_lattice`];
//! [`minimum_width`] gives the width and the face pairs attaining it, and
//! [`is_reduced`] decides reducedness. [`scan_certificate`] searches for a
//! vertex/facet configuration that proves a polytope is not reduced.

pub mod antipodal;
pub mod certificate;
pub mod construction;
pub mod error;
pub mod hull;
pub mod off;
pub mod polytope;
pub mod reduced;
pub mod report;
pub mod vec3;

pub use antipodal::{
    minimum_width, minkowski_difference, minkowski_sum_dimension, strictly_antipodal,
    strictly_antipodal_pairs, AntipodalPair, WidthReport,
};
pub use certificate::{check_conditions, scan_certificate, Certificate, ConditionReport};
pub use error::{Error, Result};
pub use hull::convex_hull;
pub use off::{parse_off, write_off, OffDocument};
pub use polytope::{rho, support, Face, FaceKind, Polytope, DEFAULT_TOLERANCE};
pub use reduced::{is_reduced, ReducednessReport, VertexStatus};
pub use report::JsonReport;
pub use vec3::Vec3;
