//! Certified computations for Schottky groups acting on the Poincaré ball.
//!
//! The crate enumerates group elements as reduced words, evaluates orbits,
//! isometric spheres and nested disk covers of the limit set, computes the
//! quotient metric `inf_γ d_H(x, γy)` with a certified tail bound, and builds
//! Euclidean balls around points of the domain of discontinuity on which the
//! projection to the quotient manifold is an isometry.
//!
//! Inner loops (element enumeration, orbit evaluation, pair verification) run
//! on rayon when the `parallel` feature is enabled; see [`exec`].

// `!(x > 0.0)` is used deliberately so that NaN inputs fall into the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod group;
pub mod isometry;
pub mod word;

pub use certify::{
    certified_neighborhood, good_constant, lipschitz_constant, precisely_invariant_radius,
    quotient_distance, shrink_radius_for_constant, sup_isometric_radius, verify_isometry_on,
    CertifiedNeighborhood, QuotientDistanceResult, QuotientMetric, VerificationReport,
};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use geometry::{
    euclidean_distance, hyperbolic_distance, InversionSphere, Point, PointKind, Vector,
};
pub use group::{
    disk_cover, element_of, limit_set_sample, min_tail_orbit_norm, orbit, reduced_words,
    validate_schottky, DiskCover, ElementTable, SchottkyGroup, ValidationReport,
};
pub use isometry::{orbit_norm_from_radius, Factor, FactorList, Isometry};
pub use word::{Letter, Word};
