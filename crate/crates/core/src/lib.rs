//! Polymatroids, matroids and entropy vectors on small ground sets.
//!
//! The crate is organised around a single representation: a set function on
//! the subsets of `{1, ..., n}`, stored densely and indexed by bitmask (bit
//! `i - 1` set means element `i` belongs to the subset).
//!
//! * [`setfn`]: rank vectors, polymatroid axioms, restriction.
//! * [`matroid`]: circuits, loops, parallel classes, connectivity.
//! * [`cone`]: elemental inequalities, tight sets and minimal-face dimension.
//! * [`entropy`]: joint distributions, entropy vectors and explicit
//!   distributions realizing points of a face.
//! * [`classify`]: the four-way classification of faces spanned by a matroid
//!   and a rank-one matroid, together with region membership.
//! * [`io`]: JSON and CSV file formats.

pub mod catalog;
pub mod classify;
pub mod cone;
pub mod entropy;
pub mod error;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod setfn;

pub use classify::{
    classify_face, region_boundary_data, region_membership, restricted_pair_type, Chi, ChiOracle,
    ChiView, FaceReport, FaceType, Region, RegionPiece,
};
pub use cone::{
    enumerate_facets, is_extreme_ray, is_two_face, minimal_face_dim, slack, tight_set, FacetId,
    TightSet,
};
pub use entropy::{Certificate, JointDistribution};
pub use error::{Error, Result};
pub use matroid::{Matroid, UniformSpec};
pub use setfn::{EntropyVector, GroundSet, RankVector, Subset};

/// Comparison tolerance used for every floating-point entropy comparison.
pub const TOLERANCE: f64 = 1e-9;
