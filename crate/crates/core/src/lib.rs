//! `blochpair` models a pair of entangled spin-1/2 systems on the Bloch
//! ball: density states as ball points, measurements as orthogonal
//! projections, conjugate-linear constraint maps carrying the collapse of
//! one spin to the induced state of the other, the Schmidt diagonal form
//! with its entanglement parameter `r`, and both the non-collapse (Lueders)
//! and collapse (Von Neumann) measurement updates.
//!
//! Every geometric law has an independent Hilbert-space route, so each
//! closed form is checkable against a brute-force matrix pipeline.

pub mod bipartite;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod sphere;

/// Complex scalar type used throughout the crate.
pub use num_complex::Complex64;

pub use bipartite::{
    state_from_schmidt, BipartiteState, ConstraintDirection, ConstraintMap, OrthonormalBasis2,
    SchmidtForm,
};
pub use error::{Error, Result};
pub use linalg::{
    eig_hermitian2, partial_trace_over_first, partial_trace_over_second, tensor, CMatrix2,
    CMatrix4, CVector2, EigenPair2, ALGEBRAIC_TOLERANCE, DEFAULT_TOLERANCE,
};
pub use measurement::{
    collapse_pair, constraint_image_norm_sq, luder_pair, map_sphere_grid, orthogonality_defect,
    partner_polar_cosine, sample_collapse, Branch, CollapseOutcome, GridImage, MeasuredSpin,
    NonCollapseResult, SampleHistogram, ZERO_PROBABILITY_THRESHOLD,
};
pub use sphere::{
    born_probabilities, density_from_point, little_sphere_locus, luder_single,
    point_from_density, project_onto_direction, ray_from_angles, CartesianPoint, Direction,
    RayState, SphericalPoint,
};
