//! Numerical certification of coverings and the constructive lower-bound
//! witness.

mod coverage;
mod maximality;
mod vertex;
mod witness;

pub use coverage::{
    adversarial_search, certify_sampling, check_point, simplex_dichotomy, smoothness_certified_fraction,
    AdversarialResult, CoverageReport, CLOSED_TOLERANCE,
};
pub use maximality::{certify_maximality, MaximalityReport, MAX_AUGMENTATIONS};
pub use vertex::{linf_vertex_check, vertices_in_open_ball, LinfVertexReport, MAX_VERTEX_DIM};
pub use witness::{affine_hull_distance, heavy_coordinate, uncovered_witness};

pub(crate) use coverage::smoothness_certified_fraction as smoothness_certificate;
