//! Points and affinoid domains of the Berkovich line over `Q_p` with
//! rational centers: classification, membership, nice covers, refinement
//! and parity functions.

pub mod cover;
pub mod domain;
pub mod point;

pub use cover::{
    cover_with_intersections, intersection_points, is_nice_cover, nice_refinement, parity_function, refine_pair,
    NiceCover, NiceReport, Violation,
};
pub use domain::{boundary, meet, membership, sample_points, AffinoidDomain, Disc, Membership, SwissCheese};
pub use point::{classify_point, distance, BerkPoint, LogNorm, PointType};
