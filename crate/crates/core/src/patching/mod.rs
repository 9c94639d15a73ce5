//! Patching across type 3 points: degree-wise splitting on an annulus,
//! successive approximation for a group law near the identity, `SL_2`
//! factorization across a circle, and patching over a nice cover.

pub mod approx;
pub mod chart;
pub mod cover;
pub mod factor;
pub mod matrix;

pub use approx::{
    laurent_split, residual_valuation, successive_approximation, vector_valuation, AnnulusSplit,
    ApproximationResult, IterationStep, PatchingProblem,
};
pub use chart::{Chart, Constants};
pub use cover::{half_window, patch_over_cover, IdentityCheck, PatchResult, PeelOrder, Transition};
pub use factor::{factor_matrix, factor_oriented, supported_on, Factorization, Side};
pub use matrix::Mat2;
