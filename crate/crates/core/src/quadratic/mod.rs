//! Diagonal quadratic forms: trivial Witt splitting, unit-block
//! decompositions, isotropy decisions and u-invariant bounds.

pub mod bounds;
pub mod decomposition;
pub mod fields;
pub mod isotropy;

pub use bounds::{u_bound, FieldProfile, UBound};
pub use decomposition::{
    unit_block_decomposition, verify_decomposition, Block, BlockDecomposition, BlockMember, DecompositionMode,
};
pub use fields::{AbstractField, FormField, MonomialElement, PadicField, PointField, PointKind};
pub use isotropy::{
    evaluate_rational_form, isotropic_padic, local_isotropy_at_point, springer_split, verify_padic_witness,
    witt_split_trivial, IsotropyCertificate, SearchLimits, SpringerMember, SpringerSplit, TraceStep, Verdict,
    Witness, WitnessKind, WittSplit,
};
