//! Exact computation of one-parameter fixed point invariants of torus
//! homotopies: semiconjugacy classes, the twisted Hochschild complex of ℤ[ℤ²],
//! the one-parameter trace, the Nielsen number N and the Lefschetz class L,
//! with boundary certificates that can be re-checked independently.

pub mod algebra;
pub mod error;
pub mod hochschild;
pub mod json;
pub mod lattice;
pub mod oracle;
pub mod semiconjugacy;
mod sparse;
pub mod trace;

pub use algebra::{apply_phi, ring_mul, Endomorphism, GroupElement, LinComb, RingElement};
pub use error::{Error, Result};
pub use hochschild::{
    d1, d2, decompose_components, homology_invariant, is_cycle, is_trivial, reduce_u_power, DEFAULT_SUPPORT_BOUND, Tensor1, Tensor2,
    TensorChain1, TensorChain2, TrivialityVerdict,
};
pub use lattice::{cokernel_reps, smith_normal_form, solve_affine, IntMatrix2, Lattice, Vec2};
pub use semiconjugacy::{class_count, class_id, same_class, semicentralizer, ClassId};
pub use trace::{
    analyze, det_slice, fixed_point_free_example, one_parameter_trace, validate_cellular, ActionSide,
    CellularHomotopyData, TheoremVerdict, TraceReport,
};
