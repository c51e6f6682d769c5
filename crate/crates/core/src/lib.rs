//! Operator frames and K-operator frames over matrix *-algebras.
//!
//! The model is concrete throughout: the algebra is the d×d complex
//! matrices, module vectors are d×(n·d) matrices with inner product
//! X·Yᴴ, and adjointable operators act by right multiplication. Weighted
//! finite families of such operators form operator frames; the
//! [`perturbation`] module certifies the classical stability bounds for
//! them against independently computed optimal spectral bounds, and
//! [`harness`] mass-produces seeded instances for verification campaigns.

pub mod cstar;
pub mod error;
pub mod frames;
pub mod harness;
pub mod hilbert;
pub mod perturbation;
pub(crate) mod seed;

#[cfg(test)]
pub(crate) mod testutil;

pub use cstar::{
    hermitian_eigenvalues, loewner_leq, pencil_inf, pencil_sup, AlgebraElement, PencilResult,
    PencilValue, Tolerance,
};
pub use error::{Error, Result};
pub use frames::{
    analysis, classify, frame_gram, frame_operator, k_frame_bounds, optimal_bounds, remark_bound,
    s_k, synthesis, FrameBounds, FrameClassification, KOperator, MeasureSpace, OperatorFrame,
};
pub use hilbert::{inner_product, l2_inner, module_action, L2Family, ModuleOperator, ModuleVector};
pub use perturbation::{
    certify_bessel_sum, certify_combination, certify_extension, certify_k_perturbation,
    certify_min_condition, certify_weighted, minimal_extension_norm, optimal_min_constant,
    Certificate, Sign, TheoremId,
};
