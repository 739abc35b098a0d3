//! The convolution algebra of an A∞-algebra: multilinear operations on the
//! suspension, the pre-Lie product `⋆`, ∞-morphisms and their actions.

mod calculus;
mod compose;
mod convolution;
mod decalage;
pub mod random;
mod series;

pub use calculus::{
    adjoint, bracket, compose_infty, differential, infty_morphism_residual, invert_infty, is_infty_morphism, is_mc,
    isotopy_action, isotopy_action_closed_form, left_action, marked_composite, mc_residual, one_plus, right_action,
    star,
};
pub use convolution::{to_lie, ConvolutionLie, ConvolutionMode, DEFAULT_BASIS_CAP};
pub use compose::{compose, InnerIndex, Slots};
pub use decalage::{decalage_exponent, from_unshifted, to_unshifted};
pub use series::{same_space, ConvElement, InftyMorphism, MultiOp, OpSeries, Tuple};

/// Errors raised by the operation calculus.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AinfError {
    /// Operands live on different spaces.
    #[error("operands live on different graded spaces")]
    SpaceMismatch,
    /// Operands have incompatible element degrees.
    #[error("element degree {0} where {1} is required")]
    DegreeMismatch(i32, i32),
    /// A required inverse does not exist.
    #[error("not invertible: {0}")]
    Singular(String),
    /// Malformed operands.
    #[error("invalid shape: {0}")]
    Shape(String),
    /// A generated basis exceeds the configured cap.
    #[error("convolution basis of weight {weight} and degree {degree} exceeds the cap of {cap} elements")]
    TooLarge {
        /// Weight of the offending component.
        weight: usize,
        /// Degree of the offending component.
        degree: i32,
        /// Configured cap.
        cap: usize,
    },
}
