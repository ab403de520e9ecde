//! Builds distributional word vectors from a lemmatized corpus, constructs
//! transitive-verb matrices, composes transitive-sentence meanings, and
//! evaluates verb-sense disambiguation against human similarity judgments.
//!
//! The numeric core is generic over the scalar type (see [`Scalar`], with
//! `f32` and `f64` implementations); the pipeline itself runs in `f64`, and
//! the aliases at the crate root pin that choice.

pub mod compose;
pub mod eval;
pub mod scalar;
pub mod space;
pub mod tensor;
pub mod verbs;

pub use scalar::Scalar;
pub use tensor::{Matrix, Similarity, TensorError, Vector};

/// An r-dimensional weighted co-occurrence row vector, as used everywhere in
/// the `f64` pipeline.
pub type SemanticVector = Vector<f64>;

/// An r x r real matrix holding a verb meaning or a composed sentence
/// meaning in the `f64` pipeline.
pub type DenseMatrix = Matrix<f64>;
