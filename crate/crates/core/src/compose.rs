//! Sentence composition and sentence-pair similarity.
//!
//! The categorical model composes `sub verb obj` as the component-wise
//! product of the verb matrix with the kronecker product of the subject and
//! object vectors. Word vectors go in raw; normalization happens only at
//! the similarity step, where composed outputs are compared by cosine.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tensor::{Matrix, Similarity, TensorError, Vector};
use crate::verbs::{MatrixMethod, VerbMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComposeError {
    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error("cannot compare a {left} meaning with a {right} meaning")]
    IncomparableMeanings {
        left: &'static str,
        right: &'static str,
    },
}

/// A composed sentence meaning. The categorical model produces matrices;
/// the additive and multiplicative models produce vectors; the baseline
/// keeps the bare verb vector.
#[derive(Debug, Clone, PartialEq)]
pub enum SentenceMeaning<T = f64> {
    Matrix(Matrix<T>),
    Vector(Vector<T>),
    VerbOnly(Vector<T>),
}

impl<T> SentenceMeaning<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            SentenceMeaning::Matrix(_) => "matrix",
            SentenceMeaning::Vector(_) => "vector",
            SentenceMeaning::VerbOnly(_) => "verb-only",
        }
    }
}

/// A composition model, as named in evaluation reports. The categorical
/// model additionally carries the verb-matrix construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelSpec {
    Baseline,
    Add,
    Multiply,
    Categorical(MatrixMethod),
}

impl ModelSpec {
    pub const ALL: [ModelSpec; 7] = [
        ModelSpec::Baseline,
        ModelSpec::Add,
        ModelSpec::Multiply,
        ModelSpec::Categorical(MatrixMethod::Indirect),
        ModelSpec::Categorical(MatrixMethod::ZeroDiag),
        ModelSpec::Categorical(MatrixMethod::OneDiag),
        ModelSpec::Categorical(MatrixMethod::KronSelf),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Baseline => "baseline",
            ModelSpec::Add => "add",
            ModelSpec::Multiply => "multiply",
            ModelSpec::Categorical(MatrixMethod::Indirect) => "categorical-indirect",
            ModelSpec::Categorical(MatrixMethod::ZeroDiag) => "categorical-zero-diag",
            ModelSpec::Categorical(MatrixMethod::OneDiag) => "categorical-one-diag",
            ModelSpec::Categorical(MatrixMethod::KronSelf) => "categorical-kron-self",
        }
    }

    pub fn matrix_method(&self) -> Option<MatrixMethod> {
        match self {
            ModelSpec::Categorical(method) => Some(*method),
            _ => None,
        }
    }

    /// Only the categorical-indirect model needs SVO triples.
    pub fn requires_triples(&self) -> bool {
        matches!(self, ModelSpec::Categorical(MatrixMethod::Indirect))
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "baseline" => Ok(ModelSpec::Baseline),
            "add" => Ok(ModelSpec::Add),
            "multiply" => Ok(ModelSpec::Multiply),
            other => match other.strip_prefix("categorical-") {
                Some(method) => Ok(ModelSpec::Categorical(method.parse()?)),
                None => Err(format!(
                    "unknown model {other:?} (expected baseline, add, multiply or categorical-<method>)"
                )),
            },
        }
    }
}

/// Categorical composition: `verb_matrix (.) kron(subject, object)`.
pub fn compose_categorical<T: Scalar>(
    verb: &VerbMatrix<T>,
    subject: &Vector<T>,
    object: &Vector<T>,
) -> Result<SentenceMeaning<T>, ComposeError> {
    let pair = subject.kron(object)?;
    let meaning = verb.matrix().hadamard(&pair)?;
    Ok(SentenceMeaning::Matrix(meaning))
}

/// Additive composition: `subject + verb + object`.
pub fn compose_additive<T: Scalar>(
    verb: &Vector<T>,
    subject: &Vector<T>,
    object: &Vector<T>,
) -> Result<SentenceMeaning<T>, ComposeError> {
    Ok(SentenceMeaning::Vector(subject.add(verb)?.add(object)?))
}

/// Multiplicative composition: `subject (.) verb (.) object`.
pub fn compose_multiplicative<T: Scalar>(
    verb: &Vector<T>,
    subject: &Vector<T>,
    object: &Vector<T>,
) -> Result<SentenceMeaning<T>, ComposeError> {
    Ok(SentenceMeaning::Vector(
        subject.hadamard(verb)?.hadamard(object)?,
    ))
}

/// Baseline: the verb vector stands in for the whole sentence; subject and
/// object are ignored.
pub fn compose_baseline<T: Scalar>(verb: &Vector<T>) -> SentenceMeaning<T> {
    SentenceMeaning::VerbOnly(verb.clone())
}

/// Cosine similarity between two sentence meanings of the same kind:
/// Frobenius cosine for matrices, vector cosine otherwise. Comparing
/// meanings of different kinds is an error, not a coercion.
pub fn similarity<T: Scalar>(
    first: &SentenceMeaning<T>,
    second: &SentenceMeaning<T>,
) -> Result<Similarity<T>, ComposeError> {
    match (first, second) {
        (SentenceMeaning::Matrix(a), SentenceMeaning::Matrix(b)) => Ok(a.cosine(b)?),
        (SentenceMeaning::Vector(a), SentenceMeaning::Vector(b)) => Ok(a.cosine(b)?),
        (SentenceMeaning::VerbOnly(a), SentenceMeaning::VerbOnly(b)) => Ok(a.cosine(b)?),
        (a, b) => Err(ComposeError::IncomparableMeanings {
            left: a.kind(),
            right: b.kind(),
        }),
    }
}
