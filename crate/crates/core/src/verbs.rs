//! Transitive-verb matrix construction.
//!
//! Four methods are supported: the indirect sum of subject/object kronecker
//! products over corpus observations, the verb vector embedded on the
//! diagonal with 0 or 1 off-diagonal padding, and the kronecker product of
//! the verb vector with itself. Padding constants are exactly 0.0 and 1.0
//! with no rescaling to the weight magnitude, and the indirect sum is kept
//! raw (not normalized by the number of triples).

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::space::{SemanticSpace, SvoTripleSet};
use crate::tensor::{Matrix, TensorError};

/// First header field of the verb-matrix cache file format.
pub const VERB_MATRIX_FORMAT: &str = "tensor-verb-matrix v1";

/// Below this workload (dimension x pair count) the indirect sum stays on
/// one thread.
const PARALLEL_CELL_THRESHOLD: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum VerbError {
    #[error("word {word:?} is not in the semantic space")]
    OutOfVocabulary { word: String },

    #[error("verb {verb:?} has no usable subject/object observations")]
    NoObservations { verb: String },

    #[error("the indirect method requires an SVO triple set")]
    TriplesRequired,

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("verb-matrix file line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("unsupported verb-matrix header {found:?}, expected {VERB_MATRIX_FORMAT:?}")]
    Version { found: String },
}

fn io_error(path: &Path, source: io::Error) -> VerbError {
    VerbError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// How a verb matrix was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixMethod {
    /// Count-weighted sum of subject (x) object kronecker products.
    Indirect,
    /// Verb vector on the diagonal, zeros elsewhere.
    ZeroDiag,
    /// Verb vector on the diagonal, ones elsewhere.
    OneDiag,
    /// Kronecker product of the verb vector with itself.
    KronSelf,
}

impl MatrixMethod {
    pub const ALL: [MatrixMethod; 4] = [
        MatrixMethod::Indirect,
        MatrixMethod::ZeroDiag,
        MatrixMethod::OneDiag,
        MatrixMethod::KronSelf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixMethod::Indirect => "indirect",
            MatrixMethod::ZeroDiag => "zero-diag",
            MatrixMethod::OneDiag => "one-diag",
            MatrixMethod::KronSelf => "kron-self",
        }
    }
}

impl fmt::Display for MatrixMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixMethod {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "indirect" => Ok(MatrixMethod::Indirect),
            "zero-diag" | "0-diag" => Ok(MatrixMethod::ZeroDiag),
            "one-diag" | "1-diag" => Ok(MatrixMethod::OneDiag),
            "kron-self" => Ok(MatrixMethod::KronSelf),
            other => Err(format!(
                "unknown matrix method {other:?} (expected indirect, zero-diag, one-diag or kron-self)"
            )),
        }
    }
}

/// A verb's r x r matrix together with the method that produced it, so
/// downstream reports can group results per construction method.
#[derive(Debug, Clone, PartialEq)]
pub struct VerbMatrix<T = f64> {
    verb: String,
    method: MatrixMethod,
    matrix: Matrix<T>,
}

impl<T: Scalar> VerbMatrix<T> {
    pub fn new(verb: String, method: MatrixMethod, matrix: Matrix<T>) -> Self {
        Self {
            verb,
            method,
            matrix,
        }
    }

    pub fn verb(&self) -> &str {
        &self.verb
    }

    pub fn method(&self) -> MatrixMethod {
        self.method
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }
}

/// Out-of-vocabulary bookkeeping for one indirect build. Pairs whose subject
/// or object has no vector are skipped, not fatal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndirectStats {
    pub pairs_used: usize,
    pub pairs_skipped: usize,
    pub oov_words: BTreeSet<String>,
}

/// Builds the indirect matrix: the sum over (subject, object, count)
/// observations of `count * kron(subject_vector, object_vector)`.
///
/// Pair order is fixed (sorted), and each cell accumulates its contributions
/// left to right, so the result is bit-identical across runs and thread
/// counts.
pub fn build_indirect<T: Scalar>(
    verb: &str,
    triples: &SvoTripleSet,
    space: &SemanticSpace<T>,
) -> Result<(VerbMatrix<T>, IndirectStats), VerbError> {
    let pairs = triples.pairs(verb).ok_or_else(|| VerbError::NoObservations {
        verb: verb.to_owned(),
    })?;

    let mut stats = IndirectStats::default();
    let mut resolved = Vec::new();
    for (subject, object, count) in pairs {
        match (space.vector(subject), space.vector(object)) {
            (Some(sv), Some(ov)) => {
                resolved.push((T::from_count(count), sv, ov));
                stats.pairs_used += 1;
            }
            (sv, ov) => {
                if sv.is_none() {
                    stats.oov_words.insert(subject.to_owned());
                }
                if ov.is_none() {
                    stats.oov_words.insert(object.to_owned());
                }
                stats.pairs_skipped += 1;
            }
        }
    }
    if resolved.is_empty() {
        return Err(VerbError::NoObservations {
            verb: verb.to_owned(),
        });
    }

    let r = space.dimension();
    let mut entries = vec![T::zero(); r * r];
    let fill_row = |(i, row): (usize, &mut [T])| {
        for (weight, sv, ov) in &resolved {
            let factor = *weight * sv[i];
            for (cell, &o) in row.iter_mut().zip(ov.as_slice()) {
                *cell = *cell + factor * o;
            }
        }
    };
    if r * resolved.len() >= PARALLEL_CELL_THRESHOLD {
        entries.par_chunks_mut(r).enumerate().for_each(fill_row);
    } else {
        entries.chunks_mut(r).enumerate().for_each(fill_row);
    }

    let matrix = Matrix::new(r, r, entries)?;
    Ok((
        VerbMatrix::new(verb.to_owned(), MatrixMethod::Indirect, matrix),
        stats,
    ))
}

fn lexical_vector<'s, T: Scalar>(
    verb: &str,
    space: &'s SemanticSpace<T>,
) -> Result<&'s crate::tensor::Vector<T>, VerbError> {
    space.vector(verb).ok_or_else(|| VerbError::OutOfVocabulary {
        word: verb.to_owned(),
    })
}

/// Embeds the verb vector on the diagonal with zero padding elsewhere.
pub fn build_zero_diag<T: Scalar>(
    verb: &str,
    space: &SemanticSpace<T>,
) -> Result<VerbMatrix<T>, VerbError> {
    let vector = lexical_vector(verb, space)?;
    let r = vector.len();
    let mut entries = vec![T::zero(); r * r];
    for i in 0..r {
        entries[i * r + i] = vector[i];
    }
    Ok(VerbMatrix::new(
        verb.to_owned(),
        MatrixMethod::ZeroDiag,
        Matrix::new(r, r, entries)?,
    ))
}

/// Embeds the verb vector on the diagonal with one padding elsewhere.
pub fn build_one_diag<T: Scalar>(
    verb: &str,
    space: &SemanticSpace<T>,
) -> Result<VerbMatrix<T>, VerbError> {
    let vector = lexical_vector(verb, space)?;
    let r = vector.len();
    let mut entries = vec![T::one(); r * r];
    for i in 0..r {
        entries[i * r + i] = vector[i];
    }
    Ok(VerbMatrix::new(
        verb.to_owned(),
        MatrixMethod::OneDiag,
        Matrix::new(r, r, entries)?,
    ))
}

/// The kronecker product of the verb vector with itself:
/// `matrix[i][j] = c_i * c_j`.
pub fn build_kron_self<T: Scalar>(
    verb: &str,
    space: &SemanticSpace<T>,
) -> Result<VerbMatrix<T>, VerbError> {
    let vector = lexical_vector(verb, space)?;
    Ok(VerbMatrix::new(
        verb.to_owned(),
        MatrixMethod::KronSelf,
        vector.kron(vector)?,
    ))
}

/// Dispatches on the method. `triples` is only consulted for the indirect
/// method; stats are `None` for the other three.
pub fn build_verb_matrix<T: Scalar>(
    method: MatrixMethod,
    verb: &str,
    space: &SemanticSpace<T>,
    triples: Option<&SvoTripleSet>,
) -> Result<(VerbMatrix<T>, Option<IndirectStats>), VerbError> {
    match method {
        MatrixMethod::Indirect => {
            let triples = triples.ok_or(VerbError::TriplesRequired)?;
            let (matrix, stats) = build_indirect(verb, triples, space)?;
            Ok((matrix, Some(stats)))
        }
        MatrixMethod::ZeroDiag => Ok((build_zero_diag(verb, space)?, None)),
        MatrixMethod::OneDiag => Ok((build_one_diag(verb, space)?, None)),
        MatrixMethod::KronSelf => Ok((build_kron_self(verb, space)?, None)),
    }
}

fn write_verb_matrix_inner<T: Scalar, W: Write>(
    matrix: &VerbMatrix<T>,
    mut out: W,
) -> io::Result<()> {
    writeln!(
        out,
        "{VERB_MATRIX_FORMAT}\tverb={}\tmethod={}\tdim={}",
        matrix.verb(),
        matrix.method(),
        matrix.dimension()
    )?;
    for i in 0..matrix.dimension() {
        let row = matrix.matrix().row(i);
        let mut first = true;
        for value in row {
            if first {
                write!(out, "{value}")?;
                first = false;
            } else {
                write!(out, "\t{value}")?;
            }
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes a matrix in the cache format: a header line followed by one
/// tab-separated row of round-trip-exact decimals per matrix row.
pub fn save_verb_matrix<T: Scalar>(matrix: &VerbMatrix<T>, path: &Path) -> Result<(), VerbError> {
    let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    let mut writer = io::BufWriter::new(file);
    write_verb_matrix_inner(matrix, &mut writer).map_err(|e| io_error(path, e))?;
    writer.flush().map_err(|e| io_error(path, e))
}

pub fn verb_matrix_to_string<T: Scalar>(matrix: &VerbMatrix<T>) -> String {
    let mut buffer = Vec::new();
    write_verb_matrix_inner(matrix, &mut buffer).expect("writing to memory cannot fail");
    String::from_utf8(buffer).expect("matrix text is UTF-8")
}

pub fn parse_verb_matrix<T: Scalar>(text: &str) -> Result<VerbMatrix<T>, VerbError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(VerbError::Format {
        line: 1,
        message: "unexpected end of file before header".into(),
    })?;
    let fields: Vec<&str> = header.split('\t').collect();
    if fields.first().copied() != Some(VERB_MATRIX_FORMAT) {
        return Err(VerbError::Version {
            found: fields.first().copied().unwrap_or_default().to_owned(),
        });
    }
    if fields.len() != 4 {
        return Err(VerbError::Format {
            line: 1,
            message: format!("expected 4 header fields, found {}", fields.len()),
        });
    }
    let verb = fields[1]
        .strip_prefix("verb=")
        .ok_or_else(|| VerbError::Format {
            line: 1,
            message: format!("malformed verb field {:?}", fields[1]),
        })?;
    let method: MatrixMethod = fields[2]
        .strip_prefix("method=")
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| VerbError::Format {
            line: 1,
            message: format!("malformed method field {:?}", fields[2]),
        })?;
    let dimension: usize = fields[3]
        .strip_prefix("dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| VerbError::Format {
            line: 1,
            message: format!("malformed dimension field {:?}", fields[3]),
        })?;

    let mut entries = Vec::with_capacity(dimension * dimension);
    let mut rows = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let mut row_len = 0;
        for field in line.split('\t') {
            let value = T::parse_decimal(field).ok_or_else(|| VerbError::Format {
                line: lineno,
                message: format!("invalid entry {field:?}"),
            })?;
            entries.push(value);
            row_len += 1;
        }
        if row_len != dimension {
            return Err(VerbError::Format {
                line: lineno,
                message: format!("expected {dimension} entries per row, found {row_len}"),
            });
        }
        rows += 1;
    }
    if rows != dimension {
        return Err(VerbError::Format {
            line: rows + 1,
            message: format!("expected {dimension} rows, found {rows}"),
        });
    }
    let matrix = Matrix::new(dimension, dimension, entries)?;
    Ok(VerbMatrix::new(verb.to_owned(), method, matrix))
}

pub fn load_verb_matrix<T: Scalar>(path: &Path) -> Result<VerbMatrix<T>, VerbError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_verb_matrix(&text)
}
