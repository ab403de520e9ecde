//! On-disk verb-matrix cache. Files are keyed by verb, method and a content
//! hash of the inputs (the space file, plus the triples file for the
//! indirect method), so a stale cache can never be mistaken for a current
//! one. Unreadable cache entries are rebuilt and overwritten.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use tensor_verb_core::eval::ScoreError;
use tensor_verb_core::space::{SemanticSpace, SvoTripleSet};
use tensor_verb_core::verbs::{
    build_verb_matrix, load_verb_matrix, save_verb_matrix, MatrixMethod, VerbMatrix,
};

/// FNV-1a, 64-bit. Stable across platforms and releases.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn sanitize(verb: &str) -> String {
    verb.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub struct MatrixCache<'a> {
    pub dir: Option<&'a Path>,
    pub space: &'a SemanticSpace<f64>,
    pub triples: Option<&'a SvoTripleSet>,
    /// Hash of the space file contents.
    pub space_hash: u64,
    /// Hash of the triples file contents; folded in for indirect matrices.
    pub triples_hash: u64,
    /// Warnings (cache rebuilds, skipped OOV pairs) for standard error.
    pub warnings: Vec<String>,
}

impl<'a> MatrixCache<'a> {
    fn file_name(&self, method: MatrixMethod, verb: &str) -> String {
        let input_hash = match method {
            MatrixMethod::Indirect => self.space_hash ^ self.triples_hash.rotate_left(1),
            _ => self.space_hash,
        };
        format!(
            "{}-{:016x}.{}.{:016x}.tsv",
            sanitize(verb),
            fnv1a64(verb.as_bytes()),
            method,
            input_hash
        )
    }

    pub fn cache_path(&self, method: MatrixMethod, verb: &str) -> Option<PathBuf> {
        self.dir.map(|dir| dir.join(self.file_name(method, verb)))
    }

    fn build(
        &mut self,
        method: MatrixMethod,
        verb: &str,
    ) -> Result<VerbMatrix<f64>, ScoreError> {
        let (matrix, stats) =
            build_verb_matrix(method, verb, self.space, self.triples).map_err(ScoreError::from)?;
        if let Some(stats) = stats {
            if stats.pairs_skipped > 0 {
                let words: Vec<&str> = stats
                    .oov_words
                    .iter()
                    .take(5)
                    .map(String::as_str)
                    .collect();
                self.warnings.push(format!(
                    "warning: {verb}: skipped {} of {} subject/object pairs (out of vocabulary: {}{})",
                    stats.pairs_skipped,
                    stats.pairs_used + stats.pairs_skipped,
                    words.join(", "),
                    if stats.oov_words.len() > 5 { ", ..." } else { "" },
                ));
            }
        }
        Ok(matrix)
    }

    /// Loads the matrix from the cache directory when possible, otherwise
    /// builds it (and caches it when a directory is configured).
    pub fn get(
        &mut self,
        method: MatrixMethod,
        verb: &str,
    ) -> Result<Arc<VerbMatrix<f64>>, ScoreError> {
        let Some(path) = self.cache_path(method, verb) else {
            return Ok(Arc::new(self.build(method, verb)?));
        };
        if path.is_file() {
            match load_verb_matrix::<f64>(&path) {
                Ok(matrix)
                    if matrix.verb() == verb
                        && matrix.method() == method
                        && matrix.dimension() == self.space.dimension() =>
                {
                    return Ok(Arc::new(matrix));
                }
                Ok(_) => self
                    .warnings
                    .push(format!("warning: cache entry {} does not match its key; rebuilding", path.display())),
                Err(err) => self
                    .warnings
                    .push(format!("warning: unreadable cache entry {}: {err}; rebuilding", path.display())),
            }
        }
        let matrix = self.build(method, verb)?;
        if let Err(err) = save_verb_matrix(&matrix, &path) {
            self.warnings
                .push(format!("warning: could not write cache entry: {err}"));
        }
        Ok(Arc::new(matrix))
    }
}
