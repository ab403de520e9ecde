//! Distributional semantic space construction: basis selection, windowed
//! co-occurrence counting over a lemmatized corpus, probability-ratio
//! weighting, plus the on-disk formats for spaces and SVO triple sets.
//!
//! Weighting follows the ratio scheme: the probability of a context word
//! given the target word, divided by the overall probability of the context
//! word. Counting may run in parallel over sentence shards; partial counts
//! merge by integer addition, so results never depend on scheduling.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tensor::Vector;

/// First header field of the space file format.
pub const SPACE_FORMAT: &str = "tensor-verb-space v1";

/// Default number of basis words.
pub const DEFAULT_BASIS_SIZE: usize = 2000;

/// Default symmetric context window, in tokens on each side.
pub const DEFAULT_WINDOW: usize = 5;

/// Sentence count above which co-occurrence counting shards across threads.
const PARALLEL_SENTENCE_THRESHOLD: usize = 2048;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },

    #[error("no basis candidates remain after filtering")]
    EmptyBasis,

    #[error("duplicate basis word {word:?}")]
    DuplicateBasisWord { word: String },

    #[error("co-occurrence counts are empty (grand total is zero)")]
    EmptyCounts,

    #[error("triples line {line}: {message}")]
    Triples { line: usize, message: String },

    #[error("space file line {line}: {message}")]
    SpaceFormat { line: usize, message: String },

    #[error("unsupported space format header {found:?}, expected {SPACE_FORMAT:?}")]
    SpaceVersion { found: String },

    #[error("word {word:?}: vector length {found} does not match dimension {expected}")]
    VectorLength {
        word: String,
        expected: usize,
        found: usize,
    },

    #[error("word {word:?}: weight {index} is negative or non-finite")]
    InvalidWeight { word: String, index: usize },
}

fn io_error(path: &Path, source: io::Error) -> SpaceError {
    SpaceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// The bundled function-word stoplist (about a hundred entries). Basis
/// selection uses it by default; pass an empty set to disable filtering.
pub fn default_stoplist() -> HashSet<String> {
    include_str!("../data/stoplist.txt")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

/// A lemmatized, lowercased corpus: one token sequence per sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<String>>,
}

impl Corpus {
    pub fn new(sentences: Vec<Vec<String>>) -> Result<Self, SpaceError> {
        for (idx, sentence) in sentences.iter().enumerate() {
            let line = idx + 1;
            if sentence.is_empty() {
                return Err(SpaceError::Corpus {
                    line,
                    message: "empty sentence".into(),
                });
            }
            for token in sentence {
                if token.is_empty() {
                    return Err(SpaceError::Corpus {
                        line,
                        message: "empty token".into(),
                    });
                }
                if token.chars().any(char::is_whitespace) {
                    return Err(SpaceError::Corpus {
                        line,
                        message: format!("token {token:?} contains whitespace"),
                    });
                }
            }
        }
        Ok(Self { sentences })
    }

    /// Parses the corpus text format: one sentence per line, tokens
    /// separated by single spaces. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, SpaceError> {
        let mut sentences = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let mut sentence = Vec::new();
            for token in line.split(' ') {
                if token.is_empty() {
                    return Err(SpaceError::Corpus {
                        line: lineno,
                        message: "empty token (check for doubled or trailing spaces)".into(),
                    });
                }
                if token.chars().any(char::is_whitespace) {
                    return Err(SpaceError::Corpus {
                        line: lineno,
                        message: format!("token {token:?} contains whitespace"),
                    });
                }
                sentence.push(token.to_owned());
            }
            sentences.push(sentence);
        }
        Ok(Self { sentences })
    }

    pub fn load(path: &Path) -> Result<Self, SpaceError> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::parse(&text)
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

/// The ordered basis words of a space; positions index vector components.
#[derive(Debug, Clone)]
pub struct Basis {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Basis {
    pub fn new(words: Vec<String>) -> Result<Self, SpaceError> {
        if words.is_empty() {
            return Err(SpaceError::EmptyBasis);
        }
        let mut index = HashMap::with_capacity(words.len());
        for (position, word) in words.iter().enumerate() {
            if index.insert(word.clone(), position).is_some() {
                return Err(SpaceError::DuplicateBasisWord { word: word.clone() });
            }
        }
        Ok(Self { words, index })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, position: usize) -> &str {
        &self.words[position]
    }

    pub fn position(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for Basis {}

/// Selects the `k` most frequent corpus tokens outside the stoplist,
/// breaking frequency ties by ascending lexicographic order. Returns fewer
/// than `k` words when fewer qualify.
pub fn select_basis(
    corpus: &Corpus,
    k: usize,
    stoplist: &HashSet<String>,
) -> Result<Basis, SpaceError> {
    let mut frequency: HashMap<&str, u64> = HashMap::new();
    for sentence in corpus.sentences() {
        for token in sentence {
            if !stoplist.contains(token) {
                *frequency.entry(token).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = frequency.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    if ranked.is_empty() {
        return Err(SpaceError::EmptyBasis);
    }
    Basis::new(ranked.into_iter().map(|(word, _)| word.to_owned()).collect())
}

/// Raw co-occurrence totals for one counting run.
///
/// Totals are derived from the pair counts when a run is finalized, so the
/// identities `target_total(t) = sum_j pair_count(t, j)` and
/// `grand_total = sum_t target_total(t) = sum_j context_total(j)` hold
/// exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    pairs: HashMap<String, HashMap<usize, u64>>,
    target_totals: HashMap<String, u64>,
    context_totals: Vec<u64>,
    grand_total: u64,
}

impl CooccurrenceCounts {
    fn tally(
        &mut self,
        sentence: &[String],
        basis: &Basis,
        window: usize,
        target_filter: Option<&HashSet<String>>,
    ) {
        let len = sentence.len();
        for (position, target) in sentence.iter().enumerate() {
            if let Some(filter) = target_filter {
                if !filter.contains(target) {
                    continue;
                }
            }
            if !self.pairs.contains_key(target) {
                self.pairs.insert(target.clone(), HashMap::new());
            }
            let row = self.pairs.get_mut(target).expect("row just ensured");
            let lo = position.saturating_sub(window);
            let hi = (position + window).min(len - 1);
            for (q, token) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
                if q == position {
                    continue;
                }
                if let Some(j) = basis.position(token) {
                    *row.entry(j).or_insert(0) += 1;
                }
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (target, row) in other.pairs {
            let own = self.pairs.entry(target).or_default();
            for (context, count) in row {
                *own.entry(context).or_insert(0) += count;
            }
        }
        self
    }

    fn finalize(&mut self, basis_len: usize) {
        self.context_totals = vec![0; basis_len];
        self.target_totals = HashMap::with_capacity(self.pairs.len());
        self.grand_total = 0;
        for (target, row) in &self.pairs {
            let mut total = 0;
            for (&context, &count) in row {
                self.context_totals[context] += count;
                total += count;
            }
            self.target_totals.insert(target.clone(), total);
            self.grand_total += total;
        }
    }

    pub fn pair_count(&self, target: &str, context: usize) -> u64 {
        self.pairs
            .get(target)
            .and_then(|row| row.get(&context).copied())
            .unwrap_or(0)
    }

    pub fn target_total(&self, target: &str) -> u64 {
        self.target_totals.get(target).copied().unwrap_or(0)
    }

    pub fn context_total(&self, context: usize) -> u64 {
        self.context_totals.get(context).copied().unwrap_or(0)
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    pub fn target_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.pairs.keys().map(String::as_str)
    }
}

/// Counts windowed co-occurrences: for every token position (the target) and
/// every other position within `window` tokens in the same sentence whose
/// token is a basis word, one event is recorded. Windows clip at sentence
/// boundaries. With `target_filter` set, only the listed words are counted
/// as targets; every word still serves as context.
pub fn count_cooccurrence(
    corpus: &Corpus,
    basis: &Basis,
    window: usize,
    target_filter: Option<&HashSet<String>>,
) -> CooccurrenceCounts {
    let sentences = corpus.sentences();
    let mut counts = if sentences.len() >= PARALLEL_SENTENCE_THRESHOLD {
        sentences
            .par_chunks(256)
            .map(|chunk| {
                let mut local = CooccurrenceCounts::default();
                for sentence in chunk {
                    local.tally(sentence, basis, window, target_filter);
                }
                local
            })
            .reduce(CooccurrenceCounts::default, CooccurrenceCounts::merge)
    } else {
        let mut local = CooccurrenceCounts::default();
        for sentence in sentences {
            local.tally(sentence, basis, window, target_filter);
        }
        local
    };
    counts.finalize(basis.len());
    counts
}

/// A basis plus one weighted vector per word.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSpace<T = f64> {
    basis: Basis,
    vectors: HashMap<String, Vector<T>>,
}

impl<T: Scalar> SemanticSpace<T> {
    pub fn new(basis: Basis, vectors: HashMap<String, Vector<T>>) -> Result<Self, SpaceError> {
        for (word, vector) in &vectors {
            if vector.len() != basis.len() {
                return Err(SpaceError::VectorLength {
                    word: word.clone(),
                    expected: basis.len(),
                    found: vector.len(),
                });
            }
            for (index, &weight) in vector.as_slice().iter().enumerate() {
                if !weight.is_finite() || weight < T::zero() {
                    return Err(SpaceError::InvalidWeight {
                        word: word.clone(),
                        index,
                    });
                }
            }
        }
        Ok(Self { basis, vectors })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn vector(&self, word: &str) -> Option<&Vector<T>> {
        self.vectors.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    pub fn word_count(&self) -> usize {
        self.vectors.len()
    }

    /// Word list in lexicographic order; save and display paths use this so
    /// output never depends on hash-map iteration order.
    pub fn words_sorted(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self.vectors.keys().map(String::as_str).collect();
        words.sort_unstable();
        words
    }
}

/// Turns raw counts into ratio weights:
/// `(pair_count / target_total) / (context_total / grand_total)`,
/// with zero whenever either total is zero.
pub fn weight_counts<T: Scalar>(
    counts: &CooccurrenceCounts,
    basis: &Basis,
) -> Result<SemanticSpace<T>, SpaceError> {
    if counts.grand_total() == 0 {
        return Err(SpaceError::EmptyCounts);
    }
    let grand = T::from_count(counts.grand_total());
    let dimension = basis.len();
    let mut vectors = HashMap::with_capacity(counts.target_count());
    for (target, row) in &counts.pairs {
        let target_total = counts.target_total(target);
        let mut entries = vec![T::zero(); dimension];
        if target_total > 0 {
            let target_total = T::from_count(target_total);
            for (&context, &count) in row {
                let context_total = counts.context_total(context);
                if count == 0 || context_total == 0 {
                    continue;
                }
                let conditional = T::from_count(count) / target_total;
                let marginal = T::from_count(context_total) / grand;
                entries[context] = conditional / marginal;
            }
        }
        vectors.insert(target.clone(), Vector::new(entries).expect("finite ratios"));
    }
    SemanticSpace::new(basis.clone(), vectors)
}

fn write_space_inner<T: Scalar, W: Write>(space: &SemanticSpace<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "{SPACE_FORMAT}\tdim={}", space.dimension())?;
    out.write_all(space.basis().words().join("\t").as_bytes())?;
    out.write_all(b"\n")?;
    for word in space.words_sorted() {
        let vector = space.vector(word).expect("word listed from the map");
        out.write_all(word.as_bytes())?;
        for weight in vector.as_slice() {
            write!(out, "\t{weight}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Serializes a space to the TSV format. Weights are written as the shortest
/// decimal that parses back to the identical value, so a save/load cycle is
/// the identity.
pub fn save_space<T: Scalar>(space: &SemanticSpace<T>, path: &Path) -> Result<(), SpaceError> {
    let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    let mut writer = io::BufWriter::new(file);
    write_space_inner(space, &mut writer).map_err(|e| io_error(path, e))?;
    writer.flush().map_err(|e| io_error(path, e))
}

pub fn space_to_string<T: Scalar>(space: &SemanticSpace<T>) -> String {
    let mut buffer = Vec::new();
    write_space_inner(space, &mut buffer).expect("writing to memory cannot fail");
    String::from_utf8(buffer).expect("space text is UTF-8")
}

pub fn parse_space<T: Scalar>(text: &str) -> Result<SemanticSpace<T>, SpaceError> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or(SpaceError::SpaceFormat {
        line: 1,
        message: "unexpected end of file before header".into(),
    })?;
    let mut header_fields = header.split('\t');
    let format = header_fields.next().unwrap_or_default();
    if format != SPACE_FORMAT {
        return Err(SpaceError::SpaceVersion {
            found: format.to_owned(),
        });
    }
    let dim_field = header_fields.next().ok_or(SpaceError::SpaceFormat {
        line: 1,
        message: "missing dim= field in header".into(),
    })?;
    let dimension: usize = dim_field
        .strip_prefix("dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| SpaceError::SpaceFormat {
            line: 1,
            message: format!("malformed dimension field {dim_field:?}"),
        })?;

    let (_, basis_line) = lines.next().ok_or(SpaceError::SpaceFormat {
        line: 2,
        message: "unexpected end of file before basis line".into(),
    })?;
    let words: Vec<String> = basis_line.split('\t').map(str::to_owned).collect();
    if words.len() != dimension {
        return Err(SpaceError::SpaceFormat {
            line: 2,
            message: format!("expected {dimension} basis words, found {}", words.len()),
        });
    }
    let basis = Basis::new(words)?;

    let mut vectors: HashMap<String, Vector<T>> = HashMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let mut fields = line.split('\t');
        let word = fields.next().unwrap_or_default();
        if word.is_empty() {
            return Err(SpaceError::SpaceFormat {
                line: lineno,
                message: "missing word at start of row".into(),
            });
        }
        let mut entries = Vec::with_capacity(dimension);
        for field in fields {
            let weight = T::parse_decimal(field).ok_or_else(|| SpaceError::SpaceFormat {
                line: lineno,
                message: format!("invalid weight {field:?}"),
            })?;
            if !weight.is_finite() || weight < T::zero() {
                return Err(SpaceError::SpaceFormat {
                    line: lineno,
                    message: format!("weight {field:?} is negative or non-finite"),
                });
            }
            entries.push(weight);
        }
        if entries.len() != dimension {
            return Err(SpaceError::SpaceFormat {
                line: lineno,
                message: format!(
                    "truncated row: expected {dimension} weights for {word:?}, found {}",
                    entries.len()
                ),
            });
        }
        if vectors
            .insert(word.to_owned(), Vector::new(entries).expect("validated"))
            .is_some()
        {
            return Err(SpaceError::SpaceFormat {
                line: lineno,
                message: format!("duplicate word {word:?}"),
            });
        }
    }
    SemanticSpace::new(basis, vectors)
}

pub fn load_space<T: Scalar>(path: &Path) -> Result<SemanticSpace<T>, SpaceError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_space(&text)
}

/// Per-verb multiset of (subject, object, count) observations, the input of
/// the indirect matrix construction. Verbs and pairs iterate in sorted
/// order, so sums built from them are reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SvoTripleSet {
    triples: BTreeMap<String, BTreeMap<(String, String), u64>>,
}

impl SvoTripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` observations of `subject verb object`; counts for the
    /// same triple accumulate. A zero count is ignored.
    pub fn insert(&mut self, verb: &str, subject: &str, object: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .triples
            .entry(verb.to_owned())
            .or_default()
            .entry((subject.to_owned(), object.to_owned()))
            .or_insert(0) += count;
    }

    pub fn contains_verb(&self, verb: &str) -> bool {
        self.triples.contains_key(verb)
    }

    pub fn verbs(&self) -> impl Iterator<Item = &str> {
        self.triples.keys().map(String::as_str)
    }

    pub fn verb_count(&self) -> usize {
        self.triples.len()
    }

    /// Sorted (subject, object, count) observations for one verb.
    pub fn pairs(&self, verb: &str) -> Option<impl Iterator<Item = (&str, &str, u64)>> {
        self.triples.get(verb).map(|pairs| {
            pairs
                .iter()
                .map(|((subject, object), &count)| (subject.as_str(), object.as_str(), count))
        })
    }

    pub fn pair_type_count(&self, verb: &str) -> usize {
        self.triples.get(verb).map_or(0, BTreeMap::len)
    }

    pub fn total_observations(&self, verb: &str) -> u64 {
        self.triples
            .get(verb)
            .map_or(0, |pairs| pairs.values().sum())
    }

    /// Copy with every count forced to 1: type-level rather than
    /// token-occurrence weighting.
    pub fn with_unit_counts(&self) -> Self {
        let mut unit = Self::new();
        for (verb, pairs) in &self.triples {
            for (subject, object) in pairs.keys() {
                unit.insert(verb, subject, object, 1);
            }
        }
        unit
    }
}

fn single_token_field(field: &str, what: &str, line: usize) -> Result<(), SpaceError> {
    if field.is_empty() {
        return Err(SpaceError::Triples {
            line,
            message: format!("empty {what} field"),
        });
    }
    if field.chars().any(char::is_whitespace) {
        return Err(SpaceError::Triples {
            line,
            message: format!("{what} {field:?} is not a single token"),
        });
    }
    Ok(())
}

/// Parses the triples TSV format: `verb<TAB>subject<TAB>object<TAB>count`,
/// with `#`-prefixed comment lines and blank lines ignored. Duplicate
/// (verb, subject, object) rows have their counts summed.
pub fn parse_triples(text: &str) -> Result<SvoTripleSet, SpaceError> {
    let mut set = SvoTripleSet::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(SpaceError::Triples {
                line: lineno,
                message: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        single_token_field(fields[0], "verb", lineno)?;
        single_token_field(fields[1], "subject", lineno)?;
        single_token_field(fields[2], "object", lineno)?;
        let count: u64 = fields[3].parse().map_err(|_| SpaceError::Triples {
            line: lineno,
            message: format!("invalid count {:?}", fields[3]),
        })?;
        if count == 0 {
            return Err(SpaceError::Triples {
                line: lineno,
                message: "count must be at least 1".into(),
            });
        }
        set.insert(fields[0], fields[1], fields[2], count);
    }
    Ok(set)
}

pub fn load_triples(path: &Path) -> Result<SvoTripleSet, SpaceError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_triples(&text)
}
