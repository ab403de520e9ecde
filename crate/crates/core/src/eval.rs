//! Disambiguation evaluation: dataset parsing, sentence-pair scoring under
//! each model, Spearman's rank correlation against human judgments, and
//! report rendering (aligned table plus JSON).
//!
//! Each dataset row is one annotator judgment of an ambiguous sentence
//! against its landmark-verb variant. By default every judgment is one
//! observation for the correlation; `AggregateMode::MeanPerPair` instead
//! averages the human scores per sentence pair first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::compose::{
    compose_additive, compose_baseline, compose_categorical, compose_multiplicative, similarity,
    ComposeError, ModelSpec,
};
use crate::scalar::Scalar;
use crate::space::{SemanticSpace, SvoTripleSet};
use crate::tensor::{Similarity, Vector};
use crate::verbs::{build_verb_matrix, MatrixMethod, VerbError, VerbMatrix};

/// Expected dataset header line.
pub const DATASET_HEADER: &str = "annotator\tverb\tsubject\tobject\tlandmark\tscore\tband";

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("dataset line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error("score list length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least 2 observations, found {found}")]
    TooFewObservations { found: usize },

    #[error("rank correlation is undefined for a constant input list")]
    ConstantInput,

    #[error("score list contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("model {model}: all {total} dataset entries were skipped")]
    AllSkipped { model: String, total: usize },

    #[error("model {model}: rank correlation undefined ({source})")]
    UndefinedCorrelation {
        model: String,
        #[source]
        source: Box<EvalError>,
    },
}

/// The authors' coarse HIGH/LOW similarity label for a sentence pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Band {
    #[serde(rename = "HIGH")]
    High,
    #[serde(rename = "LOW")]
    Low,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::High => "HIGH",
            Band::Low => "LOW",
        })
    }
}

impl FromStr for Band {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "HIGH" => Ok(Band::High),
            "LOW" => Ok(Band::Low),
            other => Err(format!("unknown band {other:?} (expected HIGH or LOW)")),
        }
    }
}

/// One human judgment: an annotator's similarity score in [1, 7] for a
/// `subject verb object` sentence against the same sentence with the
/// landmark verb substituted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetEntry {
    pub annotator: String,
    pub verb: String,
    pub subject: String,
    pub object: String,
    pub landmark: String,
    pub human_score: u8,
    pub band: Band,
}

/// Key identifying a sentence pair independent of the annotator.
type PairKey<'a> = (&'a str, &'a str, &'a str, &'a str);

impl DatasetEntry {
    fn pair_key(&self) -> PairKey<'_> {
        (&self.verb, &self.subject, &self.object, &self.landmark)
    }
}

fn dataset_field(field: &str, what: &str, line: usize) -> Result<String, EvalError> {
    if field.is_empty() {
        return Err(EvalError::Dataset {
            line,
            message: format!("empty {what} field"),
        });
    }
    if field.chars().any(char::is_whitespace) {
        return Err(EvalError::Dataset {
            line,
            message: format!("{what} {field:?} is not a single token"),
        });
    }
    Ok(field.to_owned())
}

/// Parses the dataset TSV. The header line is mandatory; each following row
/// is one judgment. Scores outside [1, 7] and unknown bands are rejected
/// with their line number.
pub fn parse_dataset(text: &str) -> Result<Vec<DatasetEntry>, EvalError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(EvalError::Dataset {
        line: 1,
        message: "empty file, expected header".into(),
    })?;
    if header != DATASET_HEADER {
        return Err(EvalError::Dataset {
            line: 1,
            message: format!("malformed header {header:?}"),
        });
    }

    let mut entries = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(EvalError::Dataset {
                line: lineno,
                message: format!("expected 7 tab-separated fields, found {}", fields.len()),
            });
        }
        let annotator = if fields[0].is_empty() {
            return Err(EvalError::Dataset {
                line: lineno,
                message: "empty annotator field".into(),
            });
        } else {
            fields[0].to_owned()
        };
        let verb = dataset_field(fields[1], "verb", lineno)?;
        let subject = dataset_field(fields[2], "subject", lineno)?;
        let object = dataset_field(fields[3], "object", lineno)?;
        let landmark = dataset_field(fields[4], "landmark", lineno)?;
        let human_score: u8 = fields[5].parse().map_err(|_| EvalError::Dataset {
            line: lineno,
            message: format!("invalid score {:?}", fields[5]),
        })?;
        if !(1..=7).contains(&human_score) {
            return Err(EvalError::Dataset {
                line: lineno,
                message: format!("score {human_score} out of range [1,7]"),
            });
        }
        let band: Band = fields[6].parse().map_err(|message| EvalError::Dataset {
            line: lineno,
            message,
        })?;
        entries.push(DatasetEntry {
            annotator,
            verb,
            subject,
            object,
            landmark,
            human_score,
            band,
        });
    }
    Ok(entries)
}

pub fn load_dataset(path: &Path) -> Result<Vec<DatasetEntry>, EvalError> {
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text)
}

/// The model similarity for one scored entry, with the zero-norm flag
/// propagated from the cosine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScore {
    pub similarity: f64,
    pub degenerate: bool,
}

/// Why one entry could not be scored. These become skip records, not
/// failures; evaluation only aborts when every entry skips.
#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("word {word:?} is not in the semantic space")]
    OutOfVocabulary { word: String },

    #[error(transparent)]
    Verb(#[from] VerbError),

    #[error("verb matrix unavailable: {reason}")]
    MatrixUnavailable { reason: String },

    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// The three word slots of a transitive sentence.
#[derive(Debug, Clone, Copy)]
pub struct SentenceWords<'a> {
    pub subject: &'a str,
    pub verb: &'a str,
    pub object: &'a str,
}

/// Source of verb matrices during scoring. The CLI backs this with an
/// on-disk cache; the plain entry points build matrices in memory.
pub type MatrixProvider<'p> =
    dyn FnMut(MatrixMethod, &str) -> Result<Arc<VerbMatrix<f64>>, ScoreError> + 'p;

fn lookup<'s>(space: &'s SemanticSpace<f64>, word: &str) -> Result<&'s Vector<f64>, ScoreError> {
    space
        .vector(word)
        .ok_or_else(|| ScoreError::OutOfVocabulary {
            word: word.to_owned(),
        })
}

fn pair_similarity_with(
    model: ModelSpec,
    first: SentenceWords<'_>,
    second: SentenceWords<'_>,
    space: &SemanticSpace<f64>,
    matrix_for: &mut MatrixProvider<'_>,
) -> Result<Similarity<f64>, ScoreError> {
    match model {
        ModelSpec::Baseline => {
            let a = compose_baseline(lookup(space, first.verb)?);
            let b = compose_baseline(lookup(space, second.verb)?);
            Ok(similarity(&a, &b)?)
        }
        ModelSpec::Add => {
            let a = compose_additive(
                lookup(space, first.verb)?,
                lookup(space, first.subject)?,
                lookup(space, first.object)?,
            )?;
            let b = compose_additive(
                lookup(space, second.verb)?,
                lookup(space, second.subject)?,
                lookup(space, second.object)?,
            )?;
            Ok(similarity(&a, &b)?)
        }
        ModelSpec::Multiply => {
            let a = compose_multiplicative(
                lookup(space, first.verb)?,
                lookup(space, first.subject)?,
                lookup(space, first.object)?,
            )?;
            let b = compose_multiplicative(
                lookup(space, second.verb)?,
                lookup(space, second.subject)?,
                lookup(space, second.object)?,
            )?;
            Ok(similarity(&a, &b)?)
        }
        ModelSpec::Categorical(method) => {
            let first_matrix = matrix_for(method, first.verb)?;
            let second_matrix = matrix_for(method, second.verb)?;
            let a = compose_categorical(
                &first_matrix,
                lookup(space, first.subject)?,
                lookup(space, first.object)?,
            )?;
            let b = compose_categorical(
                &second_matrix,
                lookup(space, second.subject)?,
                lookup(space, second.object)?,
            )?;
            Ok(similarity(&a, &b)?)
        }
    }
}

/// Scores one sentence pair under a model with a caller-supplied verb
/// matrix source.
pub fn sentence_pair_similarity_via(
    model: ModelSpec,
    first: SentenceWords<'_>,
    second: SentenceWords<'_>,
    space: &SemanticSpace<f64>,
    matrix_for: &mut MatrixProvider<'_>,
) -> Result<Similarity<f64>, ScoreError> {
    pair_similarity_with(model, first, second, space, matrix_for)
}

/// Scores one sentence pair under a model, building verb matrices on the
/// fly. For bulk evaluation prefer [`evaluate`], which reuses matrices
/// across entries.
pub fn sentence_pair_similarity(
    model: ModelSpec,
    first: SentenceWords<'_>,
    second: SentenceWords<'_>,
    space: &SemanticSpace<f64>,
    triples: Option<&SvoTripleSet>,
) -> Result<Similarity<f64>, ScoreError> {
    let mut fresh: Box<MatrixProvider<'_>> = Box::new(|method, verb| {
        build_verb_matrix(method, verb, space, triples)
            .map(|(matrix, _)| Arc::new(matrix))
            .map_err(ScoreError::from)
    });
    pair_similarity_with(model, first, second, space, &mut fresh)
}

/// Scores one dataset entry: composes `subject verb object` and
/// `subject landmark object` under the model and takes their similarity.
pub fn score_entry(
    entry: &DatasetEntry,
    model: ModelSpec,
    space: &SemanticSpace<f64>,
    triples: Option<&SvoTripleSet>,
) -> Result<PairScore, ScoreError> {
    let sim = sentence_pair_similarity(
        model,
        SentenceWords {
            subject: &entry.subject,
            verb: &entry.verb,
            object: &entry.object,
        },
        SentenceWords {
            subject: &entry.subject,
            verb: &entry.landmark,
            object: &entry.object,
        },
        space,
        triples,
    )?;
    Ok(PairScore {
        similarity: sim.value,
        degenerate: sim.degenerate,
    })
}

fn check_rank_input<T: Scalar>(values: &[T]) -> Result<(), EvalError> {
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite { index });
    }
    if values.iter().all(|v| *v == values[0]) {
        return Err(EvalError::ConstantInput);
    }
    Ok(())
}

/// Fractional (average) ranks, 1-based; tied values share the mean of the
/// positions they occupy.
fn fractional_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![T::zero(); n];
    let two = T::from_index(2);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j (0-based) share rank ((i+1) + (j+1)) / 2.
        let shared = T::from_index(i + j) / two + T::one();
        for k in i..=j {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rank correlation: both lists are rank-transformed with
/// averaged tie ranks, then Pearson-correlated. Constant lists are an
/// error (reported, never NaN).
pub fn spearman_rho<T: Scalar>(xs: &[T], ys: &[T]) -> Result<T, EvalError> {
    if xs.len() != ys.len() {
        return Err(EvalError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(EvalError::TooFewObservations { found: xs.len() });
    }
    check_rank_input(xs)?;
    check_rank_input(ys)?;

    let rx = fractional_ranks(xs);
    let ry = fractional_ranks(ys);
    let n = T::from_index(xs.len());

    let mut sum_x = T::zero();
    let mut sum_y = T::zero();
    for (&a, &b) in rx.iter().zip(&ry) {
        sum_x = sum_x + a;
        sum_y = sum_y + b;
    }
    let mean_x = sum_x / n;
    let mean_y = sum_y / n;

    let mut cov = T::zero();
    let mut var_x = T::zero();
    let mut var_y = T::zero();
    for (&a, &b) in rx.iter().zip(&ry) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov = cov + dx * dy;
        var_x = var_x + dx * dx;
        var_y = var_y + dy * dy;
    }
    if var_x == T::zero() || var_y == T::zero() {
        return Err(EvalError::ConstantInput);
    }
    let rho = cov / (var_x * var_y).sqrt();
    // Rank rounding can push the ratio a hair past the mathematical range.
    Ok(rho.min(T::one()).max(-T::one()))
}

/// Per-band arithmetic means of model similarities. A band with no entries
/// is reported absent, not zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BandMeans {
    pub high: Option<f64>,
    pub low: Option<f64>,
}

pub fn high_low_means(scores: &[(Band, f64)]) -> BandMeans {
    let mut high_sum = 0.0;
    let mut high_n = 0usize;
    let mut low_sum = 0.0;
    let mut low_n = 0usize;
    for &(band, value) in scores {
        match band {
            Band::High => {
                high_sum += value;
                high_n += 1;
            }
            Band::Low => {
                low_sum += value;
                low_n += 1;
            }
        }
    }
    BandMeans {
        high: (high_n > 0).then(|| high_sum / high_n as f64),
        low: (low_n > 0).then(|| low_sum / low_n as f64),
    }
}

/// How judgments aggregate into correlation observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregateMode {
    /// Every annotator judgment is one observation.
    #[default]
    PerJudgment,
    /// Human scores are averaged per sentence pair first.
    MeanPerPair,
}

impl AggregateMode {
    pub fn name(self) -> &'static str {
        match self {
            AggregateMode::PerJudgment => "per-judgment",
            AggregateMode::MeanPerPair => "mean-per-pair",
        }
    }
}

impl fmt::Display for AggregateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AggregateMode {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        match text {
            "per-judgment" => Ok(AggregateMode::PerJudgment),
            "mean-per-pair" => Ok(AggregateMode::MeanPerPair),
            other => Err(format!(
                "unknown aggregate mode {other:?} (expected per-judgment or mean-per-pair)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub aggregate: AggregateMode,
    /// When false, degenerate (zero-norm) scores are left out of the
    /// correlation and the band means; they stay visible in the per-entry
    /// listing either way.
    pub include_degenerate: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            aggregate: AggregateMode::PerJudgment,
            include_degenerate: true,
        }
    }
}

/// One row of the per-entry score listing attached to each report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryScore {
    pub annotator: String,
    pub verb: String,
    pub subject: String,
    pub object: String,
    pub landmark: String,
    pub human_score: u8,
    pub band: Band,
    pub similarity: Option<f64>,
    pub degenerate: bool,
    pub skip_reason: Option<String>,
}

fn serialize_model<S: Serializer>(model: &ModelSpec, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(model.name())
}

/// Everything measured for one model over one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    #[serde(serialize_with = "serialize_model")]
    pub model: ModelSpec,
    pub rho: f64,
    pub mean_high: Option<f64>,
    pub mean_low: Option<f64>,
    pub n_scored: usize,
    pub n_skipped: usize,
    pub n_degenerate: usize,
    pub skipped_reasons: Vec<String>,
    pub scores: Vec<EntryScore>,
}

/// Inter-annotator agreement, reported when the dataset has several
/// annotators per pair: each annotator's judgments are correlated with the
/// mean of the others', and the correlations averaged. Band means here are
/// on the human [1, 7] scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBound {
    pub rho: f64,
    pub mean_high: Option<f64>,
    pub mean_low: Option<f64>,
    pub annotators: usize,
}

/// Leave-one-annotator-out agreement; `None` when no pair has two or more
/// annotators or no per-annotator correlation is defined.
pub fn upper_bound(entries: &[DatasetEntry]) -> Option<UpperBound> {
    let mut by_pair: BTreeMap<PairKey<'_>, Vec<(&str, f64)>> = BTreeMap::new();
    for entry in entries {
        by_pair
            .entry(entry.pair_key())
            .or_default()
            .push((&entry.annotator, f64::from(entry.human_score)));
    }
    if !by_pair.values().any(|judgments| {
        judgments
            .iter()
            .map(|(annotator, _)| annotator)
            .collect::<BTreeSet<_>>()
            .len()
            > 1
    }) {
        return None;
    }

    let annotators: BTreeSet<&str> = entries.iter().map(|e| e.annotator.as_str()).collect();
    let mut rhos = Vec::new();
    for annotator in &annotators {
        let mut own = Vec::new();
        let mut others_mean = Vec::new();
        for judgments in by_pair.values() {
            let mine: Vec<f64> = judgments
                .iter()
                .filter(|(a, _)| a == annotator)
                .map(|&(_, s)| s)
                .collect();
            let others: Vec<f64> = judgments
                .iter()
                .filter(|(a, _)| a != annotator)
                .map(|&(_, s)| s)
                .collect();
            if mine.is_empty() || others.is_empty() {
                continue;
            }
            own.push(mine.iter().sum::<f64>() / mine.len() as f64);
            others_mean.push(others.iter().sum::<f64>() / others.len() as f64);
        }
        if let Ok(rho) = spearman_rho(&own, &others_mean) {
            rhos.push(rho);
        }
    }
    if rhos.is_empty() {
        return None;
    }
    let rho = rhos.iter().sum::<f64>() / rhos.len() as f64;
    let human: Vec<(Band, f64)> = entries
        .iter()
        .map(|e| (e.band, f64::from(e.human_score)))
        .collect();
    let means = high_low_means(&human);
    Some(UpperBound {
        rho,
        mean_high: means.high,
        mean_low: means.low,
        annotators: annotators.len(),
    })
}

fn evaluate_model(
    model: ModelSpec,
    entries: &[DatasetEntry],
    space: &SemanticSpace<f64>,
    options: EvalOptions,
    matrix_for: &mut MatrixProvider<'_>,
) -> Result<EvaluationReport, EvalError> {
    // Resolve every needed verb matrix up front, in sorted verb order, so
    // the parallel scoring below never builds anything.
    let mut matrices: BTreeMap<&str, Result<Arc<VerbMatrix<f64>>, String>> = BTreeMap::new();
    if let ModelSpec::Categorical(method) = model {
        let verbs: BTreeSet<&str> = entries
            .iter()
            .flat_map(|e| [e.verb.as_str(), e.landmark.as_str()])
            .collect();
        for verb in verbs {
            matrices.insert(
                verb,
                matrix_for(method, verb).map_err(|e| e.to_string()),
            );
        }
    }

    let outcomes: Vec<Result<PairScore, String>> = entries
        .par_iter()
        .map(|entry| {
            let mut cached: Box<MatrixProvider<'_>> = Box::new(|_, verb| {
                matrices
                    .get(verb)
                    .expect("matrix resolved for every dataset verb")
                    .clone()
                    .map_err(|reason| ScoreError::MatrixUnavailable { reason })
            });
            pair_similarity_with(
                model,
                SentenceWords {
                    subject: &entry.subject,
                    verb: &entry.verb,
                    object: &entry.object,
                },
                SentenceWords {
                    subject: &entry.subject,
                    verb: &entry.landmark,
                    object: &entry.object,
                },
                space,
                &mut cached,
            )
            .map(|sim| PairScore {
                similarity: sim.value,
                degenerate: sim.degenerate,
            })
            .map_err(|e| e.to_string())
        })
        .collect();

    let mut scores = Vec::with_capacity(entries.len());
    let mut skipped_reasons = Vec::new();
    let mut n_scored = 0;
    let mut n_skipped = 0;
    let mut n_degenerate = 0;
    for (row, (entry, outcome)) in entries.iter().zip(&outcomes).enumerate() {
        let mut record = EntryScore {
            annotator: entry.annotator.clone(),
            verb: entry.verb.clone(),
            subject: entry.subject.clone(),
            object: entry.object.clone(),
            landmark: entry.landmark.clone(),
            human_score: entry.human_score,
            band: entry.band,
            similarity: None,
            degenerate: false,
            skip_reason: None,
        };
        match outcome {
            Ok(score) => {
                n_scored += 1;
                if score.degenerate {
                    n_degenerate += 1;
                }
                record.similarity = Some(score.similarity);
                record.degenerate = score.degenerate;
            }
            Err(reason) => {
                n_skipped += 1;
                skipped_reasons.push(format!("row {}: {reason}", row + 1));
                record.skip_reason = Some(reason.clone());
            }
        }
        scores.push(record);
    }

    if n_scored == 0 {
        return Err(EvalError::AllSkipped {
            model: model.name().to_owned(),
            total: entries.len(),
        });
    }

    // Observations for the correlation, in dataset order.
    let usable = |record: &EntryScore| -> Option<f64> {
        let sim = record.similarity?;
        if record.degenerate && !options.include_degenerate {
            return None;
        }
        Some(sim)
    };
    let (model_scores, human_scores, band_scores) = match options.aggregate {
        AggregateMode::PerJudgment => {
            let mut model_scores = Vec::new();
            let mut human_scores = Vec::new();
            let mut band_scores = Vec::new();
            for record in &scores {
                if let Some(sim) = usable(record) {
                    model_scores.push(sim);
                    human_scores.push(f64::from(record.human_score));
                    band_scores.push((record.band, sim));
                }
            }
            (model_scores, human_scores, band_scores)
        }
        AggregateMode::MeanPerPair => {
            let mut groups: BTreeMap<PairKey<'_>, (f64, Vec<f64>, Band)> = BTreeMap::new();
            for (entry, record) in entries.iter().zip(&scores) {
                if let Some(sim) = usable(record) {
                    let group = groups
                        .entry(entry.pair_key())
                        .or_insert((sim, Vec::new(), record.band));
                    group.1.push(f64::from(record.human_score));
                }
            }
            let mut model_scores = Vec::new();
            let mut human_scores = Vec::new();
            let mut band_scores = Vec::new();
            for (sim, humans, band) in groups.into_values() {
                model_scores.push(sim);
                human_scores.push(humans.iter().sum::<f64>() / humans.len() as f64);
                band_scores.push((band, sim));
            }
            (model_scores, human_scores, band_scores)
        }
    };

    let rho = spearman_rho(&model_scores, &human_scores).map_err(|source| match source {
        EvalError::ConstantInput | EvalError::TooFewObservations { .. } => {
            EvalError::UndefinedCorrelation {
                model: model.name().to_owned(),
                source: Box::new(source),
            }
        }
        other => other,
    })?;
    let means = high_low_means(&band_scores);

    Ok(EvaluationReport {
        model,
        rho,
        mean_high: means.high,
        mean_low: means.low,
        n_scored,
        n_skipped,
        n_degenerate,
        skipped_reasons,
        scores,
    })
}

/// Evaluates each model over the dataset, with a caller-supplied verb
/// matrix source (used by the CLI to cache matrices on disk). Reports come
/// back sorted by model name; duplicate models are evaluated once.
pub fn evaluate_with(
    entries: &[DatasetEntry],
    models: &[ModelSpec],
    space: &SemanticSpace<f64>,
    options: EvalOptions,
    matrix_for: &mut MatrixProvider<'_>,
) -> Result<Vec<EvaluationReport>, EvalError> {
    if entries.is_empty() {
        return Err(EvalError::TooFewObservations { found: 0 });
    }
    let mut ordered: Vec<ModelSpec> = models.to_vec();
    ordered.sort_by_key(|m| m.name());
    ordered.dedup();
    let mut reports = Vec::with_capacity(ordered.len());
    for model in ordered {
        reports.push(evaluate_model(model, entries, space, options, matrix_for)?);
    }
    Ok(reports)
}

/// Evaluates each model, building verb matrices in memory as needed.
pub fn evaluate(
    entries: &[DatasetEntry],
    models: &[ModelSpec],
    space: &SemanticSpace<f64>,
    triples: Option<&SvoTripleSet>,
    options: EvalOptions,
) -> Result<Vec<EvaluationReport>, EvalError> {
    let mut fresh: Box<MatrixProvider<'_>> = Box::new(|method, verb| {
        build_verb_matrix(method, verb, space, triples)
            .map(|(matrix, _)| Arc::new(matrix))
            .map_err(ScoreError::from)
    });
    evaluate_with(entries, models, space, options, &mut fresh)
}

fn format_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.2}"),
        None => "-".to_owned(),
    }
}

/// Renders the aligned report table (columns Model, High, Low, ρ), one row
/// per model plus the upper bound when available, followed by skip
/// disclosures for any model that skipped entries. Output is deterministic
/// byte for byte.
pub fn render_table(reports: &[EvaluationReport], upper: Option<&UpperBound>) -> String {
    let name_width = reports
        .iter()
        .map(|r| r.model.name().len())
        .chain([5, if upper.is_some() { 11 } else { 0 }])
        .max()
        .unwrap_or(5);
    let mut out = String::new();
    out.push_str(&format!(
        "{:<name_width$}  {:>6}  {:>6}  {:>6}\n",
        "Model", "High", "Low", "\u{03c1}"
    ));
    for report in reports {
        out.push_str(&format!(
            "{:<name_width$}  {:>6}  {:>6}  {:>6}\n",
            report.model.name(),
            format_cell(report.mean_high),
            format_cell(report.mean_low),
            format!("{:.2}", report.rho),
        ));
    }
    if let Some(upper) = upper {
        out.push_str(&format!(
            "{:<name_width$}  {:>6}  {:>6}  {:>6}\n",
            "upper-bound",
            format_cell(upper.mean_high),
            format_cell(upper.mean_low),
            format!("{:.2}", upper.rho),
        ));
    }
    for report in reports {
        if report.n_skipped > 0 {
            let total = report.n_scored + report.n_skipped;
            let mut reasons = report.skipped_reasons.clone();
            let extra = reasons.len().saturating_sub(3);
            reasons.truncate(3);
            let mut line = format!(
                "skipped {} of {} rows for {}: {}",
                report.n_skipped,
                total,
                report.model.name(),
                reasons.join("; ")
            );
            if extra > 0 {
                line.push_str(&format!(" (+{extra} more)"));
            }
            line.push('\n');
            out.push_str(&line);
        }
        if report.n_degenerate > 0 {
            out.push_str(&format!(
                "degenerate (zero-norm) scores for {}: {}\n",
                report.model.name(),
                report.n_degenerate
            ));
        }
    }
    out
}

struct JsonReports<'a> {
    reports: &'a [EvaluationReport],
}

impl Serialize for JsonReports<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.reports.len()))?;
        for report in self.reports {
            seq.serialize_element(report)?;
        }
        seq.end()
    }
}

/// Machine-readable report: one JSON object per model (rho, band means,
/// counts, skip reasons, and the per-entry score listing).
pub fn render_json(reports: &[EvaluationReport]) -> String {
    let mut text = serde_json::to_string_pretty(&JsonReports { reports })
        .expect("report serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Basis;
    use std::collections::HashMap;

    fn space(words: &[(&str, &[f64])]) -> SemanticSpace<f64> {
        let dim = words[0].1.len();
        let basis = Basis::new((0..dim).map(|i| format!("b{i}")).collect()).unwrap();
        let vectors: HashMap<String, Vector<f64>> = words
            .iter()
            .map(|(w, entries)| (w.to_string(), Vector::new(entries.to_vec()).unwrap()))
            .collect();
        SemanticSpace::new(basis, vectors).unwrap()
    }

    fn entry(
        annotator: &str,
        verb: &str,
        subject: &str,
        object: &str,
        landmark: &str,
        score: u8,
        band: Band,
    ) -> DatasetEntry {
        DatasetEntry {
            annotator: annotator.into(),
            verb: verb.into(),
            subject: subject.into(),
            object: object.into(),
            landmark: landmark.into(),
            human_score: score,
            band,
        }
    }

    #[test]
    fn parse_dataset_reads_rows_in_order() {
        let text = "annotator\tverb\tsubject\tobject\tlandmark\tscore\tband\n\
                    p1\tmeet\tsystem\tcriterion\tsatisfy\t7\tHIGH\n\
                    p2\tmeet\tchild\thouse\tvisit\t6\tHIGH\n";
        let entries = parse_dataset(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].annotator, "p1");
        assert_eq!(entries[0].verb, "meet");
        assert_eq!(entries[0].landmark, "satisfy");
        assert_eq!(entries[0].human_score, 7);
        assert_eq!(entries[0].band, Band::High);
    }

    #[test]
    fn parse_dataset_rejects_out_of_range_score() {
        let text = "annotator\tverb\tsubject\tobject\tlandmark\tscore\tband\n\
                    p1\tmeet\ta\tb\tsatisfy\t8\tHIGH\n";
        let err = parse_dataset(text).unwrap_err();
        assert!(matches!(err, EvalError::Dataset { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn parse_dataset_rejects_unknown_band() {
        let text = "annotator\tverb\tsubject\tobject\tlandmark\tscore\tband\n\
                    p1\tmeet\ta\tb\tsatisfy\t4\tMID\n";
        let err = parse_dataset(text).unwrap_err();
        assert!(err.to_string().contains("MID"), "{err}");
    }

    #[test]
    fn parse_dataset_requires_header() {
        let err = parse_dataset("p1\tmeet\ta\tb\tsatisfy\t4\tHIGH\n").unwrap_err();
        assert!(matches!(err, EvalError::Dataset { line: 1, .. }), "{err}");
    }

    #[test]
    fn spearman_perfect_monotone() {
        assert_eq!(
            spearman_rho(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(),
            1.0
        );
    }

    #[test]
    fn spearman_perfect_reversal() {
        assert_eq!(
            spearman_rho(&[1.0, 2.0, 3.0], &[30.0, 20.0, 10.0]).unwrap(),
            -1.0
        );
    }

    #[test]
    fn spearman_tied_case_matches_frozen_oracle_value() {
        // Midranks give x -> [1, 2.5, 2.5, 4], y -> [1, 3, 2, 4];
        // the rank Pearson correlation is 3/sqrt(10).
        let rho = spearman_rho(&[1.0f64, 2.0, 2.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.948_683_298_050_513_8).abs() < 1e-12);
    }

    #[test]
    fn spearman_symmetric_and_self_correlated() {
        let x = [0.3, 0.9, 0.1, 0.5];
        let y = [4.0, 2.0, 7.0, 7.0];
        assert_eq!(
            spearman_rho(&x, &y).unwrap(),
            spearman_rho(&y, &x).unwrap()
        );
        assert_eq!(spearman_rho(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn spearman_tie_free_matches_closed_form() {
        let x = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0];
        let y = [2.0, 7.0, 1.0, 8.0, 2.5, 0.3];
        let rho = spearman_rho(&x, &y).unwrap();
        let rx = fractional_ranks(&x);
        let ry = fractional_ranks(&y);
        let n = x.len() as f64;
        let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
        let closed = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
        assert!((rho - closed).abs() < 1e-12);
    }

    #[test]
    fn spearman_errors() {
        assert!(matches!(
            spearman_rho(&[1.0, 2.0], &[1.0]),
            Err(EvalError::LengthMismatch { left: 2, right: 1 })
        ));
        assert!(matches!(
            spearman_rho(&[1.0], &[1.0]),
            Err(EvalError::TooFewObservations { found: 1 })
        ));
        assert!(matches!(
            spearman_rho(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(EvalError::ConstantInput)
        ));
    }

    #[test]
    fn spearman_invariant_under_monotone_transform() {
        let x = [0.2f64, 0.5, 0.1, 0.9, 0.4];
        let y = [3.0f64, 1.0, 6.0, 2.0, 5.0];
        let base = spearman_rho(&x, &y).unwrap();
        let squashed: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        assert_eq!(spearman_rho(&squashed, &y).unwrap(), base);
    }

    #[test]
    fn high_low_means_examples() {
        let means = high_low_means(&[
            (Band::High, 0.6),
            (Band::High, 0.8),
            (Band::Low, 0.2),
        ]);
        assert!((means.high.unwrap() - 0.7).abs() < 1e-15);
        assert!((means.low.unwrap() - 0.2).abs() < 1e-15);

        let only_high = high_low_means(&[(Band::High, 0.4)]);
        assert_eq!(only_high.high, Some(0.4));
        assert_eq!(only_high.low, None);
    }

    fn two_sense_space() -> SemanticSpace<f64> {
        space(&[
            ("meet", &[2.0, 2.0, 0.5]),
            ("satisfy", &[3.0, 0.5, 0.2]),
            ("visit", &[0.3, 3.0, 0.4]),
            ("system", &[2.5, 0.2, 0.6]),
            ("criterion", &[2.2, 0.3, 0.5]),
            ("child", &[0.2, 2.4, 0.7]),
            ("house", &[0.4, 2.1, 0.8]),
        ])
    }

    fn two_sense_dataset() -> Vec<DatasetEntry> {
        vec![
            entry("p1", "meet", "system", "criterion", "satisfy", 7, Band::High),
            entry("p2", "meet", "system", "criterion", "satisfy", 6, Band::High),
            entry("p1", "meet", "system", "criterion", "visit", 2, Band::Low),
            entry("p2", "meet", "system", "criterion", "visit", 1, Band::Low),
            entry("p1", "meet", "child", "house", "visit", 6, Band::High),
            entry("p2", "meet", "child", "house", "visit", 7, Band::High),
            entry("p1", "meet", "child", "house", "satisfy", 1, Band::Low),
            entry("p2", "meet", "child", "house", "satisfy", 2, Band::Low),
        ]
    }

    fn two_sense_triples() -> SvoTripleSet {
        let mut triples = SvoTripleSet::new();
        triples.insert("meet", "system", "criterion", 4);
        triples.insert("meet", "child", "house", 4);
        triples.insert("satisfy", "system", "criterion", 5);
        triples.insert("visit", "child", "house", 5);
        triples
    }

    #[test]
    fn score_entry_baseline_ignores_arguments() {
        let sp = two_sense_space();
        let a = entry("p1", "meet", "system", "criterion", "satisfy", 7, Band::High);
        let b = entry("p1", "meet", "child", "house", "satisfy", 1, Band::Low);
        let sa = score_entry(&a, ModelSpec::Baseline, &sp, None).unwrap();
        let sb = score_entry(&b, ModelSpec::Baseline, &sp, None).unwrap();
        assert_eq!(sa.similarity.to_bits(), sb.similarity.to_bits());
    }

    #[test]
    fn score_entry_multiplicative_self_pair_is_one() {
        let sp = two_sense_space();
        let e = entry("p1", "meet", "system", "criterion", "meet", 7, Band::High);
        let score = score_entry(&e, ModelSpec::Multiply, &sp, None).unwrap();
        assert!((score.similarity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn score_entry_zero_diag_matches_multiplicative() {
        let sp = two_sense_space();
        for e in two_sense_dataset() {
            let zd = score_entry(
                &e,
                ModelSpec::Categorical(MatrixMethod::ZeroDiag),
                &sp,
                None,
            )
            .unwrap();
            let mult = score_entry(&e, ModelSpec::Multiply, &sp, None).unwrap();
            assert!((zd.similarity - mult.similarity).abs() < 1e-10);
        }
    }

    #[test]
    fn score_entry_oov_is_error() {
        let sp = two_sense_space();
        let e = entry("p1", "meet", "ghost", "criterion", "satisfy", 7, Band::High);
        let err = score_entry(&e, ModelSpec::Multiply, &sp, None).unwrap_err();
        assert!(err.to_string().contains("ghost"), "{err}");
    }

    #[test]
    fn evaluate_produces_sorted_reports_and_sane_rho() {
        let sp = two_sense_space();
        let triples = two_sense_triples();
        let reports = evaluate(
            &two_sense_dataset(),
            &ModelSpec::ALL,
            &sp,
            Some(&triples),
            EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(reports.len(), 7);
        let names: Vec<&str> = reports.iter().map(|r| r.model.name()).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        for report in &reports {
            assert!(report.rho >= -1.0 && report.rho <= 1.0);
            assert_eq!(report.n_scored + report.n_skipped, 8);
        }
        // The sense-respecting models separate HIGH from LOW here.
        let by_name: HashMap<&str, &EvaluationReport> =
            reports.iter().map(|r| (r.model.name(), r)).collect();
        assert!(by_name["multiply"].rho > 0.7);
        assert!(by_name["categorical-kron-self"].rho > 0.7);
        assert!(by_name["categorical-indirect"].rho > 0.7);
        assert!(by_name["multiply"].rho > by_name["add"].rho);
        assert!(by_name["multiply"].rho > by_name["baseline"].rho);
    }

    #[test]
    fn evaluate_zero_diag_report_equals_multiply_report() {
        let sp = two_sense_space();
        let reports = evaluate(
            &two_sense_dataset(),
            &[
                ModelSpec::Multiply,
                ModelSpec::Categorical(MatrixMethod::ZeroDiag),
            ],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let zd = &reports[0];
        let mult = &reports[1];
        assert_eq!(zd.model.name(), "categorical-zero-diag");
        assert_eq!(mult.model.name(), "multiply");
        for (a, b) in zd.scores.iter().zip(&mult.scores) {
            assert!((a.similarity.unwrap() - b.similarity.unwrap()).abs() < 1e-10);
        }
        assert!((zd.rho - mult.rho).abs() < 1e-10);
    }

    #[test]
    fn evaluate_self_correlation_is_one() {
        // Feed the model's own scores back as human scores via a dataset
        // whose human column already ranks exactly like multiply's output.
        let sp = two_sense_space();
        let reports = evaluate(
            &two_sense_dataset(),
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let report = &reports[0];
        let sims: Vec<f64> = report
            .scores
            .iter()
            .map(|s| s.similarity.unwrap())
            .collect();
        assert_eq!(spearman_rho(&sims, &sims).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_baseline_chains_to_verb_cosines() {
        let sp = two_sense_space();
        // Distinct verb/landmark per row.
        let dataset = vec![
            entry("p1", "meet", "system", "criterion", "satisfy", 6, Band::High),
            entry("p1", "satisfy", "system", "criterion", "visit", 2, Band::Low),
            entry("p1", "visit", "child", "house", "meet", 5, Band::High),
        ];
        let reports = evaluate(
            &dataset,
            &[ModelSpec::Baseline],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let cosines: Vec<f64> = dataset
            .iter()
            .map(|e| {
                sp.vector(&e.verb)
                    .unwrap()
                    .cosine(sp.vector(&e.landmark).unwrap())
                    .unwrap()
                    .value
            })
            .collect();
        let humans: Vec<f64> = dataset.iter().map(|e| f64::from(e.human_score)).collect();
        assert_eq!(
            reports[0].rho,
            spearman_rho(&cosines, &humans).unwrap()
        );
    }

    #[test]
    fn evaluate_skips_oov_rows_and_discloses() {
        let sp = two_sense_space();
        let mut dataset = two_sense_dataset();
        dataset.push(entry("p1", "meet", "ghost", "house", "visit", 3, Band::Low));
        let reports = evaluate(
            &dataset,
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let report = &reports[0];
        assert_eq!(report.n_skipped, 1);
        assert_eq!(report.n_scored, 8);
        assert_eq!(report.skipped_reasons.len(), 1);
        assert!(report.skipped_reasons[0].contains("row 9"));
        assert!(report.skipped_reasons[0].contains("ghost"));
    }

    #[test]
    fn evaluate_all_rows_skipped_aborts() {
        let sp = two_sense_space();
        let dataset = vec![entry("p1", "ghost", "a", "b", "phantom", 3, Band::Low)];
        let err = evaluate(
            &dataset,
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, EvalError::AllSkipped { .. }), "{err}");
    }

    #[test]
    fn evaluate_constant_scores_is_undefined_correlation() {
        let sp = two_sense_space();
        let dataset = vec![
            entry("p1", "meet", "system", "criterion", "satisfy", 7, Band::High),
            entry("p2", "meet", "system", "criterion", "satisfy", 6, Band::High),
        ];
        let err = evaluate(
            &dataset,
            &[ModelSpec::Baseline],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap_err();
        assert!(
            matches!(err, EvalError::UndefinedCorrelation { .. }),
            "{err}"
        );
    }

    #[test]
    fn evaluate_degenerate_scores_can_be_excluded() {
        // "blank" has the all-zero vector, so multiplying through it gives
        // zero-norm meanings: degenerate scores of 0.
        let sp = space(&[
            ("meet", &[2.0, 2.0]),
            ("satisfy", &[3.0, 0.5]),
            ("visit", &[0.3, 3.0]),
            ("system", &[2.5, 0.2]),
            ("criterion", &[2.2, 0.3]),
            ("blank", &[0.0, 0.0]),
        ]);
        let dataset = vec![
            entry("p1", "meet", "system", "criterion", "satisfy", 7, Band::High),
            entry("p1", "meet", "system", "criterion", "visit", 2, Band::Low),
            entry("p1", "meet", "blank", "criterion", "visit", 3, Band::Low),
        ];
        let included = evaluate(
            &dataset,
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(included[0].n_degenerate, 1);
        assert_eq!(included[0].n_scored, 3);
        assert_eq!(included[0].scores[2].similarity, Some(0.0));
        assert!(included[0].scores[2].degenerate);

        let excluded = evaluate(
            &dataset,
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions {
                aggregate: AggregateMode::PerJudgment,
                include_degenerate: false,
            },
        )
        .unwrap();
        // The degenerate row stays visible but drops out of the statistics.
        assert_eq!(excluded[0].n_degenerate, 1);
        assert!(excluded[0].scores[2].degenerate);
        assert_ne!(included[0].rho, excluded[0].rho);
        assert_eq!(excluded[0].rho, 1.0);
    }

    #[test]
    fn evaluate_mean_per_pair_collapses_annotators() {
        let sp = two_sense_space();
        let reports = evaluate(
            &two_sense_dataset(),
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions {
                aggregate: AggregateMode::MeanPerPair,
                include_degenerate: true,
            },
        )
        .unwrap();
        // 8 judgments over 4 pairs; rho still well defined and high.
        assert!(reports[0].rho > 0.85);
    }

    #[test]
    fn evaluate_is_deterministic() {
        let sp = two_sense_space();
        let triples = two_sense_triples();
        let run = || {
            let reports = evaluate(
                &two_sense_dataset(),
                &ModelSpec::ALL,
                &sp,
                Some(&triples),
                EvalOptions::default(),
            )
            .unwrap();
            let upper = upper_bound(&two_sense_dataset());
            (render_table(&reports, upper.as_ref()), render_json(&reports))
        };
        let (table1, json1) = run();
        let (table2, json2) = run();
        assert_eq!(table1, table2);
        assert_eq!(json1, json2);
    }

    #[test]
    fn upper_bound_needs_multiple_annotators() {
        let single = vec![
            entry("p1", "meet", "a", "b", "satisfy", 7, Band::High),
            entry("p1", "meet", "c", "d", "visit", 2, Band::Low),
        ];
        assert!(upper_bound(&single).is_none());

        let multi = two_sense_dataset();
        let ub = upper_bound(&multi).unwrap();
        assert_eq!(ub.annotators, 2);
        // Annotators broadly agree on the ordering in this dataset.
        assert!(ub.rho > 0.5);
        assert!(ub.mean_high.unwrap() > ub.mean_low.unwrap());
        assert!(ub.mean_high.unwrap() <= 7.0 && ub.mean_low.unwrap() >= 1.0);
    }

    #[test]
    fn render_table_shape() {
        let sp = two_sense_space();
        let reports = evaluate(
            &two_sense_dataset(),
            &[ModelSpec::Baseline, ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let table = render_table(&reports, None);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("Model"));
        assert!(lines[0].ends_with('\u{03c1}'));
        assert!(lines[1].starts_with("baseline"));
        assert!(lines[2].starts_with("multiply"));
    }

    #[test]
    fn render_json_contains_report_fields() {
        let sp = two_sense_space();
        let reports = evaluate(
            &two_sense_dataset(),
            &[ModelSpec::Multiply],
            &sp,
            None,
            EvalOptions::default(),
        )
        .unwrap();
        let json = render_json(&reports);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let report = &value.as_array().unwrap()[0];
        assert_eq!(report["model"], "multiply");
        assert!(report["rho"].is_f64());
        assert_eq!(report["n_scored"], 8);
        assert_eq!(report["n_skipped"], 0);
        assert_eq!(report["scores"].as_array().unwrap().len(), 8);
        assert_eq!(report["scores"][0]["band"], "HIGH");
    }
}
