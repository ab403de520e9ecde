//! The four subcommands. Library errors map onto the greppable error
//! classes here; parse errors keep their line numbers and gain the file
//! path as a prefix.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use tensor_verb_core::compose::ModelSpec;
use tensor_verb_core::eval::{
    self, evaluate_with, load_dataset, render_json, render_table, upper_bound, EvalError,
    EvalOptions, ScoreError, SentenceWords,
};
use tensor_verb_core::space::{
    count_cooccurrence, default_stoplist, save_space, select_basis, weight_counts, Corpus,
    SemanticSpace, SpaceError, SvoTripleSet,
};
use tensor_verb_core::verbs::{save_verb_matrix, MatrixMethod, VerbError};

use crate::cache::{fnv1a64, MatrixCache};
use crate::{BuildSpaceArgs, BuildVerbsArgs, CliError, EvaluateArgs, SimilarityArgs};

fn space_error(err: SpaceError, path: &Path) -> CliError {
    match err {
        SpaceError::Io { .. } => CliError::Io(err.to_string()),
        SpaceError::EmptyBasis | SpaceError::EmptyCounts => CliError::Degenerate(err.to_string()),
        other => CliError::Parse(format!("{}: {other}", path.display())),
    }
}

fn eval_error(err: EvalError, dataset_path: &Path) -> CliError {
    match err {
        EvalError::Io { .. } => CliError::Io(err.to_string()),
        EvalError::Dataset { .. } => {
            CliError::Parse(format!("{}: {err}", dataset_path.display()))
        }
        other => CliError::Degenerate(other.to_string()),
    }
}

fn score_error(err: ScoreError) -> CliError {
    match err {
        ScoreError::OutOfVocabulary { .. }
        | ScoreError::Verb(VerbError::OutOfVocabulary { .. }) => CliError::Oov(err.to_string()),
        ScoreError::Verb(VerbError::TriplesRequired) => CliError::Usage(err.to_string()),
        ScoreError::Verb(VerbError::Io { .. }) => CliError::Io(err.to_string()),
        other => CliError::Degenerate(other.to_string()),
    }
}

fn read_word_list(path: &Path) -> Result<HashSet<String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(text.split_whitespace().map(str::to_owned).collect())
}

fn load_space_hashed(path: &Path) -> Result<(SemanticSpace<f64>, u64), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let space = tensor_verb_core::space::parse_space(&text)
        .map_err(|e| space_error(e, path))?;
    Ok((space, fnv1a64(text.as_bytes())))
}

fn load_triples_hashed(
    path: &Path,
    type_counts: bool,
) -> Result<(SvoTripleSet, u64), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let triples =
        tensor_verb_core::space::parse_triples(&text).map_err(|e| space_error(e, path))?;
    let triples = if type_counts {
        triples.with_unit_counts()
    } else {
        triples
    };
    // The hash keys cached indirect matrices, so the counting mode is part
    // of the identity.
    let mut hash = fnv1a64(text.as_bytes());
    if type_counts {
        hash = hash.rotate_left(17) ^ 0x5bd1_e995;
    }
    Ok((triples, hash))
}

pub fn build_space(args: BuildSpaceArgs) -> Result<(), CliError> {
    let corpus = Corpus::load(&args.corpus).map_err(|e| space_error(e, &args.corpus))?;
    let stoplist = if args.no_stoplist {
        HashSet::new()
    } else if let Some(path) = &args.stoplist {
        read_word_list(path)?
    } else {
        default_stoplist()
    };
    let target_vocab = match &args.target_vocab {
        Some(path) => Some(read_word_list(path)?),
        None => None,
    };

    let basis = select_basis(&corpus, args.basis_size, &stoplist)
        .map_err(|e| space_error(e, &args.corpus))?;
    let counts = count_cooccurrence(&corpus, &basis, args.window, target_vocab.as_ref());
    let space: SemanticSpace<f64> =
        weight_counts(&counts, &basis).map_err(|e| space_error(e, &args.corpus))?;
    save_space(&space, &args.out).map_err(|e| space_error(e, &args.out))?;

    println!("dimension: {}", space.dimension());
    println!("vocabulary: {}", space.word_count());
    println!("tokens: {}", corpus.token_count());
    println!("space written to: {}", args.out.display());
    Ok(())
}

pub fn build_verbs(args: BuildVerbsArgs) -> Result<(), CliError> {
    let (space, space_hash) = load_space_hashed(&args.space)?;
    let (triples, triples_hash) = match &args.triples {
        Some(path) => {
            let (set, hash) = load_triples_hashed(path, args.type_counts)?;
            (Some(set), hash)
        }
        None => {
            if args.method == MatrixMethod::Indirect {
                return Err(CliError::Usage(
                    "--method indirect requires --triples".into(),
                ));
            }
            (None, 0)
        }
    };

    let verbs: Vec<String> = if !args.verbs.is_empty() {
        args.verbs.clone()
    } else if let Some(triples) = &triples {
        triples.verbs().map(str::to_owned).collect()
    } else {
        return Err(CliError::Usage(
            "no verbs to build: pass --verbs or --triples".into(),
        ));
    };

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out_dir.display())))?;
    let mut cache = MatrixCache {
        dir: Some(&args.out_dir),
        space: &space,
        triples: triples.as_ref(),
        space_hash,
        triples_hash,
        warnings: Vec::new(),
    };

    let mut built = 0;
    let mut failed = 0;
    for verb in &verbs {
        let path = cache
            .cache_path(args.method, verb)
            .expect("out_dir is always set");
        match cache.get(args.method, verb) {
            Ok(matrix) => {
                save_verb_matrix(&matrix, &path)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                println!("wrote {}", path.display());
                built += 1;
            }
            Err(err) => {
                eprintln!("warning: {verb}: {err}");
                failed += 1;
            }
        }
    }
    for warning in &cache.warnings {
        eprintln!("{warning}");
    }
    println!("built {built} matrices ({failed} failed)");
    if built == 0 {
        return Err(CliError::Degenerate(
            "no verb matrix could be built".into(),
        ));
    }
    Ok(())
}

fn parse_model(
    model: &str,
    matrix_method: Option<MatrixMethod>,
) -> Result<ModelSpec, CliError> {
    // --model categorical needs --matrix-method; the combined spelling
    // (categorical-kron-self) carries the method inline.
    if model == "categorical" {
        let method = matrix_method.ok_or_else(|| {
            CliError::Usage("--model categorical requires --matrix-method".into())
        })?;
        return Ok(ModelSpec::Categorical(method));
    }
    let parsed: ModelSpec = model.parse().map_err(CliError::Usage)?;
    if let Some(method) = matrix_method {
        match parsed.matrix_method() {
            Some(inline) if inline == method => {}
            Some(_) => {
                return Err(CliError::Usage(format!(
                    "--matrix-method {method} conflicts with --model {model}"
                )))
            }
            None => {
                return Err(CliError::Usage(format!(
                    "--matrix-method only applies to categorical models, not {model}"
                )))
            }
        }
    }
    Ok(parsed)
}

pub fn similarity(args: SimilarityArgs) -> Result<(), CliError> {
    let model = parse_model(&args.model, args.matrix_method)?;

    let words: Vec<&str> = args
        .words
        .iter()
        .map(String::as_str)
        .filter(|w| *w != "/")
        .collect();
    if words.len() != 6 {
        return Err(CliError::Usage(format!(
            "expected six words (SUB1 VERB1 OBJ1 / SUB2 VERB2 OBJ2), got {}",
            words.len()
        )));
    }

    let (space, space_hash) = load_space_hashed(&args.space)?;
    let (triples, triples_hash) = match &args.triples {
        Some(path) => {
            let (set, hash) = load_triples_hashed(path, args.type_counts)?;
            (Some(set), hash)
        }
        None => {
            if model.requires_triples() {
                return Err(CliError::Usage(
                    "categorical-indirect requires --triples".into(),
                ));
            }
            (None, 0)
        }
    };

    let mut cache = MatrixCache {
        dir: args.cache_dir.as_deref(),
        space: &space,
        triples: triples.as_ref(),
        space_hash,
        triples_hash,
        warnings: Vec::new(),
    };
    if let Some(dir) = &args.cache_dir {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }

    let first = SentenceWords {
        subject: words[0],
        verb: words[1],
        object: words[2],
    };
    let second = SentenceWords {
        subject: words[3],
        verb: words[4],
        object: words[5],
    };
    let mut provider = |method: MatrixMethod, verb: &str| cache.get(method, verb);
    let sim = eval::sentence_pair_similarity_via(model, first, second, &space, &mut provider)
        .map_err(score_error)?;

    for warning in &cache.warnings {
        eprintln!("{warning}");
    }
    if sim.degenerate {
        eprintln!("warning: zero-norm meaning; similarity reported as 0");
    }
    println!("{:.6}", sim.value);
    Ok(())
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let aggregate = args.aggregate.parse().map_err(CliError::Usage)?;
    let models: Vec<ModelSpec> = if args.models.is_empty() {
        ModelSpec::ALL.to_vec()
    } else {
        args.models.clone()
    };

    let (space, space_hash) = load_space_hashed(&args.space)?;
    let entries = load_dataset(&args.dataset).map_err(|e| eval_error(e, &args.dataset))?;
    let needs_triples = models.iter().any(ModelSpec::requires_triples);
    let (triples, triples_hash) = match &args.triples {
        Some(path) => {
            let (set, hash) = load_triples_hashed(path, args.type_counts)?;
            (Some(set), hash)
        }
        None => {
            if needs_triples {
                return Err(CliError::Usage(
                    "an indirect model was requested: --triples is required".into(),
                ));
            }
            (None, 0)
        }
    };

    if let Some(dir) = &args.cache_dir {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut cache = MatrixCache {
        dir: args.cache_dir.as_deref(),
        space: &space,
        triples: triples.as_ref(),
        space_hash,
        triples_hash,
        warnings: Vec::new(),
    };

    let options = EvalOptions {
        aggregate,
        include_degenerate: !args.exclude_degenerate,
    };
    let mut provider = |method: MatrixMethod, verb: &str| cache.get(method, verb);
    let reports = evaluate_with(&entries, &models, &space, options, &mut provider)
        .map_err(|e| eval_error(e, &args.dataset))?;

    for warning in &cache.warnings {
        eprintln!("{warning}");
    }
    let upper = upper_bound(&entries);
    print!("{}", render_table(&reports, upper.as_ref()));

    if let Some(path) = &args.json {
        fs::write(path, render_json(&reports))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
