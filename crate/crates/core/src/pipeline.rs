use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::frontend::{
    self, normalize_heads, parse_program, rename_apart, validate, Atom, Clause, FrontendError, Pred,
};
use crate::report::{classify, TypeReport};
use crate::solver::{analyze, Analysis, AnalysisError, SolveConfig, Trace};

/// Name of the synthetic predicate wrapping a checked query.
pub const QUERY_PRED: &str = "$query";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub solve: SolveConfig,
    pub allow_unknown: bool,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("query calls undefined predicate {0}")]
    UnknownQueryPredicate(Pred),
    #[error("no query given and no `:- entry` directive in the program")]
    NoQuery,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

/// Infers types for every predicate of `text`.
pub fn infer(
    text: &str,
    opts: &Options,
    trace: Trace<'_>,
) -> Result<(Analysis, TypeReport), Error> {
    let program = frontend::load(text, opts.allow_unknown)?;
    let analysis = analyze(&program, &opts.solve, trace)?;
    let report = classify(&analysis, None);
    Ok((analysis, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "FAIL-DETECTED")]
    FailDetected,
    #[serde(rename = "NOT-DETECTED")]
    NotDetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FailDetected => "FAIL-DETECTED",
            Verdict::NotDetected => "NOT-DETECTED",
        })
    }
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub query: Atom,
    pub verdict: Verdict,
    pub analysis: Analysis,
}

/// Analyzes `text` extended with the clause `$query :- query.` and reports
/// whether that clause is found to have no solutions.
pub fn check(
    text: &str,
    query: &Atom,
    opts: &Options,
    trace: Trace<'_>,
) -> Result<CheckOutcome, Error> {
    let mut program = parse_program(text).map_err(FrontendError::from)?;
    validate(&program, opts.allow_unknown)?;
    if !program.predicates().contains(&query.key()) {
        return Err(Error::UnknownQueryPredicate(query.key()));
    }
    program.clauses.push(Clause::rule(
        Atom::new(QUERY_PRED, Vec::new()),
        vec![query.clone()],
    ));
    let goal = program.clauses.len() - 1;
    let program = normalize_heads(&rename_apart(&program));
    let analysis = analyze(&program, &opts.solve, trace)?;
    let verdict = if analysis.failed.contains(&goal) {
        Verdict::FailDetected
    } else {
        Verdict::NotDetected
    };
    Ok(CheckOutcome {
        query: query.clone(),
        verdict,
        analysis,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusRow {
    pub file: String,
    pub predicate: String,
    pub descriptors: usize,
    pub precision: usize,
    pub entry: String,
    pub verdict: Verdict,
    pub millis: u128,
    pub memo_entries: usize,
    pub base_vars: usize,
    pub max_iterations: usize,
}

/// Runs inference and every `:- entry` check for one program.
pub fn corpus_file(path: &Path, opts: &Options) -> Result<Vec<CorpusRow>, Error> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let in_file = |e: Error| Error::InFile {
        path: path.to_path_buf(),
        source: Box::new(e),
    };
    let text = std::fs::read_to_string(path).map_err(io)?;
    let program = parse_program(&text).map_err(|e| in_file(FrontendError::from(e).into()))?;
    let mut rows = Vec::new();
    for entry in &program.entries {
        let start = Instant::now();
        let (analysis, report) = infer(&text, opts, &mut |_| {}).map_err(in_file)?;
        let outcome = check(&text, entry, opts, &mut |_| {}).map_err(in_file)?;
        let millis = start.elapsed().as_millis();
        let pred = entry.key();
        let pr = report.get(&pred.name, pred.arity);
        let scc_stats = analysis
            .sccs
            .iter()
            .chain(outcome.analysis.sccs.iter())
            .map(|s| &s.stats);
        let (memo_entries, base_vars, max_iterations) =
            scc_stats.fold((0, 0, 0), |(m, b, it), s| {
                (
                    m.max(s.memo_entries),
                    b.max(s.base_vars),
                    it.max(s.iterations),
                )
            });
        rows.push(CorpusRow {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            predicate: pred.to_string(),
            descriptors: pred.arity,
            precision: pr.map_or(0, |p| p.stats.non_any),
            entry: entry.to_string(),
            verdict: outcome.verdict,
            millis,
            memo_entries,
            base_vars,
            max_iterations,
        });
    }
    Ok(rows)
}

/// Runs [`corpus_file`] over every `.pl` file of a directory, in name order.
pub fn corpus(dir: &Path, opts: &Options) -> Result<Vec<CorpusRow>, Error> {
    let io = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pl"))
        .collect();
    files.sort();
    let mut rows = Vec::new();
    for f in files {
        rows.extend(corpus_file(&f, opts)?);
    }
    Ok(rows)
}
