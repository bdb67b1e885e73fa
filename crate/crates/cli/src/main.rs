use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rti_core::callgraph;
use rti_core::frontend::{parse_atom, parse_program, FrontendError};
use rti_core::solver::{AnalysisError, SolveConfig, Synthesis};
use rti_core::{check, corpus, infer, CorpusRow, Error, Options};

#[derive(Parser)]
#[command(
    name = "rti",
    version,
    about = "Parameterized regular type inference for pure logic programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer types for every predicate of a program.
    Infer {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the equations of every component at the given phase.
        #[arg(long, value_enum)]
        dump_equations: Option<Phase>,
        /// Print the call graph with its components and levels as JSON.
        #[arg(long)]
        dump_callgraph: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Decide whether a query is detected to have no solutions.
    Check {
        file: PathBuf,
        /// Query atom; defaults to the program's `:- entry` directives.
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run inference and entry checks over every `.pl` file of a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Switch::On)]
    bind: Switch,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    propagate_failure: Switch,
    #[arg(long, env = "RTI_MAX_ITER", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    max_iterations: u64,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    bind_dnf_limit: u64,
    /// How several bindings of one free variable combine.
    #[arg(long, value_enum, default_value_t = SynthesisArg::Union)]
    bind_synthesis: SynthesisArg,
    /// Accept calls to undefined predicates, typing them as unconstrained.
    #[arg(long)]
    allow_unknown: bool,
    /// Log each solver step to stderr.
    #[arg(long)]
    trace: bool,
}

impl SolverArgs {
    fn options(&self) -> Options {
        Options {
            solve: SolveConfig {
                max_iterations: self.max_iterations as usize,
                bind: self.bind == Switch::On,
                propagate_failure: self.propagate_failure == Switch::On,
                bind_dnf_limit: self.bind_dnf_limit as usize,
                synthesis: match self.bind_synthesis {
                    SynthesisArg::Union => Synthesis::Union,
                    SynthesisArg::Intersect => Synthesis::Intersect,
                },
            },
            allow_unknown: self.allow_unknown,
        }
    }

    fn tracer(&self) -> impl FnMut(&str) {
        let on = self.trace;
        move |line: &str| {
            if on {
                eprintln!("{line}");
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SynthesisArg {
    Union,
    Intersect,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Phase {
    Initial,
    Toplevel,
    Solved,
}

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Frontend(FrontendError::Parse(_)) => EXIT_PARSE,
        Error::Frontend(_) => EXIT_PARSE,
        Error::Analysis(AnalysisError::Solve { .. }) | Error::Analysis(_) => EXIT_SOLVER,
        Error::InFile { source, .. } => exit_code(source),
        Error::UnknownQueryPredicate(_) | Error::NoQuery | Error::Io { .. } => EXIT_USAGE,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } | Error::InFile { .. } => e,
        e => Error::InFile {
            path: path.to_path_buf(),
            source: Box::new(e),
        },
    }
}

fn run_infer(
    file: &Path,
    format: Format,
    dump: Option<Phase>,
    dump_callgraph: bool,
    solver: &SolverArgs,
) -> Result<(), Error> {
    let text = read(file)?;
    let mut trace = solver.tracer();
    let (analysis, report) =
        infer(&text, &solver.options(), &mut trace).map_err(|e| in_file(file, e))?;
    if dump_callgraph {
        let doc = callgraph::to_json(&analysis.graph, &analysis.plan);
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    }
    if let Some(phase) = dump {
        for scc in &analysis.sccs {
            let names: Vec<String> = scc.preds.iter().map(|p| p.to_string()).collect();
            println!("%% component {}", names.join(" "));
            let sys = match phase {
                Phase::Initial => &scc.initial,
                Phase::Toplevel => &scc.top_level,
                Phase::Solved => &scc.solved,
            };
            print!("{}", sys.display(&analysis.vars));
        }
    }
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => {
            let doc = serde_json::json!({
                "file": file.display().to_string(),
                "predicates": report.predicates,
                "stats": report.stats(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(())
}

fn run_check(
    file: &Path,
    query: Option<&str>,
    format: Format,
    solver: &SolverArgs,
) -> Result<(), Error> {
    let text = read(file)?;
    let queries = match query {
        Some(q) => vec![parse_atom(q).map_err(FrontendError::from)?],
        None => {
            let program = parse_program(&text)
                .map_err(FrontendError::from)
                .map_err(|e| in_file(file, e.into()))?;
            if program.entries.is_empty() {
                return Err(Error::NoQuery);
            }
            program.entries
        }
    };
    let mut rows = Vec::new();
    for q in &queries {
        let mut trace = solver.tracer();
        let outcome =
            check(&text, q, &solver.options(), &mut trace).map_err(|e| in_file(file, e))?;
        match format {
            Format::Text => println!("{}\t{}", outcome.query, outcome.verdict),
            Format::Json => rows.push(serde_json::json!({
                "query": outcome.query.to_string(),
                "verdict": outcome.verdict,
            })),
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
    }
    Ok(())
}

fn corpus_table(rows: &[CorpusRow]) -> String {
    let mut out = format!(
        "{:<16} {:<14} {:>5} {:>5} {:<5} {:>8}  {}\n",
        "file", "predicate", "Desc.", "Prec.", "Error", "ms", "entry"
    );
    for r in rows {
        let err = match r.verdict {
            rti_core::Verdict::FailDetected => "y",
            rti_core::Verdict::NotDetected => "n",
        };
        out.push_str(&format!(
            "{:<16} {:<14} {:>5} {:>5} {:<5} {:>8}  {}\n",
            r.file, r.predicate, r.descriptors, r.precision, err, r.millis, r.entry
        ));
    }
    out
}

fn run_corpus(dir: &Path, format: Format, solver: &SolverArgs) -> Result<(), Error> {
    let rows = corpus(dir, &solver.options())?;
    match format {
        Format::Text => print!("{}", corpus_table(&rows)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("json")),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Infer {
            file,
            format,
            dump_equations,
            dump_callgraph,
            solver,
        } => run_infer(file, *format, *dump_equations, *dump_callgraph, solver),
        Command::Check {
            file,
            query,
            format,
            solver,
        } => run_check(file, query.as_deref(), *format, solver),
        Command::Corpus {
            dir,
            format,
            solver,
        } => run_corpus(dir, *format, solver),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rti: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
