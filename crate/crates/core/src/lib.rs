//! Parameterized regular type inference for pure logic programs by
//! solving set equations.

pub mod callgraph;
pub mod frontend;
mod pipeline;
pub mod report;
pub mod setexpr;
pub mod solver;

pub use pipeline::{
    check, corpus, corpus_file, infer, CheckOutcome, CorpusRow, Error, Options, Verdict, QUERY_PRED,
};
