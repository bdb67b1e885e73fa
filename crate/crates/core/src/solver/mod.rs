//! Equation generation, the SOLVE loop with its helpers, and the
//! bottom-up whole-program driver.

mod analyze;
mod bind;
mod case;
pub mod emptiness;
mod generate;
mod solve;

pub use analyze::{analyze, Analysis, AnalysisError, SccResult};
pub use bind::{bind, candidates, BindFormula, BindOutcome, BindState, CandidateSet, Synthesis};
pub use case::{case_reduce, CaseError, CaseRule};
pub use emptiness::{is_empty, NonEmpty};
pub use generate::{
    generate_equations, instantiate_solution, ClauseInfo, GenError, SccEquations, Solution,
};
pub use solve::{
    failed_clauses, propagate_failure, solve, SolveConfig, SolveError, SolveResult, SolveStats,
    Trace,
};
