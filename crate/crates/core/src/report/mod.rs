//! Projection of solved systems, `:- type` rendering and per-argument
//! precision reports.

mod project;
mod summary;
mod types;

pub use project::{project, Projection};
pub use summary::{
    classify, predicate_report, ArgReport, PredicateReport, ReportStats, TypeDef, TypeReport,
};
pub use types::{
    appearance_order, display_names, ordered_alternatives, parse_types, prettify,
    render_alternative, render_rhs, ParsedTypes, TypeSyntaxError,
};
