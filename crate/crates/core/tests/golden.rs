mod common;

use std::path::Path;

use common::iso::types_match;
use rti_core::frontend::Pred;
use rti_core::solver::SolveConfig;
use rti_core::{infer, Options};

fn analyze(file: &str) -> rti_core::solver::Analysis {
    let text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/programs")
            .join(file),
    )
    .unwrap();
    infer(&text, &Options::default(), &mut |_| {}).unwrap().0
}

const APPEND: &str =
    ":- type A1 -> [] | [X|A1].\n:- type A2 -> .\n:- type A3 -> A2 | [X|A3].\n:- type X -> .";
const LISTS: &str = ":- type L1 -> [] | [X|L1].\n:- type L2 -> [] | [X|L2].\n:- type X -> .";

#[test]
fn append_types() {
    types_match(
        &analyze("append.pl"),
        &Pred::new("append", 3),
        APPEND,
        &["A1", "A2", "A3"],
    )
    .unwrap();
}

#[test]
fn append_types_rejects_unshared_elements() {
    let unshared = ":- type A1 -> [] | [X|A1].\n:- type A2 -> .\n:- type A3 -> A2 | [Y|A3].\n:- type X -> .\n:- type Y -> .";
    assert!(types_match(
        &analyze("append.pl"),
        &Pred::new("append", 3),
        unshared,
        &["A1", "A2", "A3"]
    )
    .is_err());
}

#[test]
fn nrev_and_callers_share_one_parameter() {
    let a = analyze("same.pl");
    for p in [Pred::new("nrev", 2), Pred::new("same", 2)] {
        types_match(&a, &p, LISTS, &["L1", "L2"]).unwrap();
    }
    types_match(&a, &Pred::new("append", 3), APPEND, &["A1", "A2", "A3"]).unwrap();
}

#[test]
fn appself_types() {
    types_match(
        &analyze("appself.pl"),
        &Pred::new("appself", 2),
        LISTS,
        &["L1", "L2"],
    )
    .unwrap();
}

#[test]
fn recurrences() {
    let a = analyze("recurrences.pl");
    types_match(&a, &Pred::new("p", 1), ":- type P -> 0.", &["P"]).unwrap();
    types_match(&a, &Pred::new("q", 1), ":- type Q -> a.", &["Q"]).unwrap();
    types_match(&a, &Pred::new("r", 1), ":- type R -> b.", &["R"]).unwrap();
}

#[test]
fn empty_program_has_no_predicates() {
    let a = analyze("empty.pl");
    assert!(a.solutions.is_empty());
    assert!(a.sccs.is_empty());
}

#[test]
fn bind_off_is_never_more_precise() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let off = Options {
        solve: SolveConfig {
            bind: false,
            ..SolveConfig::default()
        },
        allow_unknown: false,
    };
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let (_, with) = infer(&text, &Options::default(), &mut |_| {}).unwrap();
        let (_, without) = infer(&text, &off, &mut |_| {}).unwrap();
        for p in &without.predicates {
            let q = with.get(&p.predicate, p.arity).unwrap();
            for (a, b) in p.args.iter().zip(&q.args) {
                assert!(
                    a.any || !b.any,
                    "{}: {} argument {}",
                    path.display(),
                    p.predicate,
                    a.position
                );
            }
        }
    }
}
