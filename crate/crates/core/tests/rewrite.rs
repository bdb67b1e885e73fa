mod common;

use common::rewrite::{by_name, run};

#[test]
fn rewrites_preserve_bounded_meaning() {
    for (name, check) in by_name() {
        let bad = run(check, 200, 5, 7);
        for b in bad.iter().take(2) {
            eprintln!("{b}\n");
        }
        assert!(bad.is_empty(), "{name}: {} mismatches", bad.len());
    }
}
