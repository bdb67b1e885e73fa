use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Pred, Program, Term};
use super::FrontendError;
use crate::setexpr::{Var, VarTable};

/// Suffix appended to every variable of the clause with 0-based index `i`.
pub fn clause_suffix(i: usize) -> String {
    format!("_c{}", i + 1)
}

/// Gives every clause its own variable namespace by suffixing each
/// variable with the clause number.
pub fn rename_apart(p: &Program) -> Program {
    let mut out = p.clone();
    for (i, c) in out.clauses.iter_mut().enumerate() {
        let suffix = clause_suffix(i);
        let f = |v: &str| format!("{v}{suffix}");
        c.head.args = c.head.args.iter().map(|t| t.rename(&f)).collect();
        for a in &mut c.body {
            a.args = a.args.iter().map(|t| t.rename(&f)).collect();
        }
        c.head_bindings = c
            .head_bindings
            .iter()
            .map(|(y, t)| (f(y), t.rename(&f)))
            .collect();
    }
    out
}

/// Replaces each variable-free head argument by a fresh variable and
/// records the binding on the clause.
pub fn normalize_heads(p: &Program) -> Program {
    let mut out = p.clone();
    for (i, c) in out.clauses.iter_mut().enumerate() {
        let taken: BTreeSet<String> = c.vars().into_iter().collect();
        let mut k = 0;
        for j in 0..c.head.args.len() {
            if !c.head.args[j].is_ground() {
                continue;
            }
            let y = loop {
                k += 1;
                let cand = format!("Y{k}{}", clause_suffix(i));
                if !taken.contains(&cand) {
                    break cand;
                }
            };
            let t = std::mem::replace(&mut c.head.args[j], Term::Var(y.clone()));
            c.head_bindings.push((y, t));
        }
    }
    out
}

/// Checks that every body atom calls a defined predicate. With
/// `allow_unknown` the check is skipped and such calls are later given
/// unconstrained types.
pub fn validate(p: &Program, allow_unknown: bool) -> Result<(), FrontendError> {
    if allow_unknown {
        return Ok(());
    }
    let defined = p.predicates();
    for c in &p.clauses {
        for a in &c.body {
            if !defined.contains(&a.key()) {
                return Err(FrontendError::UnknownPredicate {
                    pred: a.key(),
                    line: c.line,
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pred: Pred,
    pub vars: Vec<Var>,
}

fn initial(name: &str) -> String {
    name.chars()
        .find(|c| c.is_alphabetic())
        .map(|c| c.to_uppercase().collect())
        .unwrap_or_else(|| "G".to_string())
}

fn capitalized(name: &str) -> String {
    let letters: String = name
        .chars()
        .filter(|c| c.is_alphanumeric() || *c == '_')
        .collect();
    let mut cs = letters.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => "G".to_string(),
    }
}

/// Allocates signature variables for every predicate, in order of first
/// definition. A predicate whose initial letter is not yet taken gets
/// `P` (arity 1) or `P1..Pn`; later ones fall back to the capitalized
/// predicate name.
pub fn make_signatures(p: &Program, vars: &mut VarTable) -> BTreeMap<Pred, Signature> {
    let mut order: Vec<Pred> = Vec::new();
    for c in &p.clauses {
        let k = c.head.key();
        if !order.contains(&k) {
            order.push(k);
        }
    }
    let mut letters_used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for pred in order {
        let letter = initial(&pred.name);
        let base = if letters_used.insert(letter.clone()) {
            letter
        } else {
            capitalized(&pred.name)
        };
        let sig_vars = match pred.arity {
            1 => vec![vars.fresh(&base)],
            n => (1..=n).map(|j| vars.fresh(&format!("{base}{j}"))).collect(),
        };
        out.insert(
            pred.clone(),
            Signature {
                pred,
                vars: sig_vars,
            },
        );
    }
    out
}
