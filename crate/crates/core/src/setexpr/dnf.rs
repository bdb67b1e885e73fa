use std::collections::BTreeSet;

use super::SetExpr;

/// One disjunct of a DNF: a set of leaves (variables and constructor
/// applications) read as their intersection.
pub type Conjunct = BTreeSet<SetExpr>;

/// Distributes intersection over union. Constructor applications are
/// leaves; their arguments are left untouched. Conjuncts containing `Empty`
/// are dropped.
pub fn dnf_conjuncts(e: &SetExpr) -> Vec<Conjunct> {
    let mut out = match e {
        SetExpr::Empty => Vec::new(),
        SetExpr::Var(_) | SetExpr::Cons(..) => vec![BTreeSet::from([e.clone()])],
        SetExpr::Union(ops) => ops.iter().flat_map(dnf_conjuncts).collect(),
        SetExpr::Inter(ops) => {
            let mut acc: Vec<Conjunct> = vec![BTreeSet::new()];
            for op in ops {
                let parts = dnf_conjuncts(op);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for a in &acc {
                    for p in &parts {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    };
    out.sort();
    out.dedup();
    out
}

pub fn conjuncts_to_expr(cs: impl IntoIterator<Item = Conjunct>) -> SetExpr {
    SetExpr::union(cs.into_iter().map(SetExpr::inter))
}

/// Disjunctive normal form of `e`.
pub fn dnf(e: &SetExpr) -> SetExpr {
    conjuncts_to_expr(dnf_conjuncts(e))
}
