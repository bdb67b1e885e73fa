use std::collections::BTreeSet;

use crate::setexpr::{EquationSystem, SetExpr, Var};

/// Least set of defined variables that may denote a non-empty set when
/// every free variable is non-empty.
#[derive(Clone, Debug)]
pub struct NonEmpty {
    marked: BTreeSet<Var>,
    defined: BTreeSet<Var>,
}

fn possibly_nonempty(e: &SetExpr, sys: &EquationSystem, marked: &BTreeSet<Var>) -> bool {
    match e {
        SetExpr::Empty => false,
        SetExpr::Var(v) => !sys.defines(*v) || marked.contains(v),
        SetExpr::Cons(_, args) => args.iter().all(|a| possibly_nonempty(a, sys, marked)),
        SetExpr::Inter(ops) => ops.iter().all(|a| possibly_nonempty(a, sys, marked)),
        SetExpr::Union(ops) => ops.iter().any(|a| possibly_nonempty(a, sys, marked)),
    }
}

impl NonEmpty {
    pub fn compute(sys: &EquationSystem) -> Self {
        let mut marked = BTreeSet::new();
        loop {
            let mut changed = false;
            for (v, e) in sys.iter() {
                if !marked.contains(&v) && possibly_nonempty(e, sys, &marked) {
                    marked.insert(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        NonEmpty {
            marked,
            defined: sys.lhs().collect(),
        }
    }

    /// True when `v` has an equation and was never marked.
    pub fn is_empty(&self, v: Var) -> bool {
        self.defined.contains(&v) && !self.marked.contains(&v)
    }

    pub fn empty_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.defined
            .iter()
            .copied()
            .filter(|v| !self.marked.contains(v))
    }
}

/// `sys ⊢ x = ∅`.
pub fn is_empty(x: Var, sys: &EquationSystem) -> bool {
    NonEmpty::compute(sys).is_empty(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setexpr::VarTable;

    #[test]
    fn examples() {
        let mut vt = VarTable::new();
        let x = vt.fresh("x");
        let y = vt.fresh("y");
        let a = vt.fresh("A");

        let sys: EquationSystem = [(x, SetExpr::Empty)].into_iter().collect();
        assert!(is_empty(x, &sys));

        let sys: EquationSystem = [(x, SetExpr::inter([SetExpr::Var(a), SetExpr::nil()]))]
            .into_iter()
            .collect();
        assert!(!is_empty(x, &sys));

        let sys: EquationSystem = [
            (x, SetExpr::app("f", vec![SetExpr::Var(y)])),
            (y, SetExpr::Empty),
        ]
        .into_iter()
        .collect();
        assert!(is_empty(x, &sys));
        assert!(!is_empty(a, &sys));
    }

    #[test]
    fn infinite_terms_only_is_empty() {
        let mut vt = VarTable::new();
        let x = vt.fresh("x");
        let e = vt.fresh("E");
        let sys: EquationSystem = [(x, SetExpr::list_cons(SetExpr::Var(e), SetExpr::Var(x)))]
            .into_iter()
            .collect();
        assert!(is_empty(x, &sys));
    }
}
