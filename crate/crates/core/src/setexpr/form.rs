use serde::Serialize;

use super::toplevel::is_top_level;
use super::{EquationSystem, SetExpr};

/// Syntactic class of an expression or system, most specific last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FormClass {
    General,
    TopLevel,
    Parameterized,
    Regular,
    LeafLinear,
}

fn is_flat_cons(e: &SetExpr) -> bool {
    matches!(e, SetExpr::Cons(_, args) if args.iter().all(|a| matches!(a, SetExpr::Var(_))))
}

// V | f(V1..Vn) | V /\ R : any number of variables and at most one flat
// constructor.
fn is_param_conjunct(e: &SetExpr) -> bool {
    match e {
        SetExpr::Var(_) => true,
        SetExpr::Cons(..) => is_flat_cons(e),
        SetExpr::Inter(ops) => {
            let mut conses = 0;
            for o in ops {
                match o {
                    SetExpr::Var(_) => {}
                    c if is_flat_cons(c) => conses += 1,
                    _ => return false,
                }
            }
            conses <= 1
        }
        _ => false,
    }
}

fn is_regular_disjunct(e: &SetExpr) -> bool {
    matches!(e, SetExpr::Var(_)) || is_flat_cons(e)
}

/// Classifies a single expression as `Regular`, `Parameterized`,
/// `TopLevel` or `General`.
pub fn classify(e: &SetExpr) -> FormClass {
    if e.is_empty_set() || e.disjuncts().iter().all(is_regular_disjunct) {
        FormClass::Regular
    } else if e.disjuncts().iter().all(is_param_conjunct) {
        FormClass::Parameterized
    } else if is_top_level(e) {
        FormClass::TopLevel
    } else {
        FormClass::General
    }
}

/// Classifies a whole system. `Regular` systems have regular rhs, no free
/// variables and no top-level variables except aliases. `LeafLinear`
/// systems have parameterized rhs whose top-level variables are all free.
/// Otherwise the least specific rhs class is returned.
pub fn classify_system(sys: &EquationSystem) -> FormClass {
    let worst = sys
        .iter()
        .map(|(_, e)| classify(e))
        .min()
        .unwrap_or(FormClass::Regular);
    if worst < FormClass::Parameterized {
        return worst;
    }
    let free = sys.free_vars();
    let regular = worst == FormClass::Regular
        && free.is_empty()
        && sys
            .iter()
            .all(|(_, e)| matches!(e, SetExpr::Var(_)) || e.top_level_vars().is_empty());
    if regular {
        return FormClass::Regular;
    }
    let leaf_linear = sys
        .iter()
        .all(|(_, e)| e.top_level_vars().iter().all(|v| free.contains(v)));
    if leaf_linear {
        FormClass::LeafLinear
    } else {
        FormClass::Parameterized
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setexpr::VarTable;

    #[test]
    fn list_with_free_element_is_leaf_linear() {
        let mut vars = VarTable::new();
        let x = vars.fresh("x");
        let e = vars.fresh("X");
        let sys: EquationSystem = [(
            x,
            SetExpr::union([
                SetExpr::nil(),
                SetExpr::list_cons(SetExpr::Var(e), SetExpr::Var(x)),
            ]),
        )]
        .into_iter()
        .collect();
        assert_eq!(classify_system(&sys), FormClass::LeafLinear);
    }

    #[test]
    fn nested_constructor_is_general() {
        let e = SetExpr::app("f", vec![SetExpr::app("g", vec![SetExpr::constant("a")])]);
        assert_eq!(classify(&e), FormClass::General);
    }

    #[test]
    fn free_variables_with_one_constructor_are_parameterized() {
        let mut vars = VarTable::new();
        let v1 = vars.fresh("V1");
        let v2 = vars.fresh("V2");
        let y = vars.fresh("Y");
        let e = SetExpr::inter([
            SetExpr::Var(v1),
            SetExpr::Var(v2),
            SetExpr::app("f", vec![SetExpr::Var(y)]),
        ]);
        assert_eq!(classify(&e), FormClass::Parameterized);
        let two = SetExpr::inter([
            SetExpr::Var(v1),
            SetExpr::app("f", vec![SetExpr::Var(y)]),
            SetExpr::app("g", vec![SetExpr::Var(y)]),
        ]);
        assert_eq!(classify(&two), FormClass::TopLevel);
    }

    #[test]
    fn ground_system_is_regular() {
        let mut vars = VarTable::new();
        let n = vars.fresh("N");
        let sys: EquationSystem = [(
            n,
            SetExpr::union([
                SetExpr::constant("0"),
                SetExpr::app("s", vec![SetExpr::Var(n)]),
            ]),
        )]
        .into_iter()
        .collect();
        assert_eq!(classify_system(&sys), FormClass::Regular);
    }
}
