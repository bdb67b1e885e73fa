use super::{EquationSystem, SetExpr, Var, VarTable};

/// Rewrites `e` so that every constructor argument is a variable. Each
/// non-variable argument `a` is replaced by a fresh `y`, and `y = a` is
/// pushed to `out` (already in top-level form itself).
pub fn top_level_expr(e: &SetExpr, vars: &mut VarTable, out: &mut Vec<(Var, SetExpr)>) -> SetExpr {
    match e {
        SetExpr::Empty | SetExpr::Var(_) => e.clone(),
        SetExpr::Cons(f, args) => {
            let args = args
                .iter()
                .map(|a| match a {
                    SetExpr::Var(_) => a.clone(),
                    other => {
                        let y = vars.fresh("T");
                        let rhs = top_level_expr(other, vars, out);
                        out.push((y, rhs));
                        SetExpr::Var(y)
                    }
                })
                .collect();
            SetExpr::Cons(f.clone(), args)
        }
        SetExpr::Inter(ops) => SetExpr::inter(ops.iter().map(|o| top_level_expr(o, vars, out))),
        SetExpr::Union(ops) => SetExpr::union(ops.iter().map(|o| top_level_expr(o, vars, out))),
    }
}

/// Puts a standard system in top-level form. Semantics of the original
/// variables are preserved; the fresh variables are new equations.
pub fn to_top_level_form(sys: &EquationSystem, vars: &mut VarTable) -> EquationSystem {
    let mut out = EquationSystem::new();
    let mut extra = Vec::new();
    for (v, e) in sys.iter() {
        let rhs = top_level_expr(e, vars, &mut extra);
        out.insert(v, rhs);
    }
    out.extend(extra);
    out
}

pub(crate) fn is_top_level(e: &SetExpr) -> bool {
    match e {
        SetExpr::Empty | SetExpr::Var(_) => true,
        SetExpr::Cons(_, args) => args.iter().all(|a| matches!(a, SetExpr::Var(_))),
        SetExpr::Inter(ops) | SetExpr::Union(ops) => ops.iter().all(is_top_level),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_list_gets_a_tail_variable() {
        let mut vars = VarTable::new();
        let w = vars.fresh("W");
        let x = vars.fresh("X");
        let sys: EquationSystem = [(w, SetExpr::list_cons(SetExpr::Var(x), SetExpr::nil()))]
            .into_iter()
            .collect();
        let out = to_top_level_form(&sys, &mut vars);
        assert_eq!(out.len(), 2);
        let y = vars.lookup("T").unwrap();
        assert_eq!(
            out.get(w),
            Some(&SetExpr::list_cons(SetExpr::Var(x), SetExpr::Var(y)))
        );
        assert_eq!(out.get(y), Some(&SetExpr::nil()));
    }

    #[test]
    fn already_top_level_is_unchanged() {
        let mut vars = VarTable::new();
        let l = vars.fresh("L");
        let x = vars.fresh("X");
        let rhs = SetExpr::union([
            SetExpr::nil(),
            SetExpr::list_cons(SetExpr::Var(x), SetExpr::Var(l)),
        ]);
        let sys: EquationSystem = [(l, rhs)].into_iter().collect();
        assert_eq!(to_top_level_form(&sys, &mut vars), sys);
    }

    #[test]
    fn nested_constructors_unfold_one_level_at_a_time() {
        let mut vars = VarTable::new();
        let z = vars.fresh("Z");
        let rhs = SetExpr::app("f", vec![SetExpr::app("g", vec![SetExpr::constant("a")])]);
        let sys: EquationSystem = [(z, rhs)].into_iter().collect();
        let out = to_top_level_form(&sys, &mut vars);
        assert_eq!(out.len(), 3);
        let y1 = vars.lookup("T").unwrap();
        let y2 = vars.lookup("T_1").unwrap();
        assert_eq!(out.get(z), Some(&SetExpr::app("f", vec![SetExpr::Var(y1)])));
        assert_eq!(
            out.get(y1),
            Some(&SetExpr::app("g", vec![SetExpr::Var(y2)]))
        );
        assert_eq!(out.get(y2), Some(&SetExpr::constant("a")));
        assert!(out.iter().all(|(_, e)| is_top_level(e)));
    }
}
