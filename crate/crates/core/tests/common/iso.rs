use std::collections::BTreeMap;

use rti_core::frontend::Pred;
use rti_core::report::parse_types;
use rti_core::setexpr::{EquationSystem, SetExpr, Var};
use rti_core::solver::Analysis;

#[derive(Clone, Default)]
struct Bijection {
    fwd: BTreeMap<Var, Var>,
    bwd: BTreeMap<Var, Var>,
    todo: Vec<(Var, Var)>,
}

impl Bijection {
    fn pair(mut self, x: Var, y: Var) -> Option<Self> {
        match (self.fwd.get(&x), self.bwd.get(&y)) {
            (Some(y2), _) => (*y2 == y).then_some(self),
            (None, Some(_)) => None,
            (None, None) => {
                self.fwd.insert(x, y);
                self.bwd.insert(y, x);
                self.todo.push((x, y));
                Some(self)
            }
        }
    }
}

fn match_all(xs: &[SetExpr], ys: &[SetExpr], b: Bijection) -> Vec<Bijection> {
    let mut states = vec![b];
    for (x, y) in xs.iter().zip(ys) {
        states = states
            .into_iter()
            .flat_map(|s| match_expr(x, y, s))
            .collect();
    }
    states
}

fn match_perm(
    xs: &[SetExpr],
    ys: &[SetExpr],
    used: &mut Vec<bool>,
    b: Bijection,
) -> Vec<Bijection> {
    let Some((x, rest)) = xs.split_first() else {
        return vec![b];
    };
    let mut out = Vec::new();
    for j in 0..ys.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        for s in match_expr(x, &ys[j], b.clone()) {
            out.extend(match_perm(rest, ys, used, s));
        }
        used[j] = false;
    }
    out
}

fn match_expr(x: &SetExpr, y: &SetExpr, b: Bijection) -> Vec<Bijection> {
    match (x, y) {
        (SetExpr::Empty, SetExpr::Empty) => vec![b],
        (SetExpr::Var(u), SetExpr::Var(v)) => b.pair(*u, *v).into_iter().collect(),
        (SetExpr::Cons(f, xs), SetExpr::Cons(g, ys)) if f == g => match_all(xs, ys, b),
        (SetExpr::Union(xs), SetExpr::Union(ys)) | (SetExpr::Inter(xs), SetExpr::Inter(ys))
            if xs.len() == ys.len() =>
        {
            match_perm(xs, ys, &mut vec![false; ys.len()], b)
        }
        _ => Vec::new(),
    }
}

fn search(s1: &EquationSystem, s2: &EquationSystem, mut b: Bijection) -> bool {
    let Some((x, y)) = b.todo.pop() else {
        return true;
    };
    match (s1.get(x), s2.get(y)) {
        (None, None) => search(s1, s2, b),
        (Some(e1), Some(e2)) => match_expr(e1, e2, b).into_iter().any(|s| search(s1, s2, s)),
        _ => false,
    }
}

/// Whether the two systems agree on `r1`/`r2` up to a consistent renaming
/// of variables, parameters included.
pub fn isomorphic(s1: &EquationSystem, r1: &[Var], s2: &EquationSystem, r2: &[Var]) -> bool {
    if r1.len() != r2.len() {
        return false;
    }
    let mut b = Some(Bijection::default());
    for (x, y) in r1.iter().zip(r2) {
        b = b.and_then(|b| b.pair(*x, *y));
    }
    b.is_some_and(|b| search(s1, s2, b))
}

/// Compares the inferred types of `pred` with `:- type` lines naming its
/// argument types `roots`, in order.
pub fn types_match(
    analysis: &Analysis,
    pred: &Pred,
    expected: &str,
    roots: &[&str],
) -> Result<(), String> {
    let sol = analysis
        .solutions
        .get(pred)
        .ok_or_else(|| format!("no types for {pred}"))?;
    let parsed = parse_types(expected).map_err(|e| e.to_string())?;
    let want: Vec<Var> = roots
        .iter()
        .map(|n| {
            parsed
                .vars
                .lookup(n)
                .ok_or_else(|| format!("{n} not declared"))
        })
        .collect::<Result<_, _>>()?;
    if isomorphic(&sol.system, &sol.sig, &parsed.system, &want) {
        Ok(())
    } else {
        Err(format!(
            "{pred}: got\n{}",
            sol.system.display(&analysis.vars)
        ))
    }
}
