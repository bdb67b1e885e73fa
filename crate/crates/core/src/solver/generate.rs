use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::frontend::{Pred, Program, Signature, Term};
use crate::setexpr::{top_level_expr, EquationSystem, Functor, SetExpr, Var, VarTable};

/// A solved, projected system for one predicate together with the
/// variables standing for its arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub sig: Vec<Var>,
    pub system: EquationSystem,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("no solution available for called predicate {0}")]
    MissingSolution(Pred),
}

/// Variables that belong to one clause: if any of them ends up empty the
/// clause has no solutions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseInfo {
    pub clause: usize,
    pub vars: BTreeSet<Var>,
    pub head_vars: BTreeSet<Var>,
    /// Program variables of the clause when its component is recursive.
    pub pinned: BTreeSet<Var>,
    /// `vars` plus every variable of the clause's call-site copies.
    pub local: BTreeSet<Var>,
}

/// Copies `sol` for one call site, renaming every variable (parameters
/// included) with the site number.
pub fn instantiate_solution(sol: &Solution, site: usize, vars: &mut VarTable) -> Solution {
    let mut all: BTreeSet<Var> = sol.sig.iter().copied().collect();
    for (x, e) in sol.system.iter() {
        all.insert(x);
        e.collect_vars(&mut all);
    }
    let map: BTreeMap<Var, Var> = all
        .into_iter()
        .map(|v| {
            let name = format!("{}{}", vars.name(v), site);
            (v, vars.fresh(&name))
        })
        .collect();
    let f = |v: Var| map[&v];
    Solution {
        sig: sol.sig.iter().map(|v| f(*v)).collect(),
        system: sol
            .system
            .iter()
            .map(|(x, e)| (f(x), e.rename(&f)))
            .collect(),
    }
}

fn term_expr(t: &Term, names: &BTreeMap<String, Var>) -> SetExpr {
    match t {
        Term::Var(v) => SetExpr::Var(names[v]),
        Term::Compound(f, args) => SetExpr::Cons(
            Functor::new(f, args.len()),
            args.iter().map(|a| term_expr(a, names)).collect(),
        ),
    }
}

#[derive(Clone, Debug)]
struct ClauseEqs {
    pred: Pred,
    head_raw: Vec<SetExpr>,
    head_top: Vec<SetExpr>,
    raw: Vec<(Var, SetExpr)>,
    top: Vec<(Var, SetExpr)>,
}

/// Equations of one strongly connected component, built once so that
/// regenerating after a clause failure reuses the same variables.
#[derive(Clone, Debug)]
pub struct SccEquations {
    pub preds: Vec<Pred>,
    sigs: BTreeMap<Pred, Vec<Var>>,
    clauses: BTreeMap<usize, ClauseEqs>,
    pub info: Vec<ClauseInfo>,
}

impl SccEquations {
    /// Builds the head and body equations of every clause of `preds`.
    /// Calls to predicates outside the component use a fresh copy of the
    /// callee's solution per call site; calls to undefined predicates get
    /// fresh unconstrained variables.
    pub fn build(
        program: &Program,
        preds: &[Pred],
        sigs: &BTreeMap<Pred, Signature>,
        lower: &BTreeMap<Pred, Solution>,
        vars: &mut VarTable,
    ) -> Result<Self, GenError> {
        let defined = program.predicates();
        let mut clauses = BTreeMap::new();
        let mut info = Vec::new();
        let mut site = 0;
        let recursive = program
            .clauses
            .iter()
            .filter(|c| preds.contains(&c.head.key()))
            .any(|c| c.body.iter().any(|a| preds.contains(&a.key())));
        for (ci, c) in program.clauses.iter().enumerate() {
            let pred = c.head.key();
            if !preds.contains(&pred) {
                continue;
            }
            let names: BTreeMap<String, Var> = c
                .vars()
                .into_iter()
                .map(|n| {
                    let v = vars.fresh(&n);
                    (n, v)
                })
                .collect();
            let mut owned: BTreeSet<Var> = names.values().copied().collect();
            let mut local = BTreeSet::new();
            let pinned = if recursive {
                owned.clone()
            } else {
                BTreeSet::new()
            };
            let head_vars: BTreeSet<Var> = c.head_vars().iter().map(|n| names[n]).collect();

            let mut raw = Vec::new();
            let mut top = Vec::new();
            let mut aux = Vec::new();

            let head_raw: Vec<SetExpr> = c.head.args.iter().map(|t| term_expr(t, &names)).collect();
            let head_top: Vec<SetExpr> = head_raw
                .iter()
                .map(|e| top_level_expr(e, vars, &mut aux))
                .collect();

            let mut occurrences: BTreeMap<Var, Vec<SetExpr>> = BTreeMap::new();
            for a in &c.body {
                let callee = a.key();
                let sig: Vec<Var> = if preds.contains(&callee) {
                    sigs[&callee].vars.clone()
                } else if let Some(sol) = lower.get(&callee) {
                    site += 1;
                    let copy = instantiate_solution(sol, site, vars);
                    for (x, e) in copy.system.iter() {
                        local.insert(x);
                        e.collect_vars(&mut local);
                        raw.push((x, e.clone()));
                        top.push((x, e.clone()));
                    }
                    owned.extend(copy.sig.iter().copied());
                    copy.sig
                } else if defined.contains(&callee) {
                    return Err(GenError::MissingSolution(callee));
                } else {
                    (0..callee.arity).map(|_| vars.fresh("U")).collect()
                };
                for (i, t) in a.args.iter().enumerate() {
                    match t {
                        Term::Var(y) => occurrences
                            .entry(names[y])
                            .or_default()
                            .push(SetExpr::Var(sig[i])),
                        _ => {
                            let w = vars.fresh("W");
                            owned.insert(w);
                            let e = term_expr(t, &names);
                            let et = top_level_expr(&e, vars, &mut aux);
                            raw.push((w, SetExpr::inter([SetExpr::Var(sig[i]), e])));
                            top.push((w, SetExpr::inter([SetExpr::Var(sig[i]), et])));
                        }
                    }
                }
            }
            for (y, sigma) in occurrences {
                let e = SetExpr::inter(sigma);
                raw.push((y, e.clone()));
                top.push((y, e));
            }
            for (y, t) in &c.head_bindings {
                let e = term_expr(t, &names);
                let et = top_level_expr(&e, vars, &mut aux);
                raw.push((names[y], e));
                top.push((names[y], et));
            }
            owned.extend(aux.iter().map(|(x, _)| *x));
            top.extend(aux);

            local.extend(owned.iter().copied());
            info.push(ClauseInfo {
                clause: ci,
                vars: owned,
                head_vars,
                pinned,
                local,
            });
            clauses.insert(
                ci,
                ClauseEqs {
                    pred,
                    head_raw,
                    head_top,
                    raw,
                    top,
                },
            );
        }
        Ok(SccEquations {
            preds: preds.to_vec(),
            sigs: preds
                .iter()
                .map(|p| (p.clone(), sigs[p].vars.clone()))
                .collect(),
            clauses,
            info,
        })
    }

    fn assemble(&self, failed: &BTreeSet<usize>, top_level: bool) -> EquationSystem {
        let mut sys = EquationSystem::new();
        for (p, sig) in &self.sigs {
            for (j, &x) in sig.iter().enumerate() {
                let alts = self
                    .clauses
                    .iter()
                    .filter(|(ci, c)| &c.pred == p && !failed.contains(ci))
                    .map(|(_, c)| {
                        if top_level {
                            c.head_top[j].clone()
                        } else {
                            c.head_raw[j].clone()
                        }
                    });
                sys.insert(x, SetExpr::union(alts));
            }
        }
        for c in self.clauses.values() {
            let eqs = if top_level { &c.top } else { &c.raw };
            for (x, e) in eqs {
                sys.insert(*x, e.clone());
            }
        }
        sys
    }

    /// The system as generated, before top-level rewriting. Clauses in
    /// `failed` contribute nothing to their predicate's head equations.
    pub fn initial(&self, failed: &BTreeSet<usize>) -> EquationSystem {
        self.assemble(failed, false)
    }

    /// The generated system in top-level form.
    pub fn top_level(&self, failed: &BTreeSet<usize>) -> EquationSystem {
        self.assemble(failed, true)
    }

    pub fn signature(&self, p: &Pred) -> &[Var] {
        &self.sigs[p]
    }
}

/// Equations for the predicates of one component with no failed clauses,
/// in top-level form.
pub fn generate_equations(
    program: &Program,
    preds: &[Pred],
    sigs: &BTreeMap<Pred, Signature>,
    lower: &BTreeMap<Pred, Solution>,
    vars: &mut VarTable,
) -> Result<EquationSystem, GenError> {
    Ok(SccEquations::build(program, preds, sigs, lower, vars)?.top_level(&BTreeSet::new()))
}
