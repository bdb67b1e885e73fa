//! Bounded-depth denotation of set expressions.
//!
//! Non-free variables denote the least solution of their equations; free
//! variables take their value from an [`Assignment`]. These are test
//! oracles: they enumerate terms and are only practical for small depths.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use super::{EquationSystem, Functor, SetExpr, Var};

/// A finite ground term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ground {
    pub functor: Functor,
    pub args: Vec<Ground>,
}

impl Ground {
    pub fn constant(name: &str) -> Self {
        Ground {
            functor: Functor::constant(name),
            args: Vec::new(),
        }
    }

    pub fn app(name: &str, args: Vec<Ground>) -> Self {
        Ground {
            functor: Functor::new(name, args.len()),
            args,
        }
    }

    pub fn list(items: Vec<Ground>) -> Self {
        items
            .into_iter()
            .rev()
            .fold(Ground::constant(super::NIL), |tail, h| Ground {
                functor: Functor::new(super::CONS, 2),
                args: vec![h, tail],
            })
    }

    /// Height of the term tree: constants have depth 0.
    pub fn depth(&self) -> usize {
        self.args.iter().map(|a| a.depth() + 1).max().unwrap_or(0)
    }

    fn subterms<'a>(&'a self, out: &mut Vec<&'a Ground>) {
        out.push(self);
        for a in &self.args {
            a.subterms(out);
        }
    }
}

impl fmt::Display for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.functor.is_list_cons() {
            write!(f, "[{}", self.args[0])?;
            let mut tail = &self.args[1];
            loop {
                if tail.functor.is_list_cons() {
                    write!(f, ",{}", tail.args[0])?;
                    tail = &tail.args[1];
                } else if tail.functor.is_nil() {
                    return write!(f, "]");
                } else {
                    return write!(f, "|{tail}]");
                }
            }
        }
        write!(f, "{}", super::quote_atom(&self.functor.name))?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Values of free variables.
pub type Assignment = BTreeMap<Var, BTreeSet<Ground>>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeaningError {
    #[error("free variable {0:?} has no value in the assignment")]
    UnboundFree(Var),
}

type Level = BTreeMap<Var, BTreeSet<Ground>>;

/// Terms of depth at most `depth` denoted by `e` under `sigma`.
pub fn meaning(
    e: &SetExpr,
    sigma: &Assignment,
    sys: &EquationSystem,
    depth: usize,
) -> Result<BTreeSet<Ground>, MeaningError> {
    let reach = sys.reachable(e.vars());
    for v in &reach {
        if !sys.defines(*v) && !sigma.contains_key(v) {
            return Err(MeaningError::UnboundFree(*v));
        }
    }
    let defined: Vec<Var> = reach.iter().copied().filter(|v| sys.defines(*v)).collect();

    let mut levels: Vec<Level> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let mut cur: Level = defined.iter().map(|v| (*v, BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for v in &defined {
                let val = eval(sys.get(*v).unwrap(), k, sigma, sys, &levels, &cur);
                if val.len() != cur[v].len() {
                    cur.insert(*v, val);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        levels.push(cur);
    }
    let top = levels.last().unwrap().clone();
    Ok(eval(e, depth, sigma, sys, &levels, &top))
}

fn eval(
    e: &SetExpr,
    k: usize,
    sigma: &Assignment,
    sys: &EquationSystem,
    levels: &[Level],
    cur: &Level,
) -> BTreeSet<Ground> {
    match e {
        SetExpr::Empty => BTreeSet::new(),
        SetExpr::Var(v) => {
            if sys.defines(*v) {
                cur.get(v).cloned().unwrap_or_default()
            } else {
                sigma[v]
                    .iter()
                    .filter(|t| t.depth() <= k)
                    .cloned()
                    .collect()
            }
        }
        SetExpr::Cons(f, args) => {
            if args.is_empty() {
                return BTreeSet::from([Ground {
                    functor: f.clone(),
                    args: Vec::new(),
                }]);
            }
            if k == 0 {
                return BTreeSet::new();
            }
            let below = &levels[k - 1];
            let mut tuples: Vec<Vec<Ground>> = vec![Vec::new()];
            for a in args {
                let vals = eval(a, k - 1, sigma, sys, levels, below);
                let mut next = Vec::with_capacity(tuples.len() * vals.len());
                for t in &tuples {
                    for v in &vals {
                        let mut t2 = t.clone();
                        t2.push(v.clone());
                        next.push(t2);
                    }
                }
                tuples = next;
                if tuples.is_empty() {
                    break;
                }
            }
            tuples
                .into_iter()
                .map(|args| Ground {
                    functor: f.clone(),
                    args,
                })
                .collect()
        }
        SetExpr::Inter(ops) => {
            let mut it = ops.iter();
            let mut acc = eval(it.next().unwrap(), k, sigma, sys, levels, cur);
            for o in it {
                if acc.is_empty() {
                    break;
                }
                let other = eval(o, k, sigma, sys, levels, cur);
                acc.retain(|t| other.contains(t));
            }
            acc
        }
        SetExpr::Union(ops) => {
            let mut acc = BTreeSet::new();
            for o in ops {
                acc.extend(eval(o, k, sigma, sys, levels, cur));
            }
            acc
        }
    }
}

/// Whether `t` belongs to the denotation of `e`, with free variables
/// interpreted by the membership predicate `sigma`.
pub fn member(
    t: &Ground,
    e: &SetExpr,
    sys: &EquationSystem,
    sigma: &dyn Fn(Var, &Ground) -> bool,
) -> bool {
    let mut subs = Vec::new();
    t.subterms(&mut subs);
    subs.sort();
    subs.dedup();
    let defined: Vec<Var> = sys
        .reachable(e.vars())
        .into_iter()
        .filter(|v| sys.defines(*v))
        .collect();
    let mut marks: HashSet<(Var, &Ground)> = HashSet::new();
    loop {
        let mut changed = false;
        for v in &defined {
            let rhs = sys.get(*v).unwrap();
            for s in &subs {
                if !marks.contains(&(*v, *s)) && holds(rhs, s, sys, sigma, &marks) {
                    marks.insert((*v, *s));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    holds(e, t, sys, sigma, &marks)
}

fn holds<'g>(
    e: &SetExpr,
    t: &'g Ground,
    sys: &EquationSystem,
    sigma: &dyn Fn(Var, &Ground) -> bool,
    marks: &HashSet<(Var, &'g Ground)>,
) -> bool {
    match e {
        SetExpr::Empty => false,
        SetExpr::Var(v) => {
            if sys.defines(*v) {
                marks.contains(&(*v, t))
            } else {
                sigma(*v, t)
            }
        }
        SetExpr::Cons(f, args) => {
            *f == t.functor
                && args
                    .iter()
                    .zip(&t.args)
                    .all(|(a, s)| holds(a, s, sys, sigma, marks))
        }
        SetExpr::Inter(ops) => ops.iter().all(|o| holds(o, t, sys, sigma, marks)),
        SetExpr::Union(ops) => ops.iter().any(|o| holds(o, t, sys, sigma, marks)),
    }
}

/// All ground terms of depth at most `depth` over `functors`.
pub fn herbrand_universe(functors: &[Functor], depth: usize) -> BTreeSet<Ground> {
    let mut level: BTreeSet<Ground> = functors
        .iter()
        .filter(|f| f.arity == 0)
        .map(|f| Ground {
            functor: f.clone(),
            args: Vec::new(),
        })
        .collect();
    for _ in 0..depth {
        let prev: Vec<Ground> = level.iter().cloned().collect();
        let mut next = level.clone();
        for f in functors.iter().filter(|f| f.arity > 0) {
            let mut tuples: Vec<Vec<Ground>> = vec![Vec::new()];
            for _ in 0..f.arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        prev.iter().map(move |p| {
                            let mut t2 = t.clone();
                            t2.push(p.clone());
                            t2
                        })
                    })
                    .collect();
            }
            next.extend(tuples.into_iter().map(|args| Ground {
                functor: f.clone(),
                args,
            }));
        }
        level = next;
    }
    level
}
