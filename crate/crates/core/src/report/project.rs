use std::collections::{BTreeMap, BTreeSet};

use crate::setexpr::{dnf, EquationSystem, SetExpr, Var, VarTable};
use crate::solver::case_reduce;

/// A solved system cut down to what the roots need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub roots: Vec<Var>,
    pub system: EquationSystem,
    /// Free variables of the input renamed to a root in the output.
    pub renamed: BTreeMap<Var, Var>,
}

const MAX_ROUNDS: usize = 64;

/// Projects a solved system onto `roots`: chases aliases, factors
/// constructor alternatives that differ in one argument, merges variables
/// with identical definitions and drops unreachable equations.
pub fn project(s: &EquationSystem, roots: &[Var], vars: &mut VarTable) -> Projection {
    let mut p = Projector {
        sys: s.restrict(&s.reachable(roots.iter().copied())),
        roots: roots.to_vec(),
        renamed: BTreeMap::new(),
        factored: BTreeMap::new(),
        ever_defined: s.lhs().collect(),
    };
    for _ in 0..MAX_ROUNDS {
        let before = p.sys.clone();
        p.chase_aliases();
        p.unfold();
        p.factor(vars);
        p.unfold();
        p.merge_bisimilar();
        p.sys = p.sys.restrict(&p.sys.reachable(p.roots.iter().copied()));
        if p.sys == before {
            break;
        }
    }
    Projection {
        roots: p.roots,
        system: p.sys,
        renamed: p.renamed,
    }
}

struct Projector {
    sys: EquationSystem,
    roots: Vec<Var>,
    renamed: BTreeMap<Var, Var>,
    factored: BTreeMap<BTreeSet<Var>, Var>,
    ever_defined: BTreeSet<Var>,
}

impl Projector {
    fn is_root(&self, v: Var) -> bool {
        self.roots.contains(&v)
    }

    fn rename_everywhere(&mut self, from: Var, to: Var) {
        let f = |v: Var| if v == from { to } else { v };
        self.sys = self.sys.iter().map(|(x, e)| (x, e.rename(&f))).collect();
        for v in self.renamed.values_mut() {
            *v = f(*v);
        }
        for v in self.factored.values_mut() {
            *v = f(*v);
        }
    }

    fn next_alias(&self) -> Option<(Var, Var)> {
        self.sys.iter().find_map(|(x, e)| {
            let y = e.as_var()?;
            let chased = !self.is_root(x) || self.sys.defines(y) || x == y || !self.is_root(y);
            chased.then_some((x, y))
        })
    }

    fn chase_aliases(&mut self) {
        while let Some((x, y)) = self.next_alias() {
            if x == y {
                self.sys.insert(x, SetExpr::Empty);
            } else if !self.is_root(x) {
                self.sys.remove(x);
                self.rename_everywhere(x, y);
            } else if let Some(e) = self.sys.get(y).cloned() {
                self.sys.insert(x, e);
            } else {
                self.sys.remove(x);
                self.rename_everywhere(y, x);
                self.renamed.insert(y, x);
            }
        }
    }

    /// Substitutes definitions for defined variables occurring at top
    /// level, resolving any recurrence this creates.
    fn unfold(&mut self) {
        for _ in 0..10_000 {
            let target = self.sys.iter().find_map(|(x, e)| {
                e.top_level_vars()
                    .into_iter()
                    .find(|v| *v != x && self.sys.defines(*v))
                    .map(|v| (x, v))
            });
            let Some((x, v)) = target else { break };
            let by = self.sys.get(v).cloned().expect("defined");
            let e = self.sys.get(x).expect("defined").subst_top_level(v, &by);
            let e = dnf(&e);
            let e = case_reduce(x, &e).map(|(e, _)| e).unwrap_or(e);
            self.sys.insert(x, e);
        }
    }

    fn union_var(&mut self, args: &[SetExpr], vars: &mut VarTable) -> Var {
        let mut key = BTreeSet::new();
        for a in args {
            let v = a.as_var().expect("top-level argument");
            let live = |k: &BTreeSet<Var>| {
                k.iter()
                    .all(|u| self.sys.defines(*u) || !self.ever_defined.contains(u))
            };
            match self.factored.iter().find(|(k, w)| **w == v && live(k)) {
                Some((k, _)) => key.extend(k.iter().copied()),
                None => {
                    key.insert(v);
                }
            }
        }
        if key.len() == 1 {
            return *key.iter().next().expect("one");
        }
        if let Some(w) = self.factored.get(&key) {
            if self.sys.defines(*w) || self.is_root(*w) {
                return *w;
            }
        }
        let w = vars.fresh("T");
        self.ever_defined.insert(w);
        self.sys
            .insert(w, SetExpr::union(key.iter().map(|v| SetExpr::Var(*v))));
        self.factored.insert(key, w);
        w
    }

    fn factor(&mut self, vars: &mut VarTable) {
        let lhs: Vec<Var> = self.sys.lhs().collect();
        for x in lhs {
            while let Some(e) = self.sys.get(x).cloned() {
                let ds = e.disjuncts().to_vec();
                let Some((i, j, pos)) = find_factor_pair(&ds) else {
                    break;
                };
                let (SetExpr::Cons(f, a), SetExpr::Cons(_, b)) = (&ds[i], &ds[j]) else {
                    unreachable!()
                };
                let w = self.union_var(&[a[pos].clone(), b[pos].clone()], vars);
                let mut args = a.clone();
                args[pos] = SetExpr::Var(w);
                let merged = SetExpr::Cons(f.clone(), args);
                let rest = ds
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, d)| d.clone());
                self.sys.insert(x, SetExpr::union(rest.chain([merged])));
            }
        }
    }

    fn merge_bisimilar(&mut self) {
        let defined: Vec<Var> = self.sys.lhs().collect();
        let mut block: BTreeMap<Var, usize> = defined.iter().map(|v| (*v, 0)).collect();
        loop {
            let rep_of_block: BTreeMap<usize, Var> = {
                let mut m = BTreeMap::new();
                for v in &defined {
                    m.entry(block[v]).or_insert(*v);
                }
                m
            };
            let f = |v: Var| block.get(&v).map_or(v, |b| rep_of_block[b]);
            let mut keys: BTreeMap<(usize, SetExpr), usize> = BTreeMap::new();
            let mut next = BTreeMap::new();
            for v in &defined {
                let k = (block[v], self.sys.get(*v).expect("defined").rename(&f));
                let n = keys.len();
                next.insert(*v, *keys.entry(k).or_insert(n));
            }
            let stable = keys.len() == rep_of_block.len();
            block = next;
            if stable {
                break;
            }
        }

        let mut members: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
        for v in &defined {
            members.entry(block[v]).or_default().push(*v);
        }
        let rep: BTreeMap<usize, Var> = members
            .iter()
            .map(|(b, vs)| {
                let r = self
                    .roots
                    .iter()
                    .copied()
                    .find(|r| block.get(r) == Some(b))
                    .unwrap_or(vs[0]);
                (*b, r)
            })
            .collect();
        let mut out = EquationSystem::new();
        for v in &defined {
            let b = block[v];
            if !self.is_root(*v) && rep[&b] != *v {
                continue;
            }
            let own = *v;
            let g = |u: Var| match block.get(&u) {
                Some(ub) if *ub == b => own,
                Some(ub) => rep[ub],
                None => u,
            };
            out.insert(*v, self.sys.get(*v).expect("defined").rename(&g));
        }
        self.sys = out;
    }
}

/// Two constructor disjuncts with the same functor that differ in exactly
/// one argument position.
fn find_factor_pair(ds: &[SetExpr]) -> Option<(usize, usize, usize)> {
    for (i, di) in ds.iter().enumerate() {
        let SetExpr::Cons(f, a) = di else { continue };
        for (j, dj) in ds.iter().enumerate().skip(i + 1) {
            let SetExpr::Cons(g, b) = dj else { continue };
            if f != g
                || a.iter().any(|x| x.as_var().is_none())
                || b.iter().any(|x| x.as_var().is_none())
            {
                continue;
            }
            let diff: Vec<usize> = (0..a.len()).filter(|k| a[*k] != b[*k]).collect();
            if diff.len() == 1 {
                return Some((i, j, diff[0]));
            }
        }
    }
    None
}
