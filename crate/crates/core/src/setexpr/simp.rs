use std::collections::{BTreeMap, BTreeSet};

use super::dnf::{conjuncts_to_expr, dnf_conjuncts, Conjunct};
use super::{EquationSystem, Functor, SetExpr, Var, VarTable};
use crate::solver::emptiness::NonEmpty;

/// Table of intersection variables introduced by constructor distribution.
///
/// Keys are sets of base variables: a memo variable standing for `a /\ b`
/// contributes its own key when intersected again, so `(a /\ b) /\ c` and
/// `a /\ (b /\ c)` hit the same entry.
#[derive(Clone, Debug, Default)]
pub struct Memo {
    by_key: BTreeMap<BTreeSet<Var>, Var>,
    base: BTreeMap<Var, BTreeSet<Var>>,
}

impl Memo {
    pub fn new() -> Self {
        Self::default()
    }

    fn base_of(&self, v: Var) -> BTreeSet<Var> {
        self.base
            .get(&v)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([v]))
    }

    /// Canonical key of `a /\ b`.
    pub fn key(&self, a: Var, b: Var) -> BTreeSet<Var> {
        let mut k = self.base_of(a);
        k.extend(self.base_of(b));
        k
    }

    pub fn get(&self, key: &BTreeSet<Var>) -> Option<Var> {
        self.by_key.get(key).copied()
    }

    pub fn is_memo_var(&self, v: Var) -> bool {
        self.base.contains_key(&v)
    }

    fn insert(&mut self, key: BTreeSet<Var>, v: Var) {
        debug_assert!(!self.by_key.contains_key(&key));
        self.base.insert(v, key.clone());
        self.by_key.insert(key, v);
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BTreeSet<Var>, Var)> {
        self.by_key.iter().map(|(k, v)| (k, *v))
    }
}

/// Where an equation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Generated from the program (or copied from a lower-level solution).
    Original,
    /// Added by constructor distribution while simplifying `parent`.
    SimpChild { parent: Var },
    /// Synthesized when binding free variables.
    Bound,
}

/// Origin of every variable that has (or had) an equation. The
/// `SimpChild` links form the "descends from" relation used when
/// binding free variables.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    origin: BTreeMap<Var, Origin>,
    children: BTreeMap<Var, Vec<Var>>,
}

impl Provenance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, v: Var, origin: Origin) {
        if let Origin::SimpChild { parent } = origin {
            self.children.entry(parent).or_default().push(v);
        }
        self.origin.insert(v, origin);
    }

    pub fn origin(&self, v: Var) -> Option<Origin> {
        self.origin.get(&v).copied()
    }

    /// `q` together with everything that descends from it.
    pub fn descendants(&self, q: Var) -> BTreeSet<Var> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![q];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                if let Some(cs) = self.children.get(&v) {
                    stack.extend(cs.iter().copied());
                }
            }
        }
        seen
    }

    pub fn originals(&self) -> impl Iterator<Item = Var> + '_ {
        self.origin
            .iter()
            .filter(|(_, o)| matches!(o, Origin::Original))
            .map(|(v, _)| *v)
    }
}

/// Mutable state shared by successive simplifications.
pub struct SimpContext<'a> {
    pub vars: &'a mut VarTable,
    pub memo: &'a mut Memo,
    pub provenance: &'a mut Provenance,
}

/// Simplifies `lhs = rhs` into parameterized form.
///
/// Applies intersection/union simplification and absorption, subsumption
/// of a disjunct by a sub-conjunction, constructor clash, distribution of
/// intersection over equal constructors, and emptiness of constructor
/// applications with an argument that `solved` proves empty. Returns the
/// new rhs and the equations introduced by distribution.
pub fn simp(
    lhs: Var,
    rhs: &SetExpr,
    ctx: &mut SimpContext<'_>,
    solved: &EquationSystem,
) -> (SetExpr, Vec<(Var, SetExpr)>) {
    let mut new_eqs = Vec::new();
    let mut emptiness: Option<NonEmpty> = None;
    let mut out: Vec<Conjunct> = Vec::new();

    'conj: for conj in dnf_conjuncts(rhs) {
        let mut vars = BTreeSet::new();
        let mut conses: Vec<(Functor, Vec<SetExpr>)> = Vec::new();
        for leaf in conj {
            match leaf {
                SetExpr::Var(v) => {
                    vars.insert(v);
                }
                SetExpr::Cons(f, args) => conses.push((f, args)),
                SetExpr::Empty => continue 'conj,
                SetExpr::Inter(_) | SetExpr::Union(_) => unreachable!("dnf leaves are atomic"),
            }
        }

        let mut merged: Option<(Functor, Vec<SetExpr>)> = None;
        for (f, args) in conses {
            merged = Some(match merged {
                None => (f, args),
                Some((g, prev)) => {
                    if f != g {
                        continue 'conj;
                    }
                    let args = prev
                        .into_iter()
                        .zip(args)
                        .map(|(a, b)| intersect_args(lhs, a, b, ctx, &mut new_eqs))
                        .collect();
                    (g, args)
                }
            });
        }

        let mut leaves: Conjunct = vars.into_iter().map(SetExpr::Var).collect();
        if let Some((f, args)) = merged {
            let checkable: Vec<Var> = args
                .iter()
                .filter_map(SetExpr::as_var)
                .filter(|v| solved.defines(*v))
                .collect();
            if !checkable.is_empty() {
                let ne = emptiness.get_or_insert_with(|| NonEmpty::compute(solved));
                if checkable.iter().any(|v| ne.is_empty(*v)) {
                    continue 'conj;
                }
            }
            if args.iter().any(SetExpr::is_empty_set) {
                continue 'conj;
            }
            leaves.insert(SetExpr::Cons(f, args));
        }
        out.push(leaves);
    }

    out.sort();
    out.dedup();
    // A disjunct that contains another disjunct's leaves is subsumed by it.
    let subsumed: Vec<bool> = out
        .iter()
        .map(|c| out.iter().any(|d| d.len() < c.len() && d.is_subset(c)))
        .collect();
    let kept = out
        .into_iter()
        .zip(subsumed)
        .filter(|(_, s)| !s)
        .map(|(c, _)| c);
    (conjuncts_to_expr(kept), new_eqs)
}

fn intersect_args(
    lhs: Var,
    a: SetExpr,
    b: SetExpr,
    ctx: &mut SimpContext<'_>,
    new_eqs: &mut Vec<(Var, SetExpr)>,
) -> SetExpr {
    if a == b {
        return a;
    }
    match (&a, &b) {
        (SetExpr::Var(x), SetExpr::Var(y)) => {
            let key = ctx.memo.key(*x, *y);
            // x /\ y where y already stands for x /\ ... is just y.
            if key == ctx.memo.base_of(*x) {
                return a;
            }
            if key == ctx.memo.base_of(*y) {
                return b;
            }
            if let Some(m) = ctx.memo.get(&key) {
                return SetExpr::Var(m);
            }
            let m = ctx.vars.fresh("I");
            ctx.memo.insert(key, m);
            ctx.provenance.record(m, Origin::SimpChild { parent: lhs });
            new_eqs.push((m, SetExpr::inter([a, b])));
            SetExpr::Var(m)
        }
        _ => {
            let m = ctx.vars.fresh("I");
            ctx.provenance.record(m, Origin::SimpChild { parent: lhs });
            new_eqs.push((m, SetExpr::inter([a, b])));
            SetExpr::Var(m)
        }
    }
}
