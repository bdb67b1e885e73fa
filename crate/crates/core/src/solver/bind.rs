use std::collections::{BTreeMap, BTreeSet};

use crate::setexpr::{EquationSystem, Provenance, SetExpr, Var, VarTable};

/// `{x1 = e, .., xn = e}` proposed for one conjunct `x1 /\ .. /\ xn /\ [e]`.
pub type CandidateSet = BTreeSet<(Var, SetExpr)>;

/// Conjunction over original equations of disjunctions of candidate sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BindFormula {
    pub clauses: Vec<BTreeSet<CandidateSet>>,
}

impl BindFormula {
    /// `(X = e | Y = e & Z = e) & ...`
    pub fn display(&self, vars: &VarTable) -> String {
        let clause = |c: &BTreeSet<CandidateSet>| {
            let alts: Vec<String> = c
                .iter()
                .map(|set| {
                    let eqs: Vec<String> = set
                        .iter()
                        .map(|(x, e)| format!("{} = {}", vars.name(*x), e.display(vars)))
                        .collect();
                    eqs.join(" & ")
                })
                .collect();
            format!("({})", alts.join(" | "))
        };
        self.clauses
            .iter()
            .map(clause)
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

#[derive(Clone, Debug, Default)]
pub struct BindOutcome {
    pub equations: Vec<(Var, SetExpr)>,
    pub formula: BindFormula,
    /// Set when the DNF exceeded the limit and only forced bindings were kept.
    pub overflow: bool,
}

/// How the bindings of one variable across the binding formula combine.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Synthesis {
    /// The union of every expression the variable is bound to.
    #[default]
    Union,
    /// Intersection within a disjunct, union across disjuncts.
    Intersect,
}

/// What BIND carries from one round to the next.
#[derive(Clone, Debug, Default)]
pub struct BindState {
    /// Free variables already bound.
    pub bound: BTreeSet<Var>,
    /// Variables never bound to a constructor expression.
    pub pinned: BTreeSet<Var>,
    /// Clause each variable was generated for. A variable is only bound from
    /// equations of its own clause.
    pub owner: BTreeMap<Var, usize>,
    /// Signature variables of the component. A variable reachable from
    /// them is only bound when every disjunct of the formula binds it.
    pub roots: BTreeSet<Var>,
    /// Fresh parameters shared by pure-variable conjuncts, keyed by the
    /// conjunct's variables so the same conjunct always gets the same one.
    pub shared: BTreeMap<BTreeSet<Var>, Var>,
}

impl BindState {
    fn shared_param(&mut self, key: BTreeSet<Var>, vars: &mut VarTable) -> Var {
        if let Some(t) = self.shared.get(&key) {
            return *t;
        }
        let t = vars.fresh("T");
        if key.iter().any(|x| self.pinned.contains(x)) {
            self.pinned.insert(t);
        }
        let owners: BTreeSet<Option<usize>> =
            key.iter().map(|x| self.owner.get(x).copied()).collect();
        if let [Some(c)] = owners.into_iter().collect::<Vec<_>>()[..] {
            self.owner.insert(t, c);
        }
        self.shared.insert(key, t);
        t
    }
}

/// Splits a leaf-linear conjunct into its free, not yet bound variables and
/// its constructor part.
fn conjunct_parts<'a>(
    d: &'a SetExpr,
    s: &EquationSystem,
    bound_free: &BTreeSet<Var>,
) -> Option<(BTreeSet<Var>, Option<&'a SetExpr>)> {
    let SetExpr::Inter(ops) = d else { return None };
    let mut free = BTreeSet::new();
    let mut cons = None;
    for o in ops {
        match o {
            SetExpr::Var(v) if !s.defines(*v) && !bound_free.contains(v) => {
                free.insert(*v);
            }
            SetExpr::Cons(..) => cons = Some(o),
            _ => {}
        }
    }
    Some((free, cons))
}

/// Candidate sets for every intersection of free variables with a
/// constructor expression in `rhs`. Only variables owned by `owner` are
/// proposed, and never pinned or already bound ones or ones reachable from
/// the constructor expression.
pub fn candidates(
    rhs: &SetExpr,
    s: &EquationSystem,
    st: &BindState,
    owner: Option<usize>,
) -> BTreeSet<CandidateSet> {
    let mut out = BTreeSet::new();
    for d in rhs.disjuncts() {
        let Some((free, Some(e))) = conjunct_parts(d, s, &st.bound) else {
            continue;
        };
        let mentioned = s.reachable(e.vars());
        let set: CandidateSet = free
            .into_iter()
            .filter(|x| {
                !st.pinned.contains(x)
                    && !mentioned.contains(x)
                    && st.owner.get(x).copied() == owner
            })
            .map(|x| (x, e.clone()))
            .collect();
        if !set.is_empty() {
            out.insert(set);
        }
    }
    out
}

/// Builds the binding formula over `originals` and synthesizes equations
/// for free variables. A variable bound in some DNF disjunct is bound to the
/// union of what the disjuncts bind it to, unless it is visible from the
/// roots and some disjunct leaves it alone.
/// Conjuncts made only of free variables anywhere in `s` have those
/// variables renamed to one shared parameter. Returns no equations when
/// there is nothing to bind.
pub fn bind(
    s: &EquationSystem,
    provenance: &Provenance,
    originals: &[Var],
    st: &mut BindState,
    vars: &mut VarTable,
    dnf_limit: usize,
    synthesis: Synthesis,
) -> BindOutcome {
    let sure = surely_nonempty(s);
    let mut formula = BindFormula::default();
    for &q in originals {
        if s.get(q).is_none() || sure.contains(&q) {
            continue;
        }
        let owner = st.owner.get(&q).copied();
        let mut alts = BTreeSet::new();
        for d in provenance.descendants(q) {
            if let Some(rhs) = s.get(d) {
                alts.extend(candidates(rhs, s, st, owner));
            }
        }
        if !alts.is_empty() && !formula.clauses.contains(&alts) {
            formula.clauses.push(alts);
        }
    }

    let (disjuncts, overflow) = match formula_dnf(&formula, dnf_limit) {
        Some(d) => (d, false),
        None => {
            log::warn!(
                "binding formula exceeds {dnf_limit} disjuncts; keeping only forced single-variable bindings"
            );
            (vec![forced_bindings(&formula)], true)
        }
    };
    let mut per_var: BTreeMap<Var, (usize, Vec<SetExpr>)> = BTreeMap::new();
    if !formula.clauses.is_empty() {
        for d in &disjuncts {
            let mut here: BTreeMap<Var, Vec<SetExpr>> = BTreeMap::new();
            for (x, e) in d {
                here.entry(*x).or_default().push(e.clone());
            }
            for (x, es) in here {
                let entry = per_var.entry(x).or_default();
                entry.0 += 1;
                match synthesis {
                    Synthesis::Union => entry.1.extend(es),
                    Synthesis::Intersect => entry.1.push(SetExpr::inter(es)),
                }
            }
        }
    }
    let visible = s.reachable(st.roots.iter().copied());
    let mut equations: BTreeMap<Var, SetExpr> = per_var
        .into_iter()
        .filter(|(x, (n, _))| *n == disjuncts.len() || !visible.contains(x))
        .map(|(x, (_, alts))| (x, SetExpr::union(alts)))
        .collect();

    for (_, rhs) in s.iter() {
        for d in rhs.disjuncts() {
            let Some((free, None)) = conjunct_parts(d, s, &st.bound) else {
                continue;
            };
            let free: BTreeSet<Var> = free
                .into_iter()
                .filter(|x| !equations.contains_key(x))
                .collect();
            if free.len() < 2 {
                continue;
            }
            let t = st.shared_param(free.clone(), vars);
            for x in free {
                equations.insert(x, SetExpr::Var(t));
            }
        }
    }

    let equations: Vec<(Var, SetExpr)> = equations.into_iter().collect();
    st.bound.extend(equations.iter().map(|(x, _)| *x));
    BindOutcome {
        equations,
        formula,
        overflow,
    }
}

/// Variables whose equation has a disjunct that needs no binding: the
/// greatest set where a variable counts if its rhs has a disjunct that is a
/// free variable, or a constructor over counted or free variables.
/// Intersections never count.
fn surely_nonempty(s: &EquationSystem) -> BTreeSet<Var> {
    fn sure(e: &SetExpr, s: &EquationSystem, known: &BTreeSet<Var>) -> bool {
        match e {
            SetExpr::Empty | SetExpr::Inter(_) => false,
            SetExpr::Var(v) => !s.defines(*v) || known.contains(v),
            SetExpr::Cons(_, args) => args.iter().all(|a| sure(a, s, known)),
            SetExpr::Union(ds) => ds.iter().any(|d| sure(d, s, known)),
        }
    }
    let mut known: BTreeSet<Var> = s.lhs().collect();
    loop {
        let drop: Vec<Var> = known
            .iter()
            .copied()
            .filter(|x| !sure(s.get(*x).unwrap(), s, &known))
            .collect();
        if drop.is_empty() {
            return known;
        }
        for x in drop {
            known.remove(&x);
        }
    }
}

/// DNF of the formula as sets of bindings, with absorbed (superset)
/// disjuncts removed. `None` if it grows past `limit`.
fn formula_dnf(f: &BindFormula, limit: usize) -> Option<Vec<BTreeSet<(Var, SetExpr)>>> {
    let mut acc: Vec<BTreeSet<(Var, SetExpr)>> = vec![BTreeSet::new()];
    for clause in &f.clauses {
        let mut next = BTreeSet::new();
        for partial in &acc {
            for cand in clause {
                let mut d = partial.clone();
                d.extend(cand.iter().cloned());
                next.insert(d);
                if next.len() > limit {
                    return None;
                }
            }
        }
        acc = absorb(next.into_iter().collect());
    }
    Some(acc)
}

fn absorb(ds: Vec<BTreeSet<(Var, SetExpr)>>) -> Vec<BTreeSet<(Var, SetExpr)>> {
    ds.iter()
        .filter(|d| !ds.iter().any(|o| o.len() < d.len() && o.is_subset(d)))
        .cloned()
        .collect()
}

fn forced_bindings(f: &BindFormula) -> BTreeSet<(Var, SetExpr)> {
    f.clauses
        .iter()
        .filter(|c| c.len() == 1)
        .filter_map(|c| c.iter().next())
        .filter(|cand| cand.len() == 1)
        .flat_map(|cand| cand.iter().cloned())
        .collect()
}
