use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{ExprDisplay, SetExpr, Var, VarNames};

/// A standard set equation system: at most one equation per variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquationSystem {
    equations: BTreeMap<Var, SetExpr>,
}

impl EquationSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lhs: Var, rhs: SetExpr) -> Option<SetExpr> {
        self.equations.insert(lhs, rhs)
    }

    pub fn get(&self, lhs: Var) -> Option<&SetExpr> {
        self.equations.get(&lhs)
    }

    pub fn get_mut(&mut self, lhs: Var) -> Option<&mut SetExpr> {
        self.equations.get_mut(&lhs)
    }

    pub fn remove(&mut self, lhs: Var) -> Option<SetExpr> {
        self.equations.remove(&lhs)
    }

    pub fn defines(&self, v: Var) -> bool {
        self.equations.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &SetExpr)> {
        self.equations.iter().map(|(v, e)| (*v, e))
    }

    pub fn lhs(&self) -> impl Iterator<Item = Var> + '_ {
        self.equations.keys().copied()
    }

    /// Variables occurring in some rhs but defined by no equation.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut all = BTreeSet::new();
        for e in self.equations.values() {
            e.collect_vars(&mut all);
        }
        all.retain(|v| !self.equations.contains_key(v));
        all
    }

    pub fn is_free(&self, v: Var) -> bool {
        !self.equations.contains_key(&v)
    }

    /// Replaces every top-level occurrence of `x` by `by` in all rhs.
    pub fn subst_top_level(&mut self, x: Var, by: &SetExpr) {
        for rhs in self.equations.values_mut() {
            if rhs.occurs_top_level(x) {
                *rhs = rhs.subst_top_level(x, by);
            }
        }
    }

    /// Variables reachable from `roots` through rhs occurrences, roots
    /// included.
    pub fn reachable(&self, roots: impl IntoIterator<Item = Var>) -> BTreeSet<Var> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Var> = roots.into_iter().collect();
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            if let Some(e) = self.equations.get(&v) {
                stack.extend(e.vars());
            }
        }
        seen
    }

    /// Keeps only the equations whose lhs is in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Var>) -> EquationSystem {
        EquationSystem {
            equations: self
                .equations
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, e)| (*v, e.clone()))
                .collect(),
        }
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = (Var, SetExpr)>) {
        self.equations.extend(other);
    }

    pub fn display<'a>(&'a self, names: &'a dyn VarNames) -> SystemDisplay<'a> {
        SystemDisplay { sys: self, names }
    }
}

impl FromIterator<(Var, SetExpr)> for EquationSystem {
    fn from_iter<I: IntoIterator<Item = (Var, SetExpr)>>(iter: I) -> Self {
        EquationSystem {
            equations: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for EquationSystem {
    type Item = (Var, SetExpr);
    type IntoIter = std::collections::btree_map::IntoIter<Var, SetExpr>;

    fn into_iter(self) -> Self::IntoIter {
        self.equations.into_iter()
    }
}

/// Renders one `X = rhs.` line per equation.
pub struct SystemDisplay<'a> {
    sys: &'a EquationSystem,
    names: &'a dyn VarNames,
}

impl fmt::Display for SystemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, e) in self.sys.iter() {
            writeln!(
                f,
                "{} = {}.",
                self.names.var_name(v),
                ExprDisplay::with_names(e, self.names)
            )?;
        }
        Ok(())
    }
}
