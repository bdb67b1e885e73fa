//! Set expressions over finite ground Herbrand terms and the rewriting
//! machinery that puts them into parameterized normal form.

mod dnf;
mod form;
pub mod meaning;
mod simp;
mod system;
mod toplevel;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use dnf::{dnf, dnf_conjuncts, Conjunct};
pub use form::{classify, classify_system, FormClass};
pub use meaning::{herbrand_universe, meaning, member, Assignment, Ground, MeaningError};
pub use simp::{simp, Memo, Origin, Provenance, SimpContext};
pub use system::EquationSystem;
pub use toplevel::{to_top_level_form, top_level_expr};

/// Set variable. Ordering is by allocation index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name of a list cell constructor.
pub const CONS: &str = ".";
/// Name of the empty list constant.
pub const NIL: &str = "[]";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Functor {
    pub name: Arc<str>,
    pub arity: usize,
}

impl Functor {
    pub fn new(name: &str, arity: usize) -> Self {
        Functor {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn constant(name: &str) -> Self {
        Functor::new(name, 0)
    }

    pub fn is_list_cons(&self) -> bool {
        &*self.name == CONS && self.arity == 2
    }

    pub fn is_nil(&self) -> bool {
        &*self.name == NIL && self.arity == 0
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A set expression.
///
/// Unions and intersections built through [`SetExpr::union`] and
/// [`SetExpr::inter`] are flattened, sorted by the derived total order
/// (`Empty < Var < Cons < Inter < Union`) and free of duplicates. `Empty`
/// never survives as an operand: it is absorbed by unions and annihilates
/// intersections.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetExpr {
    Empty,
    Var(Var),
    Cons(Functor, Vec<SetExpr>),
    Inter(Vec<SetExpr>),
    Union(Vec<SetExpr>),
}

impl SetExpr {
    pub fn var(v: Var) -> Self {
        SetExpr::Var(v)
    }

    pub fn constant(name: &str) -> Self {
        SetExpr::Cons(Functor::constant(name), Vec::new())
    }

    pub fn cons(functor: Functor, args: Vec<SetExpr>) -> Self {
        debug_assert_eq!(functor.arity, args.len());
        SetExpr::Cons(functor, args)
    }

    pub fn app(name: &str, args: Vec<SetExpr>) -> Self {
        let f = Functor::new(name, args.len());
        SetExpr::Cons(f, args)
    }

    pub fn nil() -> Self {
        SetExpr::constant(NIL)
    }

    pub fn list_cons(head: SetExpr, tail: SetExpr) -> Self {
        SetExpr::Cons(Functor::new(CONS, 2), vec![head, tail])
    }

    pub fn union<I: IntoIterator<Item = SetExpr>>(ops: I) -> Self {
        let mut flat = BTreeSet::new();
        for op in ops {
            match op {
                SetExpr::Empty => {}
                SetExpr::Union(inner) => flat.extend(inner),
                other => {
                    flat.insert(other);
                }
            }
        }
        match flat.len() {
            0 => SetExpr::Empty,
            1 => flat.into_iter().next().unwrap(),
            _ => SetExpr::Union(flat.into_iter().collect()),
        }
    }

    pub fn inter<I: IntoIterator<Item = SetExpr>>(ops: I) -> Self {
        let mut flat = BTreeSet::new();
        for op in ops {
            match op {
                SetExpr::Empty => return SetExpr::Empty,
                SetExpr::Inter(inner) => flat.extend(inner),
                other => {
                    flat.insert(other);
                }
            }
        }
        match flat.len() {
            // The empty intersection has no meaning in a finite universe
            // of set variables; callers never build one.
            0 => panic!("intersection of zero operands"),
            1 => flat.into_iter().next().unwrap(),
            _ => SetExpr::Inter(flat.into_iter().collect()),
        }
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self, SetExpr::Empty)
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            SetExpr::Var(v) => Some(*v),
            _ => None,
        }
    }

    /// Disjuncts of a union, or the expression itself.
    pub fn disjuncts(&self) -> &[SetExpr] {
        match self {
            SetExpr::Union(ops) => ops,
            SetExpr::Empty => &[],
            other => std::slice::from_ref(other),
        }
    }

    /// Operands of an intersection, or the expression itself.
    pub fn conjuncts(&self) -> &[SetExpr] {
        match self {
            SetExpr::Inter(ops) => ops,
            other => std::slice::from_ref(other),
        }
    }

    /// All variables, at any nesting depth.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            SetExpr::Empty => {}
            SetExpr::Var(v) => {
                out.insert(*v);
            }
            SetExpr::Cons(_, args) | SetExpr::Inter(args) | SetExpr::Union(args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// Variables occurring outside the scope of every constructor.
    pub fn top_level_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_top_level_vars(&mut out);
        out
    }

    fn collect_top_level_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            SetExpr::Var(v) => {
                out.insert(*v);
            }
            SetExpr::Inter(ops) | SetExpr::Union(ops) => {
                for o in ops {
                    o.collect_top_level_vars(out);
                }
            }
            SetExpr::Empty | SetExpr::Cons(..) => {}
        }
    }

    pub fn occurs_top_level(&self, x: Var) -> bool {
        match self {
            SetExpr::Var(v) => *v == x,
            SetExpr::Inter(ops) | SetExpr::Union(ops) => ops.iter().any(|o| o.occurs_top_level(x)),
            SetExpr::Empty | SetExpr::Cons(..) => false,
        }
    }

    /// Replaces top-level occurrences of `x` by `by`, rebuilding unions and
    /// intersections canonically.
    pub fn subst_top_level(&self, x: Var, by: &SetExpr) -> SetExpr {
        if !self.occurs_top_level(x) {
            return self.clone();
        }
        match self {
            SetExpr::Var(v) if *v == x => by.clone(),
            SetExpr::Inter(ops) => SetExpr::inter(ops.iter().map(|o| o.subst_top_level(x, by))),
            SetExpr::Union(ops) => SetExpr::union(ops.iter().map(|o| o.subst_top_level(x, by))),
            other => other.clone(),
        }
    }

    /// Renames every variable occurrence, nested or not.
    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> SetExpr {
        match self {
            SetExpr::Empty => SetExpr::Empty,
            SetExpr::Var(v) => SetExpr::Var(f(*v)),
            SetExpr::Cons(fun, args) => {
                SetExpr::Cons(fun.clone(), args.iter().map(|a| a.rename(f)).collect())
            }
            SetExpr::Inter(ops) => SetExpr::inter(ops.iter().map(|o| o.rename(f))),
            SetExpr::Union(ops) => SetExpr::union(ops.iter().map(|o| o.rename(f))),
        }
    }

    /// Replaces every variable occurrence (nested included) found in `map`.
    pub fn subst_all(&self, map: &HashMap<Var, SetExpr>) -> SetExpr {
        match self {
            SetExpr::Empty => SetExpr::Empty,
            SetExpr::Var(v) => map.get(v).cloned().unwrap_or(SetExpr::Var(*v)),
            SetExpr::Cons(fun, args) => {
                SetExpr::Cons(fun.clone(), args.iter().map(|a| a.subst_all(map)).collect())
            }
            SetExpr::Inter(ops) => SetExpr::inter(ops.iter().map(|o| o.subst_all(map))),
            SetExpr::Union(ops) => SetExpr::union(ops.iter().map(|o| o.subst_all(map))),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SetExpr::Empty | SetExpr::Var(_) => 1,
            SetExpr::Cons(_, args) | SetExpr::Inter(args) | SetExpr::Union(args) => {
                1 + args.iter().map(SetExpr::size).sum::<usize>()
            }
        }
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> ExprDisplay<'a> {
        ExprDisplay {
            expr: self,
            names: vars,
        }
    }
}

/// Source of variable names for display.
pub trait VarNames {
    fn var_name(&self, v: Var) -> String;
}

/// Allocator for set variables. Every variable has a unique display name.
#[derive(Clone, Debug, Default)]
pub struct VarTable {
    names: Vec<String>,
    taken: HashMap<String, u32>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a variable named `base`, or `base_k` if `base` is taken.
    pub fn fresh(&mut self, base: &str) -> Var {
        let name = if self.taken.contains_key(base) {
            let mut k = 1;
            loop {
                let cand = format!("{base}_{k}");
                if !self.taken.contains_key(&cand) {
                    break cand;
                }
                k += 1;
            }
        } else {
            base.to_string()
        };
        let v = Var(self.names.len() as u32);
        self.taken.insert(name.clone(), v.0);
        self.names.push(name);
        v
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.taken.get(name).map(|&i| Var(i))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

impl VarNames for VarTable {
    fn var_name(&self, v: Var) -> String {
        self.name(v).to_string()
    }
}

impl VarNames for HashMap<Var, String> {
    fn var_name(&self, v: Var) -> String {
        self.get(&v)
            .cloned()
            .unwrap_or_else(|| format!("_V{}", v.0))
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a SetExpr,
    names: &'a dyn VarNames,
}

impl<'a> ExprDisplay<'a> {
    pub fn with_names(expr: &'a SetExpr, names: &'a dyn VarNames) -> Self {
        ExprDisplay { expr, names }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.names, 0)
    }
}

// Precedence: 0 = union context, 1 = intersection context, 2 = atomic.
fn write_expr(
    f: &mut fmt::Formatter<'_>,
    e: &SetExpr,
    names: &dyn VarNames,
    ctx: u8,
) -> fmt::Result {
    match e {
        SetExpr::Empty => write!(f, "0"),
        SetExpr::Var(v) => write!(f, "{}", names.var_name(*v)),
        SetExpr::Cons(fun, args) => {
            if fun.is_list_cons() {
                write!(f, "cons(")?;
            } else if args.is_empty() {
                // `0` alone is the empty set.
                if fun.name.as_ref() == "0" {
                    return write!(f, "'0'");
                }
                return write!(f, "{}", quote_atom(&fun.name));
            } else {
                write!(f, "{}(", quote_atom(&fun.name))?;
            }
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write_expr(f, a, names, 0)?;
            }
            write!(f, ")")
        }
        SetExpr::Inter(ops) => {
            if ctx > 1 {
                write!(f, "(")?;
            }
            for (i, o) in ops.iter().enumerate() {
                if i > 0 {
                    write!(f, " /\\ ")?;
                }
                write_expr(f, o, names, 2)?;
            }
            if ctx > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        SetExpr::Union(ops) => {
            if ctx > 0 {
                write!(f, "(")?;
            }
            for (i, o) in ops.iter().enumerate() {
                if i > 0 {
                    write!(f, " \\/ ")?;
                }
                write_expr(f, o, names, 1)?;
            }
            if ctx > 0 {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

/// Quotes an atom name when it is not a plain lowercase identifier,
/// a number, or `[]`.
pub fn quote_atom(name: &str) -> String {
    let plain = name == NIL
        || (name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
        || (!name.is_empty() && name.chars().all(|c| c.is_ascii_digit()));
    if plain {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_flattens_sorts_and_absorbs() {
        let a = SetExpr::constant("a");
        let b = SetExpr::constant("b");
        let x = SetExpr::Var(Var(0));
        let u = SetExpr::union([
            b.clone(),
            SetExpr::union([a.clone(), x.clone()]),
            SetExpr::Empty,
            a.clone(),
        ]);
        assert_eq!(u, SetExpr::Union(vec![x, a, b]));
        assert_eq!(SetExpr::union([SetExpr::Empty]), SetExpr::Empty);
    }

    #[test]
    fn inter_annihilates_on_empty() {
        let x = SetExpr::Var(Var(0));
        assert_eq!(SetExpr::inter([x.clone(), SetExpr::Empty]), SetExpr::Empty);
        assert_eq!(SetExpr::inter([x.clone(), x.clone()]), x);
    }

    #[test]
    fn structural_order() {
        let v = SetExpr::Var(Var(9));
        let c = SetExpr::constant("a");
        let i = SetExpr::Inter(vec![SetExpr::Var(Var(0)), SetExpr::Var(Var(1))]);
        let u = SetExpr::Union(vec![SetExpr::Var(Var(0)), SetExpr::Var(Var(1))]);
        assert!(SetExpr::Empty < v && v < c && c < i && i < u);
        assert!(SetExpr::app("f", vec![v.clone()]) < SetExpr::app("g", vec![v.clone()]));
    }

    #[test]
    fn fresh_names_are_unique() {
        let mut t = VarTable::new();
        let a = t.fresh("X");
        let b = t.fresh("X");
        assert_ne!(t.name(a), t.name(b));
        assert_eq!(t.lookup("X"), Some(a));
    }

    #[test]
    fn top_level_substitution_skips_constructor_arguments() {
        let x = Var(0);
        let e = SetExpr::union([
            SetExpr::Var(x),
            SetExpr::list_cons(SetExpr::Var(Var(1)), SetExpr::Var(x)),
        ]);
        let r = e.subst_top_level(x, &SetExpr::nil());
        assert_eq!(
            r,
            SetExpr::union([
                SetExpr::nil(),
                SetExpr::list_cons(SetExpr::Var(Var(1)), SetExpr::Var(x))
            ])
        );
    }
}
