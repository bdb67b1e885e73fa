use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::setexpr::{quote_atom, CONS, NIL};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Compound(name.to_string(), Vec::new())
    }

    pub fn nil() -> Self {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Self {
        Term::Compound(CONS.to_string(), vec![head, tail])
    }

    pub fn list(items: Vec<Term>, tail: Term) -> Self {
        items.into_iter().rev().fold(tail, |t, h| Term::cons(h, t))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.vars_into(out);
                }
            }
        }
    }

    pub fn rename(&self, f: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Compound(n, args) => {
                Term::Compound(n.clone(), args.iter().map(|a| a.rename(f)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Compound(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Compound(n, args) if n == CONS && args.len() == 2 => {
                write!(f, "[{}", args[0])?;
                let mut tail = &args[1];
                loop {
                    match tail {
                        Term::Compound(n, a) if n == CONS && a.len() == 2 => {
                            write!(f, ",{}", a[0])?;
                            tail = &a[1];
                        }
                        Term::Compound(n, a) if n == NIL && a.is_empty() => return write!(f, "]"),
                        other => return write!(f, "|{other}]"),
                    }
                }
            }
            Term::Compound(n, args) => {
                write!(f, "{}", quote_atom(n))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
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
    }
}

/// Predicate symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pred {
    pub name: String,
    pub arity: usize,
}

impl Pred {
    pub fn new(name: &str, arity: usize) -> Self {
        Pred {
            name: name.to_string(),
            arity,
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: pred.to_string(),
            args,
        }
    }

    pub fn key(&self) -> Pred {
        Pred::new(&self.pred, self.args.len())
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        for a in &self.args {
            a.vars_into(out);
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            Term::Compound(self.pred.clone(), self.args.clone())
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
    /// `Y = t` pairs introduced when ground head arguments are replaced by
    /// fresh variables. They behave as extra body equations.
    pub head_bindings: Vec<(String, Term)>,
    /// Source line of the clause head, 1-based. Zero for synthesized clauses.
    pub line: usize,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head,
            body: Vec::new(),
            head_bindings: Vec::new(),
            line: 0,
        }
    }

    pub fn rule(head: Atom, body: Vec<Atom>) -> Self {
        Clause {
            head,
            body,
            head_bindings: Vec::new(),
            line: 0,
        }
    }

    /// Variables in order of first occurrence: head, body, then bindings.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.head.vars_into(&mut out);
        for a in &self.body {
            a.vars_into(&mut out);
        }
        for (y, t) in &self.head_bindings {
            if !out.contains(y) {
                out.push(y.clone());
            }
            t.vars_into(&mut out);
        }
        out
    }

    pub fn head_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.head.vars_into(&mut out);
        out
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub clauses: Vec<Clause>,
    /// Call patterns declared with `:- entry Atom.`
    pub entries: Vec<Atom>,
}

impl Program {
    /// Predicates defined by at least one clause.
    pub fn predicates(&self) -> BTreeSet<Pred> {
        self.clauses.iter().map(|c| c.head.key()).collect()
    }

    /// Clause indices per predicate, in source order.
    pub fn clauses_of(&self) -> BTreeMap<Pred, Vec<usize>> {
        let mut out: BTreeMap<Pred, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.clauses.iter().enumerate() {
            out.entry(c.head.key()).or_default().push(i);
        }
        out
    }

    /// Body predicates with no defining clause, in first-use order.
    pub fn unknown_predicates(&self) -> Vec<Pred> {
        let defined = self.predicates();
        let mut out = Vec::new();
        for c in &self.clauses {
            for a in &c.body {
                let k = a.key();
                if !defined.contains(&k) && !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, ":- entry {e}.")?;
        }
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
