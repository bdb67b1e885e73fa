//! `:- type` rendering of projected systems and a reader for it.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::setexpr::{quote_atom, EquationSystem, Functor, SetExpr, Var, VarTable};

const PARAM_LETTERS: [&str; 3] = ["X", "Y", "Z"];

/// Display names for a projected system: roots keep their own names,
/// free variables become `X, Y, Z, X1, ..` and other defined variables
/// `T1, T2, ..`, numbered in order of first appearance from the roots.
pub fn display_names(sys: &EquationSystem, roots: &[Var], vars: &VarTable) -> HashMap<Var, String> {
    let mut names: HashMap<Var, String> = roots
        .iter()
        .map(|r| (*r, vars.name(*r).to_string()))
        .collect();
    let mut taken: BTreeSet<String> = names.values().cloned().collect();
    let mut params = 0usize;
    let mut internals = 0usize;
    for v in appearance_order(sys, roots) {
        if names.contains_key(&v) {
            continue;
        }
        let name = loop {
            let cand = if sys.defines(v) {
                internals += 1;
                format!("T{internals}")
            } else {
                let letter = PARAM_LETTERS[params % 3];
                let round = params / 3;
                params += 1;
                if round == 0 {
                    letter.to_string()
                } else {
                    format!("{letter}{round}")
                }
            };
            if !taken.contains(&cand) {
                break cand;
            }
        };
        taken.insert(name.clone());
        names.insert(v, name);
    }
    names
}

/// Roots first, then every variable reachable from them, depth first in
/// rhs order.
pub fn appearance_order(sys: &EquationSystem, roots: &[Var]) -> Vec<Var> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in roots {
        if seen.insert(*r) {
            out.push(*r);
        }
    }
    let mut i = 0;
    while i < out.len() {
        if let Some(e) = sys.get(out[i]) {
            let mut in_order = Vec::new();
            vars_in_order(e, &mut in_order);
            for v in in_order {
                if seen.insert(v) {
                    out.push(v);
                }
            }
        }
        i += 1;
    }
    out
}

fn vars_in_order(e: &SetExpr, out: &mut Vec<Var>) {
    match e {
        SetExpr::Empty => {}
        SetExpr::Var(v) => out.push(*v),
        SetExpr::Cons(_, args) | SetExpr::Inter(args) | SetExpr::Union(args) => {
            for a in args {
                vars_in_order(a, out);
            }
        }
    }
}

fn write_item(out: &mut String, e: &SetExpr, names: &HashMap<Var, String>) {
    match e {
        SetExpr::Empty => out.push('0'),
        SetExpr::Var(v) => out.push_str(&names[v]),
        SetExpr::Cons(f, args) if f.is_list_cons() => {
            out.push('[');
            write_item(out, &args[0], names);
            out.push('|');
            write_item(out, &args[1], names);
            out.push(']');
        }
        SetExpr::Cons(f, args) if args.is_empty() => {
            if f.name.as_ref() == "0" {
                out.push_str("'0'");
            } else {
                out.push_str(&quote_atom(&f.name));
            }
        }
        SetExpr::Cons(f, args) => {
            out.push_str(&quote_atom(&f.name));
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_item(out, a, names);
            }
            out.push(')');
        }
        SetExpr::Inter(ops) => {
            out.push('(');
            write_conjunct(out, ops, names);
            out.push(')');
        }
        SetExpr::Union(ops) => {
            out.push('(');
            write_alternatives(out, ops, names);
            out.push(')');
        }
    }
}

fn write_conjunct(out: &mut String, ops: &[SetExpr], names: &HashMap<Var, String>) {
    for (i, o) in ops.iter().enumerate() {
        if i > 0 {
            out.push_str(" /\\ ");
        }
        write_item(out, o, names);
    }
}

fn rank(e: &SetExpr) -> u8 {
    match e {
        SetExpr::Var(_) => 0,
        SetExpr::Cons(_, args) if args.is_empty() => 1,
        SetExpr::Cons(..) => 2,
        _ => 3,
    }
}

/// Alternatives in display order: variables, constants, then the rest.
pub fn ordered_alternatives(e: &SetExpr) -> Vec<&SetExpr> {
    let mut ops: Vec<&SetExpr> = e.disjuncts().iter().collect();
    ops.sort_by_key(|e| rank(e));
    ops
}

fn write_alternatives(out: &mut String, ops: &[SetExpr], names: &HashMap<Var, String>) {
    let mut ops: Vec<&SetExpr> = ops.iter().collect();
    ops.sort_by_key(|e| rank(e));
    for (i, o) in ops.into_iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        write_conjunct(out, o.conjuncts(), names);
    }
}

/// One alternative of a type, as printed in `:- type` lines.
pub fn render_alternative(e: &SetExpr, names: &HashMap<Var, String>) -> String {
    let mut s = String::new();
    write_conjunct(&mut s, e.conjuncts(), names);
    s
}

/// Rhs of a `:- type` line: `0` when empty, nothing when free.
pub fn render_rhs(e: Option<&SetExpr>, names: &HashMap<Var, String>) -> String {
    match e {
        None => String::new(),
        Some(SetExpr::Empty) => "0".to_string(),
        Some(e) => {
            let mut s = String::new();
            write_alternatives(&mut s, e.disjuncts(), names);
            s
        }
    }
}

/// `:- type` lines for every root and every defined variable reachable
/// from the roots.
pub fn prettify(sys: &EquationSystem, roots: &[Var], names: &HashMap<Var, String>) -> String {
    let mut out = String::new();
    for v in appearance_order(sys, roots) {
        if !roots.contains(&v) && !sys.defines(v) {
            continue;
        }
        let rhs = render_rhs(sys.get(v), names);
        if rhs.is_empty() {
            let _ = writeln!(out, ":- type {} -> .", names[&v]);
        } else {
            let _ = writeln!(out, ":- type {} -> {}.", names[&v], rhs);
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("type syntax, line {line}: {message}")]
pub struct TypeSyntaxError {
    pub line: usize,
    pub message: String,
}

/// Result of reading `:- type` lines back.
#[derive(Clone, Debug, Default)]
pub struct ParsedTypes {
    pub system: EquationSystem,
    pub vars: VarTable,
    /// Declared symbols in order; symbols declared with an empty rhs are
    /// free.
    pub declared: Vec<Var>,
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] as char).is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(tok.as_bytes()) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), TypeSyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn err(&self, message: String) -> TypeSyntaxError {
        TypeSyntaxError {
            line: self.line,
            message,
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len()
            && ((self.s[self.i] as char).is_alphanumeric() || self.s[self.i] == b'_')
        {
            self.i += 1;
        }
        (self.i > start).then(|| String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn quoted(&mut self) -> Result<String, TypeSyntaxError> {
        self.expect("'")?;
        let mut out = String::new();
        loop {
            match self.s.get(self.i) {
                None => return Err(self.err("unterminated quoted atom".into())),
                Some(b'\\') => {
                    if let Some(c) = self.s.get(self.i + 1) {
                        out.push(*c as char);
                    }
                    self.i += 2;
                }
                Some(b'\'') => {
                    self.i += 1;
                    return Ok(out);
                }
                Some(c) => {
                    out.push(*c as char);
                    self.i += 1;
                }
            }
        }
    }
}

fn var_of(name: &str, vars: &mut VarTable) -> Var {
    vars.lookup(name).unwrap_or_else(|| vars.fresh(name))
}

fn parse_item(c: &mut Cursor<'_>, vars: &mut VarTable) -> Result<SetExpr, TypeSyntaxError> {
    match c.peek() {
        Some(b'[') => {
            c.i += 1;
            if c.eat("]") {
                return Ok(SetExpr::nil());
            }
            let h = parse_item(c, vars)?;
            c.expect("|")?;
            let t = parse_item(c, vars)?;
            c.expect("]")?;
            Ok(SetExpr::list_cons(h, t))
        }
        Some(b'(') => {
            c.i += 1;
            let e = parse_alternatives(c, vars)?;
            c.expect(")")?;
            Ok(e)
        }
        Some(b'\'') => {
            let name = c.quoted()?;
            parse_app(c, vars, name)
        }
        Some(_) => {
            let name = c
                .ident()
                .ok_or_else(|| c.err("expected a type item".into()))?;
            if name == "0" {
                return Ok(SetExpr::Empty);
            }
            let first = name.chars().next().expect("nonempty");
            if first.is_uppercase() || first == '_' {
                Ok(SetExpr::Var(var_of(&name, vars)))
            } else {
                parse_app(c, vars, name)
            }
        }
        None => Err(c.err("unexpected end of input".into())),
    }
}

fn parse_app(
    c: &mut Cursor<'_>,
    vars: &mut VarTable,
    name: String,
) -> Result<SetExpr, TypeSyntaxError> {
    let mut args = Vec::new();
    if c.peek() == Some(b'(') {
        c.i += 1;
        loop {
            args.push(parse_item(c, vars)?);
            if !c.eat(",") {
                break;
            }
        }
        c.expect(")")?;
    }
    Ok(SetExpr::Cons(Functor::new(&name, args.len()), args))
}

fn parse_conjunct(c: &mut Cursor<'_>, vars: &mut VarTable) -> Result<SetExpr, TypeSyntaxError> {
    let mut ops = vec![parse_item(c, vars)?];
    while c.eat("/\\") {
        ops.push(parse_item(c, vars)?);
    }
    Ok(SetExpr::inter(ops))
}

fn parse_alternatives(c: &mut Cursor<'_>, vars: &mut VarTable) -> Result<SetExpr, TypeSyntaxError> {
    let mut alts = vec![parse_conjunct(c, vars)?];
    while c.eat("|") {
        alts.push(parse_conjunct(c, vars)?);
    }
    Ok(SetExpr::union(alts))
}

/// Reads `:- type NAME -> alt | alt.` lines. Blank lines and `%`
/// comments are skipped.
pub fn parse_types(text: &str) -> Result<ParsedTypes, TypeSyntaxError> {
    let mut out = ParsedTypes::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut c = Cursor {
            s: line.as_bytes(),
            i: 0,
            line: n + 1,
        };
        c.expect(":-")?;
        if c.ident().as_deref() != Some("type") {
            return Err(c.err("expected `type`".into()));
        }
        let name = c
            .ident()
            .ok_or_else(|| c.err("expected a type symbol".into()))?;
        let v = var_of(&name, &mut out.vars);
        c.expect("->")?;
        if !c.eat(".") {
            let e = parse_alternatives(&mut c, &mut out.vars)?;
            c.expect(".")?;
            out.system.insert(v, e);
        }
        if c.peek().is_some() {
            return Err(c.err("trailing text".into()));
        }
        out.declared.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_types_render_like_the_figure() {
        let mut vt = VarTable::new();
        let a1 = vt.fresh("A1");
        let a2 = vt.fresh("A2");
        let a3 = vt.fresh("A3");
        let x = vt.fresh("X_c2");
        let sys: EquationSystem = [
            (
                a1,
                SetExpr::union([
                    SetExpr::nil(),
                    SetExpr::list_cons(SetExpr::Var(x), SetExpr::Var(a1)),
                ]),
            ),
            (
                a3,
                SetExpr::union([
                    SetExpr::Var(a2),
                    SetExpr::list_cons(SetExpr::Var(x), SetExpr::Var(a3)),
                ]),
            ),
        ]
        .into_iter()
        .collect();
        let roots = [a1, a2, a3];
        let names = display_names(&sys, &roots, &vt);
        let text = prettify(&sys, &roots, &names);
        assert_eq!(
            text,
            ":- type A1 -> [] | [X|A1].\n:- type A2 -> .\n:- type A3 -> A2 | [X|A3].\n"
        );
    }

    #[test]
    fn empty_and_zero_constant() {
        let mut vt = VarTable::new();
        let p = vt.fresh("P");
        let n = vt.fresh("N");
        let sys: EquationSystem = [
            (p, SetExpr::Empty),
            (
                n,
                SetExpr::union([
                    SetExpr::constant("0"),
                    SetExpr::app("s", vec![SetExpr::Var(n)]),
                ]),
            ),
        ]
        .into_iter()
        .collect();
        let names = display_names(&sys, &[p, n], &vt);
        let text = prettify(&sys, &[p, n], &names);
        assert_eq!(text, ":- type P -> 0.\n:- type N -> '0' | s(N).\n");
        let back = parse_types(&text).unwrap();
        assert_eq!(back.system.get(back.declared[0]), Some(&SetExpr::Empty));
        assert_eq!(back.system.len(), 2);
    }

    #[test]
    fn reads_intersections_and_free_symbols() {
        let parsed = parse_types(":- type W -> X /\\ f(Y) | a.\n:- type X -> .\n").unwrap();
        assert_eq!(parsed.declared.len(), 2);
        let w = parsed.vars.lookup("W").unwrap();
        let x = parsed.vars.lookup("X").unwrap();
        let y = parsed.vars.lookup("Y").unwrap();
        assert_eq!(
            parsed.system.get(w),
            Some(&SetExpr::union([
                SetExpr::inter([SetExpr::Var(x), SetExpr::app("f", vec![SetExpr::Var(y)])]),
                SetExpr::constant("a"),
            ]))
        );
        assert!(!parsed.system.defines(x));
    }

    #[test]
    fn syntax_errors_are_reported() {
        assert!(parse_types(":- type A -> [X|.").is_err());
        assert!(parse_types("type A -> a.").is_err());
    }
}
