//! Reader for a pure Edinburgh-style clause syntax: atoms, variables,
//! compound terms, list and string sugar, `%` and `/* */` comments, and the
//! `:- entry Atom.` directive. No operators, cut, negation or arithmetic.

use std::iter::Peekable;
use std::str::Chars;

use thiserror::Error;

use super::ast::{Atom, Clause, Program, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Var(String),
    Str(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bar,
    Comma,
    End,
    Neck,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("atom `{n}`"),
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::Str(_) => "string".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of clause `.`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn skip_layout(&mut self) -> Result<(), ParseError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') => {
                    let mut ahead = self.chars.clone();
                    ahead.next();
                    if ahead.peek() != Some(&'*') {
                        return Ok(());
                    }
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    let mut prev = ' ';
                    loop {
                        match self.bump() {
                            Some('/') if prev == '*' => break,
                            Some(c) => prev = c,
                            None => return Err(self.err(line, col, "unterminated block comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_layout()?;
        let (line, col) = (self.line, self.col);
        let Some(&c) = self.chars.peek() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match c {
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '[' => {
                self.bump();
                Tok::LBrack
            }
            ']' => {
                self.bump();
                Tok::RBrack
            }
            '|' => {
                self.bump();
                Tok::Bar
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '.' => {
                self.bump();
                match self.chars.peek() {
                    None => Tok::End,
                    Some(c) if c.is_whitespace() || *c == '%' => Tok::End,
                    Some(_) => return Err(self.err(line, col, "`.` must be followed by layout")),
                }
            }
            ':' => {
                self.bump();
                if self.chars.peek() == Some(&'-') {
                    self.bump();
                    Tok::Neck
                } else {
                    return Err(self.err(line, col, "unexpected `:`"));
                }
            }
            '\'' => Tok::Name(self.quoted('\'', line, col)?),
            '"' => Tok::Str(self.quoted('"', line, col)?),
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Name(s)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if c.is_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Name(s)
                }
            }
            other => return Err(self.err(line, col, format!("unexpected character `{other}`"))),
        };
        Ok((tok, line, col))
    }

    fn quoted(&mut self, q: char, line: usize, col: usize) -> Result<String, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err(line, col, "unterminated quoted text")),
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(c) => s.push(c),
                    None => return Err(self.err(line, col, "unterminated quoted text")),
                },
                Some(c) if c == q => {
                    // Doubled quote stands for itself.
                    if self.chars.peek() == Some(&q) {
                        self.bump();
                        s.push(q);
                    } else {
                        return Ok(s);
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
    anon: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lex = Lexer::new(text);
        let (tok, line, col) = lex.next()?;
        Ok(Parser {
            lex,
            tok,
            line,
            col,
            anon: 0,
        })
    }

    fn advance(&mut self) -> Result<Tok, ParseError> {
        let (tok, line, col) = self.lex.next()?;
        self.line = line;
        self.col = col;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: format!("expected {expected}, found {}", self.tok.describe()),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == t {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut prog = Program::default();
        while self.tok != Tok::Eof {
            if self.tok == Tok::Neck {
                self.directive(&mut prog)?;
                continue;
            }
            let line = self.line;
            let head = self.atom()?;
            let body = if self.tok == Tok::Neck {
                self.advance()?;
                self.body()?
            } else {
                Vec::new()
            };
            self.expect(Tok::End, "`.`")?;
            prog.clauses.push(Clause {
                head,
                body,
                head_bindings: Vec::new(),
                line,
            });
        }
        Ok(prog)
    }

    fn directive(&mut self, prog: &mut Program) -> Result<(), ParseError> {
        let (line, col) = (self.line, self.col);
        self.advance()?;
        match &self.tok {
            Tok::Name(n) if n == "entry" => {
                self.advance()?;
                let a = self.atom()?;
                self.expect(Tok::End, "`.`")?;
                prog.entries.push(a);
                Ok(())
            }
            Tok::Name(n) => Err(ParseError {
                line,
                col,
                message: format!("unsupported directive `{n}`"),
            }),
            _ => Err(self.error("directive name")),
        }
    }

    fn body(&mut self) -> Result<Vec<Atom>, ParseError> {
        let mut atoms = Vec::new();
        loop {
            let a = self.atom()?;
            if !(a.pred == "true" && a.args.is_empty()) {
                atoms.push(a);
            }
            if self.tok == Tok::Comma {
                self.advance()?;
            } else {
                return Ok(atoms);
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match &self.tok {
            Tok::Name(n) => n.clone(),
            _ => return Err(self.error("predicate name")),
        };
        self.advance()?;
        let args = if self.tok == Tok::LParen {
            self.advance()?;
            self.args()?
        } else {
            Vec::new()
        };
        Ok(Atom { pred: name, args })
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        while self.tok == Tok::Comma {
            self.advance()?;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.tok.clone() {
            Tok::Var(v) => {
                self.advance()?;
                if v == "_" {
                    self.anon += 1;
                    Ok(Term::Var(format!("_G{}", self.anon)))
                } else {
                    Ok(Term::Var(v))
                }
            }
            Tok::Name(n) => {
                self.advance()?;
                if self.tok == Tok::LParen {
                    self.advance()?;
                    Ok(Term::Compound(n, self.args()?))
                } else {
                    Ok(Term::constant(&n))
                }
            }
            Tok::Str(s) => {
                self.advance()?;
                let codes = s
                    .chars()
                    .map(|c| Term::constant(&(c as u32).to_string()))
                    .collect();
                Ok(Term::list(codes, Term::nil()))
            }
            Tok::LBrack => {
                self.advance()?;
                if self.tok == Tok::RBrack {
                    self.advance()?;
                    return Ok(Term::nil());
                }
                let mut items = vec![self.term()?];
                while self.tok == Tok::Comma {
                    self.advance()?;
                    items.push(self.term()?);
                }
                let tail = if self.tok == Tok::Bar {
                    self.advance()?;
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBrack, "`,`, `|` or `]`")?;
                Ok(Term::list(items, tail))
            }
            _ => Err(self.error("term")),
        }
    }
}

/// Parses a whole program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    Parser::new(text)?.program()
}

/// Parses a single atom such as a query `append(A,a,A)`, with an optional
/// trailing `.`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.atom()?;
    if p.tok == Tok::End {
        p.advance()?;
    }
    if p.tok != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(a)
}
