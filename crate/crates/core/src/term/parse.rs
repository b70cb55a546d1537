//! Term syntax:
//!
//! ```text
//! term := ident | ident "(" term ("," term)* ")" | "rec" UPPERIDENT "." term | UPPERIDENT
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::HashMap;

use super::{Label, Term, TermBuilder};
use crate::error::{Error, Result};
use crate::symbol::{Signature, Sym, CUT};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Comma,
    Dot,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, cc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            '(' | ')' | ',' | '.' => {
                chars.next();
                col += 1;
                let t = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    ',' => Tok::Comma,
                    _ => Tok::Dot,
                };
                toks.push((t, l, cc));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l, cc));
            }
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: cc,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        end: (line, col),
    })
}

#[derive(Debug)]
enum Ast {
    App {
        name: String,
        args: Vec<Ast>,
        line: usize,
        column: usize,
    },
    Rec {
        var: String,
        body: Box<Ast>,
        line: usize,
        column: usize,
    },
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.lx
            .toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.lx.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let (line, column) = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.err("expected a term"),
        };
        self.pos += 1;
        if name == "rec" {
            let var = match self.peek() {
                Some(Tok::Ident(s)) if s.starts_with(|c: char| c.is_ascii_uppercase()) => s.clone(),
                _ => return self.err("expected an upper-case recursion variable after `rec`"),
            };
            self.pos += 1;
            self.expect(Tok::Dot, "`.` after recursion variable")?;
            let body = self.term()?;
            return Ok(Ast::Rec {
                var,
                body: Box::new(body),
                line,
                column,
            });
        }
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Open) {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::Close) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected `,` or `)`"),
                }
            }
        }
        Ok(Ast::App {
            name,
            args,
            line,
            column,
        })
    }
}

fn parse_ast(text: &str) -> Result<Ast> {
    let mut p = Parser {
        lx: lex(text)?,
        pos: 0,
    };
    let t = p.term()?;
    if p.pos < p.lx.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// How bare and applied identifiers are resolved.
enum Mode<'a> {
    /// Every identifier must be declared; no variables.
    Ground(&'a Signature),
    /// Undeclared bare identifiers are variables.
    Pattern(&'a Signature),
    /// Every identifier is a symbol of the arity it is used with.
    Loose,
}

struct Build<'a> {
    mode: Mode<'a>,
    b: TermBuilder,
    /// Placeholders of enclosing binders, innermost last.
    env: Vec<(String, u32)>,
    filled: HashMap<u32, bool>,
}

impl Build<'_> {
    fn build(&mut self, ast: &Ast) -> Result<u32> {
        match ast {
            Ast::Rec {
                var,
                body,
                line,
                column,
            } => {
                let p = self.b.placeholder();
                self.filled.insert(p, false);
                self.env.push((var.clone(), p));
                let r = self.build(body);
                self.env.pop();
                let r = r?;
                let unguarded = Error::Syntax {
                    line: *line,
                    column: *column,
                    message: format!("recursion variable `{var}` is not guarded by a symbol"),
                };
                if r == p || self.filled.get(&r) == Some(&false) {
                    return Err(unguarded);
                }
                let node = self.b.nodes[r as usize].clone();
                self.b.fill(p, node.label, node.children.into_vec());
                self.filled.insert(p, true);
                Ok(p)
            }
            Ast::App {
                name,
                args,
                line,
                column,
            } => {
                if args.is_empty() {
                    if let Some(&(_, p)) = self.env.iter().rev().find(|(v, _)| v == name) {
                        return Ok(p);
                    }
                }
                let sym = Sym::new(name);
                let children = args
                    .iter()
                    .map(|a| self.build(a))
                    .collect::<Result<Vec<_>>>()?;
                let declared = match &self.mode {
                    Mode::Ground(sig) | Mode::Pattern(sig) => sig.arity(sym),
                    Mode::Loose => Some(args.len()),
                };
                let declared = if name == CUT { Some(0) } else { declared };
                match declared {
                    Some(a) if a == args.len() => Ok(self.b.node(Label::Fun(sym), children)),
                    Some(a) => Err(Error::Arity {
                        name: name.clone(),
                        expected: a,
                        found: args.len(),
                    }),
                    None => {
                        let upper = name.starts_with(|c: char| c.is_ascii_uppercase());
                        if args.is_empty() && upper {
                            Err(Error::UnboundRecursion(name.clone()))
                        } else if args.is_empty() && matches!(self.mode, Mode::Pattern(_)) {
                            Ok(self.b.node(Label::Var(sym), Vec::new()))
                        } else {
                            let _ = (line, column);
                            Err(Error::UnknownSymbol(name.clone()))
                        }
                    }
                }
            }
        }
    }
}

fn build(text: &str, mode: Mode<'_>) -> Result<Term> {
    let ast = parse_ast(text)?;
    let mut st = Build {
        mode,
        b: TermBuilder::new(),
        env: Vec::new(),
        filled: HashMap::new(),
    };
    let root = st.build(&ast)?;
    Ok(st.b.finish(root))
}

/// Parses a ground term whose symbols are all declared in `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    build(text, Mode::Ground(sig))
}

/// Parses a rule pattern: undeclared bare identifiers become variables.
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Term> {
    build(text, Mode::Pattern(sig))
}

/// Parses without a signature; every identifier is a symbol.
pub fn parse_loose(text: &str) -> Result<Term> {
    build(text, Mode::Loose)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::bisim_equal;

    fn pickn_sig() -> Signature {
        Signature::new()
            .with("T", 0)
            .with("pickn", 0)
            .with("run", 3)
            .with("peb", 1)
            .with("ok", 1)
            .with("end", 0)
            .with("0", 1)
    }

    #[test]
    fn parses_constants_applications_and_cycles() {
        let sig = pickn_sig();
        let t = parse_term("T", &sig).unwrap();
        assert_eq!(t.head().name(), "T");
        let t = parse_term("run(T, pickn, pickn)", &sig).unwrap();
        assert_eq!(t.arity(), 3);
        let t = parse_term("rec X . peb(X)", &sig).unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(!t.is_finite());
        let u = parse_term("rec X. peb(peb(X))  # comment", &sig).unwrap();
        assert!(bisim_equal(&t, &u));
    }

    #[test]
    fn reports_errors() {
        let sig = pickn_sig();
        assert_eq!(
            parse_term("foo", &sig).unwrap_err(),
            Error::UnknownSymbol("foo".into())
        );
        assert!(matches!(
            parse_term("run(T, T)", &sig).unwrap_err(),
            Error::Arity {
                expected: 3,
                found: 2,
                ..
            }
        ));
        assert_eq!(
            parse_term("peb(X)", &sig).unwrap_err(),
            Error::UnboundRecursion("X".into())
        );
        assert!(matches!(
            parse_term("rec X . X", &sig).unwrap_err(),
            Error::Syntax { .. }
        ));
        assert!(matches!(
            parse_term("peb(T", &sig).unwrap_err(),
            Error::Syntax {
                line: 1,
                column: 6,
                ..
            }
        ));
        assert!(matches!(
            parse_term("peb(T)\n  )", &sig).unwrap_err(),
            Error::Syntax {
                line: 2,
                column: 3,
                ..
            }
        ));
    }

    #[test]
    fn rec_variable_shadows_symbol() {
        let sig = pickn_sig();
        let t = parse_term("rec T . peb(T)", &sig).unwrap();
        assert!(!t.is_finite());
    }

    #[test]
    fn nested_binders() {
        let sig = Signature::new().with("f", 2).with("g", 1);
        let t = parse_term("rec X . f(rec Y . g(Y), X)", &sig).unwrap();
        let u = parse_term("f(rec Z . g(Z), rec X . f(rec Y . g(Y), X))", &sig).unwrap();
        assert!(bisim_equal(&t, &u));
    }

    #[test]
    fn patterns_have_variables() {
        let sig = Signature::new().with("q0", 2).with("S", 1);
        let p = parse_pattern("q0(x, S(y))", &sig).unwrap();
        assert_eq!(
            p.vars().iter().map(|v| v.name()).collect::<Vec<_>>(),
            ["x", "y"]
        );
        assert_eq!(
            parse_pattern("q0(x, h(y))", &sig).unwrap_err(),
            Error::UnknownSymbol("h".into())
        );
    }
}
