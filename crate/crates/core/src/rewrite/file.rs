//! Text format for rewrite systems:
//!
//! ```text
//! # construction: pickn
//! # rules: 3
//! sig pickn/0 c/1 ok/1 S/1 0/1 end/0
//! rule pickn.wrap: pickn -> c(pickn)
//! ```
//!
//! Without `sig` lines the signature is inferred: applied identifiers are
//! symbols of the arity they are used with, and a bare identifier is a
//! variable when it is a lowercase letter optionally followed by digits.

use super::{Rule, Trs};
use crate::error::{Error, Result};
use crate::symbol::Signature;
use crate::term::{parse_pattern, Label};

#[derive(Clone, Debug)]
pub struct TrsFile {
    pub trs: Trs,
    /// `# key: value` header comments, in file order.
    pub header: Vec<(String, String)>,
}

impl TrsFile {
    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

/// Adjusts a term-level syntax error to the file line it came from.
fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Syntax {
            line: l,
            column,
            message,
        } => Error::Syntax {
            line: line + l - 1,
            column,
            message,
        },
        other => other,
    }
}

fn is_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

fn infer(sig: &mut Signature, text: &str, line: usize) -> Result<()> {
    let t = crate::term::parse_loose(text).map_err(|e| at_line(e, line))?;
    for n in t.reachable() {
        let node = t.node(n);
        if let Label::Fun(s) = node.label {
            let arity = node.children.len();
            if arity == 0 && (is_var_name(s.name()) || s.name() == crate::symbol::CUT) {
                continue;
            }
            sig.add(s.name(), arity)?;
        }
    }
    Ok(())
}

pub fn parse_trs(text: &str) -> Result<TrsFile> {
    let mut header = Vec::new();
    let mut sig = Signature::new();
    let mut declared = false;
    let mut raw_rules: Vec<(usize, String, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once(':') {
                header.push((k.trim().to_owned(), v.trim().to_owned()));
            }
            continue;
        }
        let content = trimmed.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("sig ") {
            declared = true;
            for item in rest.split_whitespace() {
                let (name, arity) = item
                    .rsplit_once('/')
                    .ok_or_else(|| syntax(line, format!("expected name/arity, found `{item}`")))?;
                let arity: usize = arity
                    .parse()
                    .map_err(|_| syntax(line, format!("bad arity in `{item}`")))?;
                sig.add(name, arity)?;
            }
        } else if let Some(rest) = content.strip_prefix("rule ") {
            let (id, body) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected `rule <id>: <lhs> -> <rhs>`"))?;
            let (lhs, rhs) = body
                .split_once("->")
                .ok_or_else(|| syntax(line, "expected `->` in rule"))?;
            raw_rules.push((line, id.trim().to_owned(), lhs.to_owned(), rhs.to_owned()));
        } else {
            return Err(syntax(line, format!("unrecognized line `{content}`")));
        }
    }
    if !declared {
        for (line, _, lhs, rhs) in &raw_rules {
            infer(&mut sig, lhs, *line)?;
            infer(&mut sig, rhs, *line)?;
        }
    }
    let mut rules = Vec::with_capacity(raw_rules.len());
    for (line, id, lhs, rhs) in raw_rules {
        let l = parse_pattern(&lhs, &sig).map_err(|e| at_line(e, line))?;
        let r = parse_pattern(&rhs, &sig).map_err(|e| at_line(e, line))?;
        rules.push(Rule::new(id, l, r)?);
    }
    let trs = Trs::new(sig, rules)?;
    if let Some((_, n)) = header.iter().find(|(k, _)| k == "rules") {
        if n.parse::<usize>().ok() != Some(trs.len()) {
            return Err(Error::Config(format!(
                "rule count audit says {n} but the file has {} rules",
                trs.len()
            )));
        }
    }
    Ok(TrsFile { trs, header })
}

/// Prints `trs` with the given header comments followed by a `# rules: n`
/// audit line. The output parses back to the same system.
pub fn print_trs(trs: &Trs, header: &[(&str, &str)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&format!("# rules: {}\n", trs.len()));
    if !trs.sig.is_empty() {
        out.push_str("sig");
        for s in trs.sig.symbols() {
            out.push_str(&format!(" {}/{}", s.name, s.arity));
        }
        out.push('\n');
    }
    for r in trs.rules() {
        out.push_str(&format!("rule {}: {} -> {}\n", r.id, r.lhs, r.rhs));
    }
    out
}

/// Structural equality of rule lists (ids, sides up to bisimulation) and
/// signatures.
pub fn same_system(a: &Trs, b: &Trs) -> bool {
    a.sig == b.sig
        && a.len() == b.len()
        && a.rules().iter().zip(b.rules()).all(|(x, y)| {
            x.id == y.id
                && crate::term::bisim_equal(&x.lhs, &y.lhs)
                && crate::term::bisim_equal(&x.rhs, &y.rhs)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PICKN: &str = "\
# construction: pickn
# rules: 3
sig pickn/0 c/1 ok/1 S/1 0/1 end/0
rule pickn.wrap: pickn -> c(pickn)
rule pickn.ok: pickn -> ok(0(end))
rule c.ok: c(ok(x)) -> ok(S(x))
";

    #[test]
    fn round_trip() {
        let f = parse_trs(PICKN).unwrap();
        assert_eq!(f.trs.len(), 3);
        assert_eq!(f.header_value("construction"), Some("pickn"));
        let printed = print_trs(&f.trs, &[("construction", "pickn")]);
        assert_eq!(printed, PICKN);
        let g = parse_trs(&printed).unwrap();
        assert!(same_system(&f.trs, &g.trs));
    }

    #[test]
    fn infers_signature() {
        let f = parse_trs("rule r1: f(x, nil) -> g(x)\nrule r2: g(end) -> nil\n").unwrap();
        assert_eq!(f.trs.sig.len(), 4);
        assert!(f.trs.rules()[0].lhs.vars().len() == 1);
    }

    #[test]
    fn audit_mismatch_is_an_error() {
        let bad = PICKN.replace("# rules: 3", "# rules: 4");
        assert!(matches!(parse_trs(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn syntax_errors_carry_file_lines() {
        let err = parse_trs("sig a/0\n\nrule r: a( -> a\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
    }
}
