//! Machine tables and the machine file format:
//!
//! ```text
//! machine m_acc
//! kind det-two-sided
//! states q0 q1 qa
//! initial q0
//! blank _
//! alphabet _ S 0
//! delta q0 S -> q0 S R
//! end
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{is_reserved, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::R => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    DetTwoSided,
    NondetOneSided,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::DetTwoSided => "det-two-sided",
            Kind::NondetOneSided => "nondet-one-sided",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        match s {
            "det-two-sided" => Some(Kind::DetTwoSided),
            "nondet-one-sided" => Some(Kind::NondetOneSided),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One table entry `(state, read) -> (next, write, move)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub state: Sym,
    pub read: Sym,
    pub next: Sym,
    pub write: Sym,
    pub mv: Move,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta {} {} -> {} {} {}",
            self.state.name(),
            self.read.name(),
            self.next.name(),
            self.write.name(),
            self.mv
        )
    }
}

/// A validated machine table. Transitions are kept in file order, which is
/// the emission order of every construction built from the machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    pub name: String,
    pub kind: Kind,
    pub states: Vec<Sym>,
    pub initial: Sym,
    pub blank: Sym,
    pub alphabet: Vec<Sym>,
    pub delta: Vec<Transition>,
}

fn check_name(name: &str, what: &str) -> Result<()> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::Machine(format!(
            "{what} `{name}` is not an identifier"
        )));
    }
    if is_reserved(name) {
        return Err(Error::Machine(format!(
            "{what} `{name}` is a reserved symbol"
        )));
    }
    Ok(())
}

impl Machine {
    pub fn new(
        name: impl Into<String>,
        kind: Kind,
        states: Vec<Sym>,
        initial: Sym,
        blank: Sym,
        alphabet: Vec<Sym>,
        delta: Vec<Transition>,
    ) -> Result<Machine> {
        let m = Machine {
            name: name.into(),
            kind,
            states,
            initial,
            blank,
            alphabet,
            delta,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for (i, q) in self.states.iter().enumerate() {
            check_name(q.name(), "state")?;
            if self.states[..i].contains(q) {
                return Err(Error::Machine(format!("state `{q}` declared twice")));
            }
            if self.alphabet.contains(q) {
                return Err(Error::Machine(format!(
                    "`{q}` is both a state and a tape symbol"
                )));
            }
        }
        for (i, f) in self.alphabet.iter().enumerate() {
            check_name(f.name(), "tape symbol")?;
            if self.alphabet[..i].contains(f) {
                return Err(Error::Machine(format!("tape symbol `{f}` declared twice")));
            }
        }
        if !self.states.contains(&self.initial) {
            return Err(Error::Machine(format!(
                "initial state `{}` is not declared",
                self.initial
            )));
        }
        if !self.alphabet.contains(&self.blank) {
            return Err(Error::Machine(format!(
                "blank `{}` is not in the alphabet",
                self.blank
            )));
        }
        for (i, t) in self.delta.iter().enumerate() {
            for q in [t.state, t.next] {
                if !self.states.contains(&q) {
                    return Err(Error::Machine(format!("undeclared state `{q}` in `{t}`")));
                }
            }
            for f in [t.read, t.write] {
                if !self.alphabet.contains(&f) {
                    return Err(Error::Machine(format!(
                        "undeclared tape symbol `{f}` in `{t}`"
                    )));
                }
            }
            let earlier = &self.delta[..i];
            if earlier.contains(t) {
                return Err(Error::Machine(format!("duplicate transition `{t}`")));
            }
            if self.kind == Kind::DetTwoSided
                && earlier
                    .iter()
                    .any(|u| u.state == t.state && u.read == t.read)
            {
                return Err(Error::Machine(format!(
                    "deterministic machine has two transitions for ({}, {})",
                    t.state, t.read
                )));
            }
        }
        Ok(())
    }

    /// Transitions for `(q, f)` in file order.
    pub fn transitions(&self, q: Sym, f: Sym) -> impl Iterator<Item = &Transition> {
        self.delta
            .iter()
            .filter(move |t| t.state == q && t.read == f)
    }

    pub fn is_state(&self, s: Sym) -> bool {
        self.states.contains(&s)
    }

    pub fn is_tape_symbol(&self, s: Sym) -> bool {
        self.alphabet.contains(&s)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.alphabet.iter().any(|f| f.name() == name)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

fn sym_list(rest: &[&str]) -> Vec<Sym> {
    rest.iter().map(|s| Sym::new(s)).collect()
}

pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut name = None;
    let mut kind = None;
    let mut states = None;
    let mut initial = None;
    let mut blank = None;
    let mut alphabet = None;
    let mut delta = Vec::new();
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if ended {
            return Err(syntax(line, "content after `end`"));
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let one = |what: &str| -> Result<&str> {
            match words.len() {
                2 => Ok(words[1]),
                _ => Err(syntax(line, format!("`{what}` takes exactly one argument"))),
            }
        };
        match words[0] {
            "machine" => name = Some(one("machine")?.to_owned()),
            "kind" => {
                let k = one("kind")?;
                kind = Some(
                    Kind::parse(k).ok_or_else(|| syntax(line, format!("unknown kind `{k}`")))?,
                );
            }
            "states" => states = Some(sym_list(&words[1..])),
            "initial" => initial = Some(Sym::new(one("initial")?)),
            "blank" => blank = Some(Sym::new(one("blank")?)),
            "alphabet" => alphabet = Some(sym_list(&words[1..])),
            "delta" => {
                let [_, q, f, arrow, q2, f2, mv] = words[..] else {
                    return Err(syntax(line, "expected `delta <q> <f> -> <q'> <f'> <L|R>`"));
                };
                if arrow != "->" {
                    return Err(syntax(line, "expected `->` in delta line"));
                }
                let mv = match mv {
                    "L" => Move::L,
                    "R" => Move::R,
                    other => {
                        return Err(syntax(
                            line,
                            format!("move must be L or R, found `{other}`"),
                        ))
                    }
                };
                delta.push(Transition {
                    state: Sym::new(q),
                    read: Sym::new(f),
                    next: Sym::new(q2),
                    write: Sym::new(f2),
                    mv,
                });
            }
            "end" => ended = true,
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| Error::Machine(format!("missing `{what}` line"));
    if !ended {
        return Err(missing("end"));
    }
    Machine::new(
        name.ok_or_else(|| missing("machine"))?,
        kind.ok_or_else(|| missing("kind"))?,
        states.ok_or_else(|| missing("states"))?,
        initial.ok_or_else(|| missing("initial"))?,
        blank.ok_or_else(|| missing("blank"))?,
        alphabet.ok_or_else(|| missing("alphabet"))?,
        delta,
    )
}

pub fn print_machine(m: &Machine) -> String {
    let join = |v: &[Sym]| v.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "machine {}\nkind {}\nstates {}\ninitial {}\nblank {}\nalphabet {}\n",
        m.name,
        m.kind,
        join(&m.states),
        m.initial,
        m.blank,
        join(&m.alphabet)
    );
    for t in &m.delta {
        out.push_str(&format!("{t}\n"));
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACC: &str = "\
machine m_acc
kind det-two-sided
states q0 q1 qa
initial q0
blank _
alphabet _ S 0
delta q0 S -> q0 S R
delta q0 0 -> q1 0 R
delta q1 _ -> qa _ L
delta q1 S -> qa S L
delta q1 0 -> qa 0 L
end
";

    #[test]
    fn round_trip_is_exact() {
        let m = parse_machine(ACC).unwrap();
        assert_eq!(m.delta.len(), 5);
        assert_eq!(print_machine(&m), ACC);
    }

    #[test]
    fn rejects_nondeterminism_in_det_kind() {
        let bad = ACC.replace("end\n", "delta q0 S -> q1 S L\nend\n");
        assert!(matches!(parse_machine(&bad), Err(Error::Machine(_))));
        let nd = bad.replace("det-two-sided", "nondet-one-sided");
        assert_eq!(
            parse_machine(&nd)
                .unwrap()
                .transitions(Sym::new("q0"), Sym::new("S"))
                .count(),
            2
        );
    }

    #[test]
    fn rejects_reserved_and_clashing_names() {
        assert!(parse_machine(&ACC.replace("qa", "T")).is_err());
        assert!(parse_machine(&ACC.replace("states q0 q1 qa", "states q0 q1 qa S")).is_err());
    }

    #[test]
    fn reports_line_of_bad_delta() {
        let bad = ACC.replace("delta q0 0 -> q1 0 R", "delta q0 0 q1 0 R");
        assert!(matches!(
            parse_machine(&bad),
            Err(Error::Syntax { line: 8, .. })
        ));
    }
}
