//! Compilation of machines into rewrite systems, and of machine data into
//! terms.
//!
//! Rule ids name the table entry they come from: `R.q.f` and `L.q.f.g` for
//! moves, `XL.q.f`, `XR.q`, `XRL.q.g`, `XLL.q` for tape extension,
//! `halt.q` and `peel` for the pebbled system, `R.q.f.k` and `L.q.f.k.g`
//! for the string system (`k` numbers the entries for `(q, f)`).

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Machine, Move, Transition};
use crate::omega::{NdConfig, NdTmSpec, OmegaWord};
use crate::rewrite::{print_trs, Rule, Trs};
use crate::symbol::names::{
    BOT, C, DELTA1, DELTA2, END, OK, PEBBLE, PICKN, RUN, SUCC, TOP, XI, ZERO,
};
use crate::symbol::{Signature, Sym};
use crate::term::{Label, Position, Term};
use crate::turing::{TmConfig, TmSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Base,
    Pebbled,
    Pickn,
    S,
    SPrime,
    Srs,
    R,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Base,
        Construction::Pebbled,
        Construction::Pickn,
        Construction::S,
        Construction::SPrime,
        Construction::Srs,
        Construction::R,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Construction::Base => "base",
            Construction::Pebbled => "pebbled",
            Construction::Pickn => "pickn",
            Construction::S => "S",
            Construction::SPrime => "Sprime",
            Construction::Srs => "srs",
            Construction::R => "R",
        }
    }

    pub fn parse(tag: &str) -> Option<Construction> {
        Construction::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

fn var(name: &str) -> Term {
    Term::var(name)
}

fn ap(name: impl AsRef<str>, args: Vec<Term>) -> Term {
    Term::app(name.as_ref(), args)
}

fn un(f: Sym, t: Term) -> Term {
    ap(f.name(), vec![t])
}

fn end() -> Term {
    Term::constant(END)
}

fn rule(id: String, lhs: Term, rhs: Term) -> Rule {
    Rule::new(id, lhs, rhs).expect("constructions emit well-formed rules")
}

fn machine_sig(m: &Machine, state_arity: usize) -> Signature {
    let mut sig = Signature::new();
    for q in &m.states {
        sig.add(q.name(), state_arity)
            .expect("validated machine names");
    }
    for f in &m.alphabet {
        sig.add(f.name(), 1).expect("validated machine names");
    }
    sig
}

/// The two-sided machine as a rewrite system over `q(left, right)`.
pub fn tm_to_trs(m: &TmSpec) -> Trs {
    let sig = machine_sig(m, 2).with(END, 0);
    let (x, y) = (|| var("x"), || var("y"));
    let blank = m.blank;
    let mut rules = Vec::new();
    let q2 = |q: Sym, a: Term, b: Term| ap(q.name(), vec![a, b]);
    let rights = || m.delta.iter().filter(|t| t.mv == Move::R);
    let lefts = || m.delta.iter().filter(|t| t.mv == Move::L);
    for t in rights() {
        rules.push(rule(
            format!("R.{}.{}", t.state, t.read),
            q2(t.state, x(), un(t.read, y())),
            q2(t.next, un(t.write, x()), y()),
        ));
    }
    for t in lefts() {
        for &g in &m.alphabet {
            rules.push(rule(
                format!("L.{}.{}.{}", t.state, t.read, g),
                q2(t.state, un(g, x()), un(t.read, y())),
                q2(t.next, x(), un(g, un(t.write, y()))),
            ));
        }
    }
    for t in lefts() {
        rules.push(rule(
            format!("XL.{}.{}", t.state, t.read),
            q2(t.state, end(), un(t.read, y())),
            q2(t.next, end(), un(blank, un(t.write, y()))),
        ));
    }
    let blank_entries = |mv: Move| {
        m.delta
            .iter()
            .filter(move |t| t.read == blank && t.mv == mv)
    };
    for t in blank_entries(Move::R) {
        rules.push(rule(
            format!("XR.{}", t.state),
            q2(t.state, x(), end()),
            q2(t.next, un(t.write, x()), end()),
        ));
    }
    for t in blank_entries(Move::L) {
        for &g in &m.alphabet {
            rules.push(rule(
                format!("XRL.{}.{}", t.state, g),
                q2(t.state, un(g, x()), end()),
                q2(t.next, x(), un(g, un(t.write, end()))),
            ));
        }
    }
    for t in blank_entries(Move::L) {
        rules.push(rule(
            format!("XLL.{}", t.state),
            q2(t.state, end(), end()),
            q2(t.next, end(), un(blank, un(t.write, end()))),
        ));
    }
    Trs::new(sig, rules).expect("signature covers all rule symbols")
}

pub fn encode_config(c: &TmConfig) -> Term {
    ap(
        c.state.name(),
        vec![Term::word(&c.left, end()), Term::word(&c.right, end())],
    )
}

fn decode_side(m: &Machine, t: &Term, at: Position) -> Result<Vec<Sym>> {
    let mut out = Vec::new();
    let mut cur = t.subterm_at(&at)?;
    let mut pos = at;
    loop {
        let err = |message: &str| Error::Decode {
            position: pos.clone(),
            message: message.into(),
        };
        match cur.label() {
            Label::Fun(s) if s.name() == END && cur.arity() == 0 => return Ok(out),
            Label::Fun(s) if m.is_tape_symbol(s) && cur.arity() == 1 => {
                if out.len() > t.node_count() {
                    return Err(err("tape is infinite"));
                }
                out.push(s);
                cur = cur.arg(0);
                pos = pos.child(1);
            }
            _ => return Err(err("expected a tape symbol or `end`")),
        }
    }
}

/// Inverse of [`encode_config`] up to trailing blanks.
pub fn decode_config(m: &TmSpec, t: &Term) -> Result<TmConfig> {
    let state = match t.label() {
        Label::Fun(q) if m.is_state(q) && t.arity() == 2 => q,
        _ => {
            return Err(Error::Decode {
                position: Position::root(),
                message: "expected a state symbol of arity 2".into(),
            })
        }
    };
    let left = decode_side(m, t, Position::root().child(1))?;
    let right = decode_side(m, t, Position::root().child(2))?;
    Ok(TmConfig::new(left, state, right, m.blank))
}

/// The pebbled system, with a warning per halting state whose `0`-entry
/// overlaps its halt rule.
pub fn pebble_trs(m: &TmSpec) -> Result<(Trs, Vec<String>)> {
    let (s, z) = numerals(m)?;
    let base = tm_to_trs(m);
    let sig = base.sig.clone().with(PEBBLE, 1).with(TOP, 0);
    let mut rules: Vec<Rule> = base
        .rules()
        .iter()
        .map(|r| rule(r.id.clone(), r.lhs.clone(), ap(PEBBLE, vec![r.rhs.clone()])))
        .collect();
    let mut warnings = Vec::new();
    for &q in &m.states {
        if m.delta(q, s).is_some() {
            continue;
        }
        if m.delta(q, z).is_some() {
            warnings.push(format!(
                "state {q} has no {SUCC}-entry but a {ZERO}-entry: halt rule halt.{q} overlaps it"
            ));
        }
        rules.push(rule(
            format!("halt.{q}"),
            ap(q.name(), vec![var("x"), un(z, var("y"))]),
            Term::constant(TOP),
        ));
    }
    rules.push(rule(
        "peel".into(),
        ap(PEBBLE, vec![Term::constant(TOP)]),
        Term::constant(TOP),
    ));
    Ok((Trs::new(sig, rules)?, warnings))
}

fn numerals(m: &Machine) -> Result<(Sym, Sym)> {
    if !m.has_symbol(SUCC) || !m.has_symbol(ZERO) {
        return Err(Error::Machine(format!(
            "machine `{}` needs tape symbols {SUCC} and {ZERO}",
            m.name
        )));
    }
    Ok((Sym::new(SUCC), Sym::new(ZERO)))
}

fn pickn_sig() -> Signature {
    Signature::new()
        .with(PICKN, 0)
        .with(C, 1)
        .with(OK, 1)
        .with(SUCC, 1)
        .with(ZERO, 1)
        .with(END, 0)
}

fn pickn_rules() -> Vec<Rule> {
    let num0 = ap(ZERO, vec![end()]);
    vec![
        rule(
            "pickn.wrap".into(),
            Term::constant(PICKN),
            ap(C, vec![Term::constant(PICKN)]),
        ),
        rule("pickn.ok".into(), Term::constant(PICKN), ap(OK, vec![num0])),
        rule(
            "c.ok".into(),
            ap(C, vec![ap(OK, vec![var("x")])]),
            ap(OK, vec![ap(SUCC, vec![var("x")])]),
        ),
    ]
}

pub fn pickn_trs() -> Trs {
    Trs::new(pickn_sig(), pickn_rules()).expect("fixed system")
}

/// `run(T, pickn, pickn)`.
pub fn run_start() -> Term {
    ap(
        RUN,
        vec![
            Term::constant(TOP),
            Term::constant(PICKN),
            Term::constant(PICKN),
        ],
    )
}

fn build_run_system(m: &TmSpec, wrap: bool) -> Result<(Trs, Vec<String>)> {
    let (pebbled, warnings) = pebble_trs(m)?;
    let mut sig = pebbled.sig.clone();
    sig.merge(&pickn_sig())?;
    sig.add(RUN, 3)?;
    let mut rules = pebbled.rules().to_vec();
    rules.extend(pickn_rules());
    let lhs = ap(
        RUN,
        vec![
            Term::constant(TOP),
            ap(OK, vec![var("x")]),
            ap(OK, vec![var("y")]),
        ],
    );
    let mut rhs = ap(
        RUN,
        vec![
            ap(m.initial.name(), vec![var("x"), var("y")]),
            ap(OK, vec![var("y")]),
            Term::constant(PICKN),
        ],
    );
    if wrap {
        rhs = ap(PEBBLE, vec![rhs]);
    }
    rules.push(rule("run".into(), lhs, rhs));
    if wrap {
        let xyz = || ap(RUN, vec![var("x"), var("y"), var("z")]);
        rules.push(rule("loop".into(), xyz(), xyz()));
    }
    Ok((Trs::new(sig, rules)?, warnings))
}

/// Pebbled system, pickn, and the run rule; start term `run(T, pickn, pickn)`.
pub fn build_s(m: &TmSpec) -> Result<(Trs, Term, Vec<String>)> {
    let (trs, w) = build_run_system(m, false)?;
    Ok((trs, run_start(), w))
}

/// As [`build_s`] with the run rule's right-hand side wrapped in `peb`, plus
/// the self-loop `run(x, y, z) -> run(x, y, z)`.
pub fn build_s_prime(m: &TmSpec) -> Result<(Trs, Term, Vec<String>)> {
    let (trs, w) = build_run_system(m, true)?;
    Ok((trs, run_start(), w))
}

fn entry_index(m: &Machine, t: &Transition) -> usize {
    m.transitions(t.state, t.read).position(|u| u == t).unwrap()
}

/// The string rewriting system of a one-sided machine, as unary terms.
pub fn nd_to_srs(m: &NdTmSpec) -> Trs {
    let sig = machine_sig(m, 1);
    let x = || var("x");
    let mut rules = Vec::new();
    for t in m.delta.iter().filter(|t| t.mv == Move::R) {
        rules.push(rule(
            format!("R.{}.{}.{}", t.state, t.read, entry_index(m, t)),
            un(t.state, un(t.read, x())),
            un(t.write, un(t.next, x())),
        ));
    }
    for t in m.delta.iter().filter(|t| t.mv == Move::L) {
        for &g in &m.alphabet {
            rules.push(rule(
                format!("L.{}.{}.{}.{}", t.state, t.read, entry_index(m, t), g),
                un(g, un(t.state, un(t.read, x()))),
                un(t.next, un(g, un(t.write, x()))),
            ));
        }
    }
    Trs::new(sig, rules).expect("signature covers all rule symbols")
}

/// The string system extended by the run, kill, ξ and Δ rules. With
/// `as_printed`, the fourth argument of the first run rule is `D1(z)`
/// instead of `D2(z)`.
pub fn build_r(m: &NdTmSpec, as_printed: bool) -> Trs {
    let srs = nd_to_srs(m);
    let sig = srs
        .sig
        .clone()
        .with(RUN, 4)
        .with(XI, 0)
        .with(BOT, 0)
        .with(DELTA1, 1)
        .with(DELTA2, 1);
    let mut rules = srs.rules().to_vec();
    let (x, y, z) = (|| var("x"), || var("y"), || var("z"));
    let fourth = if as_printed { DELTA1 } else { DELTA2 };
    rules.push(rule(
        "run1".into(),
        ap(RUN, vec![x(), y(), z(), z()]),
        ap(
            RUN,
            vec![
                Term::constant(XI),
                un(m.initial, z()),
                ap(DELTA1, vec![z()]),
                ap(fourth, vec![z()]),
            ],
        ),
    ));
    rules.push(rule(
        "run2".into(),
        ap(RUN, vec![x(), x(), y(), z()]),
        Term::constant(BOT),
    ));
    for &q in &m.states {
        rules.push(rule(format!("kill.{q}"), un(q, x()), Term::constant(BOT)));
    }
    for &f in &m.alphabet {
        rules.push(rule(
            format!("xi.{f}"),
            Term::constant(XI),
            un(f, Term::constant(XI)),
        ));
    }
    for d in [DELTA1, DELTA2] {
        for &f in &m.alphabet {
            rules.push(rule(
                format!("{d}.{f}"),
                ap(d, vec![un(f, x())]),
                un(f, ap(d, vec![x()])),
            ));
        }
    }
    Trs::new(sig, rules).expect("signature covers all rule symbols")
}

/// `run(xi, q0(z), D1(z), D2(z))`.
pub fn designated_term(m: &NdTmSpec, z: &Term) -> Term {
    ap(
        RUN,
        vec![
            Term::constant(XI),
            un(m.initial, z.clone()),
            ap(DELTA1, vec![z.clone()]),
            ap(DELTA2, vec![z.clone()]),
        ],
    )
}

/// φ of a finite string: a unary nest over `end`.
pub fn phi_finite(symbols: &[Sym]) -> Term {
    Term::word(symbols, end())
}

/// φ of an ω-word: a rational unary term.
pub fn phi_word(w: &OmegaWord) -> Term {
    Term::omega_word(&w.prefix, &w.cycle)
}

/// φ of a configuration: the tape left of the head, the state, then the
/// rest of the tape.
pub fn phi_config(w: &OmegaWord, c: &NdConfig) -> Term {
    let tape = c.tape(w);
    let mut before: Vec<Sym> = (0..c.head).map(|i| tape.at(i)).collect();
    before.push(c.state);
    Term::word(&before, phi_word(&tape.suffix(c.head)))
}

/// A compiled construction ready to be written as a TRS file.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub construction: Construction,
    pub machine: Option<String>,
    pub trs: Trs,
    pub start: Option<Term>,
    pub warnings: Vec<String>,
}

impl Compiled {
    pub fn to_file(&self) -> String {
        let mut header = vec![("construction", self.construction.tag().to_owned())];
        if let Some(m) = &self.machine {
            header.push(("machine", m.clone()));
        }
        if let Some(t) = &self.start {
            header.push(("start", t.to_string()));
        }
        let refs: Vec<(&str, &str)> = header.iter().map(|(k, v)| (*k, v.as_str())).collect();
        print_trs(&self.trs, &refs)
    }
}

/// Compiles `construction` for `machine` (ignored by `pickn`).
pub fn compile(
    construction: Construction,
    machine: Option<&Machine>,
    as_printed: bool,
) -> Result<Compiled> {
    let det = || -> Result<TmSpec> { TmSpec::new(need(machine)?.clone()) };
    let nd = || -> Result<NdTmSpec> { NdTmSpec::new(need(machine)?.clone()) };
    let (trs, start, mut warnings) = match construction {
        Construction::Pickn => (pickn_trs(), Some(Term::constant(PICKN)), Vec::new()),
        Construction::Base => (tm_to_trs(&det()?), None, Vec::new()),
        Construction::Pebbled => {
            let (t, w) = pebble_trs(&det()?)?;
            (t, None, w)
        }
        Construction::S => {
            let (t, s, w) = build_s(&det()?)?;
            (t, Some(s), w)
        }
        Construction::SPrime => {
            let (t, s, w) = build_s_prime(&det()?)?;
            (t, Some(s), w)
        }
        Construction::Srs => (nd_to_srs(&nd()?), None, Vec::new()),
        Construction::R => (build_r(&nd()?, as_printed), None, Vec::new()),
    };
    if as_printed && construction == Construction::R {
        warnings.push(
            "run1 emitted as printed, with D1 in both Δ arguments: its right-hand side matches its own left-hand side"
                .into(),
        );
    }
    Ok(Compiled {
        construction,
        machine: (construction != Construction::Pickn)
            .then(|| machine.map(|m| m.name.clone()))
            .flatten(),
        trs,
        start,
        warnings,
    })
}

fn need(m: Option<&Machine>) -> Result<&Machine> {
    m.ok_or_else(|| Error::Machine("this construction needs a machine file".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_machine;
    use crate::term::{bisim_equal, term};

    fn det(delta: &str) -> TmSpec {
        let text = format!(
            "machine t\nkind det-two-sided\nstates q qq\ninitial q\nblank _\nalphabet _ S 0\n{delta}end\n"
        );
        TmSpec::new(parse_machine(&text).unwrap()).unwrap()
    }

    #[test]
    fn single_right_entry_gives_one_rule() {
        let trs = tm_to_trs(&det("delta q S -> qq 0 R\n"));
        assert_eq!(trs.len(), 1);
        assert_eq!(
            trs.rules()[0].to_string(),
            "R.q.S: q(x, S(y)) -> qq(0(x), y)"
        );
    }

    #[test]
    fn empty_table_gives_empty_system() {
        assert!(tm_to_trs(&det("")).is_empty());
    }

    #[test]
    fn encode_and_decode_configs() {
        let m = det("");
        let c = crate::turing::parse_config(&m, "0 S q 0").unwrap();
        let t = encode_config(&c);
        assert!(bisim_equal(&t, &term("q(S(0(end)), 0(end))")));
        assert_eq!(decode_config(&m, &t).unwrap(), c);
        let empty = decode_config(&m, &term("q(end, end)")).unwrap();
        assert!(empty.left.is_empty() && empty.right.is_empty());
        let err = decode_config(&m, &term("q(S(end), S(T))")).unwrap_err();
        assert!(matches!(err, Error::Decode { ref position, .. } if position.to_string() == "2.1"));
    }

    #[test]
    fn phi_examples() {
        let t = phi_finite(&[Sym::new("a"), Sym::new("b"), Sym::new("q")]);
        assert!(bisim_equal(&t, &term("a(b(q(end)))")));
        let w = crate::omega::parse_word("(a)^w").unwrap();
        assert!(bisim_equal(&phi_word(&w), &term("rec X . a(X)")));
    }
}
