//! Deterministic two-sided Turing machines: stepping, halting, and the
//! function and relation a machine computes.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::machine::{Kind, Machine, Move};
use crate::symbol::names::{SUCC, ZERO};
use crate::symbol::Sym;

/// A deterministic two-sided machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec(Machine);

impl TmSpec {
    pub fn new(m: Machine) -> Result<TmSpec> {
        if m.kind != Kind::DetTwoSided {
            return Err(Error::WrongKind {
                expected: Kind::DetTwoSided.name().into(),
                found: m.kind.name().into(),
            });
        }
        Ok(TmSpec(m))
    }

    pub fn machine(&self) -> &Machine {
        &self.0
    }

    /// The table entry for `(q, f)`, if any.
    pub fn delta(&self, q: Sym, f: Sym) -> Option<(Sym, Sym, Move)> {
        self.0
            .transitions(q, f)
            .next()
            .map(|t| (t.next, t.write, t.mv))
    }
}

impl Deref for TmSpec {
    type Target = Machine;
    fn deref(&self) -> &Machine {
        &self.0
    }
}

/// Configuration `w1^{-1} q w2` with finite carrier: `left` is the tape to
/// the left of the head, nearest cell first; `right` starts at the head.
/// Trailing blanks (far from the head) are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmConfig {
    pub left: Vec<Sym>,
    pub state: Sym,
    pub right: Vec<Sym>,
}

fn trim(v: &mut Vec<Sym>, blank: Sym) {
    while v.last() == Some(&blank) {
        v.pop();
    }
}

impl TmConfig {
    pub fn new(left: Vec<Sym>, state: Sym, right: Vec<Sym>, blank: Sym) -> TmConfig {
        let mut c = TmConfig { left, state, right };
        c.canonicalize(blank);
        c
    }

    pub fn canonicalize(&mut self, blank: Sym) {
        trim(&mut self.left, blank);
        trim(&mut self.right, blank);
    }

    pub fn head(&self, blank: Sym) -> Sym {
        self.right.first().copied().unwrap_or(blank)
    }
}

/// Display order `w1^{-1} q w2`: leftmost cell first.
impl fmt::Display for TmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens: Vec<&str> = self.left.iter().rev().map(|s| s.name()).collect();
        tokens.push(self.state.name());
        tokens.extend(self.right.iter().map(|s| s.name()));
        f.write_str(&tokens.join(" "))
    }
}

/// Parses `0 S S q0 S 0`: whitespace-separated symbols with exactly one
/// state token.
pub fn parse_config(m: &Machine, text: &str) -> Result<TmConfig> {
    let tokens: Vec<Sym> = text.split_whitespace().map(Sym::new).collect();
    let states: Vec<usize> = (0..tokens.len())
        .filter(|&i| m.is_state(tokens[i]))
        .collect();
    let [at] = states[..] else {
        return Err(Error::Config(format!(
            "expected exactly one state token, found {}",
            states.len()
        )));
    };
    if let Some(bad) = tokens
        .iter()
        .enumerate()
        .find(|&(i, s)| i != at && !m.is_tape_symbol(*s))
    {
        return Err(Error::Config(format!(
            "`{}` is neither a state nor a tape symbol",
            bad.1
        )));
    }
    let left = tokens[..at].iter().rev().copied().collect();
    let right = tokens[at + 1..].to_vec();
    Ok(TmConfig::new(left, tokens[at], right, m.blank))
}

pub fn tm_step(m: &TmSpec, c: &TmConfig) -> Option<TmConfig> {
    let head = c.head(m.blank);
    let (next, write, mv) = m.delta(c.state, head)?;
    let rest = c.right.get(1..).unwrap_or(&[]);
    let (left, right) = match mv {
        Move::R => {
            let mut left = Vec::with_capacity(c.left.len() + 1);
            left.push(write);
            left.extend_from_slice(&c.left);
            (left, rest.to_vec())
        }
        Move::L => {
            let g = c.left.first().copied().unwrap_or(m.blank);
            let left = c.left.get(1..).unwrap_or(&[]).to_vec();
            let mut right = Vec::with_capacity(rest.len() + 2);
            right.push(g);
            right.push(write);
            right.extend_from_slice(rest);
            (left, right)
        }
    };
    Some(TmConfig::new(left, next, right, m.blank))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TmOutcome {
    Final { config: TmConfig, steps: usize },
    Timeout { config: TmConfig, steps: usize },
}

impl TmOutcome {
    pub fn config(&self) -> &TmConfig {
        match self {
            TmOutcome::Final { config, .. } | TmOutcome::Timeout { config, .. } => config,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            TmOutcome::Final { steps, .. } | TmOutcome::Timeout { steps, .. } => *steps,
        }
    }
}

/// Runs at most `fuel` steps; the visited configurations are passed to
/// `visit` (including the start).
pub fn tm_run(
    m: &TmSpec,
    c: &TmConfig,
    fuel: usize,
    mut visit: impl FnMut(&TmConfig),
) -> TmOutcome {
    let mut cur = c.clone();
    visit(&cur);
    for steps in 0..fuel {
        match tm_step(m, &cur) {
            Some(next) => {
                cur = next;
                visit(&cur);
            }
            None => return TmOutcome::Final { config: cur, steps },
        }
    }
    if tm_step(m, &cur).is_none() {
        TmOutcome::Final {
            config: cur,
            steps: fuel,
        }
    } else {
        TmOutcome::Timeout {
            config: cur,
            steps: fuel,
        }
    }
}

pub fn tm_final(m: &TmSpec, c: &TmConfig, fuel: usize) -> TmOutcome {
    tm_run(m, c, fuel, |_| {})
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunValue {
    Value(usize),
    Undefined,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelVerdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for RelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelVerdict::Holds => "holds",
            RelVerdict::Fails => "fails",
            RelVerdict::Unknown => "unknown",
        })
    }
}

fn numerals(m: &TmSpec) -> Result<(Sym, Sym)> {
    if !m.has_symbol(SUCC) || !m.has_symbol(ZERO) {
        return Err(Error::Machine(format!(
            "machine `{}` needs tape symbols {SUCC} and {ZERO}",
            m.name
        )));
    }
    Ok((Sym::new(SUCC), Sym::new(ZERO)))
}

/// Start configuration `q0 S^n 0` with empty left side.
pub fn fun_input(m: &TmSpec, n: usize) -> Result<TmConfig> {
    let (s, z) = numerals(m)?;
    let mut right = vec![s; n];
    right.push(z);
    Ok(TmConfig::new(Vec::new(), m.initial, right, m.blank))
}

/// Start configuration `0 S^n q0 S^k 0`.
pub fn rel_input(m: &TmSpec, n: usize, k: usize) -> Result<TmConfig> {
    let (s, z) = numerals(m)?;
    let mut left = vec![s; n];
    left.push(z);
    let mut right = vec![s; k];
    right.push(z);
    Ok(TmConfig::new(left, m.initial, right, m.blank))
}

/// The value read at the head of a final configuration: the length of the
/// maximal run of `S`, which must be followed by `0`.
pub fn decode_value(c: &TmConfig, blank: Sym) -> Option<usize> {
    let s = Sym::new(SUCC);
    let z = Sym::new(ZERO);
    let run = c.right.iter().take_while(|&&x| x == s).count();
    (c.right.get(run).copied().unwrap_or(blank) == z).then_some(run)
}

pub fn eval_fun(m: &TmSpec, n: usize, fuel: usize) -> Result<FunValue> {
    let start = fun_input(m, n)?;
    Ok(match tm_final(m, &start, fuel) {
        TmOutcome::Final { config, .. } => match decode_value(&config, m.blank) {
            Some(v) => FunValue::Value(v),
            None => FunValue::Undefined,
        },
        TmOutcome::Timeout { .. } => FunValue::Unknown,
    })
}

pub fn eval_rel(m: &TmSpec, n: usize, k: usize, fuel: usize) -> Result<RelVerdict> {
    let start = rel_input(m, n, k)?;
    Ok(match tm_final(m, &start, fuel) {
        TmOutcome::Final { config, .. } => {
            if config.head(m.blank) == Sym::new(ZERO) {
                RelVerdict::Holds
            } else {
                RelVerdict::Fails
            }
        }
        TmOutcome::Timeout { .. } => RelVerdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_machine;

    fn machine(delta: &str) -> TmSpec {
        let text = format!(
            "machine t\nkind det-two-sided\nstates q0 q1 qa\ninitial q0\nblank _\nalphabet _ S 0\n{delta}end\n"
        );
        TmSpec::new(parse_machine(&text).unwrap()).unwrap()
    }

    #[test]
    fn right_move_pushes_onto_left() {
        let m = machine("delta q0 S -> q0 S R\n");
        let c = parse_config(&m, "q0 S 0").unwrap();
        let next = tm_step(&m, &c).unwrap();
        assert_eq!(next.to_string(), "S q0 0");
    }

    #[test]
    fn blank_writes_at_the_edge_are_trimmed() {
        let m = machine("delta q1 _ -> qa _ L\n");
        let c = parse_config(&m, "S 0 q1").unwrap();
        let next = tm_step(&m, &c).unwrap();
        assert_eq!(next.left, vec![Sym::new("S")]);
        assert_eq!(next.right, vec![Sym::new("0")]);
        assert_eq!(next.state, Sym::new("qa"));
    }

    #[test]
    fn timeout_is_distinct_from_final() {
        let m = machine("delta q0 _ -> q0 _ R\n");
        let c = parse_config(&m, "q0").unwrap();
        assert!(matches!(
            tm_final(&m, &c, 10),
            TmOutcome::Timeout { steps: 10, .. }
        ));
        assert_eq!(eval_fun(&m, 0, 100).unwrap(), FunValue::Value(0));
    }

    #[test]
    fn config_display_round_trips() {
        let m = machine("");
        for s in ["0 S S q0 S 0", "q0", "S _ q1 _ 0"] {
            assert_eq!(parse_config(&m, s).unwrap().to_string(), s);
        }
        assert!(parse_config(&m, "S 0").is_err());
        assert!(parse_config(&m, "q0 q1").is_err());
    }
}
