//! First-order rewriting on rational terms.
//!
//! Matching walks the (finite) left-hand side against the term graph, so a
//! pattern can match across a cycle. Repeated variables are compared by
//! bisimulation.

mod file;
mod limit;
mod search;
mod trace;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symbol::{Signature, Sym, CUT};
use crate::term::{bisim_equal, splice_instance, Label, Position, Term};

pub use file::{parse_trs, print_trs, same_system, TrsFile};
pub use limit::{
    close_limit, limit_approximant, validate_closure, Approximant, NoClosure, PumpCertificate,
};
pub use search::{
    bounded_normalize, bounded_reach, enumerate_reducts, successors, Bounds, Diagnostics, Reducts,
    SearchOutcome, Searcher,
};
pub use trace::{Closure, Epoch, Step, Trace};

/// A rewrite rule `lhs -> rhs`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub id: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(id: impl Into<String>, lhs: Term, rhs: Term) -> Result<Rule> {
        let id = id.into();
        let invalid = |message: &str| Error::InvalidRule {
            rule: id.clone(),
            message: message.to_owned(),
        };
        if lhs.label().is_var() {
            return Err(invalid("left-hand side is a variable"));
        }
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(invalid("rule sides must be finite patterns"));
        }
        let lvars = lhs.vars();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lvars.contains(v)) {
            return Err(invalid(&format!(
                "variable `{v}` does not occur on the left"
            )));
        }
        Ok(Rule { id, lhs, rhs })
    }

    /// True iff some variable occurs more than once in the left-hand side.
    pub fn is_left_linear(&self) -> bool {
        let mut seen = Vec::new();
        !occurrences(&self.lhs).into_iter().any(|(v, _)| {
            if seen.contains(&v) {
                true
            } else {
                seen.push(v);
                false
            }
        })
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} -> {}", self.id, self.lhs, self.rhs)
    }
}

/// Variable occurrences of a finite pattern with their positions, left to
/// right.
pub(crate) fn occurrences(pattern: &Term) -> Vec<(Sym, Position)> {
    fn go(t: &Term, n: u32, path: &mut Vec<u32>, out: &mut Vec<(Sym, Position)>) {
        let node = t.node(n);
        if let Label::Var(v) = node.label {
            out.push((v, Position(path.clone())));
        }
        for (i, &c) in node.children.iter().enumerate() {
            path.push(i as u32 + 1);
            go(t, c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(pattern, pattern.root, &mut Vec::new(), &mut out);
    out
}

/// An ordered rule list over a signature.
#[derive(Clone, Debug)]
pub struct Trs {
    pub sig: Signature,
    rules: Vec<Rule>,
    by_head: HashMap<Sym, Vec<usize>>,
}

/// A redex: rule index into [`Trs::rules`] and the position it matches at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: Position,
    pub rule: usize,
}

pub type Substitution = HashMap<Sym, Term>;

impl Trs {
    pub fn new(sig: Signature, rules: Vec<Rule>) -> Result<Trs> {
        for r in &rules {
            for side in [&r.lhs, &r.rhs] {
                for (s, arity) in side.symbols() {
                    match sig.arity(s) {
                        Some(a) if a == arity => {}
                        Some(a) => {
                            return Err(Error::Arity {
                                name: s.name().to_owned(),
                                expected: a,
                                found: arity,
                            })
                        }
                        None => return Err(Error::UnknownSymbol(s.name().to_owned())),
                    }
                }
            }
        }
        let mut ids = std::collections::HashSet::new();
        for r in &rules {
            if !ids.insert(r.id.as_str()) {
                return Err(Error::InvalidRule {
                    rule: r.id.clone(),
                    message: "duplicate rule id".into(),
                });
            }
        }
        let mut by_head: HashMap<Sym, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_head.entry(r.lhs.head()).or_default().push(i);
        }
        Ok(Trs {
            sig,
            rules,
            by_head,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rule_index(id).map(|i| &self.rules[i])
    }

    /// The same system without the rules for which `drop` holds.
    pub fn filtered(&self, drop: impl Fn(&Rule) -> bool) -> Trs {
        let rules = self.rules.iter().filter(|r| !drop(r)).cloned().collect();
        Trs::new(self.sig.clone(), rules).expect("subset of a valid system")
    }

    /// The same system with `rule` replaced (or appended if its id is new).
    pub fn with_rule(&self, rule: Rule) -> Result<Trs> {
        let mut rules = self.rules.clone();
        match rules.iter().position(|r| r.id == rule.id) {
            Some(i) => rules[i] = rule,
            None => rules.push(rule),
        }
        Trs::new(self.sig.clone(), rules)
    }

    pub(crate) fn rules_for(&self, head: Sym) -> &[usize] {
        self.by_head.get(&head).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Matches rule `i` at node `n` of `t`, returning variable bindings to
    /// nodes of `t`'s arena.
    pub(crate) fn match_node(&self, i: usize, t: &Term, n: u32) -> Option<Vec<(Sym, u32)>> {
        let lhs = &self.rules[i].lhs;
        let mut bindings = Vec::new();
        if match_rec(lhs, lhs.root, t, n, &mut bindings) {
            Some(bindings)
        } else {
            None
        }
    }

    /// Rule indices matching at node `n`, in rule order.
    pub(crate) fn matching_rules(&self, t: &Term, n: u32) -> Vec<usize> {
        let head = match t.node(n).label {
            Label::Fun(s) => s,
            Label::Var(_) => return Vec::new(),
        };
        self.rules_for(head)
            .iter()
            .copied()
            .filter(|&i| self.match_node(i, t, n).is_some())
            .collect()
    }

    /// Node ids of `t` from which some node with a matching rule is
    /// reachable.
    fn live_nodes(&self, t: &Term) -> (Vec<bool>, HashMap<u32, Vec<usize>>) {
        let order = t.reachable();
        let mut matches = HashMap::new();
        let mut live = vec![false; t.nodes.len()];
        for &n in &order {
            let m = self.matching_rules(t, n);
            if !m.is_empty() {
                live[n as usize] = true;
                matches.insert(n, m);
            }
        }
        // propagate liveness to ancestors until stable; `order` is a
        // preorder, so one reverse pass settles every tree edge
        loop {
            let mut changed = false;
            for &n in order.iter().rev() {
                if !live[n as usize] && t.node(n).children.iter().any(|&c| live[c as usize]) {
                    live[n as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (live, matches)
    }

    /// All redexes at positions of length at most `depth_bound`, ordered by
    /// position (lexicographic) and then rule order.
    pub fn find_redexes(&self, t: &Term, depth_bound: usize) -> Vec<Redex> {
        let (live, matches) = self.live_nodes(t);
        let mut out = Vec::new();
        for (position, n) in t.positions_where(depth_bound, &|n| live[n as usize]) {
            if let Some(rules) = matches.get(&n) {
                for &rule in rules {
                    out.push(Redex {
                        position: position.clone(),
                        rule,
                    });
                }
            }
        }
        out
    }

    /// The instantiated contractum for rule `i` at `p`, as the whole term
    /// after the step.
    pub(crate) fn contract(&self, t: &Term, p: &Position, i: usize) -> Result<Term> {
        let path = t.path_nodes(p)?;
        let n = *path.last().unwrap();
        let bindings = self.match_node(i, t, n).ok_or_else(|| Error::NoMatch {
            rule: self.rules[i].id.clone(),
            position: p.clone(),
        })?;
        splice_instance(t, p, &self.rules[i].rhs, &bindings)
    }

    /// One rewrite step with the rule named `rule_id` at `p`.
    pub fn apply_step(&self, t: &Term, p: &Position, rule_id: &str) -> Result<Step> {
        let i = self
            .rule_index(rule_id)
            .ok_or_else(|| Error::UnknownRule(rule_id.to_owned()))?;
        self.step_with(t, p, i)
    }

    pub(crate) fn step_with(&self, t: &Term, p: &Position, i: usize) -> Result<Step> {
        let after = self.contract(t, p, i)?;
        Ok(Step {
            position: p.clone(),
            rule_id: self.rules[i].id.clone(),
            before: t.clone(),
            after,
        })
    }

    /// The substitution under which rule `rule_id` matches at `p`.
    pub fn match_at(&self, t: &Term, p: &Position, rule_id: &str) -> Result<Option<Substitution>> {
        let i = self
            .rule_index(rule_id)
            .ok_or_else(|| Error::UnknownRule(rule_id.to_owned()))?;
        let sub = t.subterm_at(p)?;
        Ok(self.match_node(i, &sub, sub.root).map(|b| {
            b.into_iter()
                .map(|(v, n)| (v, sub.at_node(n)))
                .collect::<Substitution>()
        }))
    }

    /// True iff no rule matches at any node of the ground term `t`.
    pub fn is_normal_form(&self, t: &Term) -> Result<bool> {
        if let Some(v) = t.first_var() {
            return Err(Error::NotGround(v.name().to_owned()));
        }
        Ok(t.reachable()
            .into_iter()
            .all(|n| self.matching_rules(t, n).is_empty()))
    }

    /// Symbols occurring in the system, with `cut` excluded.
    pub fn used_symbols(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = Vec::new();
        for r in &self.rules {
            for side in [&r.lhs, &r.rhs] {
                for (s, _) in side.symbols() {
                    if !out.contains(&s) && s.name() != CUT {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

fn match_rec(p: &Term, pn: u32, t: &Term, tn: u32, bindings: &mut Vec<(Sym, u32)>) -> bool {
    let pnode = p.node(pn);
    match pnode.label {
        Label::Var(v) => {
            if let Some(&(_, bound)) = bindings.iter().find(|(w, _)| *w == v) {
                bound == tn || bisim_equal(&t.at_node(bound), &t.at_node(tn))
            } else {
                bindings.push((v, tn));
                true
            }
        }
        Label::Fun(_) => {
            let tnode = t.node(tn);
            tnode.label == pnode.label
                && tnode.children.len() == pnode.children.len()
                && pnode
                    .children
                    .iter()
                    .zip(tnode.children.iter())
                    .all(|(&pc, &tc)| match_rec(p, pc, t, tc, bindings))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    Random(u64),
}

/// Result of [`run_strategy`]: a single-epoch trace and whether fuel ran out
/// before a normal form (within the depth bound) was reached.
#[derive(Clone, Debug)]
pub struct StrategyRun {
    pub trace: Trace,
    pub fuel_exhausted: bool,
}

pub fn run_strategy(
    trs: &Trs,
    t: &Term,
    strategy: Strategy,
    fuel: usize,
    depth_bound: usize,
) -> StrategyRun {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut trace = Trace::new(t.clone());
    let mut cur = t.clone();
    for _ in 0..fuel {
        let redexes = trs.find_redexes(&cur, depth_bound);
        let chosen = match rng.as_mut() {
            None => redexes.first(),
            Some(rng) => redexes.choose(rng),
        };
        let Some(r) = chosen else {
            return StrategyRun {
                trace,
                fuel_exhausted: false,
            };
        };
        let step = trs
            .step_with(&cur, &r.position, r.rule)
            .expect("redex from find_redexes matches");
        cur = step.after.clone();
        trace.push_step(step);
    }
    let fuel_exhausted = !trs.find_redexes(&cur, depth_bound).is_empty();
    StrategyRun {
        trace,
        fuel_exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_pattern, term};

    fn pickn() -> Trs {
        let sig = Signature::new()
            .with("pickn", 0)
            .with("c", 1)
            .with("ok", 1)
            .with("S", 1)
            .with("0", 1)
            .with("end", 0);
        let rule = |id: &str, l: &str, r: &str| {
            Rule::new(
                id,
                parse_pattern(l, &sig).unwrap(),
                parse_pattern(r, &sig).unwrap(),
            )
            .unwrap()
        };
        let rules = vec![
            rule("pickn.wrap", "pickn", "c(pickn)"),
            rule("pickn.ok", "pickn", "ok(0(end))"),
            rule("c.ok", "c(ok(x))", "ok(S(x))"),
        ];
        Trs::new(sig, rules).unwrap()
    }

    #[test]
    fn redexes_in_position_then_rule_order() {
        let trs = pickn();
        let rs = trs.find_redexes(&term("pickn"), 0);
        assert_eq!(rs.len(), 2);
        assert_eq!(trs.rules()[rs[0].rule].id, "pickn.wrap");
        assert_eq!(trs.rules()[rs[1].rule].id, "pickn.ok");
        let rs = trs.find_redexes(&term("c(c(pickn))"), 1);
        assert!(rs.is_empty());
        assert_eq!(trs.find_redexes(&term("c(c(pickn))"), 2).len(), 2);
    }

    #[test]
    fn apply_step_reports_no_match_separately() {
        let trs = pickn();
        let s = trs
            .apply_step(&term("c(ok(0(end)))"), &Position::root(), "c.ok")
            .unwrap();
        assert!(bisim_equal(&s.after, &term("ok(S(0(end)))")));
        assert!(matches!(
            trs.apply_step(&term("c(pickn)"), &Position::root(), "c.ok"),
            Err(Error::NoMatch { .. })
        ));
        assert!(matches!(
            trs.apply_step(&term("c(pickn)"), &vec![2].into(), "c.ok"),
            Err(Error::InvalidPosition(_))
        ));
        assert!(matches!(
            trs.apply_step(&term("c(pickn)"), &Position::root(), "nope"),
            Err(Error::UnknownRule(_))
        ));
    }

    #[test]
    fn leftmost_outermost_run() {
        let trs = pickn();
        let run = run_strategy(&trs, &term("pickn"), Strategy::LeftmostOutermost, 3, 32);
        assert!(run.fuel_exhausted);
        assert_eq!(run.trace.step_count(), 3);
        assert!(bisim_equal(
            &run.trace.final_term(),
            &term("c(c(c(pickn)))")
        ));
        let nf = run_strategy(
            &trs,
            &term("ok(0(end))"),
            Strategy::LeftmostOutermost,
            100,
            32,
        );
        assert_eq!(nf.trace.step_count(), 0);
        assert!(!nf.fuel_exhausted);
    }

    #[test]
    fn non_left_linear_match_uses_bisimulation() {
        let sig = Signature::new().with("f", 2).with("a", 1).with("bot", 0);
        let lhs = parse_pattern("f(x, x)", &sig).unwrap();
        let rule = Rule::new("eq", lhs, term("bot")).unwrap();
        assert!(!rule.is_left_linear());
        let trs = Trs::new(sig, vec![rule]).unwrap();
        let t = term("f(rec X . a(X), a(rec Y . a(a(Y))))");
        assert_eq!(trs.find_redexes(&t, 0).len(), 1);
        assert!(trs.is_normal_form(&term("f(a(bot), bot)")).unwrap());
    }

    #[test]
    fn normal_form_requires_ground_input() {
        let trs = pickn();
        let sig = trs.sig.clone();
        let open = parse_pattern("c(x)", &sig).unwrap();
        assert_eq!(trs.is_normal_form(&open), Err(Error::NotGround("x".into())));
        assert!(!trs.is_normal_form(&term("pickn")).unwrap());
    }
}
