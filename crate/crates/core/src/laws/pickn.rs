//! Checks on pickn and on the run-rule systems built around it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{timed, LawReport};
use crate::encoders::{build_s, build_s_prime, pickn_trs};
use crate::error::Result;
use crate::rewrite::{
    bounded_reach, enumerate_reducts, limit_approximant, Approximant, Bounds, SearchOutcome, Step,
    Trace, Trs,
};
use crate::symbol::names::{C, OK, PEBBLE, PICKN, SUCC, TOP, ZERO};
use crate::symbol::{Sym, CUT};
use crate::term::{bisim_equal, canonical_key, Term, TermKey};
use crate::turing::TmSpec;

const DEPTH_BOUND: usize = 32;

/// Plain breadth-first search (single steps only) for the nearest term
/// satisfying `goal`. Returns the steps, if found, and the number of
/// expanded terms.
pub fn bfs_to(
    trs: &Trs,
    start: &Term,
    depth_bound: usize,
    fuel: usize,
    goal: impl Fn(&Term) -> bool,
) -> (Option<Vec<Step>>, usize) {
    struct Node {
        term: Term,
        parent: Option<(usize, crate::term::Position, usize)>,
    }
    let mut nodes = vec![Node {
        term: start.clone(),
        parent: None,
    }];
    let mut seen: HashMap<TermKey, usize> = HashMap::from([(canonical_key(start), 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    let steps_to = |nodes: &[Node], mut i: usize| {
        let mut out = Vec::new();
        while let Some((p, pos, rule)) = &nodes[i].parent {
            out.push(
                trs.step_with(&nodes[*p].term, pos, *rule)
                    .expect("recorded redex"),
            );
            i = *p;
        }
        out.reverse();
        out
    };
    if goal(start) {
        return (Some(Vec::new()), 0);
    }
    while let Some(i) = queue.pop_front() {
        if expanded >= fuel {
            break;
        }
        expanded += 1;
        let t = nodes[i].term.clone();
        for r in trs.find_redexes(&t, depth_bound) {
            let after = trs.step_with(&t, &r.position, r.rule).expect("redex").after;
            let key = canonical_key(&after);
            if seen.contains_key(&key) {
                continue;
            }
            let hit = goal(&after);
            nodes.push(Node {
                term: after,
                parent: Some((i, r.position.clone(), r.rule)),
            });
            let idx = nodes.len() - 1;
            seen.insert(key, idx);
            if hit {
                return (Some(steps_to(&nodes, idx)), expanded);
            }
            queue.push_back(idx);
        }
    }
    (None, expanded)
}

/// A trace built firing by firing: before each firing, the shortest
/// sequence of steps reaching a run-rule redex.
#[derive(Clone, Debug)]
pub struct GreedyRun {
    pub trace: Trace,
    pub firings: usize,
    pub expanded: usize,
}

/// Fires the rule `run` up to `firings` times, spending at most `fuel`
/// expanded terms on the searches in between. With `extra`, one more step
/// (not of `run` or `loop`) at depth at least the number of firings is
/// appended.
pub fn greedy_firings(
    trs: &Trs,
    start: &Term,
    firings: usize,
    fuel: usize,
    extra: bool,
) -> GreedyRun {
    let run = trs.rule_index("run").expect("system has a run rule");
    let loop_rule = trs.rule_index("loop");
    let mut trace = Trace::new(start.clone());
    let mut cur = start.clone();
    let mut done = 0;
    let mut expanded = 0;
    let has_run = |t: &Term| {
        trs.find_redexes(t, DEPTH_BOUND)
            .iter()
            .any(|r| r.rule == run)
    };
    while done < firings {
        let (steps, used) = bfs_to(trs, &cur, DEPTH_BOUND, fuel - expanded, has_run);
        expanded += used;
        let Some(steps) = steps else { break };
        for s in steps {
            cur = s.after.clone();
            trace.push_step(s);
        }
        let r = trs
            .find_redexes(&cur, DEPTH_BOUND)
            .into_iter()
            .find(|r| r.rule == run)
            .expect("goal term has a run redex");
        let s = trs.step_with(&cur, &r.position, run).expect("redex");
        cur = s.after.clone();
        trace.push_step(s);
        done += 1;
    }
    if extra {
        let deep = trs
            .find_redexes(&cur, DEPTH_BOUND)
            .into_iter()
            .find(|r| r.position.len() >= done && r.rule != run && Some(r.rule) != loop_rule);
        if let Some(r) = deep {
            let s = trs.step_with(&cur, &r.position, r.rule).expect("redex");
            trace.push_step(s);
        }
    }
    GreedyRun {
        trace,
        firings: done,
        expanded,
    }
}

/// `c^k(pickn)` or `c^k(ok(S^j(0(end))))`.
fn pickn_shape(t: &Term) -> bool {
    if !t.is_finite() {
        return false;
    }
    let name = |t: &Term| t.head().name();
    let mut cur = t.clone();
    while name(&cur) == C && cur.arity() == 1 {
        cur = cur.arg(0);
    }
    if name(&cur) == PICKN && cur.arity() == 0 {
        return true;
    }
    if name(&cur) != OK || cur.arity() != 1 {
        return false;
    }
    cur = cur.arg(0);
    while name(&cur) == SUCC && cur.arity() == 1 {
        cur = cur.arg(0);
    }
    name(&cur) == ZERO && cur.arity() == 1 && bisim_equal(&cur.arg(0), &Term::constant("end"))
}

fn numeral(n: usize) -> Term {
    let s = vec![Sym::new(SUCC); n];
    Term::app(
        OK,
        vec![Term::word(&s, Term::app(ZERO, vec![Term::constant("end")]))],
    )
}

/// For every n ≤ `n_max`, the shortest derivation from `pickn` to
/// `ok(S^n(0(end)))` has 2n+1 steps, and every reduct has one of the two
/// shapes `c^k(pickn)`, `c^k(ok(S^j(0(end))))`.
pub fn check_pickn(n_max: usize) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("pickn");
        let trs = pickn_trs();
        let fuel = 4 * (n_max + 2) * (n_max + 2) + 100;
        // c^k(pickn) has its redex at depth k
        let depth = 2 * n_max + 4;
        let reducts = enumerate_reducts(&trs, &Term::constant(PICKN), fuel, depth);
        let dist: HashMap<TermKey, usize> = reducts
            .terms
            .iter()
            .map(|(t, d)| (canonical_key(t), *d))
            .collect();
        if let Some((bad, _)) = reducts.terms.iter().find(|(t, _)| !pickn_shape(t)) {
            report.refute(format!("reduct {bad} has neither shape"));
        }
        for n in 0..=n_max {
            report.samples += 1;
            match dist.get(&canonical_key(&numeral(n))) {
                Some(&d) if d == 2 * n + 1 => {}
                Some(&d) => report.refute(format!(
                    "n = {n}: shortest derivation has {d} steps, expected {}",
                    2 * n + 1
                )),
                None => report.unknown(format!("n = {n} not reached after {fuel} expansions")),
            }
        }
        // the search engine agrees on small n
        for n in 0..=n_max.min(10) {
            let out = bounded_reach(&trs, &Term::constant(PICKN), &numeral(n), Bounds::default());
            match out {
                Ok(SearchOutcome::Found { trace, .. }) => {
                    if trace.step_count() != 2 * n + 1 || trace.closure_count() != 0 {
                        report.refute(format!(
                            "n = {n}: bounded_reach returned {} steps and {} closures",
                            trace.step_count(),
                            trace.closure_count()
                        ));
                    }
                }
                _ => report.unknown(format!("n = {n}: bounded_reach did not reach the numeral")),
            }
        }
        report.note(format!(
            "{} reducts enumerated, all of shape c^k(pickn) or c^k(ok(S^j(0(end))))",
            reducts.terms.len()
        ));
        if report.holds() {
            report.note(format!(
                "shortest derivation lengths 2n+1 confirmed for n <= {n_max}"
            ));
        }
        report
    })
}

fn halt_rules(trs: &Trs) -> usize {
    trs.rules()
        .iter()
        .filter(|r| r.id.starts_with("halt."))
        .count()
}

/// True if some rule's right-hand side contains `T` while its left-hand
/// side does not.
fn produces_top(trs: &Trs) -> bool {
    let top = Sym::new(TOP);
    trs.rules()
        .iter()
        .any(|r| r.rhs.contains_symbol(top) && !r.lhs.contains_symbol(top))
}

/// Breadth-first exploration recording, for every reached term, the number
/// of `run` firings on the path that found it.
fn max_firings(trs: &Trs, start: &Term, fuel: usize) -> (usize, usize, bool) {
    let run = trs.rule_index("run").expect("run rule");
    let mut seen: HashMap<TermKey, usize> = HashMap::from([(canonical_key(start), 0)]);
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    let mut best = 0;
    let mut expanded = 0;
    while let Some((t, f)) = queue.pop_front() {
        if expanded >= fuel {
            return (best, expanded, false);
        }
        expanded += 1;
        for r in trs.find_redexes(&t, DEPTH_BOUND) {
            let after = trs.step_with(&t, &r.position, r.rule).expect("redex").after;
            let firings = f + usize::from(r.rule == run);
            let key = canonical_key(&after);
            match seen.get(&key) {
                Some(&old) if old >= firings => continue,
                _ => {}
            }
            seen.insert(key, firings);
            best = best.max(firings);
            queue.push_back((after, firings));
        }
    }
    (best, expanded, true)
}

/// Over a machine whose pebbled system has halt rules: a trace from
/// `run(T, pickn, pickn)` with at least `firings` run firings within
/// `fuel`. Over a machine without halt rules: nothing produces `T`, and the
/// explored reducts show at most one firing.
pub fn check_run_cycles(m: &TmSpec, firings: usize, fuel: usize) -> Result<LawReport> {
    let (trs, start, _) = build_s(m)?;
    Ok(timed(|| {
        let mut report = LawReport::new("run-cycles");
        report.samples = 1;
        let halts = halt_rules(&trs);
        report.note(format!(
            "machine {}: {} rules, {halts} halt rules",
            m.name,
            trs.len()
        ));
        if halts > 0 {
            let g = greedy_firings(&trs, &start, firings, fuel, false);
            report.note(format!(
                "greedy trace: run firings {}, {} steps, {} terms expanded",
                g.firings,
                g.trace.step_count(),
                g.expanded
            ));
            if let Err(e) = g.trace.replay(&trs) {
                report.refute(format!("greedy trace does not replay: {e}"));
            } else if g.firings < firings {
                report.unknown(format!(
                    "only {} of {firings} firings within fuel {fuel}",
                    g.firings
                ));
            }
        } else {
            if produces_top(&trs) {
                report.unknown("no halt rules, but some rule produces T");
            }
            let (best, expanded, complete) = max_firings(&trs, &start, fuel);
            report.note(format!(
                "no rule produces T; {expanded} terms explored{}, run firings on any explored path: at most {best}",
                if complete { " (exhaustive)" } else { "" }
            ));
            if best > 1 {
                report.refute(format!(
                    "a path with {best} firings exists without halt rules"
                ));
            }
        }
        report
    }))
}

/// The stable outer `peb`-prefix of a greedy trace: the largest `d` such
/// that the depth-`d` approximant is stable and equals `peb^d(cut)`.
fn stable_pebbles(trace: &Trace, max: usize) -> usize {
    (1..=max)
        .rev()
        .find(|&d| match limit_approximant(trace, d) {
            Approximant::Stable(p) => {
                let expected = Term::word(&vec![Sym::new(PEBBLE); d], Term::constant(CUT));
                bisim_equal(&p, &expected)
            }
            Approximant::Unstable(_) => false,
        })
        .unwrap_or(0)
}

/// (a) The greedy trace over the pebble-wrapped run system attains a
/// stable outer pebble prefix of depth at least `firings` (at most 1 when
/// the machine has no halt rules). (b) Dropping the self-loop rule leaves
/// the reducts enumerated within `loop_fuel` unchanged.
pub fn check_pebble_limit(
    m: &TmSpec,
    firings: usize,
    fuel: usize,
    loop_fuel: usize,
) -> Result<LawReport> {
    let (trs, start, _) = build_s_prime(m)?;
    Ok(timed(|| {
        let mut report = LawReport::new("pebble-limit");
        report.samples = 1;
        let halts = halt_rules(&trs);
        let g = greedy_firings(&trs, &start, firings, fuel, true);
        let depth = stable_pebbles(&g.trace, g.firings);
        report.note(format!(
            "greedy trace: run firings {}, {} steps, stable peb-prefix depth {depth}",
            g.firings,
            g.trace.step_count()
        ));
        if let Err(e) = g.trace.replay(&trs) {
            report.refute(format!("greedy trace does not replay: {e}"));
        }
        if halts > 0 {
            if depth < firings {
                report.unknown(format!(
                    "stable depth {depth} below {firings} within fuel {fuel}"
                ));
            }
        } else if depth > 1 {
            report.refute(format!("stable depth {depth} without halt rules"));
        } else {
            report.note("no halt rules: at most one firing, depth at most 1 as expected");
        }

        let without = trs.filtered(|r| r.id == "loop");
        let keys = |t: &Trs| -> BTreeSet<TermKey> {
            enumerate_reducts(t, &start, loop_fuel, DEPTH_BOUND)
                .terms
                .iter()
                .map(|(t, _)| canonical_key(t))
                .collect()
        };
        let (a, b) = (keys(&trs), keys(&without));
        report.note(format!(
            "reducts within {loop_fuel} expansions: {} with the loop rule, {} without",
            a.len(),
            b.len()
        ));
        if a != b {
            report.refute(format!(
                "the loop rule changes the enumerated reducts ({} vs {})",
                a.len(),
                b.len()
            ));
        }
        report
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::fixtures;

    #[test]
    fn pickn_small() {
        let r = check_pickn(5);
        assert!(r.holds(), "{}", r.render());
    }

    #[test]
    fn shapes() {
        assert!(pickn_shape(&crate::term::term("c(c(ok(S(0(end)))))")));
        assert!(pickn_shape(&crate::term::term("pickn")));
        assert!(!pickn_shape(&crate::term::term("ok(c(pickn))")));
    }

    #[test]
    fn run_cycles_without_fuel_are_unknown() {
        let r = check_run_cycles(&fixtures::det("m_acc"), 5, 1).unwrap();
        assert_eq!(r.verdict.name(), "unknown");
    }
}
