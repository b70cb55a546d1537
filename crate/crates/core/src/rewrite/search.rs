//! Bounded search for normal forms and reachability over traces with
//! ω-limit closures.
//!
//! The search is breadth-first over *moves*. A move is one of:
//!
//! - a single rewrite step;
//! - a pump probe: starting with one redex, keep rewriting below it at
//!   non-decreasing depth until a pump certificate closes the epoch;
//! - a join: for a non-left-linear rule whose left-hand side matches except
//!   that the two occurrences of the repeated variable hold different terms,
//!   rewrite both to a common reduct found by a budgeted sub-search.
//!
//! States are memoized modulo bisimulation. Ties are broken by number of
//! closures and then generation order (position, then rule order).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use super::limit::close_limit;
use super::trace::Trace;
use super::{occurrences, Redex, Rule, Trs};
use crate::error::{Error, Result};
use crate::symbol::Sym;
use crate::term::{agreement_depth, canonical_key, Label, Position, Term, TermKey};

const PROBE_STEPS: usize = 40;
const JOIN_NORMAL_FORMS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Maximal number of expanded states.
    pub fuel: usize,
    /// Maximal number of epochs in a trace (closures plus a trailing open
    /// epoch).
    pub max_epochs: usize,
    /// Redexes are looked for at positions of at most this length.
    pub depth_bound: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            fuel: 10_000,
            max_epochs: 4,
            depth_bound: 32,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub expanded: usize,
    pub distinct: usize,
    /// Most moves on any explored path.
    pub max_moves: usize,
    pub max_steps: usize,
    pub max_closures: usize,
    /// Best agreement depth with the target seen (reachability only).
    pub best_agreement: Option<usize>,
    /// True iff the reachable state space was exhausted before the fuel.
    pub space_exhausted: bool,
}

impl std::fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "expanded {} states ({} distinct), max moves {}, max steps {}, max closures {}",
            self.expanded, self.distinct, self.max_moves, self.max_steps, self.max_closures
        )?;
        if let Some(d) = self.best_agreement {
            write!(f, ", best target agreement depth {d}")?;
        }
        if self.space_exhausted {
            write!(f, ", state space exhausted")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { trace: Trace, term: Term },
    Exhausted(Diagnostics),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

enum Goal {
    Normal,
    Reach(Term, TermKey),
}

struct Node {
    term: Term,
    parent: Option<usize>,
    segment: Option<Trace>,
    moves: usize,
    steps: usize,
    closures: usize,
    /// The last epoch holds steps after the last closure.
    open: bool,
}

/// A non-left-linear rule prepared for join moves: the rule with the second
/// occurrence of its repeated variable renamed apart, and the two
/// occurrence positions.
struct JoinRule {
    rule: usize,
    linear: Trs,
    first: Position,
    second: Position,
}

type JoinResult = Option<(Trace, Trace)>;

/// Reusable search context; caches join results across searches over the
/// same system.
pub struct Searcher<'a> {
    trs: &'a Trs,
    pub bounds: Bounds,
    joins_enabled: bool,
    join_rules: Vec<JoinRule>,
    join_cache: HashMap<(TermKey, TermKey), JoinResult>,
    /// Normal forms found by the budgeted enumeration, per join side.
    nf_cache: HashMap<TermKey, Vec<(Term, Trace)>>,
    symbol_cache: HashMap<TermKey, HashSet<Sym>>,
    reach_cache: HashMap<(TermKey, TermKey), Option<Trace>>,
}

fn fresh_var_name(lhs: &Term) -> Sym {
    let vars = lhs.vars();
    (0..)
        .map(|i| Sym::new(&format!("v{i}")))
        .find(|v| !vars.contains(v))
        .unwrap()
}

fn join_rules(trs: &Trs) -> Vec<JoinRule> {
    let mut out = Vec::new();
    for (i, r) in trs.rules().iter().enumerate() {
        let occ = occurrences(&r.lhs);
        let mut repeated: Vec<(Sym, Vec<Position>)> = Vec::new();
        for (v, p) in occ {
            match repeated.iter_mut().find(|(w, _)| *w == v) {
                Some((_, ps)) => ps.push(p),
                None => repeated.push((v, vec![p])),
            }
        }
        let groups: Vec<_> = repeated
            .into_iter()
            .filter(|(_, ps)| ps.len() > 1)
            .collect();
        // only the shape used by the constructions: one variable, twice
        if groups.len() != 1 || groups[0].1.len() != 2 {
            continue;
        }
        let (first, second) = (groups[0].1[0].clone(), groups[0].1[1].clone());
        let fresh = Term::var(fresh_var_name(&r.lhs).name());
        let lhs = r
            .lhs
            .replace_at(&second, &fresh)
            .expect("occurrence position");
        let linear_rule = Rule {
            id: r.id.clone(),
            lhs,
            rhs: r.lhs.clone(),
        };
        let linear = Trs::new(trs.sig.clone(), vec![linear_rule]).expect("same signature");
        out.push(JoinRule {
            rule: i,
            linear,
            first,
            second,
        });
    }
    out
}

/// Symbols that may occur in some reduct of a term containing `start`:
/// closes under the right-hand sides of rules whose left-hand symbols are
/// all present.
fn reachable_symbols(trs: &Trs, start: &Term) -> HashSet<Sym> {
    let mut syms: HashSet<Sym> = start.symbols().into_iter().map(|(s, _)| s).collect();
    loop {
        let mut changed = false;
        for r in trs.rules() {
            if r.lhs.symbols().iter().all(|(s, _)| syms.contains(s)) {
                for (s, _) in r.rhs.symbols() {
                    changed |= syms.insert(s);
                }
            }
        }
        if !changed {
            return syms;
        }
    }
}

impl<'a> Searcher<'a> {
    pub fn new(trs: &'a Trs, bounds: Bounds) -> Self {
        Searcher {
            trs,
            bounds,
            joins_enabled: true,
            join_rules: join_rules(trs),
            join_cache: HashMap::new(),
            nf_cache: HashMap::new(),
            symbol_cache: HashMap::new(),
            reach_cache: HashMap::new(),
        }
    }

    fn sub_searcher(&self, fuel: usize) -> Searcher<'a> {
        Searcher {
            trs: self.trs,
            bounds: Bounds {
                fuel,
                ..self.bounds
            },
            joins_enabled: false,
            join_rules: Vec::new(),
            join_cache: HashMap::new(),
            nf_cache: HashMap::new(),
            symbol_cache: HashMap::new(),
            reach_cache: HashMap::new(),
        }
    }

    pub fn normalize(&mut self, t: &Term) -> Result<SearchOutcome> {
        ensure_ground(t)?;
        let (mut found, diag) = self.run(t, &Goal::Normal, 1);
        Ok(match found.pop() {
            Some((term, trace)) => SearchOutcome::Found { trace, term },
            None => SearchOutcome::Exhausted(diag),
        })
    }

    pub fn reach(&mut self, source: &Term, target: &Term) -> Result<SearchOutcome> {
        ensure_ground(source)?;
        ensure_ground(target)?;
        let goal = Goal::Reach(target.clone(), canonical_key(target));
        let (mut found, diag) = self.run(source, &goal, 1);
        Ok(match found.pop() {
            Some((term, trace)) => SearchOutcome::Found { trace, term },
            None => SearchOutcome::Exhausted(diag),
        })
    }

    /// Up to `limit` distinct normal forms of `t` in search order, with
    /// witnessing traces.
    pub fn normal_forms(&mut self, t: &Term, limit: usize) -> Vec<(Term, Trace)> {
        self.run(t, &Goal::Normal, limit).0
    }

    fn is_goal(&self, goal: &Goal, t: &Term, key: &TermKey) -> bool {
        match goal {
            Goal::Normal => self.trs.is_normal_form(t).unwrap_or(false),
            Goal::Reach(_, k) => k == key,
        }
    }

    fn run(
        &mut self,
        start: &Term,
        goal: &Goal,
        collect: usize,
    ) -> (Vec<(Term, Trace)>, Diagnostics) {
        let mut nodes: Vec<Node> = Vec::new();
        let mut seen: HashSet<TermKey> = HashSet::new();
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
        let mut found: Vec<(Term, Trace)> = Vec::new();
        let mut diag = Diagnostics::default();

        let key = canonical_key(start);
        seen.insert(key.clone());
        nodes.push(Node {
            term: start.clone(),
            parent: None,
            segment: None,
            moves: 0,
            steps: 0,
            closures: 0,
            open: false,
        });
        if self.is_goal(goal, start, &key) {
            found.push((start.clone(), Trace::new(start.clone())));
            if found.len() >= collect {
                diag.distinct = 1;
                return (found, diag);
            }
        }
        heap.push(Reverse((0, 0, 0)));

        while let Some(Reverse((_, _, idx))) = heap.pop() {
            if diag.expanded >= self.bounds.fuel {
                break;
            }
            diag.expanded += 1;
            let children = self.expand(&nodes[idx], goal);
            for (segment, closures, open) in children {
                let term = segment.final_term();
                let key = canonical_key(&term);
                if !seen.insert(key.clone()) {
                    continue;
                }
                let parent = &nodes[idx];
                let node = Node {
                    term: term.clone(),
                    parent: Some(idx),
                    moves: parent.moves + 1,
                    steps: parent.steps + segment.step_count(),
                    closures,
                    open,
                    segment: Some(segment),
                };
                diag.max_moves = diag.max_moves.max(node.moves);
                diag.max_steps = diag.max_steps.max(node.steps);
                diag.max_closures = diag.max_closures.max(node.closures);
                if let Goal::Reach(target, _) = goal {
                    let d = agreement_depth(&term, target);
                    if let Some(d) = d {
                        diag.best_agreement = Some(diag.best_agreement.map_or(d, |b| b.max(d)));
                    }
                }
                let child = nodes.len();
                let priority = (node.moves, node.closures, child);
                nodes.push(node);
                if self.is_goal(goal, &term, &key) {
                    found.push((term, reconstruct(&nodes, child)));
                    if found.len() >= collect {
                        diag.distinct = seen.len();
                        return (found, diag);
                    }
                    // a collected normal form has no successors
                    continue;
                }
                heap.push(Reverse(priority));
            }
        }
        diag.distinct = seen.len();
        diag.space_exhausted = heap.is_empty();
        (found, diag)
    }

    /// Child segments of a state, each with the closure count and open flag
    /// of the resulting trace.
    fn expand(&mut self, node: &Node, goal: &Goal) -> Vec<(Trace, usize, bool)> {
        let t = &node.term;
        let max = self.bounds.max_epochs;
        let redexes = self.trs.find_redexes(t, self.bounds.depth_bound);
        let mut out = Vec::new();
        if node.closures < max {
            for r in &redexes {
                let step = self
                    .trs
                    .step_with(t, &r.position, r.rule)
                    .expect("redex matches");
                let mut seg = Trace::new(t.clone());
                seg.push_step(step);
                out.push((seg, node.closures, true));
            }
        }
        if node.closures + 1 <= max {
            let target = match goal {
                Goal::Reach(target, _) => Some(target),
                Goal::Normal => None,
            };
            for r in &redexes {
                if let Some(seg) = self.probe(t, r, target) {
                    out.push((seg, node.closures + 1, false));
                }
            }
        }
        if self.joins_enabled {
            let changed: Vec<Position> = node
                .segment
                .iter()
                .flat_map(|seg| seg.steps().map(|s| s.position.clone()))
                .collect();
            for seg in self.join_moves(t, &changed) {
                let closures = node.closures + seg.closure_count();
                let last = seg.epochs.last().unwrap();
                let open = if seg.closure_count() == 0 {
                    node.open || seg.step_count() > 0
                } else {
                    last.closure.is_none() && !last.steps.is_empty()
                };
                if closures + usize::from(open) <= max {
                    out.push((seg, closures, open));
                }
            }
        }
        out
    }

    /// Rewrites below the first redex at non-decreasing depth until the
    /// steps end in a certified pump, then closes the epoch.
    fn probe(&self, t: &Term, first: &Redex, target: Option<&Term>) -> Option<Trace> {
        let base = &first.position;
        let target_sub = target.and_then(|tg| tg.subterm_at(base).ok());
        let mut steps = vec![self.trs.step_with(t, base, first.rule).ok()?];
        for _ in 0..PROBE_STEPS {
            if steps.len() >= 2 {
                if let Ok((limit, cert)) = close_limit(&steps) {
                    let mut seg = Trace::new(t.clone());
                    for s in steps {
                        seg.push_step(s);
                    }
                    seg.close_trusted(limit, cert);
                    return Some(seg);
                }
            }
            let last = steps.last().unwrap();
            let cur = last.after.clone();
            let min_len = last.position.len();
            let candidates: Vec<Redex> = self
                .trs
                .find_redexes(&cur, self.bounds.depth_bound)
                .into_iter()
                .filter(|r| base.is_prefix_of(&r.position) && r.position.len() >= min_len)
                .collect();
            let at = candidates
                .iter()
                .map(|r| &r.position)
                .min_by(|a, b| (a.len(), *a).cmp(&(b.len(), *b)))?
                .clone();
            let rules: Vec<usize> = candidates
                .iter()
                .filter(|r| r.position == at)
                .map(|r| r.rule)
                .collect();
            let next = match &target_sub {
                Some(goal) => {
                    let mut best: Option<(usize, crate::rewrite::Step)> = None;
                    for &i in &rules {
                        let s = self.trs.step_with(&cur, &at, i).ok()?;
                        let score = s
                            .after
                            .subterm_at(base)
                            .ok()
                            .map(|sub| agreement_depth(&sub, goal).unwrap_or(usize::MAX))
                            .unwrap_or(0);
                        if best.as_ref().is_none_or(|(b, _)| score > *b) {
                            best = Some((score, s));
                        }
                    }
                    best?.1
                }
                None => {
                    let prefer = self.trs.rule_index(&last.rule_id);
                    let i = rules
                        .iter()
                        .copied()
                        .find(|&i| Some(i) == prefer)
                        .unwrap_or(rules[0]);
                    self.trs.step_with(&cur, &at, i).ok()?
                }
            };
            steps.push(next);
        }
        None
    }

    /// Join moves available in `t`. Sites whose sides were rewritten inside
    /// by the steps at `changed` are skipped: the join attempted at the
    /// ancestor already covered those reducts.
    fn join_moves(&mut self, t: &Term, changed: &[Position]) -> Vec<Trace> {
        if self.join_rules.is_empty() {
            return Vec::new();
        }
        let mut sites: Vec<(Position, usize)> = Vec::new();
        for (p, n) in t.positions_where(self.bounds.depth_bound, &|_| true) {
            let head = match t.node(n).label {
                Label::Fun(s) => s,
                Label::Var(_) => continue,
            };
            for (k, jr) in self.join_rules.iter().enumerate() {
                if self.trs.rules()[jr.rule].lhs.head() != head {
                    continue;
                }
                if jr.linear.match_node(0, t, n).is_some()
                    && self.trs.match_node(jr.rule, t, n).is_none()
                {
                    sites.push((p.clone(), k));
                }
            }
        }
        let mut out = Vec::new();
        for (p, k) in sites {
            let (first, second) = {
                let jr = &self.join_rules[k];
                (p.concat(&jr.first), p.concat(&jr.second))
            };
            if changed
                .iter()
                .any(|c| first.is_prefix_of(c) || second.is_prefix_of(c))
            {
                continue;
            }
            let s1 = t.subterm_at(&first).expect("matched position");
            let s2 = t.subterm_at(&second).expect("matched position");
            if let Some((t1, t2)) = self.join(&s1, &s2) {
                let mut seg = Trace::new(t.clone());
                seg.append_lifted(&t1, &first);
                seg.append_lifted(&t2, &second);
                if seg.step_count() > 0 {
                    out.push(seg);
                }
            }
        }
        out
    }

    /// Traces from `s1` and from `s2` to a common reduct, if the budgeted
    /// sub-searches find one.
    fn join(&mut self, s1: &Term, s2: &Term) -> JoinResult {
        let key = (canonical_key(s1), canonical_key(s2));
        if let Some(hit) = self.join_cache.get(&key) {
            return hit.clone();
        }
        let result = self.join_uncached(s1, s2);
        self.join_cache.insert(key, result.clone());
        result
    }

    fn symbols_from(&mut self, t: &Term, key: &TermKey) -> HashSet<Sym> {
        if let Some(hit) = self.symbol_cache.get(key) {
            return hit.clone();
        }
        let syms = reachable_symbols(self.trs, t);
        self.symbol_cache.insert(key.clone(), syms.clone());
        syms
    }

    fn join_normal_forms(&mut self, t: &Term, key: &TermKey) -> Vec<(Term, Trace)> {
        if let Some(hit) = self.nf_cache.get(key) {
            return hit.clone();
        }
        let fuel = (self.bounds.fuel / 20).max(20);
        let nfs = self.sub_searcher(fuel).normal_forms(t, JOIN_NORMAL_FORMS);
        self.nf_cache.insert(key.clone(), nfs.clone());
        nfs
    }

    fn join_uncached(&mut self, s1: &Term, s2: &Term) -> JoinResult {
        if key_eq(s1, s2) {
            return Some((Trace::new(s1.clone()), Trace::new(s2.clone())));
        }
        let (k1, k2) = (canonical_key(s1), canonical_key(s2));
        let (r1, r2) = (self.symbols_from(s1, &k1), self.symbols_from(s2, &k2));
        // a common reduct is built from symbols reachable from both sides
        if r1.is_disjoint(&r2) {
            return None;
        }
        for (a, ka, b, kb, allowed, flip) in [
            (s1, &k1, s2, &k2, &r1, false),
            (s2, &k2, s1, &k1, &r2, true),
        ] {
            for (u, tb) in self.join_normal_forms(b, kb) {
                if !u.symbols().iter().all(|(s, _)| allowed.contains(s)) {
                    continue;
                }
                if let Some(ta) = self.join_reach(a, ka, &u) {
                    return Some(if flip { (tb, ta) } else { (ta, tb) });
                }
            }
        }
        None
    }

    fn join_reach(&mut self, a: &Term, ka: &TermKey, u: &Term) -> Option<Trace> {
        let key = (ka.clone(), canonical_key(u));
        if let Some(hit) = self.reach_cache.get(&key) {
            return hit.clone();
        }
        let fuel = (self.bounds.fuel / 10).max(50);
        let found = match self.sub_searcher(fuel).reach(a, u) {
            Ok(SearchOutcome::Found { trace, .. }) => Some(trace),
            _ => None,
        };
        self.reach_cache.insert(key, found.clone());
        found
    }
}

fn key_eq(a: &Term, b: &Term) -> bool {
    crate::term::bisim_equal(a, b)
}

fn ensure_ground(t: &Term) -> Result<()> {
    match t.first_var() {
        Some(v) => Err(Error::NotGround(v.name().to_owned())),
        None => Ok(()),
    }
}

fn reconstruct(nodes: &[Node], idx: usize) -> Trace {
    let mut chain = Vec::new();
    let mut cur = Some(idx);
    while let Some(i) = cur {
        chain.push(i);
        cur = nodes[i].parent;
    }
    chain.reverse();
    let mut trace = Trace::new(nodes[chain[0]].term.clone());
    for &i in &chain[1..] {
        if let Some(seg) = &nodes[i].segment {
            trace.append_lifted(seg, &Position::root());
        }
    }
    trace
}

/// Breadth-first normal-form search with the default search moves.
pub fn bounded_normalize(trs: &Trs, t: &Term, bounds: Bounds) -> Result<SearchOutcome> {
    Searcher::new(trs, bounds).normalize(t)
}

/// Breadth-first search for a trace from `source` to a term bisimilar to
/// `target`.
pub fn bounded_reach(
    trs: &Trs,
    source: &Term,
    target: &Term,
    bounds: Bounds,
) -> Result<SearchOutcome> {
    Searcher::new(trs, bounds).reach(source, target)
}

/// One-step reducts of `t` within the depth bound, in redex order.
pub fn successors(trs: &Trs, t: &Term, depth_bound: usize) -> Vec<(Redex, Term)> {
    trs.find_redexes(t, depth_bound)
        .into_iter()
        .map(|r| {
            let after = trs.contract(t, &r.position, r.rule).expect("redex matches");
            (r, after)
        })
        .collect()
}

/// Plain breadth-first enumeration of finite-step reducts (no closures):
/// every distinct reduct found with its distance from `t`. Stops after
/// expanding `fuel` terms; `complete` is true iff the reduct set was
/// exhausted first.
#[derive(Clone, Debug)]
pub struct Reducts {
    pub terms: Vec<(Term, usize)>,
    pub complete: bool,
}

pub fn enumerate_reducts(trs: &Trs, t: &Term, fuel: usize, depth_bound: usize) -> Reducts {
    let mut seen: HashSet<TermKey> = HashSet::new();
    let mut terms = vec![(t.clone(), 0)];
    let mut queue = VecDeque::from([0usize]);
    seen.insert(canonical_key(t));
    let mut expanded = 0;
    while let Some(i) = queue.pop_front() {
        if expanded >= fuel {
            return Reducts {
                terms,
                complete: false,
            };
        }
        expanded += 1;
        let (cur, d) = terms[i].clone();
        for (_, next) in successors(trs, &cur, depth_bound) {
            if seen.insert(canonical_key(&next)) {
                terms.push((next, d + 1));
                queue.push_back(terms.len() - 1);
            }
        }
    }
    Reducts {
        terms,
        complete: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Signature;
    use crate::term::{bisim_equal, parse_pattern, term};

    fn system(sig: &Signature, rules: &[(&str, &str, &str)]) -> Trs {
        let rules = rules
            .iter()
            .map(|(id, l, r)| {
                Rule::new(
                    *id,
                    parse_pattern(l, sig).unwrap(),
                    parse_pattern(r, sig).unwrap(),
                )
                .unwrap()
            })
            .collect();
        Trs::new(sig.clone(), rules).unwrap()
    }

    fn pickn() -> Trs {
        let sig = Signature::new()
            .with("pickn", 0)
            .with("c", 1)
            .with("ok", 1)
            .with("S", 1)
            .with("0", 1)
            .with("end", 0);
        system(
            &sig,
            &[
                ("pickn.wrap", "pickn", "c(pickn)"),
                ("pickn.ok", "pickn", "ok(0(end))"),
                ("c.ok", "c(ok(x))", "ok(S(x))"),
            ],
        )
    }

    #[test]
    fn pickn_normalizes_in_one_step() {
        let out = bounded_normalize(
            &pickn(),
            &term("pickn"),
            Bounds {
                fuel: 10,
                ..Bounds::default()
            },
        )
        .unwrap();
        match out {
            SearchOutcome::Found { trace, term: nf } => {
                assert_eq!(trace.step_count(), 1);
                assert!(bisim_equal(&nf, &term("ok(0(end))")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pickn_reach_is_shortest() {
        let out = bounded_reach(
            &pickn(),
            &term("pickn"),
            &term("ok(S(S(S(0(end)))))"),
            Bounds {
                fuel: 50,
                ..Bounds::default()
            },
        )
        .unwrap();
        match out {
            SearchOutcome::Found { trace, .. } => {
                assert_eq!(trace.step_count(), 7);
                trace.replay(&pickn()).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reach_is_reflexive() {
        let out =
            bounded_reach(&pickn(), &term("pickn"), &term("pickn"), Bounds::default()).unwrap();
        match out {
            SearchOutcome::Found { trace, .. } => assert_eq!(trace.step_count(), 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn probe_closes_xi_to_rational_limit() {
        let sig = Signature::new()
            .with("xi", 0)
            .with("a", 1)
            .with("f", 2)
            .with("bot", 0);
        let trs = system(&sig, &[("xi.a", "xi", "a(xi)"), ("eq", "f(x, x)", "bot")]);
        let out = bounded_normalize(&trs, &term("f(xi, rec X . a(X))"), Bounds::default()).unwrap();
        match out {
            SearchOutcome::Found { trace, term: nf } => {
                assert!(bisim_equal(&nf, &term("bot")));
                assert_eq!(trace.closure_count(), 1);
                trace.replay(&trs).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn enumerate_reducts_reports_distances() {
        let r = enumerate_reducts(&pickn(), &term("pickn"), 40, 32);
        let target = term("ok(S(0(end)))");
        let d = r
            .terms
            .iter()
            .find(|(t, _)| bisim_equal(t, &target))
            .map(|(_, d)| *d);
        assert_eq!(d, Some(3));
        assert!(!r.complete);
    }
}
