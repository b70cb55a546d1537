//! Checks on the one-sided machines: the rewrite system R built from a
//! positive and a negative machine, the limit correspondence for single
//! runs, and lasso classification against visit statistics.

use std::collections::HashMap;

use super::{fixtures, timed, LawReport};
use crate::encoders::{build_r, designated_term, nd_to_srs, phi_word};
use crate::error::{Error, Result};
use crate::omega::{
    classify_run, first_branch_heads, lasso_limit_tape, membership_semidecide, Membership,
    NdTmSpec, OmegaWord, Tri,
};
use crate::rewrite::{
    close_limit, enumerate_reducts, run_strategy, Bounds, SearchOutcome, Searcher, Strategy, Trs,
};
use crate::symbol::names::{BOT, DELTA1, DELTA2, RUN, XI};
use crate::symbol::Sym;
use crate::term::{bisim_equal, Position, Term};

const RUN_FUEL: usize = 1000;
const RUN_WIDTH: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct RConstructionOptions {
    /// Search fuel per corpus term.
    pub fuel: usize,
    pub epochs: usize,
    /// Fuel for the reduct enumerations of the disjointness check.
    pub disjoint_fuel: usize,
    /// Use the first run rule exactly as printed, with `D1` in its last
    /// argument.
    pub as_printed: bool,
}

impl Default for RConstructionOptions {
    fn default() -> Self {
        RConstructionOptions {
            fuel: 10_000,
            epochs: 3,
            disjoint_fuel: 1000,
            as_printed: false,
        }
    }
}

fn un(s: Sym, t: Term) -> Term {
    Term::app(s.name(), vec![t])
}

/// Ground terms over the signature of R(m): leaves `xi`, `bot` and φ of the
/// fixture words; one and two unary wrappers (tape symbols, states, `D1`,
/// `D2`) over leaves; `run` over four leaves, with and without one wrapper;
/// and the designated term for each fixture word.
pub fn r_corpus(m: &NdTmSpec) -> Vec<Term> {
    let words = fixtures::words();
    let mut leaves = vec![Term::constant(XI), Term::constant(BOT)];
    leaves.extend(words.iter().map(phi_word));
    let mut unary: Vec<Sym> = m.alphabet.clone();
    unary.extend(m.states.iter().copied());
    unary.push(Sym::new(DELTA1));
    unary.push(Sym::new(DELTA2));

    let wrap = |ts: &[Term]| -> Vec<Term> {
        unary
            .iter()
            .flat_map(|&u| ts.iter().map(move |t| un(u, t.clone())))
            .collect()
    };
    let once = wrap(&leaves);
    let twice = wrap(&once);
    let mut runs = Vec::new();
    for a in &leaves {
        for b in &leaves {
            for c in &leaves {
                for d in &leaves {
                    runs.push(Term::app(
                        RUN,
                        vec![a.clone(), b.clone(), c.clone(), d.clone()],
                    ));
                }
            }
        }
    }
    let wrapped_runs = wrap(&runs);

    let mut corpus = leaves.clone();
    corpus.extend(once);
    corpus.extend(twice);
    corpus.extend(runs);
    corpus.extend(wrapped_runs);
    corpus.extend(words.iter().map(|w| designated_term(m, &phi_word(w))));
    corpus
}

fn check_fixture_words(m: &NdTmSpec, want_accept: bool) -> Result<()> {
    for w in fixtures::words() {
        let mem = membership_semidecide(m, &w, RUN_FUEL, RUN_WIDTH);
        let ok = match mem {
            Membership::Accepted(_) => want_accept,
            Membership::RejectedExhausted => !want_accept,
            Membership::Unknown => false,
        };
        if !ok {
            return Err(Error::Config(format!(
                "precondition: machine {} on {w} is {}, expected {}",
                m.name,
                mem.name(),
                if want_accept { "accepted" } else { "rejected" }
            )));
        }
    }
    Ok(())
}

fn contains_q_or_bot(m: &NdTmSpec, t: &Term) -> bool {
    t.contains_symbol(Sym::new(BOT)) || m.states.iter().any(|&q| t.contains_symbol(q))
}

/// Positive branch: every corpus term over `mpos` normalizes within the
/// bounds, and the designated terms reach `bot`. Negative branch: the
/// designated term over `mneg` exhausts the search, every reduct of `q0(z)`
/// keeps a state or `bot`, and no reduct of `xi` contains either.
pub fn check_r_construction(
    mpos: &NdTmSpec,
    mneg: &NdTmSpec,
    opts: RConstructionOptions,
) -> Result<LawReport> {
    check_fixture_words(mpos, true)?;
    check_fixture_words(mneg, false)?;
    Ok(timed(|| {
        let mut report = LawReport::new("r-construction");
        let bounds = Bounds {
            fuel: opts.fuel,
            max_epochs: opts.epochs,
            ..Bounds::default()
        };
        let pos = build_r(mpos, opts.as_printed);
        positive_branch(&mut report, mpos, &pos, bounds, opts.as_printed);
        let neg = build_r(mneg, false);
        negative_branch(&mut report, mneg, &neg, bounds, opts.disjoint_fuel);
        report
    }))
}

fn positive_branch(
    report: &mut LawReport,
    m: &NdTmSpec,
    trs: &Trs,
    bounds: Bounds,
    as_printed: bool,
) {
    if as_printed {
        // the first run rule's right-hand side is an instance of its own
        // left-hand side, so it re-enables itself forever
        let rule = trs.rule("run1").expect("run1");
        if let Ok(Some(_)) = trs.match_at(&rule.rhs, &Position::root(), "run1") {
            report.refute(format!(
                "rule {rule} re-enables itself: its right-hand side matches its left-hand side"
            ));
            // run terms with equal Δ arguments now have no normal form; the
            // corpus sweep would only spend its fuel on them
            report.note(format!(
                "{}: corpus not normalized, run1 overlaps itself",
                m.name
            ));
            return;
        }
    }
    let corpus = r_corpus(m);
    let designated: Vec<Term> = fixtures::words()
        .iter()
        .map(|w| designated_term(m, &phi_word(w)))
        .collect();
    let mut searcher = Searcher::new(trs, bounds);
    let mut failures = 0;
    let mut first_failure = None;
    for t in &corpus {
        report.samples += 1;
        match searcher.normalize(t) {
            Ok(SearchOutcome::Found { trace, term }) => {
                if designated.iter().any(|d| bisim_equal(d, t)) {
                    if let Err(e) = trace.replay(trs) {
                        report.refute(format!("normalization of {t} does not replay: {e}"));
                    }
                    if !bisim_equal(&term, &Term::constant(BOT)) {
                        report.refute(format!("designated term {t} normalizes to {term}, not bot"));
                    } else {
                        report.note(format!(
                            "{}: designated term reaches bot in {} steps, {} closures",
                            m.name,
                            trace.step_count(),
                            trace.closure_count()
                        ));
                    }
                }
            }
            _ => {
                failures += 1;
                first_failure.get_or_insert_with(|| t.clone());
            }
        }
    }
    report.note(format!(
        "{}: {} of {} corpus terms normalized",
        m.name,
        corpus.len() - failures,
        corpus.len()
    ));
    if let Some(t) = first_failure {
        report.unknown(format!(
            "{failures} corpus terms not normalized within bounds, first {t}"
        ));
    }
}

fn negative_branch(
    report: &mut LawReport,
    m: &NdTmSpec,
    trs: &Trs,
    bounds: Bounds,
    disjoint_fuel: usize,
) {
    let mut searcher = Searcher::new(trs, bounds);
    for w in fixtures::words() {
        let z = phi_word(&w);
        let t = designated_term(m, &z);
        report.samples += 1;
        match searcher.normalize(&t) {
            Ok(SearchOutcome::Found { term, .. }) => report.refute(format!(
                "{}: designated term on {w} normalizes to {term}",
                m.name
            )),
            Ok(SearchOutcome::Exhausted(d)) => {
                report.note(format!("{}: designated term on {w} exhausted: {d}", m.name))
            }
            Err(e) => report.unknown(format!("search error: {e}")),
        }

        let q0z = un(m.initial, z);
        let from_q = enumerate_reducts(trs, &q0z, disjoint_fuel, bounds.depth_bound);
        if let Some((bad, _)) = from_q.terms.iter().find(|(r, _)| !contains_q_or_bot(m, r)) {
            report.refute(format!(
                "{}: reduct {bad} of q0(z) has no state and no bot",
                m.name
            ));
        }
        let from_xi =
            enumerate_reducts(trs, &Term::constant(XI), disjoint_fuel, bounds.depth_bound);
        if let Some((bad, _)) = from_xi.terms.iter().find(|(r, _)| contains_q_or_bot(m, r)) {
            report.refute(format!("{}: reduct {bad} of xi has a state or bot", m.name));
        }
        report.note(format!(
            "{}: on {w}, {} reducts of q0(z) all keep a state or bot; {} reducts of xi have neither",
            m.name,
            from_q.terms.len(),
            from_xi.terms.len()
        ));
    }
}

#[derive(Clone, Debug)]
pub enum LimitOutcome {
    /// A state-free normal form of `q0(φ(w))`.
    Closed(Term),
    /// The leftmost-outermost run admits no closure.
    NoClosure {
        min_depth_tail: Option<usize>,
    },
    Unsettled,
}

/// For an accepted word, the string system reaches from `q0(φ(w))` a
/// state-free limit equal to φ of the accepting run's limit tape. For a
/// word rejected exhaustively, the leftmost-outermost run never closes
/// (its steps keep coming back to depth ≤ 1) and no state-free normal form
/// is found.
pub fn check_limit_correspondence(
    m: &NdTmSpec,
    w: &OmegaWord,
    fuel: usize,
) -> (LawReport, LimitOutcome) {
    let mut outcome = LimitOutcome::Unsettled;
    let report = timed(|| {
        let mut report = LawReport::new("limit-correspondence");
        report.samples = 1;
        let trs = nd_to_srs(m);
        let start = un(m.initial, phi_word(w));
        let bounds = Bounds {
            fuel,
            ..Bounds::default()
        };
        let state_free = |t: &Term| !m.states.iter().any(|&q| t.contains_symbol(q));
        match membership_semidecide(m, w, RUN_FUEL, RUN_WIDTH) {
            Membership::Accepted(run) => {
                let tape = lasso_limit_tape(w, &run).expect("accepting lasso");
                let expected = phi_word(&tape);
                report.note(format!("{} accepts {w}; limit tape {tape}", m.name));
                let nfs = Searcher::new(&trs, bounds).normal_forms(&start, 8);
                match nfs.iter().find(|(t, _)| state_free(t)) {
                    Some((t, trace)) => {
                        if let Err(e) = trace.replay(&trs) {
                            report.refute(format!("limit trace does not replay: {e}"));
                        }
                        if bisim_equal(t, &expected) {
                            report.note(format!(
                                "closed to {t} in {} steps, {} closures",
                                trace.step_count(),
                                trace.closure_count()
                            ));
                        } else {
                            report
                                .refute(format!("limit {t} differs from φ of the tape {expected}"));
                        }
                        outcome = LimitOutcome::Closed(t.clone());
                    }
                    None => report.unknown("no state-free limit found within fuel"),
                }
            }
            Membership::RejectedExhausted => {
                report.note(format!(
                    "{} rejects {w}: every run stuck or oscillating",
                    m.name
                ));
                let run = run_strategy(
                    &trs,
                    &start,
                    Strategy::LeftmostOutermost,
                    fuel.min(RUN_FUEL),
                    bounds.depth_bound,
                );
                let steps: Vec<_> = run.trace.steps().cloned().collect();
                if steps.is_empty() {
                    report.unknown("the leftmost-outermost run is empty");
                } else {
                    match close_limit(&steps) {
                        Ok((limit, _)) => report.refute(format!("run closes to {limit}")),
                        Err(nc) => {
                            report.note(format!(
                                "no closure after {} steps: {}; min depth in tail {:?}",
                                steps.len(),
                                nc.reason,
                                nc.min_depth_tail
                            ));
                            if nc.min_depth_tail.is_some_and(|d| d > 1) {
                                report.unknown("tail depth above 1");
                            }
                            outcome = LimitOutcome::NoClosure {
                                min_depth_tail: nc.min_depth_tail,
                            };
                        }
                    }
                }
                let nfs = Searcher::new(&trs, bounds).normal_forms(&start, 8);
                if let Some((t, _)) = nfs.iter().find(|(t, _)| state_free(t)) {
                    report.refute(format!("state-free normal form {t} for a rejected word"));
                }
            }
            Membership::Unknown => report.unknown(format!("membership of {w} not settled")),
        }
        report
    });
    (report, outcome)
}

/// Lasso verdicts against visit statistics of a long first-branch prefix:
/// an accepting lasso must drive the head past position 100, an
/// oscillating one must revisit some position more than 100 times.
pub fn check_run_classification(m: &NdTmSpec, w: &OmegaWord, steps: usize) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("run-classification");
        report.samples = 1;
        let heads = first_branch_heads(m, w, steps);
        let max_pos = heads.iter().copied().max().unwrap_or(0);
        let mut visits: HashMap<usize, usize> = HashMap::new();
        for &h in &heads {
            *visits.entry(h).or_default() += 1;
        }
        let max_visits = visits.values().copied().max().unwrap_or(0);
        let complete_candidate = max_pos > 100;
        let oscillating_candidate = max_visits > 100;
        report.note(format!(
            "{} on {w}: {} steps, max position {max_pos}, max visits {max_visits}",
            m.name,
            heads.len() - 1
        ));

        // the first branch of the explored tree is the one replayed above
        let ex = crate::omega::explore_runs(m, w, RUN_FUEL, RUN_WIDTH);
        let Some(run) = ex.runs.iter().find(|r| {
            let n = r.configs.len().min(heads.len());
            r.configs
                .iter()
                .zip(&heads)
                .take(n)
                .all(|(c, &h)| c.head == h)
        }) else {
            report.unknown("first branch not among explored runs");
            return report;
        };
        let class = classify_run(run);
        report.note(format!("lasso verdict: {class}"));
        match (class.accepting, class.oscillating) {
            (Tri::Yes, _) if !complete_candidate => {
                report.refute(format!("accepting lasso but max position only {max_pos}"))
            }
            (_, Tri::Yes) if !oscillating_candidate => report.refute(format!(
                "oscillating lasso but max visits only {max_visits}"
            )),
            (Tri::Unknown, Tri::Unknown) => report.unknown("no lasso on the first branch"),
            _ => {}
        }
        report
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_size() {
        let m = fixtures::nondet("nd_right");
        // 4 leaves, 6 wrappers
        assert_eq!(r_corpus(&m).len(), 4 + 24 + 144 + 256 + 1536 + 2);
    }

    #[test]
    fn limit_correspondence_fixtures() {
        let w = crate::omega::parse_word("(a)^w").unwrap();
        let (r, o) = check_limit_correspondence(&fixtures::nondet("nd_right"), &w, 10_000);
        assert!(r.holds(), "{}", r.render());
        assert!(matches!(o, LimitOutcome::Closed(_)));
        let (r, o) = check_limit_correspondence(&fixtures::nondet("nd_pong"), &w, 10_000);
        assert!(r.holds(), "{}", r.render());
        assert!(matches!(o, LimitOutcome::NoClosure { min_depth_tail: Some(d) } if d <= 1));
    }

    #[test]
    fn classification_fixtures() {
        for name in ["nd_right", "nd_pong"] {
            for w in fixtures::words() {
                let r = check_run_classification(&fixtures::nondet(name), &w, 10_000);
                assert!(r.holds(), "{}", r.render());
            }
        }
    }
}
