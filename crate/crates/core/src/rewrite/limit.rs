//! ω-limit closure of a step list by pump certificates.
//!
//! A pump is a block of `L` steps, repeated `r ≥ 2` times at the end of the
//! list, where iteration `k` performs the same rules at positions
//! `P·o^k·r_j` for a fixed base `P`, nonempty offset `o` and relative
//! positions `r_j`, and the subterm at `P·o^k` before iteration `k` is the
//! same (up to bisimulation) for every `k`. Then the block can be repeated
//! forever, the step depths tend to infinity, and the limit is the start of
//! the pump with the subterm at `P` replaced by `rec X . G[X]`, where `G` is
//! the context one iteration wraps around the hole `o`.

use super::trace::{Step, Trace};
use crate::term::{bisim_equal, close_cycle, Position, Term};

const MAX_CYCLE: usize = 8;
const WINDOW: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpCertificate {
    /// Index (within the epoch) of the first step of the first iteration.
    pub cycle_start: usize,
    pub cycle_length: usize,
    /// Number of complete iterations observed.
    pub iterations: usize,
    pub pump_position: Position,
    pub offset: Position,
    /// The context wrapped around the hole per iteration, printed.
    pub context_growth: String,
    /// Minimal step depth in each observed iteration.
    pub min_depth_profile: Vec<usize>,
}

impl PumpCertificate {
    pub fn summary(&self) -> String {
        let profile: Vec<String> = self
            .min_depth_profile
            .iter()
            .map(|d| d.to_string())
            .collect();
        format!(
            "pump at @{} offset {} cycle {}+{}x{} context {} min-depths [{}]",
            self.pump_position,
            self.offset,
            self.cycle_start,
            self.cycle_length,
            self.iterations,
            self.context_growth,
            profile.join(", ")
        )
    }

    /// The certificate for the same pump performed inside a context at `at`,
    /// in an epoch that already holds `base` steps.
    pub(crate) fn lifted(&self, at: &Position, base: usize) -> PumpCertificate {
        PumpCertificate {
            cycle_start: self.cycle_start + base,
            pump_position: at.concat(&self.pump_position),
            min_depth_profile: self
                .min_depth_profile
                .iter()
                .map(|d| d + at.len())
                .collect(),
            ..self.clone()
        }
    }
}

/// Why no pump was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoClosure {
    /// Minimal step depth among the last steps examined; `None` for an empty
    /// step list.
    pub min_depth_tail: Option<usize>,
    pub reason: String,
}

fn term_before(steps: &[Step], i: usize) -> &Term {
    if i < steps.len() {
        &steps[i].before
    } else {
        &steps[steps.len() - 1].after
    }
}

fn power(base: &Position, o: &Position, k: usize) -> Position {
    let mut v = base.0.clone();
    for _ in 0..k {
        v.extend_from_slice(&o.0);
    }
    Position(v)
}

/// Checks the pump made of `r` iterations of `len` steps starting at `c`
/// and ending exactly at the end of `steps`.
fn check_candidate(
    steps: &[Step],
    c: usize,
    len: usize,
    r: usize,
) -> Option<(Term, PumpCertificate)> {
    if r < 2 || len == 0 || c + r * len != steps.len() {
        return None;
    }
    let first = &steps[c..c + len];
    let mut base: Vec<u32> = first[0].position.0.clone();
    for s in &first[1..] {
        let common = base
            .iter()
            .zip(s.position.0.iter())
            .take_while(|(a, b)| a == b)
            .count();
        base.truncate(common);
    }
    let base = Position(base);
    let rel: Vec<Position> = first
        .iter()
        .map(|s| Position(s.position.0[base.len()..].to_vec()))
        .collect();
    let next = &steps[c + len].position;
    if !base.is_prefix_of(next) || next.len() < base.len() + rel[0].len() + 1 {
        return None;
    }
    let o = Position(next.0[base.len()..next.len() - rel[0].len()].to_vec());
    let mut profile = Vec::with_capacity(r);
    for k in 0..r {
        let at = power(&base, &o, k);
        let mut min_depth = usize::MAX;
        for j in 0..len {
            let s = &steps[c + k * len + j];
            if s.rule_id != first[j].rule_id || s.position != at.concat(&rel[j]) {
                return None;
            }
            min_depth = min_depth.min(s.position.len());
        }
        profile.push(min_depth);
    }
    let v0 = term_before(steps, c).subterm_at(&base).ok()?;
    for k in 1..=r {
        let vk = term_before(steps, c + k * len)
            .subterm_at(&power(&base, &o, k))
            .ok()?;
        if !bisim_equal(&v0, &vk) {
            return None;
        }
    }
    let grown = term_before(steps, c + len).subterm_at(&base).ok()?;
    let cycle = close_cycle(&grown, &o).ok()?;
    let limit = term_before(steps, c).replace_at(&base, &cycle).ok()?;
    let context = grown.replace_at(&o, &Term::var("[]")).ok()?;
    Some((
        limit,
        PumpCertificate {
            cycle_start: c,
            cycle_length: len,
            iterations: r,
            pump_position: base,
            offset: o,
            context_growth: context.to_string(),
            min_depth_profile: profile,
        },
    ))
}

/// Looks for a pump at the end of `steps` (cycle length at most 8, within
/// the last 64 steps), preferring short cycles and then many iterations.
pub fn close_limit(steps: &[Step]) -> Result<(Term, PumpCertificate), NoClosure> {
    let n = steps.len();
    let window_start = n.saturating_sub(WINDOW);
    let min_depth_tail = steps[window_start..].iter().map(|s| s.position.len()).min();
    for len in 1..=MAX_CYCLE {
        // iterations supported by the rule sequence alone
        let mut periodic = 0;
        while periodic + len < n - window_start
            && steps[n - 1 - periodic].rule_id == steps[n - 1 - periodic - len].rule_id
        {
            periodic += 1;
        }
        let max_r = (periodic + len) / len;
        for r in (2..=max_r).rev() {
            if let Some(found) = check_candidate(steps, n - r * len, len, r) {
                return Ok(found);
            }
        }
    }
    Err(NoClosure {
        min_depth_tail,
        reason: if n < 2 {
            "fewer than two steps".into()
        } else {
            "no pump with increasing depth at the end of the steps".into()
        },
    })
}

/// Re-derives the limit certified by `cert` over `steps`.
pub fn validate_closure(steps: &[Step], cert: &PumpCertificate) -> Option<Term> {
    let (limit, found) =
        check_candidate(steps, cert.cycle_start, cert.cycle_length, cert.iterations)?;
    (found.pump_position == cert.pump_position && found.offset == cert.offset).then_some(limit)
}

#[derive(Clone, Debug)]
pub enum Approximant {
    /// The prefix of depth `d` no longer changes.
    Stable(Term),
    /// Index (over the whole trace) of a step shallower than `d` with no
    /// later closure.
    Unstable(usize),
}

/// The depth-`d` prefix of the trace's final term, if the last step of the
/// trace is at depth at least `d` (or the trace ends in a closure).
pub fn limit_approximant(trace: &Trace, d: usize) -> Approximant {
    let last_epoch = trace.epochs.last().expect("a trace has an epoch");
    let ends_in_closure = last_epoch.closure.is_some() || last_epoch.steps.is_empty();
    if !ends_in_closure {
        let last = last_epoch.steps.last().unwrap();
        if last.position.len() < d {
            return Approximant::Unstable(trace.step_count() - 1);
        }
    }
    Approximant::Stable(trace.final_term().truncate(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{Rule, Trs};
    use crate::symbol::Signature;
    use crate::term::{parse_pattern, term};

    fn xi_trs() -> Trs {
        let sig = Signature::new()
            .with("xi", 0)
            .with("a", 1)
            .with("b", 1)
            .with("f", 2);
        let r = |id: &str, l: &str, rhs: &str| {
            Rule::new(
                id,
                parse_pattern(l, &sig).unwrap(),
                parse_pattern(rhs, &sig).unwrap(),
            )
            .unwrap()
        };
        let rules = vec![
            r("xi.a", "xi", "a(xi)"),
            r("xi.b", "xi", "b(xi)"),
            r("loop", "f(x, y)", "f(x, y)"),
        ];
        Trs::new(sig, rules).unwrap()
    }

    fn steps_of(trs: &Trs, start: &str, moves: &[(&[u32], &str)]) -> Vec<Step> {
        let mut t = term(start);
        let mut out = Vec::new();
        for (p, id) in moves {
            let s = trs.apply_step(&t, &p.to_vec().into(), id).unwrap();
            t = s.after.clone();
            out.push(s);
        }
        out
    }

    #[test]
    fn xi_pumps_to_rational_limit() {
        let trs = xi_trs();
        let steps = steps_of(
            &trs,
            "xi",
            &[(&[], "xi.a"), (&[1], "xi.a"), (&[1, 1], "xi.a")],
        );
        let (limit, cert) = close_limit(&steps).unwrap();
        assert!(bisim_equal(&limit, &term("rec X . a(X)")));
        assert_eq!(cert.cycle_length, 1);
        assert_eq!(cert.iterations, 3);
        assert_eq!(cert.min_depth_profile, vec![0, 1, 2]);
        assert!(validate_closure(&steps, &cert).is_some());
    }

    #[test]
    fn two_step_pump_closes_to_alternating_word() {
        let trs = xi_trs();
        let steps = steps_of(
            &trs,
            "f(xi, xi)",
            &[
                (&[2], "xi.a"),
                (&[2, 1], "xi.b"),
                (&[2, 1, 1], "xi.a"),
                (&[2, 1, 1, 1], "xi.b"),
            ],
        );
        let (limit, cert) = close_limit(&steps).unwrap();
        assert!(bisim_equal(&limit, &term("f(xi, rec X . a(b(X)))")));
        assert_eq!(cert.offset, vec![1, 1].into());
        assert_eq!(cert.pump_position, vec![2].into());
    }

    #[test]
    fn root_self_loop_is_refused() {
        let trs = xi_trs();
        let steps = steps_of(
            &trs,
            "f(xi, xi)",
            &[(&[], "loop"), (&[], "loop"), (&[], "loop")],
        );
        let err = close_limit(&steps).unwrap_err();
        assert_eq!(err.min_depth_tail, Some(0));
    }

    #[test]
    fn approximant_follows_last_step_depth() {
        let trs = xi_trs();
        let k = 4;
        let moves: Vec<(Vec<u32>, &str)> = (0..k).map(|i| (vec![1; i], "xi.a")).collect();
        let mut t = Trace::new(term("xi"));
        let mut cur = term("xi");
        for (p, id) in &moves {
            let s = trs.apply_step(&cur, &p.clone().into(), id).unwrap();
            cur = s.after.clone();
            t.push_step(s);
        }
        assert!(matches!(limit_approximant(&t, k), Approximant::Unstable(3)));
        match limit_approximant(&t, k - 1) {
            Approximant::Stable(p) => assert!(bisim_equal(&p, &term("a(a(a(cut)))"))),
            other => panic!("{other:?}"),
        }
    }
}
