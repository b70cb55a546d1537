//! Rewrite traces of length below ω·K: finite step lists separated by
//! ω-limit closures.

use std::fmt::Write as _;

use super::limit::{validate_closure, PumpCertificate};
use super::Trs;
use crate::term::{bisim_equal, Position, Term};

#[derive(Clone, Debug)]
pub struct Step {
    pub position: Position,
    pub rule_id: String,
    pub before: Term,
    pub after: Term,
}

impl Step {
    /// The same step performed inside `context` at `at`.
    pub fn lift(&self, context: &Term, at: &Position) -> Step {
        Step {
            position: at.concat(&self.position),
            rule_id: self.rule_id.clone(),
            before: context
                .replace_at(at, &self.before)
                .expect("valid lift position"),
            after: context
                .replace_at(at, &self.after)
                .expect("valid lift position"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub limit: Term,
    pub certificate: PumpCertificate,
}

#[derive(Clone, Debug, Default)]
pub struct Epoch {
    pub steps: Vec<Step>,
    pub closure: Option<Closure>,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub start: Term,
    pub epochs: Vec<Epoch>,
}

/// Ordinal of step `n` of epoch `e`: `n`, `ω+n`, `ω·e+n`.
pub fn ordinal(epoch: usize, n: usize) -> String {
    match epoch {
        0 => n.to_string(),
        1 => format!("ω+{n}"),
        e => format!("ω·{e}+{n}"),
    }
}

impl Trace {
    pub fn new(start: Term) -> Trace {
        Trace {
            start,
            epochs: vec![Epoch::default()],
        }
    }

    /// The term reached: the last closure limit or the last step's result.
    pub fn final_term(&self) -> Term {
        for e in self.epochs.iter().rev() {
            if let Some(c) = &e.closure {
                return c.limit.clone();
            }
            if let Some(s) = e.steps.last() {
                return s.after.clone();
            }
        }
        self.start.clone()
    }

    pub fn step_count(&self) -> usize {
        self.epochs.iter().map(|e| e.steps.len()).sum()
    }

    pub fn closure_count(&self) -> usize {
        self.epochs.iter().filter(|e| e.closure.is_some()).count()
    }

    /// Number of epochs that carry steps or a closure (at least one).
    pub fn epoch_count(&self) -> usize {
        let n = self
            .epochs
            .iter()
            .filter(|e| !e.steps.is_empty() || e.closure.is_some())
            .count();
        n.max(1)
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.epochs.iter().flat_map(|e| e.steps.iter())
    }

    pub fn last_step(&self) -> Option<&Step> {
        self.epochs.iter().rev().find_map(|e| e.steps.last())
    }

    fn open_epoch(&mut self) -> &mut Epoch {
        if self.epochs.last().is_some_and(|e| e.closure.is_some()) {
            self.epochs.push(Epoch::default());
        }
        self.epochs.last_mut().unwrap()
    }

    pub fn push_step(&mut self, step: Step) {
        self.open_epoch().steps.push(step);
    }

    /// Closes the open epoch with an ω-limit. The certificate is re-checked
    /// against the epoch's steps; `None` if it does not validate.
    pub fn close(&mut self, certificate: PumpCertificate) -> Option<Term> {
        let epoch = self.open_epoch();
        let limit = validate_closure(&epoch.steps, &certificate)?;
        epoch.closure = Some(Closure {
            limit: limit.clone(),
            certificate,
        });
        Some(limit)
    }

    /// As [`Trace::close`] for a limit `close_limit` just computed from the
    /// open epoch's steps.
    pub(crate) fn close_trusted(&mut self, limit: Term, certificate: PumpCertificate) {
        self.open_epoch().closure = Some(Closure { limit, certificate });
    }

    /// Appends `other` (which starts at the subterm of the current final term
    /// at `at`) performed in place at `at`.
    pub fn append_lifted(&mut self, other: &Trace, at: &Position) {
        for e in &other.epochs {
            let base = self.open_epoch().steps.len();
            for s in &e.steps {
                let ctx = self.final_term();
                self.push_step(s.lift(&ctx, at));
            }
            if let Some(c) = &e.closure {
                let cert = c.certificate.lifted(at, base);
                let ok = self.close(cert);
                debug_assert!(ok.is_some(), "lifted closure must validate");
            }
        }
    }

    /// Re-checks every step against `trs` and every closure certificate.
    /// Returns a description of the first discrepancy.
    pub fn replay(&self, trs: &Trs) -> Result<(), String> {
        let mut cur = self.start.clone();
        for (e, epoch) in self.epochs.iter().enumerate() {
            for (i, s) in epoch.steps.iter().enumerate() {
                if !bisim_equal(&s.before, &cur) {
                    return Err(format!(
                        "step {} does not start at the previous term",
                        ordinal(e, i)
                    ));
                }
                let redo = trs
                    .apply_step(&s.before, &s.position, &s.rule_id)
                    .map_err(|err| format!("step {}: {err}", ordinal(e, i)))?;
                if !bisim_equal(&redo.after, &s.after) {
                    return Err(format!("step {} result differs on replay", ordinal(e, i)));
                }
                cur = s.after.clone();
            }
            if let Some(c) = &epoch.closure {
                let limit = validate_closure(&epoch.steps, &c.certificate)
                    .ok_or_else(|| format!("closure of epoch {e} does not validate"))?;
                if !bisim_equal(&limit, &c.limit) {
                    return Err(format!("closure of epoch {e} has the wrong limit"));
                }
                cur = c.limit.clone();
            }
        }
        Ok(())
    }

    /// Line-oriented rendering: `<ordinal> @<position> <rule>` per step,
    /// `omega-limit: <term>` plus the certificate per closure.
    pub fn render(&self, show_terms: bool) -> String {
        let mut out = String::new();
        if show_terms {
            let _ = writeln!(out, "start: {}", self.start);
        }
        for (e, epoch) in self.epochs.iter().enumerate() {
            for (i, s) in epoch.steps.iter().enumerate() {
                let _ = writeln!(out, "{} @{} {}", ordinal(e, i), s.position, s.rule_id);
                if show_terms {
                    let _ = writeln!(out, "  {}", s.after);
                }
            }
            if let Some(c) = &epoch.closure {
                let _ = writeln!(out, "omega-limit: {}", c.limit);
                let _ = writeln!(out, "  {}", c.certificate.summary());
            }
        }
        out
    }
}
