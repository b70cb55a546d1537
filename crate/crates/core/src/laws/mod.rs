//! Executable bounded checks of the machine encodings and of the
//! constructions' behavior, on fixtures and on seeded random machines.
//!
//! Every check reports `holds` only for the bounded claim it actually
//! verified; anything the bounds could not settle is `unknown`.

mod bisim;
pub mod fixtures;
mod omega_laws;
mod pickn;
pub mod random;

use std::fmt::Write as _;
use std::time::Duration;

pub use bisim::{
    check_srs_bisim, check_srs_bisim_with, check_srs_random, check_two_sided_bisim,
    check_two_sided_bisim_with, check_two_sided_random,
};
pub use omega_laws::{
    check_limit_correspondence, check_r_construction, check_run_classification, r_corpus,
    LimitOutcome, RConstructionOptions,
};
pub use pickn::{
    bfs_to, check_pebble_limit, check_pickn, check_run_cycles, greedy_firings, GreedyRun,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// A replayable counterexample description.
    Refuted(String),
    /// What the bounds did not settle.
    Unknown(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Refuted(_) => "refuted",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Refuted(_) => 1,
            Verdict::Unknown(_) => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub law: String,
    pub verdict: Verdict,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Not part of the rendered report, which stays byte-identical across
    /// runs.
    pub elapsed: Duration,
    pub details: Vec<String>,
}

impl LawReport {
    pub fn new(law: &str) -> LawReport {
        LawReport {
            law: law.to_owned(),
            verdict: Verdict::Holds,
            samples: 0,
            seed: None,
            elapsed: Duration::ZERO,
            details: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub(crate) fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    /// Records a refutation unless one was already recorded.
    pub(crate) fn refute(&mut self, witness: impl Into<String>) {
        if !matches!(self.verdict, Verdict::Refuted(_)) {
            self.verdict = Verdict::Refuted(witness.into());
        }
    }

    /// Downgrades a holding verdict to unknown.
    pub(crate) fn unknown(&mut self, why: impl Into<String>) {
        if self.verdict == Verdict::Holds {
            self.verdict = Verdict::Unknown(why.into());
        }
    }

    /// Line-oriented text ending in `VERDICT: <holds|refuted|unknown>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "law: {}", self.law);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        let _ = writeln!(out, "samples: {}", self.samples);
        for d in &self.details {
            let _ = writeln!(out, "{d}");
        }
        match &self.verdict {
            Verdict::Holds => {}
            Verdict::Refuted(w) => {
                let _ = writeln!(out, "witness: {w}");
            }
            Verdict::Unknown(w) => {
                let _ = writeln!(out, "unsettled: {w}");
            }
        }
        let _ = writeln!(out, "VERDICT: {}", self.verdict.name());
        out
    }
}

/// Times `f` and stores the elapsed time in its report.
pub(crate) fn timed(f: impl FnOnce() -> LawReport) -> LawReport {
    let start = std::time::Instant::now();
    let mut r = f();
    r.elapsed = start.elapsed();
    r
}
