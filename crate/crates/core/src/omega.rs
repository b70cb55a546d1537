//! Non-deterministic one-sided machines on ultimately periodic ω-tapes:
//! run exploration with lasso certificates and run classification.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::machine::{Kind, Machine, Move};
use crate::symbol::Sym;

const LASSO_LOOKBACK: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdTmSpec(Machine);

impl NdTmSpec {
    pub fn new(m: Machine) -> Result<NdTmSpec> {
        if m.kind != Kind::NondetOneSided {
            return Err(Error::WrongKind {
                expected: Kind::NondetOneSided.name().into(),
                found: m.kind.name().into(),
            });
        }
        Ok(NdTmSpec(m))
    }

    pub fn machine(&self) -> &Machine {
        &self.0
    }
}

impl Deref for NdTmSpec {
    type Target = Machine;
    fn deref(&self) -> &Machine {
        &self.0
    }
}

/// The ω-word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaWord {
    pub prefix: Vec<Sym>,
    pub cycle: Vec<Sym>,
}

impl OmegaWord {
    pub fn new(prefix: Vec<Sym>, cycle: Vec<Sym>) -> Result<OmegaWord> {
        if cycle.is_empty() {
            return Err(Error::Word("the cycle must be nonempty".into()));
        }
        Ok(OmegaWord { prefix, cycle })
    }

    pub fn at(&self, i: usize) -> Sym {
        match self.prefix.get(i) {
            Some(&s) => s,
            None => self.cycle[(i - self.prefix.len()) % self.cycle.len()],
        }
    }

    /// The word from position `i` on.
    pub fn suffix(&self, i: usize) -> OmegaWord {
        if i < self.prefix.len() {
            return OmegaWord {
                prefix: self.prefix[i..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let shift = (i - self.prefix.len()) % self.cycle.len();
        let mut cycle = self.cycle[shift..].to_vec();
        cycle.extend_from_slice(&self.cycle[..shift]);
        OmegaWord {
            prefix: Vec::new(),
            cycle,
        }
    }

    /// The word with the given cells overwritten.
    pub fn overlay(&self, writes: &BTreeMap<usize, Sym>) -> OmegaWord {
        let n = writes
            .keys()
            .next_back()
            .map_or(0, |&k| k + 1)
            .max(self.prefix.len());
        let prefix = (0..n)
            .map(|i| writes.get(&i).copied().unwrap_or_else(|| self.at(i)))
            .collect();
        OmegaWord {
            prefix,
            cycle: self.suffix(n).cycle,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }
}

/// `ab(ba)^w`; symbols are single characters unless the word contains
/// whitespace, in which case they are whitespace-separated tokens.
pub fn parse_word(text: &str) -> Result<OmegaWord> {
    let text = text.trim();
    let body = text
        .strip_suffix("^w")
        .ok_or_else(|| Error::Word(format!("`{text}` must end in `(...)^w`")))?
        .trim_end();
    let body = body
        .strip_suffix(')')
        .ok_or_else(|| Error::Word(format!("`{text}` must end in `(...)^w`")))?;
    let open = body
        .rfind('(')
        .ok_or_else(|| Error::Word(format!("unbalanced parentheses in `{text}`")))?;
    let tokens = |s: &str| -> Result<Vec<Sym>> {
        if s.contains(['(', ')']) {
            return Err(Error::Word(format!("unexpected parenthesis in `{text}`")));
        }
        let parts: Vec<String> = if text.chars().any(char::is_whitespace) {
            s.split_whitespace().map(str::to_owned).collect()
        } else {
            s.chars().map(String::from).collect()
        };
        for p in &parts {
            if !p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Word(format!("invalid symbol `{p}`")));
            }
        }
        Ok(parts.iter().map(|p| Sym::new(p)).collect())
    };
    OmegaWord::new(tokens(&body[..open])?, tokens(&body[open + 1..])?)
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.symbols().all(|s| s.name().chars().count() == 1);
        let sep = if compact { "" } else { " " };
        let join = |v: &[Sym]| v.iter().map(|s| s.name()).collect::<Vec<_>>().join(sep);
        if compact || self.prefix.is_empty() {
            write!(f, "{}({})^w", join(&self.prefix), join(&self.cycle))
        } else {
            write!(f, "{} ({})^w", join(&self.prefix), join(&self.cycle))
        }
    }
}

/// `⟨q, tape, i⟩` with the tape given as writes over a base word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NdConfig {
    pub state: Sym,
    pub head: usize,
    /// Cells whose content differs from the base word.
    pub writes: BTreeMap<usize, Sym>,
}

impl NdConfig {
    pub fn initial(m: &NdTmSpec) -> NdConfig {
        NdConfig {
            state: m.initial,
            head: 0,
            writes: BTreeMap::new(),
        }
    }

    pub fn cell(&self, w: &OmegaWord, i: usize) -> Sym {
        self.writes.get(&i).copied().unwrap_or_else(|| w.at(i))
    }

    pub fn tape(&self, w: &OmegaWord) -> OmegaWord {
        w.overlay(&self.writes)
    }

    fn write(&mut self, w: &OmegaWord, i: usize, f: Sym) {
        if w.at(i) == f {
            self.writes.remove(&i);
        } else {
            self.writes.insert(i, f);
        }
    }
}

pub fn nd_steps(m: &NdTmSpec, w: &OmegaWord, c: &NdConfig) -> Vec<NdConfig> {
    let read = c.cell(w, c.head);
    let mut out = Vec::new();
    for t in m.transitions(c.state, read) {
        let head = match t.mv {
            Move::R => c.head + 1,
            Move::L if c.head > 0 => c.head - 1,
            Move::L => continue,
        };
        let mut next = NdConfig {
            state: t.next,
            head,
            writes: c.writes.clone(),
        };
        next.write(w, c.head, t.write);
        if !out.contains(&next) {
            out.push(next);
        }
    }
    out
}

/// A certified repetition: the steps from `cycle_start` to
/// `cycle_start + cycle_length` can be repeated forever, each repetition
/// shifted `displacement` cells to the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub cycle_start: usize,
    pub cycle_length: usize,
    pub displacement: usize,
    /// Cells read during one repetition (inclusive bounds).
    pub window: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunEnd {
    Lasso,
    /// No transition applies; a finite sequence is not a run.
    Stuck,
    /// Exploration stopped at the fuel bound.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPrefix {
    pub configs: Vec<NdConfig>,
    pub lasso: Option<Lasso>,
    pub end: RunEnd,
}

impl RunPrefix {
    pub fn heads(&self) -> Vec<usize> {
        self.configs.iter().map(|c| c.head).collect()
    }
}

/// Checks whether configuration `j` repeats configuration `i` shifted by a
/// non-negative displacement, with every cell the repetition will ever read
/// matching.
pub fn check_lasso(w: &OmegaWord, configs: &[NdConfig], i: usize, j: usize) -> Option<Lasso> {
    let (ci, cj) = (&configs[i], &configs[j]);
    if i >= j || ci.state != cj.state || cj.head < ci.head {
        return None;
    }
    let d = cj.head - ci.head;
    let lo = configs[i..j].iter().map(|c| c.head).min()?;
    let hi = configs[i..j].iter().map(|c| c.head).max()?;
    let written = cj.writes.keys().next_back().map_or(0, |&k| k + 1);
    // beyond `bound` both tapes are the unwritten periodic part of the word
    let bound = hi.max(written).max(w.prefix.len()) + w.cycle.len();
    if d == 0 && (lo..=bound).any(|x| ci.cell(w, x) != cj.cell(w, x)) {
        return None;
    }
    if d > 0 && (lo..=bound).any(|x| cj.cell(w, x + d) != ci.cell(w, x)) {
        return None;
    }
    Some(Lasso {
        cycle_start: i,
        cycle_length: j - i,
        displacement: d,
        window: (lo, hi),
    })
}

struct TreeNode {
    config: NdConfig,
    parent: Option<usize>,
    depth: usize,
}

fn path(nodes: &[TreeNode], mut idx: usize, limit: usize) -> Vec<NdConfig> {
    let mut out = vec![nodes[idx].config.clone()];
    while let Some(p) = nodes[idx].parent {
        if out.len() > limit {
            break;
        }
        out.push(nodes[p].config.clone());
        idx = p;
    }
    out.reverse();
    out
}

fn find_lasso(w: &OmegaWord, nodes: &[TreeNode], idx: usize) -> Option<Lasso> {
    let recent = path(nodes, idx, LASSO_LOOKBACK);
    let j = recent.len() - 1;
    let offset = nodes[idx].depth - j;
    (0..j).rev().find_map(|i| {
        check_lasso(w, &recent, i, j).map(|l| Lasso {
            cycle_start: l.cycle_start + offset,
            ..l
        })
    })
}

/// Result of exploring the run tree.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub runs: Vec<RunPrefix>,
    /// Some branch was cut by the width bound.
    pub width_cut: bool,
}

/// Breadth-first run-tree expansion to depth `fuel` with at most `width`
/// open branches. Branches end when stuck, when a lasso is certified, or
/// at the fuel bound. Identical configurations reached on two branches are
/// explored once.
pub fn explore_runs(m: &NdTmSpec, w: &OmegaWord, fuel: usize, width: usize) -> Exploration {
    let mut nodes = vec![TreeNode {
        config: NdConfig::initial(m),
        parent: None,
        depth: 0,
    }];
    let mut seen: HashSet<NdConfig> = HashSet::from([nodes[0].config.clone()]);
    let mut frontier = vec![0usize];
    let mut ended: Vec<(usize, Option<Lasso>, RunEnd)> = Vec::new();
    let mut width_cut = false;
    while !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for &idx in &frontier {
            if nodes[idx].depth >= fuel {
                ended.push((idx, None, RunEnd::Truncated));
                continue;
            }
            let succ = nd_steps(m, w, &nodes[idx].config);
            if succ.is_empty() {
                ended.push((idx, None, RunEnd::Stuck));
                continue;
            }
            for c in succ {
                let child = nodes.len();
                nodes.push(TreeNode {
                    config: c.clone(),
                    parent: Some(idx),
                    depth: nodes[idx].depth + 1,
                });
                if let Some(lasso) = find_lasso(w, &nodes, child) {
                    ended.push((child, Some(lasso), RunEnd::Lasso));
                } else if seen.insert(c) {
                    next_frontier.push(child);
                }
            }
        }
        if next_frontier.len() > width {
            width_cut = true;
            next_frontier.truncate(width);
        }
        frontier = next_frontier;
    }
    let mut runs: Vec<RunPrefix> = ended
        .into_iter()
        .map(|(idx, lasso, end)| RunPrefix {
            configs: path(&nodes, idx, usize::MAX),
            lasso,
            end,
        })
        .collect();
    runs.sort_by(|a, b| run_order_key(a).cmp(&run_order_key(b)));
    Exploration { runs, width_cut }
}

fn run_order_key(r: &RunPrefix) -> Vec<(String, usize)> {
    r.configs
        .iter()
        .map(|c| (c.state.name().to_owned(), c.head))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunClass {
    pub complete: Tri,
    pub oscillating: Tri,
    pub accepting: Tri,
}

impl fmt::Display for RunClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "complete {}, oscillating {}, accepting {}",
            self.complete, self.oscillating, self.accepting
        )
    }
}

pub fn classify_run(r: &RunPrefix) -> RunClass {
    match (&r.lasso, r.end) {
        (Some(l), _) if l.displacement > 0 => RunClass {
            complete: Tri::Yes,
            oscillating: Tri::No,
            accepting: Tri::Yes,
        },
        (Some(_), _) => RunClass {
            complete: Tri::No,
            oscillating: Tri::Yes,
            accepting: Tri::No,
        },
        (None, RunEnd::Stuck) => RunClass {
            complete: Tri::No,
            oscillating: Tri::No,
            accepting: Tri::No,
        },
        (None, _) => RunClass {
            complete: Tri::Unknown,
            oscillating: Tri::Unknown,
            accepting: Tri::Unknown,
        },
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Accepted(RunPrefix),
    RejectedExhausted,
    Unknown,
}

impl Membership {
    pub fn name(&self) -> &'static str {
        match self {
            Membership::Accepted(_) => "accepted",
            Membership::RejectedExhausted => "rejected_exhausted",
            Membership::Unknown => "unknown",
        }
    }
}

pub fn membership_semidecide(m: &NdTmSpec, w: &OmegaWord, fuel: usize, width: usize) -> Membership {
    let ex = explore_runs(m, w, fuel, width);
    if let Some(r) = ex
        .runs
        .iter()
        .find(|r| classify_run(r).accepting == Tri::Yes)
    {
        return Membership::Accepted(r.clone());
    }
    let exhausted = !ex.width_cut && ex.runs.iter().all(|r| r.end != RunEnd::Truncated);
    if exhausted {
        Membership::RejectedExhausted
    } else {
        Membership::Unknown
    }
}

/// The limit tape of an accepting lasso run: cells left of the window are
/// final after the first repetition, and the window contents repeat with
/// period `displacement`.
pub fn lasso_limit_tape(w: &OmegaWord, r: &RunPrefix) -> Option<OmegaWord> {
    let l = r.lasso.as_ref()?;
    if l.displacement == 0 {
        return None;
    }
    let end = &r.configs[l.cycle_start + l.cycle_length];
    let lo = l.window.0;
    let prefix = (0..lo).map(|x| end.cell(w, x)).collect();
    let cycle = (lo..lo + l.displacement).map(|x| end.cell(w, x)).collect();
    OmegaWord::new(prefix, cycle).ok()
}

/// Replays `steps` of some run (always taking the first transition) and
/// returns the head positions, for visit statistics.
pub fn first_branch_heads(m: &NdTmSpec, w: &OmegaWord, steps: usize) -> Vec<usize> {
    let mut c = NdConfig::initial(m);
    let mut heads = vec![c.head];
    for _ in 0..steps {
        match nd_steps(m, w, &c).into_iter().next() {
            Some(n) => c = n,
            None => break,
        }
        heads.push(c.head);
    }
    heads
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_machine;

    fn machine(delta: &str) -> NdTmSpec {
        let text = format!(
            "machine t\nkind nondet-one-sided\nstates q0 q1\ninitial q0\nblank _\nalphabet _ a b\n{delta}end\n"
        );
        NdTmSpec::new(parse_machine(&text).unwrap()).unwrap()
    }

    #[test]
    fn word_syntax_round_trips() {
        for s in ["ab(ba)^w", "(a)^w", "a(_)^w"] {
            assert_eq!(parse_word(s).unwrap().to_string(), s);
        }
        let w = parse_word("ab(ba)^w").unwrap();
        let cells: String = (0..8).map(|i| w.at(i).name()).collect();
        assert_eq!(cells, "abbababa");
        assert!(parse_word("ab").is_err());
        assert!(parse_word("()^w").is_err());
    }

    #[test]
    fn suffix_and_overlay_agree_with_cells() {
        let w = parse_word("ab(ba)^w").unwrap();
        let s = w.suffix(5);
        for i in 0..10 {
            assert_eq!(s.at(i), w.at(i + 5));
        }
        let writes = BTreeMap::from([(6, Sym::new("_"))]);
        let o = w.overlay(&writes);
        for i in 0..12 {
            let expect = if i == 6 { Sym::new("_") } else { w.at(i) };
            assert_eq!(o.at(i), expect);
        }
    }

    #[test]
    fn left_moves_are_blocked_at_the_boundary() {
        let m = machine("delta q0 a -> q1 a L\ndelta q0 a -> q1 b R\n");
        let w = parse_word("(a)^w").unwrap();
        let succ = nd_steps(&m, &w, &NdConfig::initial(&m));
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].head, 1);
        assert_eq!(succ[0].writes.get(&0), Some(&Sym::new("b")));
    }

    #[test]
    fn stuck_machine_has_one_empty_run() {
        let m = machine("");
        let ex = explore_runs(&m, &parse_word("(a)^w").unwrap(), 10, 4);
        assert_eq!(ex.runs.len(), 1);
        assert_eq!(ex.runs[0].configs.len(), 1);
        assert_eq!(ex.runs[0].end, RunEnd::Stuck);
        assert!(matches!(
            membership_semidecide(&m, &parse_word("(a)^w").unwrap(), 10, 4),
            Membership::RejectedExhausted
        ));
    }

    #[test]
    fn writing_machine_limit_tape() {
        // overwrite every a with b while moving right
        let m = machine("delta q0 a -> q0 b R\n");
        let w = parse_word("(a)^w").unwrap();
        let ex = explore_runs(&m, &w, 20, 4);
        let r = &ex.runs[0];
        assert_eq!(classify_run(r).accepting, Tri::Yes);
        assert_eq!(lasso_limit_tape(&w, r).unwrap().to_string(), "(b)^w");
    }
}
