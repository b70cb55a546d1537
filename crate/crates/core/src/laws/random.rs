//! Seeded random machines, configurations, words and terms: at most 4
//! states, at most 3 tape symbols besides the blank, each table cell filled
//! with probability 0.7.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::machine::{Kind, Machine, Move, Transition};
use crate::omega::{NdTmSpec, OmegaWord};
use crate::symbol::Sym;
use crate::term::{Label, Term, TermBuilder};
use crate::turing::{TmConfig, TmSpec};

pub const DENSITY: f64 = 0.7;
pub const MAX_STATES: usize = 4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn syms(names: &[&str]) -> Vec<Sym> {
    names.iter().map(|n| Sym::new(n)).collect()
}

fn random_table(
    rng: &mut ChaCha8Rng,
    kind: Kind,
    name: String,
    pool: &[&str],
    required: usize,
) -> Machine {
    let n_states = rng.gen_range(1..=MAX_STATES);
    let states: Vec<Sym> = (0..n_states).map(|i| Sym::new(&format!("q{i}"))).collect();
    let n_symbols = rng.gen_range(required..=pool.len());
    let mut alphabet = syms(&["_"]);
    alphabet.extend(syms(&pool[..n_symbols]));
    let moves = [Move::L, Move::R];
    let mut delta = Vec::new();
    for &q in &states {
        for &f in &alphabet {
            if !rng.gen_bool(DENSITY) {
                continue;
            }
            let entries = match kind {
                Kind::DetTwoSided => 1,
                Kind::NondetOneSided => rng.gen_range(1..=2),
            };
            for _ in 0..entries {
                let t = Transition {
                    state: q,
                    read: f,
                    next: *states.choose(rng).unwrap(),
                    write: *alphabet.choose(rng).unwrap(),
                    mv: *moves.choose(rng).unwrap(),
                };
                if !delta.contains(&t) {
                    delta.push(t);
                }
            }
        }
    }
    Machine::new(
        name,
        kind,
        states.clone(),
        states[0],
        alphabet[0],
        alphabet,
        delta,
    )
    .expect("random tables are well-formed")
}

/// A deterministic machine over `_` and up to three of `S 0 a` (always
/// including `S` and `0`).
pub fn det_machine(rng: &mut ChaCha8Rng, index: usize) -> TmSpec {
    let m = random_table(
        rng,
        Kind::DetTwoSided,
        format!("rand_det_{index}"),
        &["S", "0", "a"],
        2,
    );
    TmSpec::new(m).unwrap()
}

/// A non-deterministic one-sided machine over `_` and up to three of
/// `a b d` (always including `a` and `b`).
pub fn nd_machine(rng: &mut ChaCha8Rng, index: usize) -> NdTmSpec {
    let m = random_table(
        rng,
        Kind::NondetOneSided,
        format!("rand_nd_{index}"),
        &["a", "b", "d"],
        2,
    );
    NdTmSpec::new(m).unwrap()
}

/// A configuration with at most 8 tape cells in its carrier.
pub fn tm_config(rng: &mut ChaCha8Rng, m: &TmSpec) -> TmConfig {
    let side = |rng: &mut ChaCha8Rng| -> Vec<Sym> {
        let n = rng.gen_range(0..=4);
        (0..n).map(|_| *m.alphabet.choose(rng).unwrap()).collect()
    };
    let left = side(rng);
    let right = side(rng);
    let state = *m.states.choose(rng).unwrap();
    TmConfig::new(left, state, right, m.blank)
}

pub fn omega_word(rng: &mut ChaCha8Rng, alphabet: &[Sym]) -> OmegaWord {
    let p = rng.gen_range(0..=3);
    let c = rng.gen_range(1..=3);
    let prefix = (0..p).map(|_| *alphabet.choose(rng).unwrap()).collect();
    let cycle = (0..c).map(|_| *alphabet.choose(rng).unwrap()).collect();
    OmegaWord::new(prefix, cycle).unwrap()
}

/// A random ground term over `symbols` (name, arity) with roughly `nodes`
/// nodes; each child is a back edge to an earlier node with probability
/// 0.1, which makes the term rational.
pub fn term(rng: &mut ChaCha8Rng, symbols: &[(&str, usize)], nodes: usize) -> Term {
    let constants: Vec<&(&str, usize)> = symbols.iter().filter(|(_, a)| *a == 0).collect();
    let mut b = TermBuilder::new();
    let root = b.placeholder();
    let mut open = vec![root];
    let mut made = vec![root];
    while let Some(id) = open.pop() {
        let pick = if made.len() + open.len() >= nodes {
            **constants.choose(rng).unwrap()
        } else {
            *symbols.choose(rng).unwrap()
        };
        let mut children = Vec::new();
        for _ in 0..pick.1 {
            if made.len() > 1 && rng.gen_bool(0.1) {
                // back edge to an earlier node (possibly an ancestor)
                children.push(*made.choose(rng).unwrap());
            } else {
                let c = b.placeholder();
                made.push(c);
                open.push(c);
                children.push(c);
            }
        }
        b.fill(id, Label::Fun(Sym::new(pick.0)), children);
    }
    b.finish(root)
}
