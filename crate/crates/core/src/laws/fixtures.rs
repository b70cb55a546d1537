//! The shipped fixture machines, parsed from their machine files.

use crate::machine::{parse_machine, Machine};
use crate::omega::{parse_word, NdTmSpec, OmegaWord};
use crate::turing::TmSpec;

pub const M_ACC: &str = include_str!("../../fixtures/m_acc.tm");
pub const M_REJ: &str = include_str!("../../fixtures/m_rej.tm");
pub const M_EXT: &str = include_str!("../../fixtures/m_ext.tm");
pub const HALT_NOW: &str = include_str!("../../fixtures/halt_now.tm");
pub const ND_RIGHT: &str = include_str!("../../fixtures/nd_right.tm");
pub const ND_PONG: &str = include_str!("../../fixtures/nd_pong.tm");
pub const ND_TWO: &str = include_str!("../../fixtures/nd_two.tm");

/// Every fixture file with its name.
pub const ALL: [(&str, &str); 7] = [
    ("m_acc", M_ACC),
    ("m_rej", M_REJ),
    ("m_ext", M_EXT),
    ("halt_now", HALT_NOW),
    ("nd_right", ND_RIGHT),
    ("nd_pong", ND_PONG),
    ("nd_two", ND_TWO),
];

/// The ω-words the ω-machine checks run on.
pub const WORDS: [&str; 2] = ["(a)^w", "ab(ba)^w"];

pub fn machine(name: &str) -> Option<Machine> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_machine(text).expect("fixture files are valid"))
}

pub fn det(name: &str) -> TmSpec {
    TmSpec::new(machine(name).expect("known fixture")).expect("deterministic fixture")
}

pub fn nondet(name: &str) -> NdTmSpec {
    NdTmSpec::new(machine(name).expect("known fixture")).expect("nondeterministic fixture")
}

pub fn words() -> Vec<OmegaWord> {
    WORDS
        .iter()
        .map(|w| parse_word(w).expect("valid word"))
        .collect()
}
