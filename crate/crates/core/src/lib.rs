//! Infinitary term rewriting workbench: rational terms, rewriting with
//! ω-limit closure, Turing machine encodings, and executable checks of the
//! constructions built from them.

pub mod error;
pub mod symbol;
pub mod term;

pub use error::{Error, Result};
pub use symbol::{Signature, Sym, Symbol};
pub mod rewrite;
pub use term::{
    agreement_depth, bisim_equal, canonical_key, parse_pattern, parse_term, print_term, Label,
    Position, Term, TermBuilder, TermKey,
};
pub mod encoders;
pub mod laws;
pub mod machine;
pub mod omega;
pub mod turing;
