use thiserror::Error;

use crate::term::Position;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{name}` expects {expected} argument(s), found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("recursion variable `{0}` is not bound by an enclosing `rec`")]
    UnboundRecursion(String),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("position {0} is not valid in the term")]
    InvalidPosition(Position),
    #[error("rule `{rule}` does not match at position {position}")]
    NoMatch { rule: String, position: Position },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid rule `{rule}`: {message}")]
    InvalidRule { rule: String, message: String },
    #[error("term is not ground (contains variable `{0}`)")]
    NotGround(String),
    #[error("invalid machine: {0}")]
    Machine(String),
    #[error("wrong machine kind: expected {expected}, found {found}")]
    WrongKind { expected: String, found: String },
    #[error("malformed configuration term at {position}: {message}")]
    Decode { position: Position, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid omega-word: {0}")]
    Word(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
