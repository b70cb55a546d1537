//! Interned symbol names and signatures.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use crate::error::Error;

struct Interner {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u32>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(|| {
    RwLock::new(Interner {
        names: Vec::new(),
        index: HashMap::new(),
    })
});

/// An interned identifier. Cheap to copy and compare; the name lives for the
/// whole process.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(u32);

impl Sym {
    pub fn new(name: &str) -> Sym {
        if let Some(&id) = INTERNER.read().unwrap().index.get(name) {
            return Sym(id);
        }
        let mut interner = INTERNER.write().unwrap();
        if let Some(&id) = interner.index.get(name) {
            return Sym(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = interner.names.len() as u32;
        interner.names.push(leaked);
        interner.index.insert(leaked, id);
        Sym(id)
    }

    pub fn name(self) -> &'static str {
        INTERNER.read().unwrap().names[self.0 as usize]
    }

    pub(crate) fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reserved nullary symbol produced by prefix truncation.
pub const CUT: &str = "cut";

/// Glyph-to-ASCII table shared by every construction.
pub mod names {
    pub const PEBBLE: &str = "peb";
    pub const END: &str = "end";
    pub const BOT: &str = "bot";
    pub const XI: &str = "xi";
    pub const DELTA1: &str = "D1";
    pub const DELTA2: &str = "D2";
    pub const TOP: &str = "T";
    pub const BLANK: &str = "_";
    pub const RUN: &str = "run";
    pub const OK: &str = "ok";
    pub const C: &str = "c";
    pub const PICKN: &str = "pickn";
    pub const SUCC: &str = "S";
    pub const ZERO: &str = "0";

    /// Names a machine may not use for its states or tape symbols.
    pub const RESERVED: &[&str] = &[
        PEBBLE,
        END,
        BOT,
        XI,
        DELTA1,
        DELTA2,
        TOP,
        RUN,
        OK,
        C,
        PICKN,
        super::CUT,
        "rec",
    ];
}

pub fn is_reserved(name: &str) -> bool {
    names::RESERVED.contains(&name)
}

/// A function symbol with its arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: Sym,
    pub arity: usize,
}

/// Finite set of symbols, kept in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<Sym, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<(), Error> {
        if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(Error::Signature(format!("invalid symbol name `{name}`")));
        }
        if name == CUT || name == "rec" {
            return Err(Error::Signature(format!("`{name}` is reserved")));
        }
        let sym = Sym::new(name);
        match self.index.get(&sym) {
            Some(&i) if self.symbols[i].arity == arity => Ok(()),
            Some(&i) => Err(Error::Signature(format!(
                "symbol `{name}` declared with arities {} and {arity}",
                self.symbols[i].arity
            ))),
            None => {
                self.index.insert(sym, self.symbols.len());
                self.symbols.push(Symbol { name: sym, arity });
                Ok(())
            }
        }
    }

    /// Builder-style `add` for names known to be valid.
    pub fn with(mut self, name: &str, arity: usize) -> Self {
        self.add(name, arity).expect("valid symbol");
        self
    }

    pub fn arity(&self, sym: Sym) -> Option<usize> {
        self.index.get(&sym).map(|&i| self.symbols[i].arity)
    }

    pub fn contains(&self, sym: Sym) -> bool {
        self.index.contains_key(&sym)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Union of two signatures; fails on an arity clash.
    pub fn merge(&mut self, other: &Signature) -> Result<(), Error> {
        for s in &other.symbols {
            self.add(s.name.name(), s.arity)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Sym::new("pickn");
        let b = Sym::new("pickn");
        assert_eq!(a, b);
        assert_eq!(a.name(), "pickn");
        assert_ne!(a, Sym::new("ok"));
    }

    #[test]
    fn signature_rejects_arity_clash_and_cut() {
        let mut sig = Signature::new().with("c", 1);
        assert!(sig.add("c", 1).is_ok());
        assert!(sig.add("c", 2).is_err());
        assert!(sig.add("cut", 0).is_err());
        assert!(sig.add("a-b", 0).is_err());
        assert_eq!(sig.len(), 1);
    }
}
