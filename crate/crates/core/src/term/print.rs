//! Printing in the syntax accepted by the parser. Back edges become
//! `rec X . …` binders; shared acyclic subterms are printed once per
//! occurrence.

use std::collections::{HashMap, HashSet};

use super::{Label, Term};

struct Printer<'a> {
    t: &'a Term,
    out: String,
    /// Nodes currently being printed, with the binder name once a back edge
    /// to them has been seen.
    open: HashMap<u32, Option<String>>,
    taken: HashSet<&'static str>,
    next_name: usize,
}

const NAMES: [&str; 6] = ["X", "Y", "Z", "W", "V", "U"];

impl Printer<'_> {
    fn fresh(&mut self) -> String {
        loop {
            let i = self.next_name;
            self.next_name += 1;
            let name = if i < NAMES.len() {
                NAMES[i].to_string()
            } else {
                format!("X{}", i - NAMES.len() + 1)
            };
            if !self.taken.contains(name.as_str()) {
                return name;
            }
        }
    }

    fn go(&mut self, n: u32) {
        if let Some(slot) = self.open.get(&n) {
            let name = match slot {
                Some(name) => name.clone(),
                None => {
                    let name = self.fresh();
                    self.open.insert(n, Some(name.clone()));
                    name
                }
            };
            self.out.push_str(&name);
            return;
        }
        let start = self.out.len();
        self.open.insert(n, None);
        let node = self.t.node(n);
        let name = match node.label {
            Label::Fun(s) | Label::Var(s) => s.name(),
        };
        self.out.push_str(name);
        if !node.children.is_empty() {
            self.out.push('(');
            for (i, &c) in node.children.iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                self.go(c);
            }
            self.out.push(')');
        }
        if let Some(Some(var)) = self.open.remove(&n) {
            self.out.insert_str(start, &format!("rec {var} . "));
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut taken = HashSet::new();
    for n in t.reachable() {
        taken.insert(t.node(n).label.sym().name());
    }
    let mut p = Printer {
        t,
        out: String::new(),
        open: HashMap::new(),
        taken,
        next_name: 0,
    };
    p.go(t.root);
    p.out
}

#[cfg(test)]
mod tests {
    use crate::term::{bisim_equal, term};

    #[test]
    fn prints_cycles_with_binders() {
        assert_eq!(term("rec X . peb(X)").to_string(), "rec X . peb(X)");
        assert_eq!(
            term("run(T, pickn, pickn)").to_string(),
            "run(T, pickn, pickn)"
        );
        let t = term("a(rec Y . b(a(Y)))");
        assert_eq!(t.to_string(), "a(rec X . b(a(X)))");
    }

    #[test]
    fn binder_names_avoid_symbols() {
        let t = term("rec Q . X(Q)");
        assert_eq!(t.to_string(), "rec Y . X(Y)");
        assert!(bisim_equal(&term(&t.to_string()), &t));
    }
}
