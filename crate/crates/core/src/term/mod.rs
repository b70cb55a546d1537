//! Finite and rational terms stored as rooted, possibly cyclic graphs.
//!
//! A [`Term`] is an immutable view of a shared node arena together with a root
//! node. Subterms share the arena of their parent, so descending into a term
//! is free. Operations that build new terms compact the result so that every
//! node of a freshly built arena is reachable from its root.
//!
//! Equality of terms is always bisimulation of their infinite unfoldings (see
//! [`bisim_equal`]); two different graphs may denote the same term.

mod bisim;
mod parse;
mod print;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symbol::{Sym, CUT};

pub use bisim::{agreement_depth, bisim_equal, canonical_key, TermKey};
pub use parse::{parse_loose, parse_pattern, parse_term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Fun(Sym),
    Var(Sym),
}

impl Label {
    pub fn sym(self) -> Sym {
        match self {
            Label::Fun(s) | Label::Var(s) => s,
        }
    }

    pub fn is_var(self) -> bool {
        matches!(self, Label::Var(_))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub(crate) label: Label,
    pub(crate) children: Box<[u32]>,
}

/// A rooted term graph. Cloning is cheap.
#[derive(Clone)]
pub struct Term {
    pub(crate) nodes: Arc<[Node]>,
    pub(crate) root: u32,
}

/// Path of 1-based child indices from the root.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u32>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: u32) -> Position {
        let mut v = self.0.clone();
        v.push(index);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Parses the dot-path notation used in traces: `root` or `1.2.1`.
    pub fn parse(text: &str) -> Result<Position> {
        let text = text.trim();
        if text == "root" || text.is_empty() {
            return Ok(Position::root());
        }
        let mut path = Vec::new();
        for part in text.split('.') {
            match part.parse::<u32>() {
                Ok(i) if i >= 1 => path.push(i),
                _ => {
                    return Err(Error::Syntax {
                        line: 1,
                        column: 1,
                        message: format!("bad position `{text}`"),
                    })
                }
            }
        }
        Ok(Position(path))
    }
}

impl From<Vec<u32>> for Position {
    fn from(v: Vec<u32>) -> Self {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{self}")
    }
}

/// Incremental construction of a term graph.
#[derive(Default)]
pub struct TermBuilder {
    nodes: Vec<Node>,
}

impl TermBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, label: Label, children: Vec<u32>) -> u32 {
        self.nodes.push(Node {
            label,
            children: children.into_boxed_slice(),
        });
        (self.nodes.len() - 1) as u32
    }

    pub fn fun(&mut self, name: &str, children: Vec<u32>) -> u32 {
        self.node(Label::Fun(Sym::new(name)), children)
    }

    /// Reserves a node whose label and children are filled in later; used to
    /// tie cycles.
    pub fn placeholder(&mut self) -> u32 {
        self.node(Label::Fun(Sym::new(CUT)), Vec::new())
    }

    pub fn fill(&mut self, id: u32, label: Label, children: Vec<u32>) {
        self.nodes[id as usize] = Node {
            label,
            children: children.into_boxed_slice(),
        };
    }

    pub fn set_child(&mut self, id: u32, index: usize, child: u32) {
        self.nodes[id as usize].children[index] = child;
    }

    /// Copies every node of `t` reachable from its root and returns the id of
    /// the copied root.
    pub fn import(&mut self, t: &Term) -> u32 {
        let offset = self.nodes.len() as u32;
        let order = t.reachable();
        let mut remap = vec![u32::MAX; t.nodes.len()];
        for (i, &n) in order.iter().enumerate() {
            remap[n as usize] = offset + i as u32;
        }
        for &n in &order {
            let node = &t.nodes[n as usize];
            self.nodes.push(Node {
                label: node.label,
                children: node.children.iter().map(|&c| remap[c as usize]).collect(),
            });
        }
        remap[t.root as usize]
    }

    pub fn finish(self, root: u32) -> Term {
        Term {
            nodes: self.nodes.into(),
            root,
        }
        .compact()
    }
}

impl Term {
    pub fn app(name: &str, args: Vec<Term>) -> Term {
        let mut b = TermBuilder::new();
        let children = args.iter().map(|a| b.import(a)).collect();
        let root = b.fun(name, children);
        b.finish(root)
    }

    pub fn constant(name: &str) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn var(name: &str) -> Term {
        let mut b = TermBuilder::new();
        let root = b.node(Label::Var(Sym::new(name)), Vec::new());
        b.finish(root)
    }

    /// `rec X . body`: every occurrence of the variable `var` in `body` is
    /// redirected to the root of `body`. `body` must not be `var` itself.
    pub fn rec(var: &str, body: &Term) -> Result<Term> {
        let var = Sym::new(var);
        if body.label() == Label::Var(var) {
            return Err(Error::UnboundRecursion(var.name().to_owned()));
        }
        let mut b = TermBuilder::new();
        let root = b.import(body);
        for n in 0..b.nodes.len() {
            let children = b.nodes[n].children.clone();
            for (i, &c) in children.iter().enumerate() {
                if b.nodes[c as usize].label == Label::Var(var) {
                    b.nodes[n].children[i] = root;
                }
            }
        }
        Ok(b.finish(root))
    }

    /// Unary nest `f1(f2(...fk(tail)))`.
    pub fn word(symbols: &[Sym], tail: Term) -> Term {
        let mut b = TermBuilder::new();
        let mut cur = b.import(&tail);
        for s in symbols.iter().rev() {
            cur = b.node(Label::Fun(*s), vec![cur]);
        }
        b.finish(cur)
    }

    /// The rational term `prefix cycle cycle ...` over unary symbols.
    pub fn omega_word(prefix: &[Sym], cycle: &[Sym]) -> Term {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        let mut b = TermBuilder::new();
        let ids: Vec<u32> = cycle.iter().map(|_| b.placeholder()).collect();
        for (i, s) in cycle.iter().enumerate() {
            let next = ids[(i + 1) % ids.len()];
            b.fill(ids[i], Label::Fun(*s), vec![next]);
        }
        let mut cur = ids[0];
        for s in prefix.iter().rev() {
            cur = b.node(Label::Fun(*s), vec![cur]);
        }
        b.finish(cur)
    }

    pub fn label(&self) -> Label {
        self.nodes[self.root as usize].label
    }

    pub fn head(&self) -> Sym {
        self.label().sym()
    }

    pub fn arity(&self) -> usize {
        self.nodes[self.root as usize].children.len()
    }

    /// The `i`-th argument, 0-based.
    pub fn arg(&self, i: usize) -> Term {
        Term {
            nodes: self.nodes.clone(),
            root: self.nodes[self.root as usize].children[i],
        }
    }

    pub fn args(&self) -> impl Iterator<Item = Term> + '_ {
        (0..self.arity()).map(move |i| self.arg(i))
    }

    pub(crate) fn at_node(&self, node: u32) -> Term {
        Term {
            nodes: self.nodes.clone(),
            root: node,
        }
    }

    pub(crate) fn node(&self, id: u32) -> &Node {
        &self.nodes[id as usize]
    }

    /// Node ids reachable from the root, in depth-first preorder.
    pub(crate) fn reachable(&self) -> Vec<u32> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n as usize], true) {
                continue;
            }
            order.push(n);
            for &c in self.nodes[n as usize].children.iter().rev() {
                if !seen[c as usize] {
                    stack.push(c);
                }
            }
        }
        order
    }

    pub fn node_count(&self) -> usize {
        self.reachable().len()
    }

    fn compact(self) -> Term {
        let order = self.reachable();
        if order.len() == self.nodes.len()
            && self.root == 0
            && order.iter().enumerate().all(|(i, &n)| i as u32 == n)
        {
            return self;
        }
        let mut remap = vec![u32::MAX; self.nodes.len()];
        for (i, &n) in order.iter().enumerate() {
            remap[n as usize] = i as u32;
        }
        let nodes: Vec<Node> = order
            .iter()
            .map(|&n| {
                let node = &self.nodes[n as usize];
                Node {
                    label: node.label,
                    children: node.children.iter().map(|&c| remap[c as usize]).collect(),
                }
            })
            .collect();
        Term {
            nodes: nodes.into(),
            root: 0,
        }
    }

    /// True iff the reachable graph is acyclic.
    pub fn is_finite(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = vec![0u8; self.nodes.len()];
        let mut stack: Vec<(u32, usize)> = vec![(self.root, 0)];
        color[self.root as usize] = 1;
        while let Some(&mut (n, ref mut next)) = stack.last_mut() {
            let children = &self.nodes[n as usize].children;
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                match color[c as usize] {
                    0 => {
                        color[c as usize] = 1;
                        stack.push((c, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[n as usize] = 2;
                stack.pop();
            }
        }
        true
    }

    pub fn is_ground(&self) -> bool {
        self.first_var().is_none()
    }

    pub fn first_var(&self) -> Option<Sym> {
        self.reachable()
            .into_iter()
            .find_map(|n| match self.nodes[n as usize].label {
                Label::Var(v) => Some(v),
                Label::Fun(_) => None,
            })
    }

    /// Variables in order of first occurrence (depth-first, left to right).
    pub fn vars(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        for n in self.reachable() {
            if let Label::Var(v) = self.nodes[n as usize].label {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// All function symbols with their arities, in first-occurrence order.
    pub fn symbols(&self) -> Vec<(Sym, usize)> {
        let mut out: Vec<(Sym, usize)> = Vec::new();
        for n in self.reachable() {
            let node = &self.nodes[n as usize];
            if let Label::Fun(s) = node.label {
                if !out.iter().any(|&(t, _)| t == s) {
                    out.push((s, node.children.len()));
                }
            }
        }
        out
    }

    pub fn contains_symbol(&self, name: Sym) -> bool {
        self.reachable()
            .into_iter()
            .any(|n| self.nodes[n as usize].label == Label::Fun(name))
    }

    /// Height of a finite term (a constant has height 1); `None` for rational
    /// terms.
    pub fn height(&self) -> Option<usize> {
        if !self.is_finite() {
            return None;
        }
        fn go(t: &Term, n: u32, memo: &mut Vec<usize>) -> usize {
            if memo[n as usize] > 0 {
                return memo[n as usize];
            }
            let h = 1 + t.nodes[n as usize]
                .children
                .iter()
                .map(|&c| go(t, c, memo))
                .max()
                .unwrap_or(0);
            memo[n as usize] = h;
            h
        }
        let mut memo = vec![0; self.nodes.len()];
        Some(go(self, self.root, &mut memo))
    }

    pub(crate) fn path_nodes(&self, p: &Position) -> Result<Vec<u32>> {
        let mut path = Vec::with_capacity(p.len() + 1);
        let mut cur = self.root;
        path.push(cur);
        for &i in &p.0 {
            let children = &self.nodes[cur as usize].children;
            if i == 0 || i as usize > children.len() {
                return Err(Error::InvalidPosition(p.clone()));
            }
            cur = children[i as usize - 1];
            path.push(cur);
        }
        Ok(path)
    }

    pub fn is_valid_position(&self, p: &Position) -> bool {
        self.path_nodes(p).is_ok()
    }

    pub fn subterm_at(&self, p: &Position) -> Result<Term> {
        let path = self.path_nodes(p)?;
        Ok(self.at_node(*path.last().unwrap()))
    }

    /// Replaces the subterm at `p` by `s`. Nodes on the path from the root to
    /// `p` are copied, so a position running through a cycle unrolls it just
    /// far enough.
    pub fn replace_at(&self, p: &Position, s: &Term) -> Result<Term> {
        let path = self.path_nodes(p)?;
        let mut b = TermBuilder::new();
        let base = b.import_all(self);
        let new_sub = b.import(s);
        Ok(splice(b, self, &path, p, base, new_sub))
    }

    /// Finite term equal to `self` on every position shorter than `depth`,
    /// with the nodes at depth `depth` replaced by `cut`.
    pub fn truncate(&self, depth: usize) -> Term {
        let mut b = TermBuilder::new();
        let root = truncate_into(self, self.root, depth, &mut b);
        b.finish(root)
    }

    /// Positions of length at most `max_len`, in lexicographic order, paired
    /// with the node reached. Subtrees for which `keep` is false are skipped.
    pub(crate) fn positions_where(
        &self,
        max_len: usize,
        keep: &dyn Fn(u32) -> bool,
    ) -> Vec<(Position, u32)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn go(
            t: &Term,
            n: u32,
            max_len: usize,
            path: &mut Vec<u32>,
            keep: &dyn Fn(u32) -> bool,
            out: &mut Vec<(Position, u32)>,
        ) {
            if !keep(n) {
                return;
            }
            out.push((Position(path.clone()), n));
            if path.len() == max_len {
                return;
            }
            for (i, &c) in t.nodes[n as usize].children.iter().enumerate() {
                path.push(i as u32 + 1);
                go(t, c, max_len, path, keep, out);
                path.pop();
            }
        }
        go(self, self.root, max_len, &mut path, keep, &mut out);
        out
    }

    pub fn positions(&self, max_len: usize) -> Vec<Position> {
        self.positions_where(max_len, &|_| true)
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }
}

impl TermBuilder {
    /// Imports every node of the arena (not only the reachable ones) at
    /// offset; returns the offset.
    fn import_all(&mut self, t: &Term) -> u32 {
        let offset = self.nodes.len() as u32;
        for node in t.nodes.iter() {
            self.nodes.push(Node {
                label: node.label,
                children: node.children.iter().map(|&c| c + offset).collect(),
            });
        }
        offset
    }
}

/// Copies the nodes on `path` (arena ids of `t`, imported at `base`) and
/// points the last copied edge at `new_sub`.
fn splice(
    mut b: TermBuilder,
    t: &Term,
    path: &[u32],
    p: &Position,
    base: u32,
    new_sub: u32,
) -> Term {
    let mut below = new_sub;
    for depth in (0..p.len()).rev() {
        let orig = &t.nodes[path[depth] as usize];
        let mut children: Vec<u32> = orig.children.iter().map(|&c| c + base).collect();
        children[p.0[depth] as usize - 1] = below;
        below = b.node(orig.label, children);
    }
    b.finish(below)
}

/// Replaces the subterm at `p` by the instance of the finite pattern `rhs`
/// in which each variable is bound to a node of `t`'s arena.
pub(crate) fn splice_instance(
    t: &Term,
    p: &Position,
    rhs: &Term,
    bindings: &[(Sym, u32)],
) -> Result<Term> {
    let path = t.path_nodes(p)?;
    let mut b = TermBuilder::new();
    let base = b.import_all(t);
    fn inst(
        rhs: &Term,
        n: u32,
        base: u32,
        bindings: &[(Sym, u32)],
        b: &mut TermBuilder,
    ) -> Result<u32> {
        let node = rhs.node(n);
        match node.label {
            Label::Var(v) => bindings
                .iter()
                .find(|(w, _)| *w == v)
                .map(|&(_, id)| id + base)
                .ok_or_else(|| Error::NotGround(v.name().to_owned())),
            Label::Fun(_) => {
                let children = node
                    .children
                    .iter()
                    .map(|&c| inst(rhs, c, base, bindings, b))
                    .collect::<Result<Vec<_>>>()?;
                Ok(b.node(node.label, children))
            }
        }
    }
    let new_sub = inst(rhs, rhs.root, base, bindings, &mut b)?;
    Ok(splice(b, t, &path, p, base, new_sub))
}

fn truncate_into(t: &Term, n: u32, depth: usize, b: &mut TermBuilder) -> u32 {
    if depth == 0 {
        return b.fun(CUT, Vec::new());
    }
    let node = &t.nodes[n as usize];
    let children = node
        .children
        .iter()
        .map(|&c| truncate_into(t, c, depth - 1, b))
        .collect();
    b.node(node.label, children)
}

/// Builds `rec X . C[X]` where `C` is `context` with the subterm at `hole`
/// replaced by a back edge to the root. `hole` must be nonempty.
pub fn close_cycle(context: &Term, hole: &Position) -> Result<Term> {
    assert!(!hole.is_empty(), "a cycle needs a nonempty context");
    let path = context.path_nodes(hole)?;
    let mut b = TermBuilder::new();
    let base = b.import_all(context);
    // Copies of the path nodes; the root copy is created first so the last
    // edge can point back at it.
    let ids: Vec<u32> = (0..hole.len()).map(|_| b.placeholder()).collect();
    for depth in 0..hole.len() {
        let orig = &context.nodes[path[depth] as usize];
        let mut children: Vec<u32> = orig.children.iter().map(|&c| c + base).collect();
        let target = if depth + 1 < hole.len() {
            ids[depth + 1]
        } else {
            ids[0]
        };
        children[hole.0[depth] as usize - 1] = target;
        b.fill(ids[depth], orig.label, children);
    }
    Ok(b.finish(ids[0]))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print_term(self))
    }
}

pub use print::print_term;

/// Convenience for tests and fixtures: parses with an implicit signature in
/// which every applied identifier is a symbol and bare identifiers are
/// constants.
pub fn term(text: &str) -> Term {
    parse::parse_loose(text).unwrap_or_else(|e| panic!("bad term `{text}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subterm_at_follows_paths_and_cycles() {
        let t = term("run(T, pickn, pickn)");
        assert!(bisim_equal(
            &t.subterm_at(&vec![1].into()).unwrap(),
            &term("T")
        ));
        let cyc = term("rec X . peb(X)");
        let s = cyc.subterm_at(&vec![1, 1, 1].into()).unwrap();
        assert!(bisim_equal(&s, &cyc));
        let cfg = term("q0(S(end), 0(end))");
        assert!(bisim_equal(
            &cfg.subterm_at(&vec![2, 1].into()).unwrap(),
            &term("end")
        ));
        assert_eq!(
            cfg.subterm_at(&vec![3].into()).unwrap_err(),
            Error::InvalidPosition(vec![3].into())
        );
    }

    #[test]
    fn replace_at_examples() {
        let t = term("peb(T)");
        let r = t.replace_at(&vec![1].into(), &term("T")).unwrap();
        assert!(bisim_equal(&r, &t));

        let t = term("run(T, pickn, pickn)");
        let r = t.replace_at(&vec![2].into(), &term("ok(0(end))")).unwrap();
        assert!(bisim_equal(&r, &term("run(T, ok(0(end)), pickn)")));
        // the original is untouched
        assert!(bisim_equal(&t, &term("run(T, pickn, pickn)")));

        let cyc = term("rec X . a(X)");
        let r = cyc.replace_at(&vec![1].into(), &term("b(end)")).unwrap();
        assert!(r.is_finite());
        assert!(bisim_equal(&r.truncate(3), &term("a(b(end))")));
        assert!(bisim_equal(&r, &term("a(b(end))")));
    }

    #[test]
    fn replace_inside_cycle_unrolls_only_the_path() {
        let cyc = term("rec X . f(X, a)");
        let r = cyc.replace_at(&vec![1, 1].into(), &term("b")).unwrap();
        assert!(bisim_equal(&r, &term("f(f(b, a), a)")));
    }

    #[test]
    fn truncate_examples() {
        assert!(bisim_equal(
            &term("rec X . peb(X)").truncate(2),
            &term("peb(peb(cut))")
        ));
        assert!(bisim_equal(&term("T").truncate(5), &term("T")));
        assert!(bisim_equal(
            &term("rec X . a(X)").truncate(3),
            &term("a(a(a(cut)))")
        ));
        assert!(bisim_equal(&term("T").truncate(0), &term("cut")));
    }

    #[test]
    fn finiteness_and_groundness() {
        assert!(term("f(a, g(b))").is_finite());
        assert!(!term("rec X . f(X, a)").is_finite());
        let pat = crate::term::parse_pattern(
            "q(x, S(y))",
            &crate::symbol::Signature::new().with("q", 2).with("S", 1),
        )
        .unwrap();
        assert!(!pat.is_ground());
        assert_eq!(pat.vars().len(), 2);
    }

    #[test]
    fn close_cycle_builds_rational_limit() {
        let ctx = term("b(a(hole))");
        let t = close_cycle(&ctx, &vec![1, 1].into()).unwrap();
        assert!(bisim_equal(&t, &term("rec X . b(a(X))")));
    }

    #[test]
    fn positions_are_lexicographic() {
        let t = term("f(g(a), b)");
        let ps: Vec<String> = t.positions(5).iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["root", "1", "1.1", "2"]);
    }
}
