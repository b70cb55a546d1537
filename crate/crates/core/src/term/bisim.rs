//! Bisimulation of term graphs by partition refinement, and canonical keys.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{Label, Term};

fn label_code(l: Label) -> u64 {
    match l {
        Label::Fun(s) => (s.id() as u64) << 1,
        Label::Var(s) => ((s.id() as u64) << 1) | 1,
    }
}

/// A flattened graph: labels and child lists over `0..len`.
struct Flat {
    labels: Vec<u64>,
    children: Vec<Vec<usize>>,
}

impl Flat {
    fn push_term(&mut self, t: &Term) -> usize {
        let order = t.reachable();
        let offset = self.labels.len();
        let mut remap = HashMap::with_capacity(order.len());
        for (i, &n) in order.iter().enumerate() {
            remap.insert(n, offset + i);
        }
        for &n in &order {
            let node = t.node(n);
            self.labels.push(label_code(node.label));
            self.children
                .push(node.children.iter().map(|c| remap[c]).collect());
        }
        remap[&t.root]
    }

    /// Coarsest stable partition. Nodes not reachable from a cycle are
    /// peeled off first and classified bottom-up by their signature; Moore
    /// refinement runs only on the cyclic rest. Returns the class of every
    /// node.
    fn refine(&self) -> Vec<u32> {
        let n = self.labels.len();
        let mut indegree = vec![0usize; n];
        for cs in &self.children {
            for &c in cs {
                indegree[c] += 1;
            }
        }
        let mut peeled: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut i = 0;
        while i < peeled.len() {
            for &c in &self.children[peeled[i]] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    peeled.push(c);
                }
            }
            i += 1;
        }
        let mut in_core = vec![true; n];
        for &p in &peeled {
            in_core[p] = false;
        }
        let core: Vec<usize> = (0..n).filter(|&i| in_core[i]).collect();

        let mut class = vec![0u32; n];
        let mut sigs: HashMap<(u64, Vec<u32>), u32> = HashMap::new();
        if !core.is_empty() {
            let mut count = {
                let mut ids: HashMap<(u64, usize), u32> = HashMap::new();
                for &i in &core {
                    let next = ids.len() as u32;
                    class[i] = *ids
                        .entry((self.labels[i], self.children[i].len()))
                        .or_insert(next);
                }
                ids.len()
            };
            loop {
                let mut ids: HashMap<(u32, Vec<u32>), u32> = HashMap::with_capacity(count);
                let mut next_class = class.clone();
                for &i in &core {
                    let sig = (
                        class[i],
                        self.children[i]
                            .iter()
                            .map(|&c| class[c])
                            .collect::<Vec<_>>(),
                    );
                    let next = ids.len() as u32;
                    next_class[i] = *ids.entry(sig).or_insert(next);
                }
                let new_count = ids.len();
                class = next_class;
                if new_count == count {
                    break;
                }
                count = new_count;
            }
            // in the coarsest partition every class has its own signature
            for &i in &core {
                let sig = (
                    self.labels[i],
                    self.children[i].iter().map(|&c| class[c]).collect(),
                );
                sigs.entry(sig).or_insert(class[i]);
            }
        }
        let mut next = sigs.values().map(|&c| c + 1).max().unwrap_or(0);
        for &i in peeled.iter().rev() {
            let sig = (
                self.labels[i],
                self.children[i].iter().map(|&c| class[c]).collect(),
            );
            class[i] = *sigs.entry(sig).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        class
    }
}

/// True iff the infinite unfoldings of `a` and `b` are the same tree.
pub fn bisim_equal(a: &Term, b: &Term) -> bool {
    if Arc::ptr_eq(&a.nodes, &b.nodes) && a.root == b.root {
        return true;
    }
    if a.label() != b.label() || a.arity() != b.arity() {
        return false;
    }
    let mut flat = Flat {
        labels: Vec::new(),
        children: Vec::new(),
    };
    let ra = flat.push_term(a);
    let rb = flat.push_term(b);
    let class = flat.refine();
    class[ra] == class[rb]
}

/// Length of the shortest position at which the unfoldings of `a` and `b`
/// carry different labels, or `None` if they are bisimilar. Two terms with
/// different root labels differ at depth 0.
pub fn agreement_depth(a: &Term, b: &Term) -> Option<usize> {
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((a.root, b.root, 0usize));
    seen.insert((a.root, b.root));
    while let Some((x, y, d)) = queue.pop_front() {
        let nx = a.node(x);
        let ny = b.node(y);
        if nx.label != ny.label || nx.children.len() != ny.children.len() {
            return Some(d);
        }
        for (&cx, &cy) in nx.children.iter().zip(ny.children.iter()) {
            if seen.insert((cx, cy)) {
                queue.push_back((cx, cy, d + 1));
            }
        }
    }
    None
}

/// Canonical representation of a term up to bisimulation: two terms have
/// equal keys iff they are bisimilar.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TermKey(Arc<[u64]>);

/// Minimizes the graph and numbers the classes in depth-first order from
/// the root; the minimal graph is unique up to isomorphism, and the
/// numbering fixes the isomorphism.
pub fn canonical_key(t: &Term) -> TermKey {
    if t.is_finite() {
        return TermKey(finite_key(t).into());
    }
    let mut flat = Flat {
        labels: Vec::new(),
        children: Vec::new(),
    };
    let root = flat.push_term(t);
    let class = flat.refine();
    // one representative node per class
    let mut rep: HashMap<u32, usize> = HashMap::new();
    for (i, &c) in class.iter().enumerate() {
        rep.entry(c).or_insert(i);
    }
    let mut number: HashMap<u32, u64> = HashMap::new();
    let mut out = vec![u64::MAX];
    let mut stack = vec![class[root]];
    let mut order = Vec::new();
    while let Some(c) = stack.pop() {
        if number.contains_key(&c) {
            continue;
        }
        number.insert(c, order.len() as u64);
        order.push(c);
        let node = rep[&c];
        for &ch in flat.children[node].iter().rev() {
            if !number.contains_key(&class[ch]) {
                stack.push(class[ch]);
            }
        }
    }
    for c in order {
        let node = rep[&c];
        out.push(flat.labels[node]);
        out.push(flat.children[node].len() as u64);
        out.extend(flat.children[node].iter().map(|&ch| number[&class[ch]]));
    }
    TermKey(out.into())
}

/// Prefix serialization of a finite term. Distinct from the cyclic encoding
/// by its leading marker.
fn finite_key(t: &Term) -> Vec<u64> {
    let mut out = vec![u64::MAX - 1];
    let mut stack = vec![t.root];
    while let Some(n) = stack.pop() {
        let node = t.node(n);
        out.push(label_code(node.label));
        out.push(node.children.len() as u64);
        for &c in node.children.iter().rev() {
            stack.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::term;

    #[test]
    fn unfolding_is_bisimilar() {
        assert!(bisim_equal(&term("rec X . b(X)"), &term("b(rec X . b(X))")));
        assert!(!bisim_equal(
            &term("rec X . a(b(X))"),
            &term("rec Y . b(a(Y))")
        ));
        let k1 = canonical_key(&term("rec X . b(X)"));
        let k2 = canonical_key(&term("b(b(rec X . b(b(X))))"));
        assert_eq!(k1, k2);
    }

    #[test]
    fn agreement_depth_reports_first_difference() {
        assert_eq!(agreement_depth(&term("a(a(b))"), &term("a(a(c))")), Some(2));
        assert_eq!(
            agreement_depth(&term("rec X . a(X)"), &term("a(a(rec X . a(X)))")),
            None
        );
        assert_eq!(agreement_depth(&term("a"), &term("b")), Some(0));
    }

    #[test]
    fn finite_and_cyclic_keys_never_collide() {
        let a = canonical_key(&term("a(b)"));
        let b = canonical_key(&term("rec X . a(X)"));
        assert_ne!(a, b);
        assert_eq!(
            canonical_key(&term("f(a, a)")),
            canonical_key(&term("f(a, a)"))
        );
    }
}
