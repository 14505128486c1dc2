//! Tree-shaped unary queries: recognition, canonical form, enumeration and
//! the frontier construction.

use std::collections::BTreeSet;

use crate::canon::value_name;
use crate::error::{Error, Result};
use crate::structure::{Relation, Structure};

/// A binary relation read forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Role {
    pub rel: usize,
    pub inverse: bool,
}

impl Role {
    fn flip(self) -> Role {
        Role {
            rel: self.rel,
            inverse: !self.inverse,
        }
    }
}

/// Rooted tree with sorted labels and children; the derived order is a
/// canonical order on isomorphism types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Tree {
    pub labels: Vec<usize>,
    pub children: Vec<(Role, Tree)>,
}

/// Tree whose nodes remember the value of the query they derive from.
#[derive(Debug, Clone)]
pub(crate) struct Origin {
    pub origin: usize,
    pub labels: Vec<usize>,
    pub children: Vec<(Role, Origin)>,
}

impl Tree {
    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.nodes()).sum::<usize>()
    }

    /// The instance of the query, rooted at its only answer variable.
    pub fn to_structure(&self, arities: &[usize]) -> Structure {
        let mut s = Structure {
            names: Vec::new(),
            rels: arities.iter().map(|&a| Relation::new(a)).collect(),
            dist: vec![0],
        };
        fn add(node: &Tree, s: &mut Structure) -> usize {
            let me = s.names.len();
            s.names.push(value_name(me));
            for &l in &node.labels {
                s.rels[l].insert(vec![me]);
            }
            for (role, child) in &node.children {
                let c = add(child, s);
                let t = if role.inverse { vec![c, me] } else { vec![me, c] };
                s.rels[role.rel].insert(t);
            }
            me
        }
        add(self, &mut s);
        s
    }

    /// Trees obtained by removing one unary atom, or one edge together with
    /// the subtree below it.
    pub fn one_removal(&self) -> Vec<Tree> {
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            let mut t = self.clone();
            t.labels.remove(i);
            out.push(t);
        }
        for i in 0..self.children.len() {
            let mut t = self.clone();
            t.children.remove(i);
            out.push(t);
            for sub in self.children[i].1.one_removal() {
                let mut t = self.clone();
                t.children[i].1 = sub;
                t.children.sort();
                out.push(t);
            }
        }
        out
    }
}

impl Origin {
    pub fn strip(&self) -> Tree {
        let mut children: Vec<(Role, Tree)> = self.children.iter().map(|(r, c)| (*r, c.strip())).collect();
        children.sort();
        let mut labels = self.labels.clone();
        labels.sort();
        Tree { labels, children }
    }
}

/// The tree of `s` rooted at `root`, if `s` is a tree: connected through
/// binary facts, without cycles and without values outside of it.
pub(crate) fn rooted_at(s: &Structure, root: usize) -> Result<Origin> {
    let n = s.len();
    let mut labels = vec![Vec::new(); n];
    let mut adj: Vec<Vec<(Role, usize)>> = vec![Vec::new(); n];
    let mut edges = 0;
    for (r, t) in s.facts() {
        match t.as_slice() {
            [a] => labels[*a].push(r),
            [a, b] => {
                if a == b {
                    return Err(Error::NotATree(format!("self-loop on {}", s.names[*a])));
                }
                adj[*a].push((Role { rel: r, inverse: false }, *b));
                adj[*b].push((Role { rel: r, inverse: true }, *a));
                edges += 1;
            }
            _ => return Err(Error::NotATree("relation of arity other than one or two".into())),
        }
    }
    let mut values: BTreeSet<usize> = s.facts().flat_map(|(_, t)| t.iter().copied()).collect();
    values.insert(root);
    if edges + 1 != values.len() {
        return Err(Error::NotATree("the binary facts do not form a tree".into()));
    }
    let mut seen = vec![false; n];
    fn build(v: usize, adj: &[Vec<(Role, usize)>], labels: &[Vec<usize>], seen: &mut [bool]) -> Origin {
        seen[v] = true;
        let mut children = Vec::new();
        for &(role, w) in &adj[v] {
            if !seen[w] {
                children.push((role, build(w, adj, labels, seen)));
            }
        }
        Origin {
            origin: v,
            labels: labels[v].clone(),
            children,
        }
    }
    let tree = build(root, &adj, &labels, &mut seen);
    if values.iter().any(|&v| !seen[v]) {
        return Err(Error::NotATree("the query is not connected".into()));
    }
    Ok(tree)
}

/// Frontier of the tree rooted in `q`: generalize each tree at every node,
/// then compensate each edge pointing away from the root with a copy of
/// `q` rerooted at the origin of its parent.
pub(crate) fn frontier(q: &Structure) -> Result<Vec<Tree>> {
    let root = rooted_at(q, q.dist[0])?;
    let mut out: Vec<Tree> = Vec::new();
    for mut p in generalize(&root) {
        compensate(q, &mut p)?;
        out.push(p.strip());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn generalize(x: &Origin) -> Vec<Origin> {
    let mut out = Vec::new();
    for i in 0..x.labels.len() {
        let mut t = x.clone();
        t.labels.remove(i);
        out.push(t);
    }
    for i in 0..x.children.len() {
        let (role, child) = &x.children[i];
        let mut t = x.clone();
        t.children.remove(i);
        for sub in generalize(child) {
            t.children.push((*role, sub));
        }
        out.push(t);
    }
    out
}

fn compensate(q: &Structure, node: &mut Origin) -> Result<()> {
    let parent = node.origin;
    for (role, child) in node.children.iter_mut() {
        compensate(q, child)?;
        let copy = rooted_at(q, parent)?;
        child.children.push((role.flip(), copy));
    }
    Ok(())
}

/// All trees with exactly `nodes` nodes and at most `max_children`
/// children per node, in canonical order.
pub(crate) struct Enumerator {
    unary: Vec<usize>,
    roles: Vec<Role>,
    max_children: usize,
    /// `by_size[k]` holds the trees with `k` nodes.
    by_size: Vec<Vec<Tree>>,
}

impl Enumerator {
    pub fn new(arities: &[usize], max_children: usize) -> Self {
        let unary = (0..arities.len()).filter(|&r| arities[r] == 1).collect();
        let mut roles = Vec::new();
        for (r, &a) in arities.iter().enumerate() {
            if a == 2 {
                roles.push(Role { rel: r, inverse: false });
                roles.push(Role { rel: r, inverse: true });
            }
        }
        roles.sort();
        Enumerator {
            unary,
            roles,
            max_children,
            by_size: vec![Vec::new()],
        }
    }

    pub fn trees(&mut self, nodes: usize) -> &[Tree] {
        while self.by_size.len() <= nodes {
            let k = self.by_size.len();
            let level = self.build(k);
            self.by_size.push(level);
        }
        &self.by_size[nodes]
    }

    fn build(&self, k: usize) -> Vec<Tree> {
        let mut label_sets: Vec<Vec<usize>> = vec![Vec::new()];
        for &u in &self.unary {
            let with: Vec<Vec<usize>> = label_sets
                .iter()
                .map(|l| {
                    let mut l = l.clone();
                    l.push(u);
                    l
                })
                .collect();
            label_sets.extend(with);
        }
        label_sets.iter_mut().for_each(|l| l.sort());
        let mut items: Vec<(Role, &Tree)> = Vec::new();
        for size in 1..k {
            for t in &self.by_size[size] {
                for &r in &self.roles {
                    items.push((r, t));
                }
            }
        }
        items.sort();
        let mut child_lists: Vec<Vec<(Role, Tree)>> = Vec::new();
        let mut cur: Vec<(Role, Tree)> = Vec::new();
        self.choose(&items, 0, k - 1, &mut cur, &mut child_lists);
        let mut out = Vec::new();
        for labels in &label_sets {
            for children in &child_lists {
                out.push(Tree {
                    labels: labels.clone(),
                    children: children.clone(),
                });
            }
        }
        out.sort();
        out
    }

    fn choose(
        &self,
        items: &[(Role, &Tree)],
        from: usize,
        remaining: usize,
        cur: &mut Vec<(Role, Tree)>,
        out: &mut Vec<Vec<(Role, Tree)>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == self.max_children {
            return;
        }
        for i in from..items.len() {
            let (role, tree) = items[i];
            let size = tree.nodes();
            if size > remaining {
                continue;
            }
            cur.push((role, tree.clone()));
            self.choose(items, i, remaining - size, cur, out);
            cur.pop();
        }
    }
}
