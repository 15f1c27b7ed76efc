//! Labelled full binary trees and the clause-sets of deficiency one they
//! encode.
//!
//! A left edge below a node labelled `v` carries the literal `v`, a right
//! edge carries `¬v`. Leaves are numbered 0, 1, ... in in-order.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Range;

use crate::cnf::{Clause, ClauseSet, Lit, Var};
use crate::error::{Error, Result};
use crate::mps::{dope, DopedClauseSet};

#[derive(Clone, PartialEq, Eq, Hash)]
struct Inner {
    var: Var,
    left: Tree,
    right: Tree,
}

/// A full binary tree with injectively labelled inner nodes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    inner: Option<Box<Inner>>,
}

impl std::fmt::Debug for Tree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.split() {
            None => write!(f, "*"),
            Some((v, l, r)) => write!(f, "({v} {l:?} {r:?})"),
        }
    }
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree { inner: None }
    }

    /// # Errors
    /// [`Error::InvalidInput`] if `var` or a variable of one subtree also
    /// labels another node.
    pub fn node(var: Var, left: Tree, right: Tree) -> Result<Tree> {
        let lv = left.var_set();
        let rv = right.var_set();
        if lv.contains(&var) || rv.contains(&var) || !lv.is_disjoint(&rv) {
            return Err(Error::InvalidInput("tree labels must be pairwise distinct".into()));
        }
        Ok(Tree::node_unchecked(var, left, right))
    }

    fn node_unchecked(var: Var, left: Tree, right: Tree) -> Tree {
        Tree { inner: Some(Box::new(Inner { var, left, right })) }
    }

    /// Label, left and right subtree of an inner node.
    pub fn split(&self) -> Option<(Var, &Tree, &Tree)> {
        self.inner.as_deref().map(|n| (n.var, &n.left, &n.right))
    }

    pub fn is_leaf(&self) -> bool {
        self.inner.is_none()
    }

    pub fn n_leaves(&self) -> usize {
        match self.split() {
            None => 1,
            Some((_, l, r)) => l.n_leaves() + r.n_leaves(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        2 * self.n_leaves() - 1
    }

    pub fn height(&self) -> usize {
        match self.split() {
            None => 0,
            Some((_, l, r)) => 1 + l.height().max(r.height()),
        }
    }

    /// The Horton-Strahler number.
    pub fn hts(&self) -> usize {
        match self.split() {
            None => 0,
            Some((_, l, r)) => {
                let (a, b) = (l.hts(), r.hts());
                if a == b {
                    a + 1
                } else {
                    a.max(b)
                }
            }
        }
    }

    /// Inner-node labels in preorder.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        if let Some((v, l, r)) = self.split() {
            out.push(v);
            l.collect_vars(out);
            r.collect_vars(out);
        }
    }

    fn var_set(&self) -> BTreeSet<Var> {
        self.vars().into_iter().collect()
    }

    /// Depth of every leaf, in leaf order.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn go(t: &Tree, d: usize, out: &mut Vec<usize>) {
            match t.split() {
                None => out.push(d),
                Some((_, l, r)) => {
                    go(l, d + 1, out);
                    go(r, d + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// The clause C_w of every leaf w, in leaf order.
    pub fn leaf_clauses(&self) -> Vec<Clause> {
        fn go(t: &Tree, path: &mut Vec<Lit>, out: &mut Vec<Clause>) {
            match t.split() {
                None => out.push(Clause::new(path.iter().copied()).expect("injective labels")),
                Some((v, l, r)) => {
                    path.push(v.pos());
                    go(l, path, out);
                    path.pop();
                    path.push(v.neg());
                    go(r, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// smuo(T), the clause-set of all root-to-leaf paths.
    pub fn smuo(&self) -> ClauseSet {
        ClauseSet::new(self.leaf_clauses())
    }

    /// The same shape with inner nodes relabelled `first, first+1, ...` in
    /// preorder.
    pub fn relabel_preorder(&self, first: u32) -> Tree {
        fn go(t: &Tree, next: &mut u32) -> Tree {
            match t.split() {
                None => Tree::leaf(),
                Some((_, l, r)) => {
                    let v = Var::new(*next);
                    *next += 1;
                    let l = go(l, next);
                    let r = go(r, next);
                    Tree::node_unchecked(v, l, r)
                }
            }
        }
        let mut next = first;
        go(self, &mut next)
    }

    fn shape(left: Tree, right: Tree) -> Tree {
        // Placeholder label; callers relabel before handing trees out.
        Tree::node_unchecked(Var::new(1), left, right)
    }

    /// The perfect tree of the given height, labelled in preorder from 1.
    pub fn perfect(height: usize) -> Tree {
        fn go(h: usize) -> Tree {
            if h == 0 {
                Tree::leaf()
            } else {
                Tree::shape(go(h - 1), go(h - 1))
            }
        }
        go(height).relabel_preorder(1)
    }

    /// All full binary trees with the given number of leaves, labelled in
    /// preorder from 1.
    pub fn all_shapes(leaves: usize) -> Vec<Tree> {
        fn go(n: usize) -> Vec<Tree> {
            if n == 1 {
                return vec![Tree::leaf()];
            }
            let mut out = Vec::new();
            for i in 1..n {
                for l in go(i) {
                    for r in go(n - i) {
                        out.push(Tree::shape(l.clone(), r));
                    }
                }
            }
            out
        }
        if leaves == 0 {
            return Vec::new();
        }
        go(leaves).into_iter().map(|t| t.relabel_preorder(1)).collect()
    }

    /// A member of ExT(k, h), labelled in preorder from 1. The subtree with
    /// the larger Horton-Strahler number goes left; for k = 1 the inner
    /// child goes left.
    pub fn extremal(k: usize, h: usize) -> Result<Tree> {
        check_allowed(k, h)?;
        fn go(k: usize, h: usize) -> Tree {
            match (k, h) {
                (0, _) => Tree::leaf(),
                (1, 0) => unreachable!(),
                (1, h) => {
                    let mut t = Tree::leaf();
                    for _ in 0..h {
                        t = Tree::shape(t, Tree::leaf());
                    }
                    t
                }
                (k, h) => Tree::shape(go(k.min(h - 1), h - 1), go(k - 1, h - 1)),
            }
        }
        Ok(go(k, h).relabel_preorder(1))
    }

    /// tsmuo(F): the tree with smuo(T) = F.
    ///
    /// # Errors
    /// [`Error::NotSmu1`] if F is not saturated minimally unsatisfiable of
    /// deficiency one.
    pub fn from_smu1(f: &ClauseSet) -> Result<Tree> {
        fn go(clauses: Vec<Clause>) -> Result<Tree> {
            if clauses.len() == 1 && clauses[0].is_empty() {
                return Ok(Tree::leaf());
            }
            if clauses.is_empty() {
                return Err(Error::NotSmu1("empty clause-set below a node".into()));
            }
            let mut common: BTreeSet<Var> = clauses[0].vars().collect();
            for c in &clauses[1..] {
                let vs: BTreeSet<Var> = c.vars().collect();
                common.retain(|v| vs.contains(v));
            }
            let v = match common.len() {
                1 => *common.first().unwrap(),
                0 => return Err(Error::NotSmu1("no variable occurs in every clause".into())),
                _ => return Err(Error::NotSmu1("several variables occur in every clause".into())),
            };
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for c in clauses {
                if c.contains(v.pos()) {
                    left.push(Clause::new(c.iter().filter(|&x| x != v.pos())).unwrap());
                } else {
                    right.push(Clause::new(c.iter().filter(|&x| x != v.neg())).unwrap());
                }
            }
            let l = go(left)?;
            let r = go(right)?;
            if !l.var_set().is_disjoint(&r.var_set()) {
                return Err(Error::NotSmu1(format!("variables shared below {v}")));
            }
            Ok(Tree::node_unchecked(v, l, r))
        }
        go(f.clauses().to_vec())
    }

    fn find(&self, v: Var) -> bool {
        match self.split() {
            None => false,
            Some((w, l, r)) => w == v || l.find(v) || r.find(v),
        }
    }

    /// The tree of ⟨x → 1⟩ * smuo(T): the node labelled var(x) is replaced
    /// by its subtree reached via x̄.
    pub fn apply_literal(&self, x: Lit) -> Result<Tree> {
        if !self.find(x.var()) {
            return Err(Error::VariableNotPresent(x.var()));
        }
        fn go(t: &Tree, x: Lit) -> Tree {
            match t.split() {
                None => Tree::leaf(),
                Some((v, l, r)) if v == x.var() => {
                    if x.is_positive() {
                        r.clone()
                    } else {
                        l.clone()
                    }
                }
                Some((v, l, r)) => Tree::node_unchecked(v, go(l, x), go(r, x)),
            }
        }
        Ok(go(self, x))
    }

    /// Leaf-index ranges of the subtrees rooted at depth `k`, left to
    /// right.
    pub fn subtrees_at_depth(&self, k: usize) -> Vec<Range<usize>> {
        fn go(t: &Tree, d: usize, k: usize, start: usize, out: &mut Vec<Range<usize>>) -> usize {
            if d == k {
                let n = t.n_leaves();
                out.push(start..start + n);
                return n;
            }
            match t.split() {
                None => 1,
                Some((_, l, r)) => {
                    let a = go(l, d + 1, k, start, out);
                    a + go(r, d + 1, k, start + a, out)
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, k, 0, &mut out);
        out
    }

    /// P_V: the literals x with V meeting the leaves below x but none below
    /// x̄. `in_v` flags the leaves of V in leaf order.
    pub fn pure_literals_of(&self, in_v: &[bool]) -> Vec<Lit> {
        fn go(t: &Tree, in_v: &[bool], start: usize, out: &mut Vec<Lit>) -> (usize, bool) {
            match t.split() {
                None => (1, in_v[start]),
                Some((v, l, r)) => {
                    let (nl, hl) = go(l, in_v, start, out);
                    let (nr, hr) = go(r, in_v, start + nl, out);
                    if hl && !hr {
                        out.push(v.pos());
                    } else if hr && !hl {
                        out.push(v.neg());
                    }
                    (nl + nr, hl || hr)
                }
            }
        }
        let mut out = Vec::new();
        go(self, in_v, 0, &mut out);
        out
    }

    /// The tree in Graphviz DOT syntax.
    pub fn to_dot(&self) -> String {
        fn go(t: &Tree, id: &mut usize, leaf: &mut usize, out: &mut String) -> usize {
            let me = *id;
            *id += 1;
            match t.split() {
                None => {
                    let _ = writeln!(out, "  n{me} [label=\"{}\", shape=box];", *leaf);
                    *leaf += 1;
                }
                Some((v, l, r)) => {
                    let _ = writeln!(out, "  n{me} [label=\"v{v}\"];");
                    let a = go(l, id, leaf, out);
                    let _ = writeln!(out, "  n{me} -> n{a} [label=\"{v}\"];");
                    let b = go(r, id, leaf, out);
                    let _ = writeln!(out, "  n{me} -> n{b} [label=\"-{v}\"];");
                }
            }
            me
        }
        let mut out = String::from("digraph tree {\n");
        go(self, &mut 0, &mut 0, &mut out);
        out.push_str("}\n");
        out
    }
}

/// tsmuo(F).
pub fn tsmuo(f: &ClauseSet) -> Result<Tree> {
    Tree::from_smu1(f)
}

fn check_allowed(k: usize, h: usize) -> Result<()> {
    if h < k || (k == 0 && h != 0) {
        return Err(Error::InvalidParameters(format!("({k}, {h}) is not an allowed parameter pair")));
    }
    Ok(())
}

/// α(k, h) = Σ_{i ≤ k} C(h, i), the leaf count of ExT(k, h).
pub fn alpha(k: usize, h: usize) -> Result<u64> {
    check_allowed(k, h)?;
    let mut sum: u64 = 0;
    let mut binom: u64 = 1;
    for i in 0..=k {
        if i > 0 {
            binom = binom
                .checked_mul((h + 1 - i) as u64)
                .map(|b| b / i as u64)
                .ok_or_else(|| Error::InvalidParameters(format!("α({k}, {h}) overflows")))?;
        }
        sum = sum.checked_add(binom).ok_or_else(|| Error::InvalidParameters(format!("α({k}, {h}) overflows")))?;
    }
    Ok(sum)
}

/// D(smuo(T)) together with the tree and the doping variable of each leaf.
#[derive(Debug, Clone)]
pub struct DopedTree {
    pub tree: Tree,
    pub doped: DopedClauseSet,
    /// u_w for every leaf w, in leaf order.
    pub leaf_vars: Vec<Var>,
}

impl DopedTree {
    pub fn new(tree: Tree) -> DopedTree {
        let doped = dope(&tree.smuo());
        let leaf_vars = tree
            .leaf_clauses()
            .iter()
            .map(|c| doped.doping_var(c).expect("leaf clause is in smuo(T)"))
            .collect();
        DopedTree { tree, doped, leaf_vars }
    }

    pub fn clauses(&self) -> &ClauseSet {
        self.doped.clauses()
    }

    /// C_V = U_V ∪ P_V for a non-empty set V of leaf indices.
    pub fn clause_cv(&self, leaves: &BTreeSet<usize>) -> Result<Clause> {
        if leaves.is_empty() {
            return Err(Error::EmptyLeafSet);
        }
        let n = self.leaf_vars.len();
        if let Some(&w) = leaves.iter().find(|&&w| w >= n) {
            return Err(Error::InvalidInput(format!("leaf {w} out of range, tree has {n} leaves")));
        }
        let mut in_v = vec![false; n];
        for &w in leaves {
            in_v[w] = true;
        }
        let mut lits = self.tree.pure_literals_of(&in_v);
        lits.extend(leaves.iter().map(|&w| self.leaf_vars[w].pos()));
        Clause::new(lits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_tree() -> Tree {
        let leaf = Tree::leaf;
        let v = Var::new;
        let t3 = Tree::node(v(3), leaf(), leaf()).unwrap();
        let t4 = Tree::node(v(4), leaf(), leaf()).unwrap();
        let t2 = Tree::node(v(2), t3, t4).unwrap();
        let t5 = Tree::node(v(5), leaf(), leaf()).unwrap();
        Tree::node(v(1), t2, t5).unwrap()
    }

    #[test]
    fn example_measures() {
        let t = example_tree();
        assert_eq!((t.hts(), t.height()), (2, 3));
        assert_eq!((Tree::leaf().hts(), Tree::leaf().height()), (0, 0));
        assert_eq!(t.n_leaves(), 6);
        assert_eq!(t.n_nodes(), 11);
    }

    #[test]
    fn example_clause_set() {
        let f = example_tree().smuo();
        let expected = ClauseSet::from_ints(&[&[1, 2, 3], &[1, 2, -3], &[1, -2, 4], &[1, -2, -4], &[-1, 5], &[-1, -5]]);
        assert_eq!(f, expected);
        assert_eq!(Tree::leaf().smuo(), ClauseSet::bottom());
    }

    #[test]
    fn labels_must_be_injective() {
        let t = Tree::node(Var::new(1), Tree::leaf(), Tree::leaf()).unwrap();
        assert!(Tree::node(Var::new(1), t.clone(), Tree::leaf()).is_err());
        assert!(Tree::node(Var::new(2), t.clone(), t).is_err());
    }

    #[test]
    fn round_trip() {
        let t = example_tree();
        assert_eq!(tsmuo(&t.smuo()).unwrap(), t);
        assert_eq!(tsmuo(&ClauseSet::bottom()).unwrap(), Tree::leaf());
        assert!(tsmuo(&ClauseSet::from_ints(&[&[1], &[-1], &[2]])).is_err());
        assert!(tsmuo(&ClauseSet::from_ints(&[&[1, 2], &[-1, 2]])).is_err());
    }

    #[test]
    fn apply_literal_example() {
        let t = example_tree();
        let after = t.apply_literal(Lit::pos(2)).unwrap();
        let expected = ClauseSet::from_ints(&[&[1, 4], &[1, -4], &[-1, 5], &[-1, -5]]);
        assert_eq!(after.smuo(), expected);
        assert_eq!(after.smuo(), t.smuo().assign(Lit::pos(2)));
        assert_eq!(t.apply_literal(Lit::pos(9)), Err(Error::VariableNotPresent(Var::new(9))));
    }

    #[test]
    fn extremal_two_three() {
        let t = Tree::extremal(2, 3).unwrap();
        assert_eq!(t.n_leaves(), 7);
        assert_eq!((t.hts(), t.height()), (2, 3));
        // Root v1, perfect left subtree on v2, v3, v4, right subtree v5 with
        // inner left child v6.
        let expected = ClauseSet::from_ints(&[
            &[1, 2, 3],
            &[1, 2, -3],
            &[1, -2, 4],
            &[1, -2, -4],
            &[-1, 5, 6],
            &[-1, 5, -6],
            &[-1, -5],
        ]);
        assert_eq!(t.smuo(), expected);
    }

    #[test]
    fn extremal_small_cases() {
        assert_eq!(Tree::extremal(3, 3).unwrap(), Tree::perfect(3));
        let c = Tree::extremal(1, 4).unwrap();
        assert_eq!((c.n_leaves(), c.hts(), c.height()), (5, 1, 4));
        assert!(Tree::extremal(0, 1).is_err());
        assert!(Tree::extremal(3, 2).is_err());
        assert_eq!(Tree::extremal(0, 0).unwrap(), Tree::leaf());
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(2, 3).unwrap(), 7);
        assert_eq!(alpha(2, 22).unwrap(), 254);
        assert_eq!(alpha(5, 25).unwrap(), 68406);
        assert_eq!(alpha(4, 4).unwrap(), 16);
        assert!(alpha(1, 0).is_err());
    }

    #[test]
    fn cv_example() {
        let t = Tree::perfect(2);
        let d = DopedTree::new(t);
        // Doping variables u1..u4 are 4..7.
        let cv = d.clause_cv(&BTreeSet::from([0, 2])).unwrap();
        assert_eq!(cv, Clause::from_ints(&[2, 3, 4, 6]));
        let all = d.clause_cv(&(0..4).collect()).unwrap();
        assert_eq!(all, Clause::from_ints(&[4, 5, 6, 7]));
        assert_eq!(d.clause_cv(&BTreeSet::new()), Err(Error::EmptyLeafSet));
    }

    #[test]
    fn shapes_are_counted_by_catalan() {
        let counts: Vec<usize> = (1..=6).map(|n| Tree::all_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn depth_subtrees() {
        let t = Tree::extremal(2, 3).unwrap();
        assert_eq!(t.subtrees_at_depth(1), vec![0..4, 4..7]);
        assert_eq!(t.subtrees_at_depth(0), vec![0..7]);
    }
}
