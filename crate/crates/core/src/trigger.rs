//! Trigger hypergraphs, transversal and matching numbers, and disjoint-edge
//! certificates for doped tree clause-sets.

use std::collections::BTreeSet;

use crate::cnf::{Clause, ClauseSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::smu::{DopedTree, Tree};

/// A hypergraph on vertices 0..n.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Hypergraph {
    pub n_vertices: usize,
    pub edges: Vec<Vec<usize>>,
}

/// T_k(F): the prime implicates as vertices, one edge E^k_C per vertex C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerHypergraph {
    pub k: usize,
    pub vertices: Vec<Clause>,
    /// `edges[i]` is E^k_C for C = `vertices[i]`, as sorted vertex indices.
    pub edges: Vec<Vec<usize>>,
}

fn triggers(c: &Clause, d: &Clause, k: usize) -> bool {
    c.clashes(d) == 0 && d.difference(c).len() <= k
}

/// T_k for the prime implicates P; the vertices keep the order of P.
pub fn trigger_hypergraph(p: &ClauseSet, k: usize) -> TriggerHypergraph {
    let vertices = p.clauses().to_vec();
    let edges = vertices
        .iter()
        .map(|c| (0..vertices.len()).filter(|&j| triggers(c, &vertices[j], k)).collect())
        .collect();
    TriggerHypergraph { k, vertices, edges }
}

impl TriggerHypergraph {
    pub fn edge_of(&self, c: &Clause) -> Option<Vec<&Clause>> {
        let i = self.vertices.binary_search(c).ok()?;
        Some(self.edges[i].iter().map(|&j| &self.vertices[j]).collect())
    }

    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph { n_vertices: self.vertices.len(), edges: self.edges.clone() }
    }

    /// Whether the clauses of F meet every edge.
    pub fn is_transversal(&self, f: &ClauseSet) -> bool {
        self.edges.iter().all(|e| e.iter().any(|&j| f.contains(&self.vertices[j])))
    }
}

/// An optimum (or, when `exact` is false, the best value found together
/// with a bound on the other side).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HypergraphNumber {
    pub value: usize,
    /// Transversal vertices for τ, edge indices for ν.
    pub witness: Vec<usize>,
    /// Lower bound for τ, upper bound for ν.
    pub bound: usize,
    pub exact: bool,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn of(n: usize, items: &[usize]) -> Bits {
        let mut b = Bits::new(n);
        for &i in items {
            b.0[i / 64] |= 1 << (i % 64);
        }
        b
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn meets(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn or(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Edge indices after dropping edges that contain another edge (the later
/// copy of equal edges goes). Neither τ nor ν changes.
fn minimal_edges(h: &Hypergraph) -> Vec<(usize, Bits)> {
    let bits: Vec<Bits> = h.edges.iter().map(|e| Bits::of(h.n_vertices, e)).collect();
    let mut keep = Vec::new();
    'outer: for i in 0..bits.len() {
        for j in 0..bits.len() {
            if i != j && bits[j].subset_of(&bits[i]) && (bits[j] != bits[i] || j < i) {
                continue 'outer;
            }
        }
        keep.push((i, bits[i].clone()));
    }
    keep.sort_by_key(|(_, b)| b.count());
    keep
}

fn greedy_packing(edges: &[&(usize, Bits)], n: usize) -> Vec<usize> {
    let mut used = Bits::new(n);
    let mut out = Vec::new();
    for (i, b) in edges {
        if !b.meets(&used) {
            used.or(b);
            out.push(*i);
        }
    }
    out
}

fn check_vertices(h: &Hypergraph, limits: &Limits) -> bool {
    h.n_vertices <= limits.hypergraph_vertices
}

/// The transversal number τ.
pub fn transversal_number(h: &Hypergraph, limits: &Limits) -> HypergraphNumber {
    let n = h.n_vertices;
    if h.edges.iter().any(Vec::is_empty) {
        // No transversal exists; report the trivial bound.
        return HypergraphNumber { value: usize::MAX, witness: Vec::new(), bound: usize::MAX, exact: true };
    }
    let edges = minimal_edges(h);
    let all: Vec<&(usize, Bits)> = edges.iter().collect();
    let lower = greedy_packing(&all, n).len();
    // Greedy seed: repeatedly take the vertex of maximum degree.
    let mut greedy = Vec::new();
    let mut open: Vec<&(usize, Bits)> = all.clone();
    while !open.is_empty() {
        let v = (0..n).max_by_key(|&v| (open.iter().filter(|(_, b)| b.has(v)).count(), std::cmp::Reverse(v))).unwrap();
        greedy.push(v);
        open.retain(|(_, b)| !b.has(v));
    }
    if !check_vertices(h, limits) {
        greedy.sort_unstable();
        return HypergraphNumber { value: greedy.len(), witness: greedy, bound: lower, exact: false };
    }
    struct S {
        n: usize,
        best: Vec<usize>,
        nodes: usize,
        budget: usize,
    }
    fn rec(s: &mut S, open: Vec<&(usize, Bits)>, chosen: &mut Vec<usize>) -> bool {
        s.nodes += 1;
        if s.nodes > s.budget {
            return false;
        }
        if open.is_empty() {
            if chosen.len() < s.best.len() {
                s.best = chosen.clone();
            }
            return true;
        }
        if chosen.len() + greedy_packing(&open, s.n).len() >= s.best.len() {
            return true;
        }
        let e = &open[0].1;
        let mut cands: Vec<usize> = (0..s.n).filter(|&v| e.has(v)).collect();
        cands.sort_by_key(|&v| std::cmp::Reverse(open.iter().filter(|(_, b)| b.has(v)).count()));
        for v in cands {
            let rest: Vec<&(usize, Bits)> = open.iter().copied().filter(|(_, b)| !b.has(v)).collect();
            chosen.push(v);
            let ok = rec(s, rest, chosen);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut s = S { n, best: greedy, nodes: 0, budget: limits.hypergraph_nodes };
    let exact = rec(&mut s, all, &mut Vec::new());
    let mut witness = s.best;
    witness.sort_unstable();
    let value = witness.len();
    HypergraphNumber { value, witness, bound: if exact { value } else { lower }, exact }
}

/// The matching number ν.
pub fn matching_number(h: &Hypergraph, limits: &Limits) -> HypergraphNumber {
    let n = h.n_vertices;
    let edges = minimal_edges(h);
    let all: Vec<&(usize, Bits)> = edges.iter().filter(|(_, b)| b.count() > 0).collect();
    let seed = greedy_packing(&all, n);
    if !check_vertices(h, limits) {
        let bound = all.len().min(n);
        return HypergraphNumber { value: seed.len(), witness: seed, bound, exact: false };
    }
    fn upper(open: &[&(usize, Bits)], n: usize) -> usize {
        let mut union = Bits::new(n);
        for (_, b) in open {
            union.or(b);
        }
        let min = open.iter().map(|(_, b)| b.count()).min().unwrap_or(1);
        open.len().min(union.count() / min)
    }
    struct S {
        n: usize,
        best: Vec<usize>,
        nodes: usize,
        budget: usize,
    }
    fn rec(s: &mut S, open: &[&(usize, Bits)], chosen: &mut Vec<usize>) -> bool {
        s.nodes += 1;
        if s.nodes > s.budget {
            return false;
        }
        if chosen.len() > s.best.len() {
            s.best = chosen.clone();
        }
        if open.is_empty() || chosen.len() + upper(open, s.n) <= s.best.len() {
            return true;
        }
        let (i, e) = open[0];
        let with: Vec<&(usize, Bits)> = open[1..].iter().copied().filter(|(_, b)| !b.meets(e)).collect();
        chosen.push(*i);
        let ok = rec(s, &with, chosen);
        chosen.pop();
        ok && rec(s, &open[1..], chosen)
    }
    let mut s = S { n, best: seed, nodes: 0, budget: limits.hypergraph_nodes };
    let bound_all = upper(&all, n);
    let exact = rec(&mut s, &all, &mut Vec::new());
    let mut witness = s.best;
    witness.sort_unstable();
    let value = witness.len();
    HypergraphNumber { value, witness, bound: if exact { value } else { bound_all.max(value) }, exact }
}

/// Whether V and V' are incomparable on the leaves of every subtree rooted
/// at depth k.
pub fn depth_k_incomparable(t: &Tree, k: usize, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    t.subtrees_at_depth(k).into_iter().all(|r| {
        let x: BTreeSet<usize> = a.range(r.clone()).copied().collect();
        let y: BTreeSet<usize> = b.range(r).copied().collect();
        !x.is_subset(&y) && !y.is_subset(&x)
    })
}

/// All `size`-subsets of 0..n in lexicographic order, at most `limit` of
/// them.
fn lex_subsets(n: usize, size: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        if out.len() == limit {
            return out;
        }
        out.push(cur.clone());
        let Some(i) = (0..size).rev().find(|&i| cur[i] < n - size + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A family of C(m, ⌊m/2⌋) pairwise depth-k-incomparable leaf sets, m the
/// least leaf count of a subtree at depth k.
pub fn depth_k_incomparable_family(t: &Tree, k: usize) -> Result<Vec<BTreeSet<usize>>> {
    let depths = t.leaf_depths();
    if let Some((leaf, &depth)) = depths.iter().enumerate().find(|(_, &d)| d < k + 1) {
        return Err(Error::DepthPrecondition { leaf, depth, required: k + 1 });
    }
    let subtrees = t.subtrees_at_depth(k);
    let m = subtrees.iter().map(|r| r.len()).min().expect("at least one subtree");
    let half = m / 2;
    let family_size = lex_subsets(m, half, usize::MAX).len();
    let per_subtree: Vec<Vec<Vec<usize>>> =
        subtrees.iter().map(|r| lex_subsets(r.len(), half, family_size)).collect();
    let mut out = Vec::with_capacity(family_size);
    for i in 0..family_size {
        let mut v = BTreeSet::new();
        for (r, subsets) in subtrees.iter().zip(&per_subtree) {
            v.extend(subsets[i].iter().map(|&j| r.start + j));
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DisjointEdgeCertificate {
    pub k: usize,
    pub leaf_sets: Vec<BTreeSet<usize>>,
    pub clauses: Vec<Clause>,
    /// E^k_{C_V} for every leaf set, as explicit clauses.
    pub edges: Vec<Vec<Clause>>,
}

/// Builds the edges E^k_{C_V} of T_k(D(smuo(T))) for the given leaf sets,
/// using the prime implicates C_V over all non-empty V, and checks that they
/// are pairwise disjoint.
pub fn certify_disjoint_edges(
    t: &Tree,
    k: usize,
    family: &[BTreeSet<usize>],
    limits: &Limits,
) -> Result<DisjointEdgeCertificate> {
    let d = DopedTree::new(t.clone());
    let leaves = t.n_leaves();
    if leaves >= usize::BITS as usize || (1usize << leaves) > limits.subsets {
        return Err(Error::SizeLimitExceeded { what: "prime implicates of a doped tree", limit: limits.subsets, actual: leaves });
    }
    let mut primes = Vec::with_capacity((1 << leaves) - 1);
    for mask in 1usize..1 << leaves {
        let v: BTreeSet<usize> = (0..leaves).filter(|&i| mask >> i & 1 == 1).collect();
        primes.push(d.clause_cv(&v)?);
    }
    let mut clauses = Vec::with_capacity(family.len());
    let mut edges: Vec<Vec<Clause>> = Vec::with_capacity(family.len());
    for v in family {
        let c = d.clause_cv(v)?;
        edges.push(primes.iter().filter(|p| triggers(&c, p, k)).cloned().collect());
        clauses.push(c);
    }
    let sets: Vec<BTreeSet<&Clause>> = edges.iter().map(|e| e.iter().collect()).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                return Err(Error::InvalidInput(format!("edges of leaf sets {i} and {j} intersect")));
            }
        }
    }
    Ok(DisjointEdgeCertificate { k, leaf_sets: family.to_vec(), clauses, edges })
}
