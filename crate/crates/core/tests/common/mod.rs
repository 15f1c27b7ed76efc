//! Independent oracles for the integration tests: truth tables, the
//! textbook definition of r_k, and seeded random instances.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repkit_core::cnf::PartialAssignment;
use repkit_core::smu::Tree;
use repkit_core::{Clause, ClauseSet, Lit, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lit_true(x: Lit, vars: &[Var], mask: u64) -> bool {
    let i = vars.iter().position(|&v| v == x.var()).expect("variable in table");
    (mask >> i & 1 == 1) == x.is_positive()
}

/// Truth value of F as a CNF under the total assignment `mask` over `vars`.
pub fn eval_cnf(f: &ClauseSet, vars: &[Var], mask: u64) -> bool {
    f.iter().all(|c| c.iter().any(|x| lit_true(x, vars, mask)))
}

/// Truth value of G as a DNF.
pub fn eval_dnf(g: &ClauseSet, vars: &[Var], mask: u64) -> bool {
    g.iter().any(|c| c.iter().all(|x| lit_true(x, vars, mask)))
}

pub fn vars_of(fs: &[&ClauseSet]) -> Vec<Var> {
    let mut s = BTreeSet::new();
    for f in fs {
        s.extend(f.vars());
    }
    s.into_iter().collect()
}

pub fn tt_sat(f: &ClauseSet) -> bool {
    let vars = vars_of(&[f]);
    (0..1u64 << vars.len()).any(|m| eval_cnf(f, &vars, m))
}

pub fn tt_models(f: &ClauseSet, vars: &[Var]) -> Vec<u64> {
    (0..1u64 << vars.len()).filter(|&m| eval_cnf(f, vars, m)).collect()
}

/// F ⊨ C by truth table over var(F) ∪ var(C).
pub fn tt_entails(f: &ClauseSet, c: &Clause) -> bool {
    let cs = ClauseSet::new([c.clone()]);
    let vars = vars_of(&[f, &cs]);
    (0..1u64 << vars.len()).all(|m| !eval_cnf(f, &vars, m) || eval_cnf(&cs, &vars, m))
}

pub fn tt_equivalent(f: &ClauseSet, g: &ClauseSet) -> bool {
    let vars = vars_of(&[f, g]);
    (0..1u64 << vars.len()).all(|m| eval_cnf(f, &vars, m) == eval_cnf(g, &vars, m))
}

/// All clauses over `vars`, by enumerating {absent, positive, negative}.
pub fn all_clauses(vars: &[Var]) -> Vec<Clause> {
    let mut out = Vec::new();
    let total = 3u64.pow(vars.len() as u32);
    for mut code in 0..total {
        let mut lits = Vec::new();
        for &v in vars {
            match code % 3 {
                1 => lits.push(v.pos()),
                2 => lits.push(v.neg()),
                _ => {}
            }
            code /= 3;
        }
        out.push(Clause::new(lits).unwrap());
    }
    out
}

/// primec_0(F) from the truth table: entailed clauses none of whose
/// one-literal-shorter sub-clauses is entailed.
pub fn tt_primes(f: &ClauseSet) -> ClauseSet {
    let vars = vars_of(&[f]);
    let models = tt_models(f, &vars);
    let holds = |c: &Clause| models.iter().all(|&m| c.iter().any(|x| lit_true(x, &vars, m)));
    all_clauses(&vars)
        .into_iter()
        .filter(|c| holds(c) && c.iter().all(|x| !holds(&Clause::new(c.iter().filter(|&y| y != x)).unwrap())))
        .collect()
}

/// All partial assignments over `vars` (3^n of them).
pub fn all_partial(vars: &[Var]) -> Vec<PartialAssignment> {
    let total = 3u64.pow(vars.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut phi = PartialAssignment::new();
            for &v in vars {
                match code % 3 {
                    1 => phi.set(v, false),
                    2 => phi.set(v, true),
                    _ => {}
                }
                code /= 3;
            }
            phi
        })
        .collect()
}

/// Whether r_k(F) = {⊥}, straight from the recursive definition.
pub fn naive_refutes(f: &ClauseSet, k: usize) -> bool {
    if f.contains_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    for x in f.lits() {
        if naive_refutes(&f.assign(x.complement()), k - 1) {
            return naive_refutes(&f.assign(x), k);
        }
    }
    false
}

/// hd of an unsatisfiable clause-set by the definition.
pub fn naive_hd_unsat(f: &ClauseSet) -> usize {
    (0..).find(|&k| naive_refutes(f, k)).unwrap()
}

/// hd(F) as the maximum over all partial assignments.
pub fn naive_hd(f: &ClauseSet) -> usize {
    let vars = vars_of(&[f]);
    all_partial(&vars)
        .iter()
        .map(|phi| f.apply(phi))
        .filter(|g| !tt_sat(g))
        .map(|g| naive_hd_unsat(&g))
        .max()
        .unwrap_or(0)
}

pub fn random_clause(r: &mut impl Rng, n: u32, max_width: usize) -> Clause {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(r);
    let w = r.random_range(1..=max_width.min(n as usize));
    Clause::new(vars[..w].iter().map(|&v| Lit::new(Var::new(v), r.random_bool(0.5)))).unwrap()
}

/// A random clause-set with exactly `c` distinct clauses over variables
/// 1..=n.
pub fn random_cnf(r: &mut impl Rng, n: u32, c: usize, max_width: usize) -> ClauseSet {
    let mut set = BTreeSet::new();
    let mut tries = 0;
    while set.len() < c && tries < 1000 {
        set.insert(random_clause(r, n, max_width));
        tries += 1;
    }
    ClauseSet::new(set)
}

/// A random tree shape with the given leaf count, labelled by a random
/// injection into 1..=2*leaves.
pub fn random_tree(r: &mut impl Rng, leaves: usize) -> Tree {
    fn shape(r: &mut impl Rng, leaves: usize, labels: &mut Vec<u32>) -> Tree {
        if leaves == 1 {
            return Tree::leaf();
        }
        let v = Var::new(labels.pop().unwrap());
        let left = r.random_range(1..leaves);
        let l = shape(r, left, labels);
        let rt = shape(r, leaves - left, labels);
        Tree::node(v, l, rt).unwrap()
    }
    let mut labels: Vec<u32> = (1..=2 * leaves as u32).collect();
    labels.shuffle(r);
    shape(r, leaves, &mut labels)
}

/// A random hitting clause-set: a subset of the leaf clauses of a random
/// tree, each with its literals possibly extended.
pub fn random_hitting(r: &mut impl Rng, leaves: usize) -> ClauseSet {
    let t = random_tree(r, leaves);
    let cs = t.leaf_clauses();
    cs.into_iter().filter(|_| r.random_bool(0.8)).collect()
}

/// The clause-sets {{v1},...,{vn},{¬v1,...,¬vn}}.
pub fn units_and_negative(n: u32) -> ClauseSet {
    let mut cs: Vec<Clause> = (1..=n).map(|i| Clause::new([Lit::pos(i)]).unwrap()).collect();
    cs.push(Clause::new((1..=n).map(Lit::neg)).unwrap());
    ClauseSet::new(cs)
}

/// All non-empty subsets of F that are minimal premise sets, from the
/// definition: F' ⊨ puc(F') and no F' ∖ {D} entails it.
pub fn direct_mps(f: &ClauseSet) -> BTreeSet<(ClauseSet, Clause)> {
    let c = f.c();
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << c {
        let sub = f.select((0..c).filter(|&i| mask >> i & 1 == 1));
        let lits = sub.lits();
        let puc = Clause::new(lits.iter().copied().filter(|x| !lits.contains(&x.complement()))).unwrap();
        if tt_entails(&sub, &puc) && sub.iter().all(|d| !tt_entails(&sub.without(d), &puc)) {
            out.insert((sub, puc));
        }
    }
    out
}
