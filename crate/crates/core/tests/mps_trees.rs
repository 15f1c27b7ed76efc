mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use repkit_core::cnf::{is_satisfiable, PartialAssignment};
use repkit_core::mps::*;
use repkit_core::reductions::{hd, hd_unsat, prime_implicates};
use repkit_core::smu::{alpha, tsmuo, DopedTree, Tree};
use repkit_core::{Clause, ClauseSet, Limits, Lit, Var};

fn arb_cnf(n: u32, max_c: usize) -> impl Strategy<Value = ClauseSet> {
    let clause = proptest::collection::btree_map(1..=n, any::<bool>(), 1..=n as usize)
        .prop_map(|m| Clause::new(m.into_iter().map(|(v, s)| Lit::new(Var::new(v), s))).unwrap());
    proptest::collection::vec(clause, 1..=max_c).prop_map(ClauseSet::new)
}

proptest! {
    #[test]
    fn doping_laws(f in arb_cnf(5, 7)) {
        let d = dope(&f);
        let g = d.clauses();
        prop_assert_eq!(g.n(), f.n() + f.c());
        prop_assert_eq!(g.c(), f.c());
        prop_assert!(is_satisfiable(g, &Limits::default()).unwrap());
        let mut expected: BTreeSet<Lit> = pure_clause(&f).iter().collect();
        expected.extend(d.doping_vars().iter().map(|v| v.pos()));
        prop_assert_eq!(pure_clause(g).iter().collect::<BTreeSet<_>>(), expected);
        for (c, u) in d.pairs() {
            prop_assert_eq!(d.base_clause(u), Some(c));
        }
    }

    #[test]
    fn is_mps_matches_definition(f in arb_cnf(4, 5)) {
        let l = Limits::default();
        let oracle = direct_mps(&f).iter().any(|(s, _)| s == &f);
        prop_assert_eq!(is_mps(&f, &l).unwrap().is_some(), oracle);
    }

    #[test]
    fn mps_subsets_match_definition(f in arb_cnf(4, 5)) {
        let got: BTreeSet<(ClauseSet, Clause)> = mps_subsets(&f, &Limits::default())
            .unwrap()
            .into_iter()
            .map(|w| (w.subset, w.derived))
            .collect();
        prop_assert_eq!(got, direct_mps(&f));
    }

    #[test]
    fn total_mps_matches_definition(f in arb_cnf(4, 4)) {
        let all = direct_mps(&f).len() == (1usize << f.c()) - 1;
        prop_assert_eq!(is_total_mps(&f), all);
    }

    #[test]
    fn max_prime_implicates_matches_count(f in arb_cnf(4, 5)) {
        let count = tt_primes(&f).c();
        prop_assert_eq!(has_max_prime_implicates(&f), count == (1usize << f.c()) - 1);
    }

    #[test]
    fn bounded_primes_with_large_bound(f in arb_cnf(4, 5)) {
        let l = Limits::default();
        prop_assert_eq!(prime_implicates_bounded(&f, f.c(), &l).unwrap(), prime_implicates(&f, &l).unwrap());
        prop_assert_eq!(prime_implicates_bounded(&f, 1, &l).unwrap(), f.subsumption_reduced());
    }

    #[test]
    fn trees_round_trip(seed in any::<u64>(), leaves in 1usize..=32) {
        let t = random_tree(&mut rng(seed), leaves);
        let f = t.smuo();
        prop_assert_eq!(f.c(), t.n_leaves());
        prop_assert_eq!(f.n(), t.n_leaves() - 1);
        prop_assert_eq!(tsmuo(&f).unwrap(), t.clone());
        // A full clause exists exactly when the tree is a caterpillar.
        let has_full = f.iter().any(|c| c.len() == f.n());
        prop_assert_eq!(has_full, t.hts() <= 1);
    }

    #[test]
    fn literal_application_on_trees(seed in any::<u64>(), leaves in 2usize..=24) {
        let mut r = rng(seed);
        let t = random_tree(&mut r, leaves);
        let vars = t.vars();
        let v = vars[r.random_range(0..vars.len())];
        let x = Lit::new(v, r.random_bool(0.5));
        let via_tree = t.apply_literal(x).unwrap();
        prop_assert_eq!(Some(via_tree), tsmuo(&t.smuo().assign(x)).ok());
    }

    #[test]
    fn smu1_is_stable_under_instantiation(seed in any::<u64>(), leaves in 1usize..=12) {
        let mut r = rng(seed);
        let t = random_tree(&mut r, leaves);
        let mut phi = PartialAssignment::new();
        for v in t.vars() {
            if r.random_bool(0.4) {
                phi.set(v, r.random_bool(0.5));
            }
        }
        prop_assert!(tsmuo(&t.smuo().apply(&phi)).is_ok());
    }
}

#[test]
fn mps_examples_of_special_sets() {
    let l = Limits::default();
    for n in 2..=5 {
        assert_eq!(mps_subsets(&units_and_negative(n), &l).unwrap().len(), (1 << n) + n as usize);
    }
    let single = ClauseSet::from_ints(&[&[1, -2, 3]]);
    let w = mps_subsets(&single, &l).unwrap();
    assert_eq!(w, vec![MpsWitness { subset: single.clone(), derived: Clause::from_ints(&[1, -2, 3]) }]);
    // Minimally unsatisfiable sets derive the empty clause.
    let mu = ClauseSet::from_ints(&[&[1, 2], &[-1, 2], &[-2]]);
    assert_eq!(is_mps(&mu, &l).unwrap().unwrap().derived, Clause::empty());
    assert!(!is_total_mps(&ClauseSet::top()));
}

#[test]
fn smu1_sets_are_total_mps_with_full_prime_count() {
    let l = Limits::default();
    for leaves in 1..=5 {
        for t in Tree::all_shapes(leaves) {
            let f = t.smuo();
            assert!(is_total_mps(&f));
            assert_eq!(mps_subsets(&f, &l).unwrap().len(), (1 << leaves) - 1);
            assert!(has_max_prime_implicates(dope(&f).clauses()));
        }
    }
}

#[test]
fn doping_hardness_is_max_over_subsets() {
    let l = Limits::default();
    let mut r = rng(3);
    for _ in 0..40 {
        let n = r.random_range(2..=5);
        let c = r.random_range(1..=4);
        let f = random_cnf(&mut r, n, c, 3);
        let best = (1u64..1 << f.c())
            .map(|m| f.select((0..f.c()).filter(|&i| m >> i & 1 == 1)))
            .map(|s| naive_hd(&s))
            .max()
            .unwrap_or(0);
        assert_eq!(hd(dope(&f).clauses(), &l).unwrap().value, best, "{f}");
    }
}

#[test]
fn doping_an_unsat_core_keeps_its_hardness() {
    let l = Limits::default();
    let f = ClauseSet::from_ints(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
    let g = f.with(Clause::empty());
    assert!(hd(dope(&g).clauses(), &l).unwrap().value >= hd(&f, &l).unwrap().value);
}

#[test]
fn smu1_structure_of_small_trees() {
    let l = Limits::default();
    for leaves in 1..=6 {
        for t in Tree::all_shapes(leaves) {
            let f = t.smuo();
            assert!(!tt_sat(&f));
            for c in &f {
                assert!(tt_sat(&f.without(c)), "not minimal: {f}");
                for v in f.vars() {
                    for x in [v.pos(), v.neg()] {
                        if let Some(longer) = c.union(&Clause::new([x]).unwrap()) {
                            if longer != *c {
                                assert!(tt_sat(&f.without(c).with(longer)), "not saturated: {f}");
                            }
                        }
                    }
                }
            }
            for (i, a) in f.iter().enumerate() {
                for b in &f.clauses()[i + 1..] {
                    assert_eq!(a.clashes(b), 1);
                }
            }
            if leaves <= 8 {
                assert_eq!(hd_unsat(&f, &l).unwrap(), t.hts());
            }
        }
    }
    for leaves in 7..=8 {
        for t in Tree::all_shapes(leaves) {
            assert_eq!(hd_unsat(&t.smuo(), &l).unwrap(), t.hts());
        }
    }
}

#[test]
fn cv_clauses_are_the_doped_prime_implicates() {
    let l = Limits::default();
    for leaves in 1..=5 {
        for t in Tree::all_shapes(leaves) {
            let d = DopedTree::new(t);
            let mut cvs = BTreeSet::new();
            for mask in 1u32..1 << leaves {
                let v: BTreeSet<usize> = (0..leaves).filter(|&i| mask >> i & 1 == 1).collect();
                cvs.insert(d.clause_cv(&v).unwrap());
            }
            assert_eq!(ClauseSet::new(cvs), prime_implicates(d.clauses(), &l).unwrap());
        }
    }
}

#[test]
fn extremal_trees_have_the_right_measures() {
    for k in 1..=4 {
        for h in k..=7 {
            let t = Tree::extremal(k, h).unwrap();
            assert_eq!((t.hts(), t.height()), (k, h));
            assert_eq!(t.n_leaves() as u64, alpha(k, h).unwrap());
        }
    }
    for k in 0..=5 {
        let p = Tree::perfect(k);
        assert_eq!(p.hts(), k);
        assert_eq!(p.n_leaves(), 1 << k);
    }
    // A tree with hts k has at least 2^k leaves and at most α(k, h).
    for leaves in 1..=9 {
        for t in Tree::all_shapes(leaves) {
            assert!(1 << t.hts() <= leaves);
            assert!(leaves as u64 <= alpha(t.hts(), t.height()).unwrap());
        }
    }
}

#[test]
fn apply_literal_example_tree() {
    let v = Var::new;
    let leaf = Tree::leaf;
    let t3 = Tree::node(v(3), leaf(), leaf()).unwrap();
    let t4 = Tree::node(v(4), leaf(), leaf()).unwrap();
    let t2 = Tree::node(v(2), t3, t4).unwrap();
    let t5 = Tree::node(v(5), leaf(), leaf()).unwrap();
    let t = Tree::node(v(1), t2, t5.clone()).unwrap();
    assert!(t.smuo().contains(&Clause::from_ints(&[1, -2, 4])));
    let after = t.apply_literal(Lit::pos(2)).unwrap();
    assert_eq!(after.n_leaves(), 4);
    // At the root the opposite subtree survives.
    assert_eq!(t.apply_literal(Lit::pos(1)).unwrap(), t5);
}
