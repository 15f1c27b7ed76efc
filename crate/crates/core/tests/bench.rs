mod common;

use common::*;
use repkit_core::bench::*;
use repkit_core::dimacs::parse_dimacs;
use repkit_core::reductions::hd_unsat;
use repkit_core::smu::{alpha, tsmuo, Tree};
use repkit_core::Limits;

fn small_specs() -> Vec<InstanceSpec> {
    let mut out = Vec::new();
    for k in 2..=4 {
        for h in k + 1..=k + 4 {
            for v in 1..=3 {
                out.push(InstanceSpec::new(k, h, v).unwrap());
            }
        }
    }
    out
}

#[test]
fn closed_forms_match_generated_instances() {
    for s in small_specs() {
        let g = generate(&s).unwrap();
        let r = stats(&s).unwrap();
        assert_eq!((g.n() as u64, g.c() as u64, g.l() as u64), (r.n, r.c, r.l), "{s}");
        assert_eq!(measure(&s).unwrap(), (r.n, r.c, r.l), "{s}");
        assert!(verify(&s, VerifyLevel::Formulas, &Limits::default()).unwrap().ok);
    }
}

#[test]
fn leaf_depth_sum_by_tree_walk() {
    for k in 1..=4 {
        for h in k..=9 {
            let t = Tree::extremal(k, h).unwrap();
            let d: u64 = t.leaf_depths().iter().map(|&d| d as u64).sum();
            assert_eq!(leaf_depth_sum(k, h).unwrap(), d);
        }
    }
}

#[test]
fn central_binomials() {
    let naive = |n: u64| -> u64 {
        let k = n / 2;
        (0..k).fold(1u64, |b, i| b * (n - i) / (i + 1))
    };
    for n in 0..40 {
        assert_eq!(central_binomial(n as usize), naive(n).into());
    }
}

#[test]
fn generation_is_deterministic_and_streams_valid_dimacs() {
    for s in small_specs().into_iter().take(9) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_instance(&s, &mut a).unwrap();
        write_instance(&s, &mut b).unwrap();
        assert_eq!(a, b);
        let parsed = parse_dimacs(std::str::from_utf8(&a).unwrap()).unwrap();
        assert_eq!(parsed.clauses, generate(&s).unwrap());
    }
}

#[test]
fn variant_one_is_an_smu1_set_of_strahler_number_k_plus_one() {
    for k in 2..=3 {
        for h in k + 1..=k + 3 {
            let g = generate(&InstanceSpec::new(k, h, 1).unwrap()).unwrap();
            let t = tsmuo(&g).unwrap();
            assert_eq!(t.hts(), k + 1);
            assert_eq!(t.n_leaves() as u64, 2 * alpha(k, h).unwrap());
        }
    }
}

#[test]
fn small_instances_are_unsatisfiable_with_claimed_hardness() {
    let l = Limits::default();
    for v in 1..=3 {
        let s = InstanceSpec::new(2, 3, v).unwrap();
        let g = generate(&s).unwrap();
        if g.n() <= 20 {
            assert!(!tt_sat(&g));
        }
        assert_eq!(hd_unsat(&g, &l).unwrap(), s.hd_claimed(), "{s}");
        assert!(verify(&s, VerifyLevel::Hardness, &l).unwrap().ok);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(InstanceSpec::new(1, 5, 1).is_err());
    assert!(InstanceSpec::new(3, 3, 1).is_err());
    assert!(InstanceSpec::new(2, 5, 4).is_err());
    assert!(InstanceSpec::new(2, 5, 0).is_err());
}

#[test]
fn table_has_all_rows() {
    let t = table();
    assert_eq!(t.len(), 42);
    assert_eq!(t[0].alpha, 254);
    assert_eq!(t[0].b_lower, 184756u32.into());
}
