//! Canonical translations of DNFs into CNFs, XOR chains and k-bases.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::cnf::{check_enum_size, entails, equivalent, Clause, ClauseSet, Lit, MaskedCnf, PartialAssignment, Var};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mps::DopedClauseSet;
use crate::reductions::{essential_of_primes, hd_at_most};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationKind {
    Cant,
    Cantm,
    XorChain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub output: ClauseSet,
    /// The DNF clause behind each new variable, in allocation order.
    pub new_var_map: Vec<(Clause, Var)>,
    pub kind: TranslationKind,
}

impl TranslationResult {
    pub fn new_vars(&self) -> BTreeSet<Var> {
        self.new_var_map.iter().map(|&(_, v)| v).collect()
    }
}

fn translate(dnf: &[Clause], first: u32, full: bool) -> TranslationResult {
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(dnf.len());
    let mut long = Vec::with_capacity(dnf.len());
    for (i, c) in dnf.iter().enumerate() {
        let v = Var::new(first + i as u32);
        map.push((c.clone(), v));
        long.push(v.pos());
        for x in c.iter() {
            out.push(Clause::new([v.neg(), x]).expect("fresh variable"));
        }
        if full {
            out.push(Clause::new(c.iter().map(|x| x.complement()).chain([v.pos()])).expect("fresh variable"));
        }
    }
    out.push(Clause::new(long).expect("positive literals"));
    let kind = if full { TranslationKind::Cant } else { TranslationKind::Cantm };
    TranslationResult { output: ClauseSet::new(out), new_var_map: map, kind }
}

fn first_fresh(dnf: &[Clause]) -> u32 {
    dnf.iter().flat_map(|c| c.vars()).map(|v| v.id()).max().map_or(1, |m| m + 1)
}

/// cant(G) for a DNF G, with new variables above var(G) in clause order.
pub fn cant(g: &ClauseSet) -> TranslationResult {
    translate(g.clauses(), first_fresh(g.clauses()), true)
}

/// cantm(G), cant(G) without the clauses {v_C} ∪ C̄.
pub fn cantm(g: &ClauseSet) -> TranslationResult {
    translate(g.clauses(), first_fresh(g.clauses()), false)
}

/// cant of a DNF given as a list of clauses, possibly with repetitions;
/// every entry gets its own variable.
pub fn cant_multi(g: &[Clause], first: u32) -> TranslationResult {
    translate(g, first, true)
}

/// cantm of a DNF multi-clause-set.
pub fn cantm_multi(g: &[Clause], first: u32) -> TranslationResult {
    translate(g, first, false)
}

/// For F ∈ UHIT with doping D(F): the DNF {C̄ ∪ {u_C}}, equivalent to the
/// CNF D(F).
pub fn negate_doped(d: &DopedClauseSet) -> Result<ClauseSet> {
    let f = d.base();
    if !f.is_hitting() {
        return Err(Error::NotHitting);
    }
    // A hitting clause-set is unsatisfiable iff its clauses cover all
    // 2^n assignments.
    let width = f.iter().map(Clause::len).max().unwrap_or(0);
    let mut covered = BigUint::default();
    for c in f {
        covered += BigUint::one() << (width - c.len());
    }
    if covered != BigUint::one() << width {
        return Err(Error::NotUnsatisfiable);
    }
    Ok(d.flipped().complement())
}

/// The chained translation of x_1 ⊕ ... ⊕ x_n = 0, auxiliaries y_2 .. y_{n−1}
/// numbered from the variable after the largest x.
pub fn xor_chain(xs: &[Lit]) -> Result<ClauseSet> {
    let first = xs.iter().map(|x| x.var().id()).max().map_or(1, |m| m + 1);
    xor_chain_from(xs, first)
}

/// [`xor_chain`] with y_2 = `first`, y_3 = `first + 1`, ...
pub fn xor_chain_from(xs: &[Lit], first: u32) -> Result<ClauseSet> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("xor chain needs at least 3 literals, got {n}")));
    }
    let vars: BTreeSet<Var> = xs.iter().map(|x| x.var()).collect();
    if vars.len() != n {
        return Err(Error::InvalidInput("xor literals must have distinct variables".into()));
    }
    if vars.last().is_some_and(|v| v.id() >= first) {
        return Err(Error::InvalidInput("auxiliary variables must be fresh".into()));
    }
    let y = |i: usize| Var::new(first + (i - 2) as u32).pos();
    let mut out = Vec::new();
    // a ⊕ b ⊕ c = 0: exactly the clauses with an odd number of flips.
    let parity3 = |a: Lit, b: Lit, c: Lit, out: &mut Vec<Clause>| {
        for mask in 0u8..8 {
            if mask.count_ones() % 2 == 1 {
                let pick = |x: Lit, bit: u8| if mask & bit != 0 { !x } else { x };
                out.push(Clause::new([pick(a, 1), pick(b, 2), pick(c, 4)]).unwrap());
            }
        }
    };
    parity3(xs[0], xs[1], y(2), &mut out);
    for i in 3..n {
        parity3(y(i - 1), xs[i - 1], y(i), &mut out);
    }
    let last = xs[n - 1];
    out.push(Clause::new([y(n - 1), !last]).unwrap());
    out.push(Clause::new([!y(n - 1), last]).unwrap());
    Ok(ClauseSet::new(out))
}

/// The chains for x_1 ⊕ ... ⊕ x_n = 0 and x_1 ⊕ ... ⊕ ¬x_n = 0 over x = 1..n
/// with disjoint auxiliaries; 3n − 4 variables, unsatisfiable.
pub fn two_xor_system(n: usize) -> Result<ClauseSet> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("two xor system needs n ≥ 3, got {n}")));
    }
    let mut xs: Vec<Lit> = (1..=n as u32).map(Lit::pos).collect();
    let a = xor_chain_from(&xs, n as u32 + 1)?;
    xs[n - 1] = Lit::neg(n as u32);
    let b = xor_chain_from(&xs, 2 * n as u32 - 1)?;
    Ok(a.union(&b))
}

fn by_size(a: &Clause, b: &Clause) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A k-base of the function with prime implicates P: start from the
/// essential prime implicates, add further ones shortest first while the
/// result is inequivalent or too hard, then drop clauses longest first
/// where possible.
pub fn kbase(p: &ClauseSet, k: usize, limits: &Limits) -> Result<ClauseSet> {
    let mut f = essential_of_primes(p, limits)?;
    let mut rest: Vec<Clause> = p.iter().filter(|c| !f.contains(c)).cloned().collect();
    rest.sort_by(by_size);
    let mut rest = rest.into_iter();
    while !(equivalent(&f, p, limits)? && hd_at_most(&f, k, limits)?) {
        match rest.next() {
            Some(c) => f = f.with(c),
            // All of primec_0 has hardness 0, so this means P was not closed.
            None => return Err(Error::InvalidInput("kbase input is not the set of all prime implicates".into())),
        }
    }
    let mut order: Vec<Clause> = f.clauses().to_vec();
    order.sort_by(|a, b| by_size(b, a));
    for c in order {
        let g = f.without(&c);
        if entails(&g, &c, limits)? && hd_at_most(&g, k, limits)? {
            f = g;
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UepStatus {
    StrongUep,
    Uep,
    Neither,
}

fn count_extensions(fp: &ClauseSet, phi: &PartialAssignment, new: &[Var], limits: &Limits) -> Result<u64> {
    // Literals on unassigned original variables cannot help satisfying a
    // clause, since only the new variables get extended.
    let newset: BTreeSet<Var> = new.iter().copied().collect();
    let g: ClauseSet = fp
        .apply(phi)
        .iter()
        .map(|c| Clause::new(c.iter().filter(|x| newset.contains(&x.var()))).expect("sub-clause"))
        .collect();
    if g.contains_empty() {
        return Ok(0);
    }
    check_enum_size("extension enumeration", new.len(), limits)?;
    let m = MaskedCnf::new(&g, new);
    Ok((0..1u64 << new.len()).filter(|&mask| m.eval(mask)).count() as u64)
}

/// Whether the representation Fp of the DNF G (over `original` variables)
/// has the unique extension property, and whether it has the strong one.
pub fn has_uep(fp: &ClauseSet, g: &ClauseSet, original: &BTreeSet<Var>, limits: &Limits) -> Result<UepStatus> {
    let orig: Vec<Var> = original.iter().copied().collect();
    let new: Vec<Var> = fp.vars().into_iter().filter(|v| !original.contains(v)).collect();
    check_enum_size("uep check", orig.len() + new.len(), limits)?;
    let mut uep = true;
    for mask in 0..1u64 << orig.len() {
        let phi = assignment_of(&orig, mask);
        if count_extensions(fp, &phi, &new, limits)? > 1 {
            uep = false;
            break;
        }
    }
    if !uep {
        return Ok(UepStatus::Neither);
    }
    for c in g {
        let base = PartialAssignment::from_true_lits(c.iter());
        let free: Vec<Var> = orig.iter().copied().filter(|v| base.get(*v).is_none()).collect();
        // Every partial extension: each free variable unset, false or true.
        let total = 3u64.checked_pow(free.len() as u32).ok_or(Error::SizeLimitExceeded {
            what: "strong uep check",
            limit: limits.enum_vars,
            actual: free.len(),
        })?;
        for mut code in 0..total {
            let mut phi = base.clone();
            for &v in &free {
                match code % 3 {
                    1 => phi.set(v, false),
                    2 => phi.set(v, true),
                    _ => {}
                }
                code /= 3;
            }
            if count_extensions(fp, &phi, &new, limits)? != 1 {
                return Ok(UepStatus::Uep);
            }
        }
    }
    Ok(UepStatus::StrongUep)
}

fn assignment_of(vars: &[Var], mask: u64) -> PartialAssignment {
    let mut phi = PartialAssignment::new();
    for (i, &v) in vars.iter().enumerate() {
        phi.set(v, mask >> i & 1 == 1);
    }
    phi
}
