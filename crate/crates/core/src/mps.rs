//! Pure clauses, doping and minimal premise sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{entails, is_satisfiable, Clause, ClauseSet, MultiClauseSet, Var};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::reductions::prime_implicates;
use crate::smu::tsmuo;

/// puc(F): the literals of F whose complement does not occur in F.
pub fn pure_clause(f: &ClauseSet) -> Clause {
    let lits = f.lits();
    Clause::new(lits.iter().copied().filter(|x| !lits.contains(&x.complement())))
        .expect("pure literals never clash")
}

/// D(F) together with the map C ↦ u_C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DopedClauseSet {
    base: ClauseSet,
    /// u_C for the clauses of `base`, in the same order.
    vars: Vec<Var>,
    doped: ClauseSet,
}

impl DopedClauseSet {
    pub fn base(&self) -> &ClauseSet {
        &self.base
    }

    /// The doped clause-set D(F).
    pub fn clauses(&self) -> &ClauseSet {
        &self.doped
    }

    pub fn doping_vars(&self) -> &[Var] {
        &self.vars
    }

    /// Pairs (C, u_C) in clause order of the base.
    pub fn pairs(&self) -> impl Iterator<Item = (&Clause, Var)> + '_ {
        self.base.iter().zip(self.vars.iter().copied())
    }

    pub fn doping_var(&self, c: &Clause) -> Option<Var> {
        self.base.clauses().binary_search(c).ok().map(|i| self.vars[i])
    }

    pub fn base_clause(&self, u: Var) -> Option<&Clause> {
        let first = *self.vars.first()?;
        let i = u.id().checked_sub(first.id())? as usize;
        self.base.clauses().get(i)
    }

    /// C ∪ {u_C} for a clause C of the base.
    pub fn doped_clause(&self, c: &Clause) -> Option<Clause> {
        let u = self.doping_var(c)?;
        c.union(&Clause::from_sorted_unchecked(vec![u.pos()]))
    }

    /// The doped clauses with every doping literal flipped, {C ∪ {¬u_C}}.
    pub fn flipped(&self) -> ClauseSet {
        self.pairs()
            .map(|(c, u)| c.union(&Clause::from_sorted_unchecked(vec![u.neg()])).expect("fresh variable"))
            .collect()
    }

    /// The subset {C : u_C ∈ var(D)} of the base selected by a clause over
    /// the doped variables.
    pub fn preimage(&self, d: &Clause) -> ClauseSet {
        d.vars().filter_map(|u| self.base_clause(u).cloned()).collect()
    }
}

/// D(F), with doping variables allocated above the largest variable of F
/// in clause order.
pub fn dope(f: &ClauseSet) -> DopedClauseSet {
    let first = f.max_var().map_or(1, |v| v.id() + 1);
    dope_from(f, first)
}

/// D(F) with doping variables `first, first+1, ...`.
pub fn dope_from(f: &ClauseSet, first: u32) -> DopedClauseSet {
    assert!(f.max_var().is_none_or(|v| v.id() < first), "doping variables must be fresh");
    let vars: Vec<Var> = (0..f.c() as u32).map(|i| Var::new(first + i)).collect();
    let doped = f
        .iter()
        .zip(&vars)
        .map(|(c, u)| c.union(&Clause::from_sorted_unchecked(vec![u.pos()])).expect("fresh variable"))
        .collect();
    DopedClauseSet { base: f.clone(), vars, doped }
}

/// A minimal premise set and the clause it derives.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MpsWitness {
    pub subset: ClauseSet,
    pub derived: Clause,
}

fn is_mu(f: &ClauseSet, limits: &Limits) -> Result<bool> {
    if is_satisfiable(f, limits)? {
        return Ok(false);
    }
    for c in f {
        if !is_satisfiable(&f.without(c), limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether F is minimally unsatisfiable.
pub fn is_minimally_unsatisfiable(f: &ClauseSet, limits: &Limits) -> Result<bool> {
    is_mu(f, limits)
}

/// F as a multi-clause-set after applying φ_{puc(F)}, or `None` if two
/// clauses are contracted.
fn pure_image(f: &ClauseSet) -> Option<ClauseSet> {
    let puc = pure_clause(f);
    let phi = puc.falsifying_assignment();
    let image = MultiClauseSet::new(f.iter().cloned()).apply(&phi);
    // A clause satisfied by φ would vanish; φ only falsifies literals.
    debug_assert_eq!(image.len(), f.c());
    image.is_contraction_free().then(|| image.to_clause_set())
}

/// The witness if F is a minimal premise set.
pub fn is_mps(f: &ClauseSet, limits: &Limits) -> Result<Option<MpsWitness>> {
    if f.is_top() {
        return Ok(None);
    }
    let Some(image) = pure_image(f) else {
        return Ok(None);
    };
    if !is_mu(&image, limits)? {
        return Ok(None);
    }
    Ok(Some(MpsWitness { subset: f.clone(), derived: pure_clause(f) }))
}

/// All minimal premise sets of F, read off the prime implicates of D(F).
pub fn mps_subsets(f: &ClauseSet, limits: &Limits) -> Result<Vec<MpsWitness>> {
    let d = dope(f);
    let first = d.vars.first().map_or(u32::MAX, |v| v.id());
    let primes = prime_implicates(d.clauses(), limits)?;
    let mut out = Vec::with_capacity(primes.c());
    for p in &primes {
        let subset = d.preimage(p);
        let derived = Clause::new(p.iter().filter(|x| x.var().id() < first)).expect("sub-clause");
        out.push(MpsWitness { subset, derived });
    }
    out.sort_by(|a, b| a.subset.clauses().cmp(b.subset.clauses()));
    Ok(out)
}

/// Whether every non-empty subset of F is a minimal premise set.
pub fn is_total_mps(f: &ClauseSet) -> bool {
    if f.is_top() {
        return false;
    }
    match pure_image(f) {
        Some(image) => tsmuo(&image).is_ok(),
        None => false,
    }
}

/// Whether |primec_0(F)| = 2^c(F) − 1.
pub fn has_max_prime_implicates(f: &ClauseSet) -> bool {
    if !is_total_mps(f) {
        return false;
    }
    let mut occ: BTreeMap<Var, usize> = BTreeMap::new();
    for c in f {
        for v in c.vars() {
            *occ.entry(v).or_default() += 1;
        }
    }
    f.iter().all(|c| c.vars().any(|v| occ[&v] == 1))
}

/// puc(F') for every F' ⊆ F with 1 ≤ c(F') ≤ K and F' ⊨ puc(F'), reduced
/// under subsumption.
pub fn prime_implicates_bounded(f: &ClauseSet, k: usize, limits: &Limits) -> Result<ClauseSet> {
    let c = f.c();
    let k = k.min(c);
    let mut total: usize = 0;
    let mut binom: usize = 1;
    for i in 1..=k {
        binom = binom.saturating_mul(c + 1 - i) / i;
        total = total.saturating_add(binom);
    }
    if total > limits.subsets {
        return Err(Error::BudgetExceeded { what: "bounded prime implicates", budget: limits.subsets });
    }
    let clauses = f.clauses();
    let mut found: BTreeSet<Clause> = BTreeSet::new();
    let mut idx: Vec<usize> = Vec::with_capacity(k);
    fn rec(
        start: usize,
        k: usize,
        clauses: &[Clause],
        idx: &mut Vec<usize>,
        found: &mut BTreeSet<Clause>,
        limits: &Limits,
    ) -> Result<()> {
        if !idx.is_empty() {
            let sub: ClauseSet = idx.iter().map(|&i| clauses[i].clone()).collect();
            let p = pure_clause(&sub);
            if idx.len() == 1 || entails(&sub, &p, limits)? {
                found.insert(p);
            }
        }
        if idx.len() == k {
            return Ok(());
        }
        for i in start..clauses.len() {
            idx.push(i);
            rec(i + 1, k, clauses, idx, found, limits)?;
            idx.pop();
        }
        Ok(())
    }
    rec(0, k, clauses, &mut idx, &mut found, limits)?;
    Ok(ClauseSet::new(found).subsumption_reduced())
}
