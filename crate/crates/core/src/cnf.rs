//! Literals, clauses, clause-sets and partial assignments.
//!
//! A clause-set is neutral: whether it is read as a CNF or as a DNF is up to
//! the caller. The satisfiability test and model counting below use the CNF
//! reading.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A boolean variable; ids start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    /// # Panics
    /// If `id` is 0 or too large to encode as a literal.
    pub fn new(id: u32) -> Var {
        assert!((1..u32::MAX / 2).contains(&id), "variable id out of range: {id}");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal, stored as `2 * var + negated`.
///
/// The derived order sorts by variable first and puts the positive literal
/// before the negative one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(2 * var.0 + u32::from(!positive))
    }

    /// The positive literal of variable `id`.
    pub fn pos(id: u32) -> Lit {
        Var::new(id).pos()
    }

    /// The negative literal of variable `id`.
    pub fn neg(id: u32) -> Lit {
        Var::new(id).neg()
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn complement(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// Dense index usable for per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0);
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(x: i64) -> Result<Lit> {
        if x == 0 || x.unsigned_abs() >= u64::from(u32::MAX / 2) {
            return Err(Error::InvalidInput(format!("not a literal: {x}")));
        }
        Ok(Lit::new(Var(x.unsigned_abs() as u32), x > 0))
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        self.complement()
    }
}

impl From<Lit> for i64 {
    fn from(l: Lit) -> i64 {
        l.to_dimacs()
    }
}

impl TryFrom<i64> for Lit {
    type Error = Error;
    fn try_from(x: i64) -> Result<Lit> {
        Lit::from_dimacs(x)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A complement-free set of literals, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Lit>", into = "Vec<Lit>")]
pub struct Clause(Vec<Lit>);

impl Clause {
    /// Builds a clause, merging duplicate literals.
    ///
    /// # Errors
    /// [`Error::Tautology`] if a literal occurs together with its complement.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause> {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for w in v.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(Error::Tautology(w[0]));
            }
        }
        Ok(Clause(v))
    }

    /// Like [`Clause::new`], but returns `None` for tautologies.
    pub fn try_new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        Clause::new(lits).ok()
    }

    /// The empty clause ⊥.
    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    /// # Panics
    /// On a zero entry or a tautology; meant for literals in code and tests.
    pub fn from_ints(xs: &[i64]) -> Clause {
        Clause::new(xs.iter().map(|&x| Lit::from_dimacs(x).unwrap())).unwrap()
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<Lit>) -> Clause {
        debug_assert!(v.windows(2).all(|w| w[0].var() < w[1].var()));
        Clause(v)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Lit) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var())
    }

    /// C̄, the clause of complemented literals.
    pub fn complement(&self) -> Clause {
        let mut v: Vec<Lit> = self.0.iter().map(|l| l.complement()).collect();
        v.sort_unstable();
        Clause(v)
    }

    /// Whether `self ⊆ other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut j = 0;
        for &x in &self.0 {
            while j < other.0.len() && other.0[j] < x {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    /// Number of literals `x ∈ self` with `x̄ ∈ other`.
    pub fn clashes(&self, other: &Clause) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            let (va, vb) = (a[i].var(), b[j].var());
            if va < vb {
                i += 1;
            } else if vb < va {
                j += 1;
            } else {
                if a[i] != b[j] {
                    n += 1;
                }
                i += 1;
                j += 1;
            }
        }
        n
    }

    /// Whether the two clauses share no literal in complemented form.
    pub fn is_disjoint_from_complement_of(&self, other: &Clause) -> bool {
        self.clashes(other) == 0
    }

    /// Sorted union; `None` if the result would be tautological.
    pub fn union(&self, other: &Clause) -> Option<Clause> {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let x = if j == b.len() || (i < a.len() && a[i] < b[j]) {
                i += 1;
                a[i - 1]
            } else if i == a.len() || b[j] < a[i] {
                j += 1;
                b[j - 1]
            } else {
                i += 1;
                j += 1;
                a[i - 1]
            };
            if let Some(&last) = v.last() {
                if Lit::var(last) == x.var() {
                    return None;
                }
            }
            v.push(x);
        }
        Some(Clause(v))
    }

    /// `self ∖ other`.
    pub fn difference(&self, other: &Clause) -> Clause {
        Clause(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    /// The resolvent `C ⋄ D`, if the clauses clash in exactly one literal.
    pub fn resolve(&self, other: &Clause) -> Option<Clause> {
        if self.clashes(other) != 1 {
            return None;
        }
        let mut v: Vec<Lit> = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].var() < b[j].var()) {
                v.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].var() < a[i].var() {
                v.push(b[j]);
                j += 1;
            } else {
                if a[i] == b[j] {
                    v.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
        Some(Clause(v))
    }

    /// φ_C, the assignment falsifying every literal of the clause.
    pub fn falsifying_assignment(&self) -> PartialAssignment {
        PartialAssignment::from_true_lits(self.iter().map(Lit::complement))
    }
}

impl TryFrom<Vec<Lit>> for Clause {
    type Error = Error;
    fn try_from(v: Vec<Lit>) -> Result<Clause> {
        Clause::new(v)
    }
}

impl From<Clause> for Vec<Lit> {
    fn from(c: Clause) -> Vec<Lit> {
        c.0
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// φ_C, the assignment setting every literal of `c` to false.
pub fn clause_falsifying_assignment(c: &Clause) -> PartialAssignment {
    c.falsifying_assignment()
}

/// A finite set of clauses, kept sorted and free of duplicates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Clause>", into = "Vec<Clause>")]
pub struct ClauseSet(Vec<Clause>);

impl ClauseSet {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> ClauseSet {
        let mut v: Vec<Clause> = clauses.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ClauseSet(v)
    }

    /// ⊤, the empty clause-set.
    pub fn top() -> ClauseSet {
        ClauseSet(Vec::new())
    }

    /// {⊥}.
    pub fn bottom() -> ClauseSet {
        ClauseSet(vec![Clause::empty()])
    }

    /// # Panics
    /// On malformed clauses; meant for literals in code and tests.
    pub fn from_ints(clauses: &[&[i64]]) -> ClauseSet {
        ClauseSet::new(clauses.iter().map(|c| Clause::from_ints(c)))
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clause> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Clause> {
        self.0
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether ⊥ ∈ F. As the empty clause sorts first this is O(1).
    pub fn contains_empty(&self) -> bool {
        self.0.first().is_some_and(Clause::is_empty)
    }

    pub fn is_bottom(&self) -> bool {
        self.0.len() == 1 && self.contains_empty()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.0.binary_search(c).is_ok()
    }

    /// c(F).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// c(F).
    pub fn c(&self) -> usize {
        self.0.len()
    }

    /// n(F).
    pub fn n(&self) -> usize {
        self.vars().len()
    }

    /// ℓ(F).
    pub fn l(&self) -> usize {
        self.0.iter().map(Clause::len).sum()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(|c| c.vars()).collect()
    }

    /// The literals occurring in F.
    pub fn lits(&self) -> BTreeSet<Lit> {
        self.0.iter().flat_map(|c| c.iter()).collect()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.0.iter().flat_map(|c| c.vars()).max()
    }

    /// F̄, every clause complemented.
    pub fn complement(&self) -> ClauseSet {
        ClauseSet::new(self.0.iter().map(Clause::complement))
    }

    pub fn union(&self, other: &ClauseSet) -> ClauseSet {
        ClauseSet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn with(&self, c: Clause) -> ClauseSet {
        let mut v = self.0.clone();
        if let Err(i) = v.binary_search(&c) {
            v.insert(i, c);
        }
        ClauseSet(v)
    }

    pub fn without(&self, c: &Clause) -> ClauseSet {
        ClauseSet(self.0.iter().filter(|d| *d != c).cloned().collect())
    }

    /// The clauses at the given (sorted-order) indices.
    pub fn select(&self, idx: impl IntoIterator<Item = usize>) -> ClauseSet {
        ClauseSet::new(idx.into_iter().map(|i| self.0[i].clone()))
    }

    /// φ * F.
    pub fn apply(&self, phi: &PartialAssignment) -> ClauseSet {
        if phi.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len());
        'clauses: for c in &self.0 {
            let mut kept = Vec::with_capacity(c.len());
            for x in c.iter() {
                match phi.value(x) {
                    Some(true) => continue 'clauses,
                    Some(false) => {}
                    None => kept.push(x),
                }
            }
            out.push(Clause(kept));
        }
        ClauseSet::new(out)
    }

    /// ⟨x → 1⟩ * F.
    pub fn assign(&self, x: Lit) -> ClauseSet {
        let nx = x.complement();
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            if c.contains(x) {
                continue;
            }
            if c.contains(nx) {
                out.push(Clause(c.iter().filter(|&y| y != nx).collect()));
            } else {
                out.push(c.clone());
            }
        }
        ClauseSet::new(out)
    }

    /// Whether every two distinct clauses clash.
    pub fn is_hitting(&self) -> bool {
        for (i, c) in self.0.iter().enumerate() {
            for d in &self.0[i + 1..] {
                if c.clashes(d) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Removes clauses strictly subsumed by another clause of F.
    pub fn subsumption_reduced(&self) -> ClauseSet {
        let mut by_len: Vec<&Clause> = self.0.iter().collect();
        by_len.sort_by_key(|c| c.len());
        let mut kept: Vec<Clause> = Vec::new();
        for c in by_len {
            if !kept.iter().any(|d| d.subsumes(c)) {
                kept.push(c.clone());
            }
        }
        ClauseSet::new(kept)
    }
}

impl From<Vec<Clause>> for ClauseSet {
    fn from(v: Vec<Clause>) -> ClauseSet {
        ClauseSet::new(v)
    }
}

impl From<ClauseSet> for Vec<Clause> {
    fn from(f: ClauseSet) -> Vec<Clause> {
        f.0
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(it: I) -> ClauseSet {
        ClauseSet::new(it)
    }
}

impl<'a> IntoIterator for &'a ClauseSet {
    type Item = &'a Clause;
    type IntoIter = std::slice::Iter<'a, Clause>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// φ * F.
pub fn apply(phi: &PartialAssignment, f: &ClauseSet) -> ClauseSet {
    f.apply(phi)
}

/// A clause multiset whose entries remember the index of the clause they
/// came from. Application does not contract equal clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiClauseSet {
    entries: Vec<(Clause, usize)>,
}

impl MultiClauseSet {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> MultiClauseSet {
        MultiClauseSet {
            entries: clauses.into_iter().enumerate().map(|(i, c)| (c, i)).collect(),
        }
    }

    pub fn entries(&self) -> &[(Clause, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn apply(&self, phi: &PartialAssignment) -> MultiClauseSet {
        let mut entries = Vec::new();
        for (c, origin) in &self.entries {
            if c.iter().any(|x| phi.value(x) == Some(true)) {
                continue;
            }
            let kept = c.iter().filter(|&x| phi.value(x).is_none()).collect();
            entries.push((Clause(kept), *origin));
        }
        MultiClauseSet { entries }
    }

    /// Whether no two entries are equal clauses.
    pub fn is_contraction_free(&self) -> bool {
        let set: BTreeSet<&Clause> = self.entries.iter().map(|(c, _)| c).collect();
        set.len() == self.entries.len()
    }

    pub fn to_clause_set(&self) -> ClauseSet {
        ClauseSet::new(self.entries.iter().map(|(c, _)| c.clone()))
    }
}

/// A finite map from variables to truth values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartialAssignment(BTreeMap<Var, bool>);

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment(BTreeMap::new())
    }

    /// The assignment making each given literal true. Later literals win on
    /// conflicts.
    pub fn from_true_lits(lits: impl IntoIterator<Item = Lit>) -> PartialAssignment {
        PartialAssignment(lits.into_iter().map(|x| (x.var(), x.is_positive())).collect())
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.0.insert(v, value);
    }

    /// Makes literal `x` true.
    pub fn set_true(&mut self, x: Lit) {
        self.0.insert(x.var(), x.is_positive());
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(&v).copied()
    }

    /// φ(x) for a literal.
    pub fn value(&self, x: Lit) -> Option<bool> {
        self.0.get(&x.var()).map(|&b| b == x.is_positive())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    /// The literals made true.
    pub fn true_lits(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0.iter().map(|(&v, &b)| Lit::new(v, b))
    }

    /// φ ∪ ψ; `ψ` wins on shared variables.
    pub fn union(&self, psi: &PartialAssignment) -> PartialAssignment {
        let mut m = self.0.clone();
        m.extend(psi.0.iter().map(|(&v, &b)| (v, b)));
        PartialAssignment(m)
    }

    pub fn restrict(&self, vars: &BTreeSet<Var>) -> PartialAssignment {
        PartialAssignment(self.0.iter().filter(|(v, _)| vars.contains(v)).map(|(&v, &b)| (v, b)).collect())
    }
}

impl Serialize for PartialAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.true_lits())
    }
}

impl<'de> Deserialize<'de> for PartialAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<Lit>::deserialize(d)?;
        Ok(PartialAssignment::from_true_lits(lits))
    }
}

fn check_sat_size(f: &ClauseSet, limits: &Limits) -> Result<()> {
    let n = f.n();
    if n > limits.sat_vars {
        return Err(Error::SizeLimitExceeded { what: "satisfiability test", limit: limits.sat_vars, actual: n });
    }
    Ok(())
}

/// Whether F is satisfiable as a CNF.
///
/// # Errors
/// [`Error::SizeLimitExceeded`] above `limits.sat_vars` variables and
/// [`Error::BudgetExceeded`] when the branching budget runs out.
pub fn is_satisfiable(f: &ClauseSet, limits: &Limits) -> Result<bool> {
    Ok(find_model(f, limits)?.is_some())
}

/// A satisfying assignment over var(F), if one exists.
pub fn find_model(f: &ClauseSet, limits: &Limits) -> Result<Option<PartialAssignment>> {
    if f.contains_empty() {
        return Ok(None);
    }
    check_sat_size(f, limits)?;
    let mut s = Dpll::new(f, limits.sat_nodes);
    if s.solve()? {
        let mut phi = PartialAssignment::new();
        for v in f.vars() {
            // Variables left open by the search may take either value.
            phi.set(v, s.vals[v.id() as usize] != -1);
        }
        Ok(Some(phi))
    } else {
        Ok(None)
    }
}

/// Whether F ⊨ C, decided as unsatisfiability of φ_C * F.
pub fn entails(f: &ClauseSet, c: &Clause, limits: &Limits) -> Result<bool> {
    Ok(!is_satisfiable(&f.apply(&c.falsifying_assignment()), limits)?)
}

/// Whether the two clause-sets are equivalent as CNFs.
pub fn equivalent(f: &ClauseSet, g: &ClauseSet, limits: &Limits) -> Result<bool> {
    for c in g {
        if !entails(f, c, limits)? {
            return Ok(false);
        }
    }
    for c in f {
        if !entails(g, c, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    // 1 true, -1 false, 0 open; indexed by variable id.
    vals: Vec<i8>,
    trail: Vec<Var>,
    nodes: usize,
    budget: usize,
}

impl Dpll {
    fn new(f: &ClauseSet, budget: usize) -> Dpll {
        let max = f.max_var().map_or(0, Var::id) as usize;
        Dpll {
            clauses: f.iter().map(|c| c.lits().to_vec()).collect(),
            vals: vec![0; max + 1],
            trail: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn value(&self, x: Lit) -> i8 {
        let v = self.vals[x.var().id() as usize];
        if x.is_positive() {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, x: Lit) {
        self.vals[x.var().id() as usize] = if x.is_positive() { 1 } else { -1 };
        self.trail.push(x.var());
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.vals[v.id() as usize] = 0;
        }
    }

    /// Unit propagation to a fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.clauses.len() {
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &x in &self.clauses[i] {
                    match self.value(x) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            n_open += 1;
                            open = Some(x);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => return false,
                    1 => {
                        self.set(open.unwrap());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch_lit(&self) -> Option<Lit> {
        for c in &self.clauses {
            if c.iter().any(|&x| self.value(x) == 1) {
                continue;
            }
            return c.iter().copied().find(|&x| self.value(x) == 0);
        }
        None
    }

    fn solve(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { what: "satisfiability test", budget: self.budget });
        }
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return Ok(false);
        }
        let Some(x) = self.branch_lit() else {
            return Ok(true);
        };
        for y in [x, x.complement()] {
            let inner = self.trail.len();
            self.set(y);
            if self.solve()? {
                return Ok(true);
            }
            self.undo(inner);
        }
        self.undo(mark);
        Ok(false)
    }
}

/// Bit-mask evaluation of a clause-set over a fixed variable order, for
/// enumerating total assignments.
pub(crate) struct MaskedCnf {
    pub vars: Vec<Var>,
    clauses: Vec<(u64, u64)>,
}

impl MaskedCnf {
    pub fn new(f: &ClauseSet, vars: &[Var]) -> MaskedCnf {
        assert!(vars.len() <= 64);
        let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let clauses = f
            .iter()
            .map(|c| {
                let (mut pos, mut neg) = (0u64, 0u64);
                for x in c.iter() {
                    let bit = 1u64 << index[&x.var()];
                    if x.is_positive() {
                        pos |= bit;
                    } else {
                        neg |= bit;
                    }
                }
                (pos, neg)
            })
            .collect();
        MaskedCnf { vars: vars.to_vec(), clauses }
    }

    /// CNF truth value under the total assignment with bit i for `vars[i]`.
    pub fn eval(&self, m: u64) -> bool {
        self.clauses.iter().all(|&(p, n)| p & m != 0 || n & !m != 0)
    }

    pub fn full_clause(&self, m: u64) -> Clause {
        Clause::from_sorted_unchecked(
            self.vars.iter().enumerate().map(|(i, &v)| Lit::new(v, m >> i & 1 == 1)).collect(),
        )
    }
}

pub(crate) fn check_enum_size(what: &'static str, n: usize, limits: &Limits) -> Result<()> {
    if n > limits.enum_vars.min(63) {
        return Err(Error::SizeLimitExceeded { what, limit: limits.enum_vars.min(63), actual: n });
    }
    Ok(())
}

/// DNF(F): the total satisfying assignments over var(F), as clauses.
pub fn canonical_dnf(f: &ClauseSet, limits: &Limits) -> Result<ClauseSet> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    check_enum_size("canonical DNF", vars.len(), limits)?;
    let m = MaskedCnf::new(f, &vars);
    Ok(ClauseSet::new((0..1u64 << vars.len()).filter(|&a| m.eval(a)).map(|a| m.full_clause(a))))
}

/// nsat(F), the number of total satisfying assignments over var(F).
pub fn count_models(f: &ClauseSet, limits: &Limits) -> Result<u64> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    check_enum_size("model count", vars.len(), limits)?;
    let m = MaskedCnf::new(f, &vars);
    Ok((0..1u64 << vars.len()).filter(|&a| m.eval(a)).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let x = Lit::neg(3);
        assert_eq!(x.to_dimacs(), -3);
        assert_eq!(!!x, x);
        assert!(Lit::pos(3) < Lit::neg(3));
        assert!(Lit::neg(3) < Lit::pos(4));
        assert_eq!(Lit::from_dimacs(-3).unwrap(), x);
        assert!(Lit::from_dimacs(0).is_err());
    }

    #[test]
    fn clause_rejects_tautology() {
        assert!(Clause::new([Lit::pos(1), Lit::neg(1)]).is_err());
        assert_eq!(Clause::from_ints(&[2, 1, 2]).lits(), &[Lit::pos(1), Lit::pos(2)]);
    }

    #[test]
    fn resolution_needs_one_clash() {
        let a = Clause::from_ints(&[1, 2]);
        let b = Clause::from_ints(&[-1, 3]);
        assert_eq!(a.resolve(&b), Some(Clause::from_ints(&[2, 3])));
        assert_eq!(a.resolve(&Clause::from_ints(&[-1, -2])), None);
        assert_eq!(a.resolve(&Clause::from_ints(&[3])), None);
    }

    #[test]
    fn union_detects_tautology() {
        let a = Clause::from_ints(&[1, 3]);
        assert_eq!(a.union(&Clause::from_ints(&[2, 3])), Some(Clause::from_ints(&[1, 2, 3])));
        assert_eq!(a.union(&Clause::from_ints(&[-3])), None);
    }

    #[test]
    fn apply_examples() {
        let f = ClauseSet::from_ints(&[&[1], &[2]]);
        let phi = PartialAssignment::from_true_lits([Lit::pos(1), Lit::pos(2)]);
        assert!(f.apply(&phi).is_top());
        assert_eq!(f.apply(&PartialAssignment::new()), f);
        let g = ClauseSet::from_ints(&[&[1, 2], &[-1, 2]]);
        assert_eq!(g.assign(Lit::pos(1)), ClauseSet::from_ints(&[&[2]]));
        assert_eq!(g.assign(Lit::neg(2)), ClauseSet::from_ints(&[&[1], &[-1]]));
    }

    #[test]
    fn falsifying_assignment() {
        let phi = Clause::from_ints(&[1, -2]).falsifying_assignment();
        assert_eq!(phi.get(Var::new(1)), Some(false));
        assert_eq!(phi.get(Var::new(2)), Some(true));
        assert!(Clause::empty().falsifying_assignment().is_empty());
    }

    #[test]
    fn satisfiability_basics() {
        let l = Limits::default();
        assert!(is_satisfiable(&ClauseSet::top(), &l).unwrap());
        assert!(!is_satisfiable(&ClauseSet::bottom(), &l).unwrap());
        let f = ClauseSet::from_ints(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        assert!(!is_satisfiable(&f, &l).unwrap());
        let g = ClauseSet::from_ints(&[&[1, 2], &[-1, 2], &[1, -2]]);
        let m = find_model(&g, &l).unwrap().unwrap();
        assert!(g.apply(&m).is_top());
    }

    #[test]
    fn dnf_of_two_units() {
        let f = ClauseSet::from_ints(&[&[1], &[2]]);
        let l = Limits::default();
        assert_eq!(canonical_dnf(&f, &l).unwrap(), ClauseSet::from_ints(&[&[1, 2]]));
        assert!(canonical_dnf(&ClauseSet::bottom(), &l).unwrap().is_top());
    }

    #[test]
    fn multi_apply_keeps_duplicates() {
        let m = MultiClauseSet::new([Clause::from_ints(&[1, 2]), Clause::from_ints(&[1, -2])]);
        let phi = PartialAssignment::from_true_lits([Lit::neg(2)]);
        let r = m.apply(&phi);
        assert_eq!(r.len(), 1);
        let phi = PartialAssignment::from_true_lits([Lit::pos(3)]);
        assert!(m.apply(&phi).is_contraction_free());
        let m2 = MultiClauseSet::new([Clause::from_ints(&[1, 2]), Clause::from_ints(&[1, 3])]);
        let r2 = m2.apply(&PartialAssignment::from_true_lits([Lit::neg(2), Lit::neg(3)]));
        assert_eq!(r2.len(), 2);
        assert!(!r2.is_contraction_free());
    }

    #[test]
    fn serde_round_trip() {
        let f = ClauseSet::from_ints(&[&[1, -2], &[3]]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1,-2],[3]]");
        let g: ClauseSet = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
