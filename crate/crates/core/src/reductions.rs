//! The r_k reductions, the hardness measures built on them, and resolution
//! based prime-implicate computation.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cnf::{is_satisfiable, Clause, ClauseSet, Lit, PartialAssignment, Var};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Propagation state over a fixed clause database.
///
/// Holds a trail of assigned literals; the clause-set it stands for is the
/// database instantiated by the trail. Kept closed under unit propagation.
struct Engine {
    clauses: Vec<Vec<Lit>>,
    occ: Vec<Vec<u32>>,
    vals: Vec<i8>,
    trail: Vec<Lit>,
    vars: Vec<Var>,
}

impl Engine {
    /// Builds the engine and runs unit propagation; `None` on a conflict.
    fn new(f: &ClauseSet) -> Option<Engine> {
        if f.contains_empty() {
            return None;
        }
        let max = f.max_var().map_or(0, Var::id) as usize;
        let mut occ = vec![Vec::new(); 2 * max + 2];
        let clauses: Vec<Vec<Lit>> = f.iter().map(|c| c.lits().to_vec()).collect();
        for (i, c) in clauses.iter().enumerate() {
            for x in c {
                occ[x.code()].push(i as u32);
            }
        }
        let mut e = Engine {
            clauses,
            occ,
            vals: vec![0; max + 1],
            trail: Vec::new(),
            vars: f.vars().into_iter().collect(),
        };
        for i in 0..e.clauses.len() {
            if e.clauses[i].len() == 1 && !e.assign(e.clauses[i][0]) {
                return None;
            }
        }
        Some(e)
    }

    fn value(&self, x: Lit) -> i8 {
        let v = self.vals[x.var().id() as usize];
        if x.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Makes `x` true and propagates; false on a conflict, in which case
    /// the caller must undo.
    fn assign(&mut self, x: Lit) -> bool {
        match self.value(x) {
            1 => return true,
            -1 => return false,
            _ => {}
        }
        let mut head = self.trail.len();
        self.push(x);
        while head < self.trail.len() {
            let y = self.trail[head];
            head += 1;
            let ny = y.complement();
            for k in 0..self.occ[ny.code()].len() {
                let ci = self.occ[ny.code()][k] as usize;
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &z in &self.clauses[ci] {
                    match self.value(z) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            n_open += 1;
                            open = Some(z);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => return false,
                    1 => self.push(open.unwrap()),
                    _ => {}
                }
            }
        }
        true
    }

    fn push(&mut self, x: Lit) {
        self.vals[x.var().id() as usize] = if x.is_positive() { 1 } else { -1 };
        self.trail.push(x);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.vals[x.var().id() as usize] = 0;
        }
    }

    /// Whether the open variable `v` still occurs in a non-satisfied clause.
    fn is_active(&self, v: Var) -> bool {
        [v.pos(), v.neg()].iter().any(|x| {
            self.occ[x.code()]
                .iter()
                .any(|&ci| !self.clauses[ci as usize].iter().any(|&z| self.value(z) == 1))
        })
    }

    /// Runs r_k on the current state for k ≥ 2; true iff it derives ⊥.
    /// Otherwise the forced literals stay on the trail.
    fn refute(&mut self, k: usize) -> bool {
        if k <= 1 {
            return false;
        }
        loop {
            let mut changed = false;
            for vi in 0..self.vars.len() {
                let v = self.vars[vi];
                if self.vals[v.id() as usize] != 0 || !self.is_active(v) {
                    continue;
                }
                for x in [v.pos(), v.neg()] {
                    if self.value(x) != 0 {
                        break;
                    }
                    let mark = self.trail.len();
                    let refuted = !self.assign(x.complement()) || self.refute(k - 1);
                    self.undo(mark);
                    if refuted {
                        if !self.assign(x) {
                            return true;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return false;
            }
        }
    }

    fn assignment(&self) -> PartialAssignment {
        PartialAssignment::from_true_lits(self.trail.iter().copied())
    }
}

/// r_k(F). Literals are tried in ascending variable order, positive first.
pub fn r_k(f: &ClauseSet, k: usize) -> ClauseSet {
    if k == 0 {
        return if f.contains_empty() { ClauseSet::bottom() } else { f.clone() };
    }
    let Some(mut e) = Engine::new(f) else {
        return ClauseSet::bottom();
    };
    if e.refute(k) {
        return ClauseSet::bottom();
    }
    f.apply(&e.assignment())
}

/// Whether r_k(F) = {⊥}.
pub fn rk_refutes(f: &ClauseSet, k: usize) -> bool {
    if f.contains_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    match Engine::new(f) {
        None => true,
        Some(mut e) => e.refute(k),
    }
}

/// The literals set by r_k on a satisfiable-looking run; `None` if r_k
/// derives ⊥.
pub fn rk_forced(f: &ClauseSet, k: usize) -> Option<BTreeSet<Lit>> {
    if f.contains_empty() {
        return None;
    }
    if k == 0 {
        return Some(BTreeSet::new());
    }
    let mut e = Engine::new(f)?;
    if e.refute(k) {
        return None;
    }
    Some(e.trail.iter().copied().collect())
}

/// The literals x with F ⊨ x, over var(F); `None` if F is unsatisfiable.
pub fn forced_literals(f: &ClauseSet, limits: &Limits) -> Result<Option<BTreeSet<Lit>>> {
    let Some(model) = crate::cnf::find_model(f, limits)? else {
        return Ok(None);
    };
    let mut forced = BTreeSet::new();
    for x in model.true_lits() {
        if !is_satisfiable(&f.assign(x.complement()), limits)? {
            forced.insert(x);
        }
    }
    Ok(Some(forced))
}

/// r_∞(F): {⊥} for unsatisfiable F, otherwise F with every forced literal
/// applied.
pub fn r_inf(f: &ClauseSet, limits: &Limits) -> Result<ClauseSet> {
    Ok(match forced_literals(f, limits)? {
        None => ClauseSet::bottom(),
        Some(xs) => f.apply(&PartialAssignment::from_true_lits(xs)),
    })
}

/// hd of a clause-set already known to be unsatisfiable.
fn hd_unsat_known(f: &ClauseSet) -> usize {
    if f.contains_empty() {
        return 0;
    }
    let Some(mut e) = Engine::new(f) else {
        return 1;
    };
    let mut k = 2;
    while !e.refute(k) {
        k += 1;
        assert!(k <= f.n() + 1, "r_k failed to refute an unsatisfiable clause-set");
    }
    k
}

/// The least k with r_k(F) = {⊥}.
///
/// # Errors
/// [`Error::NotUnsatisfiable`] if F is satisfiable, or the limits of the
/// satisfiability test.
pub fn hd_unsat(f: &ClauseSet, limits: &Limits) -> Result<usize> {
    if !rk_refutes(f, 1) && is_satisfiable(f, limits)? {
        return Err(Error::NotUnsatisfiable);
    }
    Ok(hd_unsat_known(f))
}

/// Which measure a [`HardnessReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Hd,
    Phd,
    Whd,
}

/// Result of a max-over-instantiations measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessReport {
    pub kind: Measure,
    pub value: usize,
    /// A φ at which the maximum is attained. For hd and whd, φ * F is
    /// unsatisfiable; for phd it may be a satisfiable instantiation whose
    /// forced literals need level `value`.
    pub witness: Option<PartialAssignment>,
    /// False when the state budget ran out; `value` is then a lower bound.
    pub exact: bool,
}

/// Depth-first search over instantiations φ * F, descending only through
/// satisfiable clause-sets, memoised on the instantiated clause-set.
struct Search<'a, E> {
    memo: HashMap<ClauseSet, (usize, Vec<Lit>)>,
    limits: &'a Limits,
    restrict: Option<&'a BTreeSet<Var>>,
    /// Stop as soon as a value at least this large is found.
    cap: usize,
    exhausted: bool,
    eval: E,
}

impl<E> Search<'_, E>
where
    E: FnMut(&ClauseSet, bool) -> Result<usize>,
{
    fn visit(&mut self, g: ClauseSet) -> Result<(usize, Vec<Lit>)> {
        if let Some(r) = self.memo.get(&g) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.limits.brute_force_states {
            self.exhausted = true;
            return Ok((0, Vec::new()));
        }
        let sat = !g.contains_empty() && is_satisfiable(&g, self.limits)?;
        let mut best = ((self.eval)(&g, sat)?, Vec::new());
        if sat && best.0 < self.cap {
            'vars: for v in g.vars() {
                if self.restrict.is_some_and(|r| !r.contains(&v)) {
                    continue;
                }
                for x in [v.pos(), v.neg()] {
                    let (val, mut w) = self.visit(g.assign(x))?;
                    if val > best.0 {
                        w.insert(0, x);
                        best = (val, w);
                        if best.0 >= self.cap {
                            break 'vars;
                        }
                    }
                    if self.exhausted {
                        break 'vars;
                    }
                }
            }
        }
        if !self.exhausted {
            self.memo.insert(g, best.clone());
        }
        Ok(best)
    }
}

fn check_brute_force(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.brute_force_vars {
        return Err(Error::SizeLimitExceeded { what: "hardness brute force", limit: limits.brute_force_vars, actual: n });
    }
    Ok(())
}

fn run_search<E>(
    f: &ClauseSet,
    kind: Measure,
    restrict: Option<&BTreeSet<Var>>,
    cap: usize,
    limits: &Limits,
    eval: E,
) -> Result<HardnessReport>
where
    E: FnMut(&ClauseSet, bool) -> Result<usize>,
{
    check_brute_force(restrict.map_or_else(|| f.n(), BTreeSet::len), limits)?;
    let mut s = Search { memo: HashMap::new(), limits, restrict, cap, exhausted: false, eval };
    let (value, path) = s.visit(f.clone())?;
    Ok(HardnessReport {
        kind,
        value,
        witness: (value > 0).then(|| PartialAssignment::from_true_lits(path)),
        exact: !s.exhausted,
    })
}

/// hd(F), the maximum of hd over all unsatisfiable instantiations.
///
/// # Errors
/// [`Error::SizeLimitExceeded`] above `limits.brute_force_vars` variables.
/// When the state budget runs out the report is returned with
/// `exact = false`.
pub fn hd(f: &ClauseSet, limits: &Limits) -> Result<HardnessReport> {
    run_search(f, Measure::Hd, None, usize::MAX, limits, |g, sat| {
        Ok(if sat { 0 } else { hd_unsat_known(g) })
    })
}

/// Whether hd(F) ≤ k; stops at the first instantiation needing more.
pub fn hd_at_most(f: &ClauseSet, k: usize, limits: &Limits) -> Result<bool> {
    let r = run_search(f, Measure::Hd, None, k + 1, limits, |g, sat| {
        Ok(if sat || rk_refutes(g, k) { 0 } else { k + 1 })
    })?;
    if !r.exact && r.value <= k {
        return Err(Error::BudgetExceeded { what: "hardness brute force", budget: limits.brute_force_states });
    }
    Ok(r.value <= k)
}

/// The least k with r_k(G) = r_∞(G), for a single clause-set G.
fn phd_local(g: &ClauseSet, sat: bool, limits: &Limits) -> Result<usize> {
    if !sat {
        return Ok(hd_unsat_known(g));
    }
    let forced = forced_literals(g, limits)?.expect("satisfiable");
    if forced.is_empty() {
        return Ok(0);
    }
    let Some(mut e) = Engine::new(g) else {
        unreachable!("satisfiable clause-set refuted by unit propagation")
    };
    let mut k = 1;
    loop {
        if e.trail.len() == forced.len() {
            debug_assert!(e.trail.iter().all(|x| forced.contains(x)));
            return Ok(k);
        }
        k += 1;
        let refuted = e.refute(k);
        assert!(!refuted, "r_k refuted a satisfiable clause-set");
    }
}

/// phd(F): the least k such that r_k finds every forced literal, and
/// detects unsatisfiability, on every instantiation.
pub fn phd(f: &ClauseSet, limits: &Limits) -> Result<HardnessReport> {
    run_search(f, Measure::Phd, None, usize::MAX, limits, |g, sat| phd_local(g, sat, limits))
}

/// Resolution saturation. With `width = Some(k)` only steps with a parent
/// of length at most k are made. Returns `None` if ⊥ was derived and
/// `stop_on_empty` is set, otherwise the subsumption-reduced closure.
fn saturate(f: &ClauseSet, width: Option<usize>, stop_on_empty: bool, limits: &Limits) -> Result<Option<Vec<Clause>>> {
    let start = f.subsumption_reduced();
    if start.contains_empty() {
        return Ok(if stop_on_empty { None } else { Some(vec![Clause::empty()]) });
    }
    let mut db: Vec<Clause> = start.into_vec();
    let mut alive = vec![true; db.len()];
    let mut queue: VecDeque<usize> = (0..db.len()).collect();
    let mut active: Vec<usize> = Vec::new();
    let short = |c: &Clause| width.is_none_or(|k| c.len() <= k);
    while let Some(i) = queue.pop_front() {
        if !alive[i] {
            continue;
        }
        let c = db[i].clone();
        let c_short = short(&c);
        let mut a = 0;
        while a < active.len() {
            let j = active[a];
            a += 1;
            if !alive[j] || !(c_short || short(&db[j])) {
                continue;
            }
            let Some(r) = c.resolve(&db[j]) else { continue };
            if r.is_empty() && stop_on_empty {
                return Ok(None);
            }
            if db.iter().zip(&alive).any(|(d, &live)| live && d.subsumes(&r)) {
                continue;
            }
            for (d, live) in db.iter().zip(alive.iter_mut()) {
                if *live && r.subsumes(d) {
                    *live = false;
                }
            }
            db.push(r);
            alive.push(true);
            queue.push_back(db.len() - 1);
            if db.len() > limits.resolution_clauses {
                return Err(Error::BudgetExceeded { what: "resolution saturation", budget: limits.resolution_clauses });
            }
            if !alive[i] {
                break;
            }
        }
        if alive[i] {
            active.push(i);
        }
        active.retain(|&j| alive[j]);
    }
    Ok(Some(db.into_iter().zip(alive).filter(|(_, live)| *live).map(|(c, _)| c).collect()))
}

/// Whether k-resolution derives ⊥ from F.
pub fn k_resolution_refutes(f: &ClauseSet, k: usize, limits: &Limits) -> Result<bool> {
    Ok(saturate(f, Some(k), true, limits)?.is_none())
}

fn whd_unsat_known(f: &ClauseSet, limits: &Limits) -> Result<usize> {
    if f.contains_empty() {
        return Ok(0);
    }
    for k in 1..=f.n() {
        if k_resolution_refutes(f, k, limits)? {
            return Ok(k);
        }
    }
    unreachable!("full resolution failed to refute an unsatisfiable clause-set")
}

/// The least k such that k-resolution refutes F.
pub fn whd_unsat(f: &ClauseSet, limits: &Limits) -> Result<usize> {
    if !f.contains_empty() && is_satisfiable(f, limits)? {
        return Err(Error::NotUnsatisfiable);
    }
    whd_unsat_known(f, limits)
}

/// whd(F), the maximum of whd over all unsatisfiable instantiations.
pub fn whd(f: &ClauseSet, limits: &Limits) -> Result<HardnessReport> {
    run_search(f, Measure::Whd, None, usize::MAX, limits, |g, sat| {
        if sat {
            Ok(0)
        } else {
            whd_unsat_known(g, limits)
        }
    })
}

/// hd^V(F): like hd, but only instantiations with var(φ) ⊆ V count.
pub fn hd_relative(f: &ClauseSet, vars: &BTreeSet<Var>, limits: &Limits) -> Result<usize> {
    let r = run_search(f, Measure::Hd, Some(vars), usize::MAX, limits, |g, sat| {
        Ok(if sat { 0 } else { hd_unsat_known(g) })
    })?;
    if !r.exact {
        return Err(Error::BudgetExceeded { what: "relative hardness", budget: limits.brute_force_states });
    }
    Ok(r.value)
}

/// primec_0(F), by resolution closure with subsumption.
pub fn prime_implicates(f: &ClauseSet, limits: &Limits) -> Result<ClauseSet> {
    Ok(ClauseSet::new(saturate(f, None, false, limits)?.expect("closure without early stop")))
}

/// The prime implicates C such that primec_0(F) ∖ {C} is not equivalent
/// to F.
pub fn essential_prime_implicates(f: &ClauseSet, limits: &Limits) -> Result<ClauseSet> {
    let p = prime_implicates(f, limits)?;
    essential_of_primes(&p, limits)
}

/// Essential elements of a given set of prime implicates.
pub fn essential_of_primes(p: &ClauseSet, limits: &Limits) -> Result<ClauseSet> {
    let mut out = Vec::new();
    for c in p {
        // The rest entails everything but possibly C, so equivalence only
        // hinges on C.
        if !crate::cnf::entails(&p.without(c), c, limits)? {
            out.push(c.clone());
        }
    }
    Ok(ClauseSet::new(out))
}

/// A single resolution step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionStep {
    pub left: Clause,
    pub right: Clause,
    pub pivot: Var,
    pub resolvent: Clause,
}

impl ResolutionStep {
    /// `None` unless the clauses clash in exactly one literal.
    pub fn new(left: &Clause, right: &Clause) -> Option<ResolutionStep> {
        let resolvent = left.resolve(right)?;
        let pivot = left.iter().find(|x| right.contains(x.complement()))?.var();
        Some(ResolutionStep { left: left.clone(), right: right.clone(), pivot, resolvent })
    }
}

/// F with x replaced by y and x̄ by ȳ; tautologies are dropped.
pub fn substitute(f: &ClauseSet, x: Lit, y: Lit) -> ClauseSet {
    let map = |z: Lit| {
        if z == x {
            y
        } else if z == x.complement() {
            y.complement()
        } else {
            z
        }
    };
    ClauseSet::new(f.iter().filter_map(|c| Clause::try_new(c.iter().map(map))))
}

/// |V| + max over total assignments ψ on V of hd(ψ * F), an upper bound
/// on hd(F).
pub fn hd_upper_split(f: &ClauseSet, vars: &BTreeSet<Var>, limits: &Limits) -> Result<usize> {
    let vs: Vec<Var> = vars.iter().copied().collect();
    if vs.len() >= 63 || (1usize << vs.len()) > limits.subsets {
        return Err(Error::SizeLimitExceeded { what: "split assignments", limit: limits.subsets, actual: vs.len() });
    }
    let mut best = 0;
    for m in 0..1u64 << vs.len() {
        let psi = PartialAssignment::from_true_lits(vs.iter().enumerate().map(|(i, &v)| Lit::new(v, m >> i & 1 == 1)));
        let r = hd(&f.apply(&psi), limits)?;
        if !r.exact {
            return Err(Error::BudgetExceeded { what: "hardness brute force", budget: limits.brute_force_states });
        }
        best = best.max(r.value);
    }
    Ok(vs.len() + best)
}
