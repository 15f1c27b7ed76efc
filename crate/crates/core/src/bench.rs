//! The benchmark families G^i_{k,h}: generation, closed-form statistics and
//! verification.
//!
//! Numbering: T = ExT(k,h) has inner nodes 1..α−1 in preorder, the doping
//! variable of leaf w (in-order, from 0) is α + w, and the translation
//! variable of the DNF clause of leaf w is 3α − 1 − w.

use std::collections::{BTreeMap, HashSet};
use std::io::{self, Write};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::cnf::{Clause, ClauseSet, Lit, Var};
use crate::dimacs::write_clause;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::reductions::hd_unsat;
use crate::smu::{alpha, Tree};

/// The (k, h) pairs listed in the published instance table.
pub const TABLE_PAIRS: [(usize, usize); 14] = [
    (2, 22),
    (2, 32),
    (2, 42),
    (2, 52),
    (2, 62),
    (2, 72),
    (3, 23),
    (3, 33),
    (3, 43),
    (4, 24),
    (4, 34),
    (4, 44),
    (5, 25),
    (5, 35),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct InstanceSpec {
    pub k: usize,
    pub h: usize,
    pub variant: u8,
}

impl InstanceSpec {
    pub fn new(k: usize, h: usize, variant: u8) -> Result<InstanceSpec> {
        let s = InstanceSpec { k, h, variant };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.h < self.k + 1 {
            return Err(Error::InvalidParameters(format!("need k ≥ 2 and h ≥ k+1, got k={} h={}", self.k, self.h)));
        }
        if !(1..=3).contains(&self.variant) {
            return Err(Error::InvalidParameters(format!("variant must be 1, 2 or 3, got {}", self.variant)));
        }
        alpha(self.k, self.h)?;
        Ok(())
    }

    /// The claimed hardness: k+1 for variant 1, 2 otherwise.
    pub fn hd_claimed(&self) -> usize {
        if self.variant == 1 {
            self.k + 1
        } else {
            2
        }
    }
}

impl std::fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G{}_{{{},{}}}", self.variant, self.k, self.h)
    }
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsRecord {
    pub k: usize,
    pub h: usize,
    pub variant: u8,
    pub alpha: u64,
    pub n: u64,
    pub c: u64,
    pub l: u64,
    /// C(h−k, ⌊(h−k)/2⌋).
    #[serde(serialize_with = "as_decimal")]
    pub b_lower: BigUint,
    /// C(1+h−k, ⌊(1+h−k)/2⌋).
    #[serde(serialize_with = "as_decimal")]
    pub b_nogood: BigUint,
    pub hd_claimed: usize,
}

/// C(n, ⌊n/2⌋).
pub fn central_binomial(n: usize) -> BigUint {
    let k = n / 2;
    let mut b = BigUint::from(1u32);
    for i in 0..k {
        b = b * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    b
}

/// Sum of the leaf depths of ExT(k, h).
pub fn leaf_depth_sum(k: usize, h: usize) -> Result<u64> {
    alpha(k, h)?;
    fn go(k: usize, h: usize, memo: &mut BTreeMap<(usize, usize), (u64, u64)>) -> (u64, u64) {
        // Returns (α, depth sum).
        if let Some(&r) = memo.get(&(k, h)) {
            return r;
        }
        let r = match (k, h) {
            (0, _) => (1, 0),
            (1, h) => {
                let h = h as u64;
                (h + 1, h * (h + 1) / 2 + h)
            }
            (k, h) => {
                let (a1, d1) = go(k.min(h - 1), h - 1, memo);
                let (a2, d2) = go(k - 1, h - 1, memo);
                (a1 + a2, d1 + a1 + d2 + a2)
            }
        };
        memo.insert((k, h), r);
        r
    }
    Ok(go(k, h, &mut BTreeMap::new()).1)
}

/// Closed-form sizes of G^i_{k,h}.
pub fn stats(spec: &InstanceSpec) -> Result<StatsRecord> {
    spec.validate()?;
    let a = alpha(spec.k, spec.h)?;
    let lf = leaf_depth_sum(spec.k, spec.h)? + a;
    let (n, c, l) = match spec.variant {
        1 => (2 * a - 1, 2 * a, 2 * lf),
        2 => (3 * a - 1, 1 + 2 * a + lf, 2 * a + 4 * lf),
        _ => (3 * a - 1, 1 + a + lf, a + 3 * lf),
    };
    Ok(StatsRecord {
        k: spec.k,
        h: spec.h,
        variant: spec.variant,
        alpha: a,
        n,
        c,
        l,
        b_lower: central_binomial(spec.h - spec.k),
        b_nogood: central_binomial(1 + spec.h - spec.k),
        hd_claimed: spec.hd_claimed(),
    })
}

/// Statistics for every row of the published table.
pub fn table() -> Vec<StatsRecord> {
    let mut out = Vec::new();
    for &(k, h) in &TABLE_PAIRS {
        for variant in 1..=3 {
            out.push(stats(&InstanceSpec { k, h, variant }).expect("table parameters are valid"));
        }
    }
    out
}

/// Calls `emit` for every clause of G^i_{k,h}, grouped by leaf in leaf
/// order, followed by the long translation clause.
pub fn for_each_clause(spec: &InstanceSpec, mut emit: impl FnMut(Clause)) -> Result<()> {
    spec.validate()?;
    let a = alpha(spec.k, spec.h)? as u32;
    let tree = Tree::extremal(spec.k, spec.h)?;
    let mut w: u32 = 0;
    let mut path = Vec::with_capacity(spec.h);
    visit(&tree, &mut path, &mut |path: &[Lit]| {
        let u = Var::new(a + w);
        let z = Var::new(3 * a - 1 - w);
        let c = Clause::from_sorted_unchecked(path.to_vec());
        let with = |x: Lit| c.union(&Clause::from_sorted_unchecked(vec![x])).expect("fresh variable");
        emit(with(u.neg()));
        match spec.variant {
            1 => emit(with(u.pos())),
            v => {
                // The DNF clause is C̄ ∪ {u}.
                for &x in path {
                    emit(Clause::new([z.neg(), x.complement()]).expect("fresh variable"));
                }
                emit(Clause::new([z.neg(), u.pos()]).expect("fresh variable"));
                if v == 2 {
                    emit(with(u.neg()).union(&Clause::from_sorted_unchecked(vec![z.pos()])).expect("fresh variable"));
                }
            }
        }
        w += 1;
    });
    if spec.variant != 1 {
        emit(Clause::from_sorted_unchecked((2 * a..3 * a).map(Lit::pos).collect()));
    }
    Ok(())
}

fn visit(t: &Tree, path: &mut Vec<Lit>, f: &mut impl FnMut(&[Lit])) {
    match t.split() {
        None => f(path),
        Some((v, l, r)) => {
            path.push(v.pos());
            visit(l, path, f);
            path.pop();
            path.push(v.neg());
            visit(r, path, f);
            path.pop();
        }
    }
}

/// G^i_{k,h} as a clause-set.
pub fn generate(spec: &InstanceSpec) -> Result<ClauseSet> {
    let mut out = Vec::new();
    for_each_clause(spec, |c| out.push(c))?;
    Ok(ClauseSet::new(out))
}

/// Comment lines describing an instance.
pub fn header_comments(spec: &InstanceSpec) -> Result<Vec<String>> {
    let s = stats(spec)?;
    let mut out = vec![
        format!("instance G{}_{{{},{}}} k={} h={} variant={}", spec.variant, spec.k, spec.h, spec.k, spec.h, spec.variant),
        format!("generator repkit {}", env!("CARGO_PKG_VERSION")),
        format!("alpha={} lF={}", s.alpha, leaf_depth_sum(spec.k, spec.h)? + s.alpha),
    ];
    out.push(match spec.variant {
        1 => "sizes n=2*alpha-1 c=2*alpha l=2*lF".to_string(),
        2 => "sizes n=3*alpha-1 c=1+2*alpha+lF l=2*alpha+4*lF".to_string(),
        _ => "sizes n=3*alpha-1 c=1+alpha+lF l=alpha+3*lF".to_string(),
    });
    out.push(format!("claimed hardness={}", s.hd_claimed));
    let a = s.alpha;
    out.push(format!("vars tree 1..{} doping {}..{}", a - 1, a, 2 * a - 1));
    if spec.variant != 1 {
        out.push(format!("vars translation {}..{} (leaf w -> {} - w)", 2 * a, 3 * a - 1, 3 * a - 1));
    }
    Ok(out)
}

/// Writes the instance in DIMACS form without materialising it.
pub fn write_instance<W: Write>(spec: &InstanceSpec, out: &mut W) -> Result<()> {
    let s = stats(spec)?;
    let io = |e: io::Error| Error::InvalidInput(format!("write failed: {e}"));
    for c in header_comments(spec)? {
        writeln!(out, "c {c}").map_err(io)?;
    }
    writeln!(out, "p cnf {} {}", s.n, s.c).map_err(io)?;
    let mut err = None;
    for_each_clause(spec, |c| {
        if err.is_none() {
            if let Err(e) = write_clause(out, &c) {
                err = Some(e);
            }
        }
    })?;
    match err {
        Some(e) => Err(io(e)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Formulas,
    Hardness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: u64,
    pub actual: u64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub spec: InstanceSpec,
    pub level: VerifyLevel,
    pub checks: Vec<Check>,
    pub ok: bool,
}

/// Counts n, c (distinct clauses) and ℓ of the streamed instance.
pub fn measure(spec: &InstanceSpec) -> Result<(u64, u64, u64)> {
    let mut vars = HashSet::new();
    let mut clauses = HashSet::new();
    let mut l = 0u64;
    for_each_clause(spec, |c| {
        l += c.len() as u64;
        vars.extend(c.vars());
        clauses.insert(c);
    })?;
    Ok((vars.len() as u64, clauses.len() as u64, l))
}

/// Checks generation against the closed forms, or the hardness claim.
pub fn verify(spec: &InstanceSpec, level: VerifyLevel, limits: &Limits) -> Result<VerifyReport> {
    let s = stats(spec)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, expected: u64, actual: u64| {
        checks.push(Check { name: name.to_string(), expected, actual, ok: expected == actual });
    };
    match level {
        VerifyLevel::Formulas => {
            let (n, c, l) = measure(spec)?;
            check("n", s.n, n);
            check("c", s.c, c);
            check("l", s.l, l);
        }
        VerifyLevel::Hardness => {
            let g = generate(spec)?;
            check("hd", s.hd_claimed as u64, hd_unsat(&g, limits)? as u64);
        }
    }
    let ok = checks.iter().all(|c| c.ok);
    Ok(VerifyReport { spec: *spec, level, checks, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::dope;
    use crate::translations::{cant, cantm};

    #[test]
    fn spec_validation() {
        assert!(InstanceSpec::new(2, 3, 1).is_ok());
        assert!(InstanceSpec::new(1, 3, 1).is_err());
        assert!(InstanceSpec::new(2, 2, 1).is_err());
        assert!(InstanceSpec::new(2, 3, 4).is_err());
    }

    #[test]
    fn depth_sum_matches_tree() {
        for k in 0..4 {
            for h in k.max(1)..7 {
                if k == 0 {
                    continue;
                }
                let t = Tree::extremal(k, h).unwrap();
                let d: usize = t.leaf_depths().iter().sum();
                assert_eq!(leaf_depth_sum(k, h).unwrap(), d as u64, "k={k} h={h}");
            }
        }
    }

    #[test]
    fn streamed_equals_library_construction() {
        for (k, h) in [(2, 3), (2, 4), (3, 4), (2, 5)] {
            let t = Tree::extremal(k, h).unwrap();
            let d = dope(&t.smuo());
            let f = d.clauses().clone();
            let fp = d.flipped();
            let dnf = fp.complement();
            let expect = [fp.union(&f), fp.union(&cant(&dnf).output), fp.union(&cantm(&dnf).output)];
            for (i, e) in expect.iter().enumerate() {
                let spec = InstanceSpec::new(k, h, i as u8 + 1).unwrap();
                assert_eq!(&generate(&spec).unwrap(), e, "{spec}");
            }
        }
    }

    #[test]
    fn central_binomials() {
        assert_eq!(central_binomial(20), BigUint::from(184756u32));
        assert_eq!(central_binomial(21), BigUint::from(352716u32));
    }

    #[test]
    fn written_instance_parses_back() {
        let spec = InstanceSpec::new(2, 4, 2).unwrap();
        let mut buf = Vec::new();
        write_instance(&spec, &mut buf).unwrap();
        let d = crate::dimacs::parse_dimacs(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(d.clauses, generate(&spec).unwrap());
        assert_eq!(d.declared_vars as u64, stats(&spec).unwrap().n);
    }
}
