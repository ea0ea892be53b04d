//! Positive-primitive formulas over finite modules and Baur-Monk
//! invariants.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::Span;
use crate::ideal::{greedy_generators, Side};
use crate::module::FiniteModule;
use crate::ring::{FiniteRing, RingElement};

/// `exists y_1..y_q: sum_i a_ji x_i + sum_k b_jk y_k = 0` for every row
/// `j`.  Each row of `eqs` lists the `p + q` coefficients as ring element
/// indices, free variables first.  Coefficients act on the left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPFormula {
    pub free: usize,
    pub bound: usize,
    pub eqs: Vec<Vec<usize>>,
}

impl PPFormula {
    pub fn validate(&self, ring: &FiniteRing) -> Result<()> {
        let width = self.free + self.bound;
        for (j, row) in self.eqs.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Argument(format!("equation {j} has {} coefficients, expected {width}", row.len())));
            }
            if let Some(&c) = row.iter().find(|&&c| c >= ring.size()) {
                return Err(Error::Argument(format!(
                    "coefficient {c} in equation {j} is not an element of {}",
                    ring.label()
                )));
            }
        }
        Ok(())
    }

    /// `exists y: x = r y`.
    pub fn divisible_by(ring: &FiniteRing, r: RingElement) -> Self {
        PPFormula { free: 1, bound: 1, eqs: vec![vec![ring.one().0, ring.neg(r).0]] }
    }

    /// `r x = 0`.
    pub fn annihilated_by(r: RingElement) -> Self {
        PPFormula { free: 1, bound: 0, eqs: vec![vec![r.0]] }
    }

    /// `x = x`.
    pub fn truth(free: usize) -> Self {
        PPFormula { free, bound: 0, eqs: Vec::new() }
    }

    /// Equations of both formulas on shared free variables, bound
    /// variables kept apart.
    pub fn and(&self, other: &PPFormula) -> Result<PPFormula> {
        if self.free != other.free {
            return Err(Error::Argument("conjunction needs the same free variables".into()));
        }
        let (p, q1, q2) = (self.free, self.bound, other.bound);
        let mut eqs = Vec::new();
        for row in &self.eqs {
            let mut r = row.clone();
            r.extend(std::iter::repeat_n(0, q2));
            eqs.push(r);
        }
        for row in &other.eqs {
            let mut r = row[..p].to_vec();
            r.extend(std::iter::repeat_n(0, q1));
            r.extend_from_slice(&row[p..]);
            eqs.push(r);
        }
        Ok(PPFormula { free: p, bound: q1 + q2, eqs })
    }
}

/// Solution set of a formula: sorted tuple indices in `M^p`, where
/// `(x_1, ..., x_p)` has index `sum x_i |M|^(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPSet {
    pub arity: usize,
    pub elements: Vec<usize>,
}

impl PPSet {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &PPSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &PPSet) -> PPSet {
        PPSet { arity: self.arity, elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect() }
    }
}

/// Evaluate by enumerating all of `M^(p+q)`; the enumeration is bounded by
/// `caps.max_homs`.  The result is checked to be an additive subgroup.
pub fn pp_evaluate(m: &FiniteModule, phi: &PPFormula, caps: &Caps) -> Result<PPSet> {
    phi.validate(m.ring())?;
    let (p, q) = (phi.free, phi.bound);
    let n = m.size();
    let total = (n as u128).checked_pow((p + q) as u32).unwrap_or(u128::MAX);
    if total > caps.max_homs as u128 {
        return Err(Error::Cap { what: "pp witness enumeration", cap: caps.max_homs });
    }
    let (xs_count, ys_count) = (n.pow(p as u32), n.pow(q as u32));
    let coeffs: Vec<Vec<RingElement>> =
        phi.eqs.iter().map(|row| row.iter().map(|&c| RingElement(c)).collect()).collect();
    let mut tuple = vec![0usize; p + q];
    let mut found = Vec::new();
    for x in 0..xs_count {
        fill(&mut tuple[..p], x, n);
        // partial sums over the free part are shared by every witness
        let partial: Vec<usize> = coeffs.iter().map(|row| m.combine(&row[..p], &tuple[..p])).collect();
        let hit = (0..ys_count).any(|y| {
            fill(&mut tuple[p..], y, n);
            coeffs.iter().zip(&partial).all(|(row, &s)| m.add(s, m.combine(&row[p..], &tuple[p..])) == 0)
        });
        if hit {
            found.push(x);
        }
    }
    let set = PPSet { arity: p, elements: found };
    check_subgroup(m, &set)?;
    Ok(set)
}

fn fill(slot: &mut [usize], mut x: usize, n: usize) {
    for d in slot {
        *d = x % n;
        x /= n;
    }
}

fn check_subgroup(m: &FiniteModule, set: &PPSet) -> Result<()> {
    let g = m.group().power(set.arity);
    let mut span = Span::zero(g.size());
    for &x in &set.elements {
        span.adjoin(x, |a, b| g.add(a, b));
        if span.len() > set.size() {
            break;
        }
    }
    if set.elements.first() != Some(&0) || span.len() != set.size() {
        return Err(Error::Consistency(format!("pp solution set in {} is not a subgroup", m.label())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightIdealCheck {
    pub is_right_ideal: bool,
    pub elements: Vec<RingElement>,
    pub generators: Vec<RingElement>,
}

/// Evaluate a one-variable formula on the regular module and test closure
/// under right multiplication.
pub fn pp_subgroup_is_right_ideal(
    ring: &std::sync::Arc<FiniteRing>,
    phi: &PPFormula,
    caps: &Caps,
) -> Result<RightIdealCheck> {
    if phi.free != 1 {
        return Err(Error::Argument("formula must have exactly one free variable".into()));
    }
    let reg = FiniteModule::regular(ring, caps)?;
    let set = pp_evaluate(&reg, phi, caps)?;
    let elements: Vec<RingElement> = set.elements.iter().map(|&x| RingElement(x)).collect();
    let is_right_ideal =
        elements.iter().all(|&a| ring.elements().all(|r| set.contains(ring.mul(a, r).0)));
    let generators =
        if is_right_ideal { greedy_generators(ring, Side::Right, &elements) } else { Vec::new() };
    Ok(RightIdealCheck { is_right_ideal, elements, generators })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariant {
    pub numerator: usize,
    pub denominator: usize,
    pub index: usize,
}

/// Index of `phi(M) & psi(M)` in `phi(M)`.
pub fn baur_monk_invariant(m: &FiniteModule, phi: &PPFormula, psi: &PPFormula, caps: &Caps) -> Result<Invariant> {
    if phi.free != 1 || psi.free != 1 {
        return Err(Error::Argument("invariants take one-variable formulas".into()));
    }
    let a = pp_evaluate(m, phi, caps)?;
    let b = pp_evaluate(m, psi, caps)?;
    let numerator = a.size();
    let denominator = a.intersection(&b).size();
    if numerator % denominator != 0 {
        return Err(Error::Consistency(format!("{denominator} does not divide {numerator}")));
    }
    Ok(Invariant { numerator, denominator, index: numerator / denominator })
}

/// Formula with ring-independent coefficients.  A coefficient is written
/// as an integer `k` (meaning `k * 1`, negative allowed) or as `#k`/`-#k`
/// (the element of index `k mod |R|`, or its negative).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTemplate {
    pub free: usize,
    pub bound: usize,
    pub eqs: Vec<Vec<String>>,
}

impl FormulaTemplate {
    pub fn instantiate(&self, ring: &FiniteRing) -> Result<PPFormula> {
        let eqs = self
            .eqs
            .iter()
            .map(|row| row.iter().map(|c| coefficient(ring, c).map(|e| e.0)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let f = PPFormula { free: self.free, bound: self.bound, eqs };
        f.validate(ring)?;
        Ok(f)
    }
}

fn coefficient(ring: &FiniteRing, token: &str) -> Result<RingElement> {
    let t = token.trim();
    let (negate, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let bad = || Error::Argument(format!("bad coefficient `{token}`"));
    let value = match body.strip_prefix('#') {
        Some(k) => RingElement(k.parse::<usize>().map_err(|_| bad())? % ring.size()),
        None => {
            let k: usize = body.parse().map_err(|_| bad())?;
            ring.scale(k % ring.characteristic(), ring.one())
        }
    };
    Ok(if negate { ring.neg(value) } else { value })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaPair {
    pub name: String,
    pub phi: FormulaTemplate,
    pub psi: FormulaTemplate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaLibrary {
    pub pairs: Vec<FormulaPair>,
}

const BUILTIN_LIBRARY: &str = include_str!("../../../corpus/pp_library.json");

impl FormulaLibrary {
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN_LIBRARY).expect("bundled formula library parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Distinct names, at least one pair.
    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        if self.pairs.is_empty() {
            return Err(Error::Argument("empty formula library".into()));
        }
        for p in &self.pairs {
            if !names.insert(&p.name) {
                return Err(Error::Argument(format!("duplicate formula pair `{}`", p.name)));
            }
            if p.phi.free != 1 || p.psi.free != 1 {
                return Err(Error::Argument(format!("pair `{}` must use one free variable", p.name)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;
    use std::sync::Arc;

    fn module(s: &str) -> (Arc<FiniteRing>, FiniteModule) {
        let r = Arc::new(build_ring(s).unwrap());
        let m = FiniteModule::regular(&r, &Caps::default()).unwrap();
        (r, m)
    }

    #[test]
    fn evaluation() {
        let caps = Caps::default();
        let (r, z4) = module("Z/4");
        let div2 = PPFormula::divisible_by(&r, RingElement(2));
        assert_eq!(pp_evaluate(&z4, &div2, &caps).unwrap().elements, vec![0, 2]);
        assert_eq!(pp_evaluate(&z4, &PPFormula::truth(1), &caps).unwrap().size(), 4);
        let zero = PPFormula::annihilated_by(r.one());
        assert_eq!(pp_evaluate(&z4, &zero, &caps).unwrap().elements, vec![0]);
        let pairs = pp_evaluate(&z4, &PPFormula::truth(2), &caps).unwrap();
        assert_eq!(pairs.size(), 16);
    }

    #[test]
    fn right_ideals() {
        let caps = Caps::default();
        let (r, _) = module("Z/4");
        let c = pp_subgroup_is_right_ideal(&r, &PPFormula::divisible_by(&r, RingElement(2)), &caps).unwrap();
        assert!(c.is_right_ideal);
        assert_eq!(c.generators, vec![RingElement(2)]);

        let (m2, _) = module("M(2,GF(2))");
        let c = pp_subgroup_is_right_ideal(&m2, &PPFormula::divisible_by(&m2, RingElement(1)), &caps).unwrap();
        let expected: Vec<RingElement> = {
            let mut v: Vec<RingElement> = m2.elements().map(|y| m2.mul(RingElement(1), y)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        assert!(c.is_right_ideal);
        assert_eq!(c.elements, expected);
        assert_eq!(c.elements.len(), 4);

        let c = pp_subgroup_is_right_ideal(&m2, &PPFormula::annihilated_by(m2.one()), &caps).unwrap();
        assert!(c.is_right_ideal && c.elements == vec![RingElement(0)]);
    }

    #[test]
    fn invariants() {
        let caps = Caps::default();
        let (r, z4) = module("Z/4");
        let phi = PPFormula::divisible_by(&r, RingElement(2));
        let psi = PPFormula::annihilated_by(r.one());
        assert_eq!(baur_monk_invariant(&z4, &phi, &psi, &caps).unwrap().index, 2);
        let sum = z4.direct_sum(&z4, &caps).unwrap();
        assert_eq!(baur_monk_invariant(&sum, &phi, &psi, &caps).unwrap().index, 4);
        assert_eq!(baur_monk_invariant(&z4, &phi, &phi, &caps).unwrap().index, 1);
    }

    #[test]
    fn conjunction_shrinks() {
        let caps = Caps::default();
        let (r, z8) = module("Z/8");
        let a = PPFormula::divisible_by(&r, RingElement(2));
        let b = PPFormula::annihilated_by(RingElement(4));
        let both = a.and(&b).unwrap();
        let sa = pp_evaluate(&z8, &a, &caps).unwrap();
        let sab = pp_evaluate(&z8, &both, &caps).unwrap();
        assert!(sab.is_subset(&sa));
        assert_eq!(sab.elements, vec![0, 2, 4, 6]);
    }

    #[test]
    fn malformed_formulas() {
        let caps = Caps::default();
        let (_, z4) = module("Z/4");
        let f = PPFormula { free: 1, bound: 0, eqs: vec![vec![1, 2]] };
        assert!(matches!(pp_evaluate(&z4, &f, &caps), Err(Error::Argument(_))));
        let f = PPFormula { free: 1, bound: 0, eqs: vec![vec![9]] };
        assert!(matches!(pp_evaluate(&z4, &f, &caps), Err(Error::Argument(_))));
        let f = PPFormula::truth(11);
        assert!(matches!(pp_evaluate(&z4, &f, &caps), Err(Error::Cap { .. })));
    }

    #[test]
    fn library_instantiates_everywhere() {
        let lib = FormulaLibrary::builtin();
        lib.validate().unwrap();
        assert!(lib.pairs.len() >= 10);
        for s in ["Z/6", "M(2,GF(2))", "GF(4)", "T(2,GF(2))"] {
            let r = build_ring(s).unwrap();
            for p in &lib.pairs {
                p.phi.instantiate(&r).unwrap();
                p.psi.instantiate(&r).unwrap();
            }
        }
        let z4 = build_ring("Z/4").unwrap();
        assert_eq!(coefficient(&z4, "-1").unwrap(), RingElement(3));
        assert_eq!(coefficient(&z4, "#6").unwrap(), RingElement(2));
        assert!(coefficient(&z4, "x").is_err());
    }
}
