//! Finite left modules over finite rings.
//!
//! A module carries an explicit carrier (a mixed-radix abelian group with a
//! full action table) together with a presentation: a generating tuple
//! `g_0, ..., g_{k-1}`, one preimage in `R^k` for every element, and a
//! generating set of the relation submodule `K` of `R^k`.  The relations are
//! grouped by depth: the relations of depth `i` generate the left ideal
//! `A_i = {r : r g_i in R g_0 + ... + R g_{i-1}}`, so a tuple of images
//! extends to a homomorphism exactly when every relation vanishes on it.

mod hom;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{decompose_abelian, AbelianGroup, BitSet, Span};
use crate::ideal::{greedy_generators, Side};
use crate::ring::{FiniteRing, RingElement};

pub use hom::{find_isomorphism, hom_enumerate, linear_extension, HomSearch, ModuleHom};

/// Carrier indices are stored as `u16`.
const INDEX_LIMIT: usize = 1 << 16;

/// One generator of the relation submodule: `sum_j coeffs[j] g_j = 0`, with
/// `coeffs.len() == depth + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub depth: usize,
    pub coeffs: Vec<RingElement>,
}

#[derive(Clone, Debug)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    group: AbelianGroup,
    /// `action[r * n + x] = r x`.
    action: Vec<u16>,
    gens: Vec<usize>,
    /// `coords[x * k + i]`: coefficient of generator `i` in the stored
    /// preimage of `x`.
    coords: Vec<u16>,
    relations: Vec<Relation>,
    label: String,
}

pub(crate) fn same_ring(a: &FiniteRing, b: &FiniteRing) -> bool {
    std::ptr::eq(a, b) || a == b
}

fn ring_basis(ring: &FiniteRing) -> Vec<RingElement> {
    (0..ring.group().rank()).map(|i| RingElement(ring.group().basis(i))).collect()
}

fn check_size(size: u128, caps: &Caps) -> Result<()> {
    let cap = caps.max_module.min(INDEX_LIMIT);
    if size > cap as u128 {
        return Err(Error::Size { what: "module", size, cap: cap as u128 });
    }
    Ok(())
}

impl FiniteModule {
    /// `R^n` with coordinatewise action; the element `(x_0, ..., x_{n-1})`
    /// has index `sum x_i |R|^i` and the generators are the unit vectors.
    pub fn free(ring: &Arc<FiniteRing>, n: usize, caps: &Caps) -> Result<Self> {
        let rs = ring.size();
        let size = (rs as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        check_size(size, caps)?;
        let group = ring.group().power(n);
        let m = group.size();
        let mut action = vec![0u16; rs * m];
        for r in ring.elements() {
            for x in 0..m {
                let (mut y, mut out, mut stride) = (x, 0, 1);
                for _ in 0..n {
                    out += ring.mul(r, RingElement(y % rs)).0 * stride;
                    y /= rs;
                    stride *= rs;
                }
                action[r.0 * m + x] = out as u16;
            }
        }
        let gens = (0..n).map(|i| ring.one().0 * rs.pow(i as u32)).collect();
        let label = match n {
            0 => "0".to_string(),
            1 => ring.label().to_string(),
            _ => format!("({})^{n}", ring.label()),
        };
        Self::assemble(ring.clone(), group, action, Some(gens), label, caps)
    }

    /// The regular left module `R`.
    pub fn regular(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<Self> {
        Self::free(ring, 1, caps)
    }

    pub fn zero(ring: &Arc<FiniteRing>) -> Self {
        Self::free(ring, 0, &Caps::default()).expect("the zero module always fits")
    }

    /// A module on a given carrier from an action rule, with greedily chosen
    /// generators.  The rule is trusted to define a module action.
    pub fn from_action(
        ring: &Arc<FiniteRing>,
        group: AbelianGroup,
        act: impl Fn(RingElement, usize) -> usize,
        label: impl Into<String>,
        caps: &Caps,
    ) -> Result<Self> {
        check_size(group.size() as u128, caps)?;
        let m = group.size();
        let mut action = vec![0u16; ring.size() * m];
        for r in ring.elements() {
            for x in 0..m {
                action[r.0 * m + x] = act(r, x) as u16;
            }
        }
        Self::assemble(ring.clone(), group, action, None, label.into(), caps)
    }

    /// Re-encode a module given on abstract ids `0..n`.  Returns the module
    /// and, per new carrier index, the abstract id.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_abstract<G: Rng>(
        ring: &Arc<FiniteRing>,
        n: usize,
        zero: usize,
        add: impl Fn(usize, usize) -> usize,
        act: impl Fn(RingElement, usize) -> usize,
        label: String,
        caps: &Caps,
        rng: Option<&mut G>,
    ) -> Result<(Self, Vec<usize>)> {
        check_size(n as u128, caps)?;
        let dec = decompose_abelian(n, zero, &add, rng);
        let (to, from) = (dec.to_abstract, dec.from_abstract);
        let module = Self::from_action(ring, dec.group, |r, x| from[act(r, to[x])], label, caps)?;
        Ok((module, to))
    }

    fn assemble(
        ring: Arc<FiniteRing>,
        group: AbelianGroup,
        action: Vec<u16>,
        gens: Option<Vec<usize>>,
        label: String,
        caps: &Caps,
    ) -> Result<Self> {
        check_size(group.size() as u128, caps)?;
        if ring.size() > INDEX_LIMIT {
            return Err(Error::Size { what: "ring", size: ring.size() as u128, cap: INDEX_LIMIT as u128 });
        }
        let mut module =
            FiniteModule { ring, group, action, gens: Vec::new(), coords: Vec::new(), relations: Vec::new(), label };
        let gens = match gens {
            Some(g) => g,
            None => module.greedy_generators(),
        };
        module.set_generators(gens)?;
        Ok(module)
    }

    /// Repeatedly take the least element outside the current span.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut b = SpanBuilder::new(self);
        let mut gens = Vec::new();
        for x in self.elements() {
            if !b.span.contains(x) {
                gens.push(x);
                b.push(x);
            }
        }
        gens
    }

    fn set_generators(&mut self, gens: Vec<usize>) -> Result<()> {
        let (n, k, rs) = (self.size(), gens.len(), self.ring.size());
        let mut coords = vec![0u16; n * k];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut relations = Vec::new();
        for (i, &gi) in gens.iter().enumerate() {
            let mult: Vec<usize> = (0..rs).map(|r| self.act(RingElement(r), gi)).collect();
            let ideal: Vec<RingElement> = (0..rs).filter(|&r| seen[mult[r]]).map(RingElement).collect();
            let base = members.len();
            for (r, &t) in mult.iter().enumerate() {
                if seen[t] {
                    continue;
                }
                // the coset t + M_{i-1} is disjoint from everything seen
                for j in 0..base {
                    let x = members[j];
                    let y = self.group.add(x, t);
                    seen[y] = true;
                    members.push(y);
                    coords.copy_within(x * k..x * k + k, y * k);
                    coords[y * k + i] = r as u16;
                }
            }
            for a in greedy_generators(&self.ring, Side::Left, &ideal) {
                let at = mult[a.0];
                let mut coeffs: Vec<RingElement> = (0..i).map(|j| RingElement(coords[at * k + j] as usize)).collect();
                coeffs.push(self.ring.neg(a));
                relations.push(Relation { depth: i, coeffs });
            }
        }
        if members.len() != n {
            return Err(Error::Argument(format!(
                "{} elements do not generate {} (span has {} of {n} elements)",
                k,
                self.label,
                members.len()
            )));
        }
        self.gens = gens;
        self.coords = coords;
        self.relations = relations;
        Ok(())
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn is_zero(&self) -> bool {
        self.size() == 1
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.group.add(a, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.group.neg(a)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.group.sub(a, b)
    }

    /// `r x`.
    pub fn act(&self, r: RingElement, x: usize) -> usize {
        self.action[r.0 * self.size() + x] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// The stored preimage of `x` in `R^k`.
    pub fn coords(&self, x: usize) -> Vec<RingElement> {
        let k = self.gens.len();
        self.coords[x * k..x * k + k].iter().map(|&c| RingElement(c as usize)).collect()
    }

    pub(crate) fn coord(&self, x: usize, i: usize) -> RingElement {
        RingElement(self.coords[x * self.gens.len() + i] as usize)
    }

    /// Generators of the relation submodule, grouped by depth.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// `sum_j coeffs[j] x_j`.
    pub fn combine(&self, coeffs: &[RingElement], xs: &[usize]) -> usize {
        coeffs.iter().zip(xs).fold(0, |acc, (&c, &x)| self.add(acc, self.act(c, x)))
    }

    /// The relation submodule `K` of `R^k` as a sorted list of indices in
    /// the encoding of [`FiniteModule::free`].
    pub fn relation_submodule(&self, caps: &Caps) -> Result<Vec<usize>> {
        let free = FiniteModule::free(&self.ring, self.gens.len(), caps)?;
        let rs = self.ring.size();
        let gens: Vec<usize> = self
            .relations
            .iter()
            .map(|rel| rel.coeffs.iter().enumerate().map(|(j, c)| c.0 * rs.pow(j as u32)).sum())
            .collect();
        Ok(free.span(&gens).into_sorted())
    }

    /// Submodule generated by `gens`.
    pub fn span(&self, gens: &[usize]) -> Span {
        let mut b = SpanBuilder::new(self);
        for &g in gens {
            b.push(g);
        }
        b.span
    }

    /// True if `elements` (in any order, duplicates allowed) is a submodule.
    pub fn is_submodule(&self, elements: &[usize]) -> bool {
        if elements.iter().any(|&x| x >= self.size()) {
            return false;
        }
        let set = BitSet::from_iter(self.size(), elements.iter().copied());
        let span = self.span(elements);
        span.len() == set.count()
    }

    /// `{r : r x = 0}`.
    pub fn annihilator(&self, x: usize) -> BitSet {
        BitSet::from_iter(self.ring.size(), self.ring.elements().filter(|&r| self.act(r, x) == 0).map(|r| r.0))
    }

    /// `{r : r M = 0}`.
    pub fn module_annihilator(&self) -> Vec<RingElement> {
        self.ring.elements().filter(|&r| self.gens.iter().all(|&g| self.act(r, g) == 0)).collect()
    }

    /// Submodule generated by `gens`, as a module with its inclusion map.
    pub fn submodule(&self, gens: &[usize], caps: &Caps) -> Result<(FiniteModule, Vec<usize>)> {
        let elements = self.span(gens).into_sorted();
        self.submodule_on(&elements, caps)
    }

    /// The submodule with exactly the given (sorted) elements.
    pub fn submodule_on(&self, elements: &[usize], caps: &Caps) -> Result<(FiniteModule, Vec<usize>)> {
        if !self.is_submodule(elements) {
            return Err(Error::NotSubmodule(format!("{} elements of {}", elements.len(), self.label)));
        }
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut id = vec![usize::MAX; self.size()];
        for (i, &e) in sorted.iter().enumerate() {
            id[e] = i;
        }
        let (m, to) = FiniteModule::from_abstract::<rand_chacha::ChaCha8Rng>(
            &self.ring,
            sorted.len(),
            id[0],
            |a, b| id[self.add(sorted[a], sorted[b])],
            |r, a| id[self.act(r, sorted[a])],
            format!("sub({})", self.label),
            caps,
            None,
        )?;
        let inclusion = to.iter().map(|&a| sorted[a]).collect();
        Ok((m, inclusion))
    }

    /// `M / N` for a submodule `N` given by its elements, with the projection.
    /// Cosets are represented by their least element.
    pub fn quotient(&self, sub: &[usize], caps: &Caps) -> Result<(FiniteModule, Vec<usize>)> {
        if !self.is_submodule(sub) {
            return Err(Error::NotSubmodule(format!("{} elements of {}", sub.len(), self.label)));
        }
        let n = self.size();
        let mut sub_sorted = sub.to_vec();
        sub_sorted.sort_unstable();
        sub_sorted.dedup();
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in self.elements() {
            if coset[x] != usize::MAX {
                continue;
            }
            for &s in &sub_sorted {
                coset[self.add(x, s)] = reps.len();
            }
            reps.push(x);
        }
        let (q, to) = FiniteModule::from_abstract::<rand_chacha::ChaCha8Rng>(
            &self.ring,
            reps.len(),
            coset[0],
            |a, b| coset[self.add(reps[a], reps[b])],
            |r, a| coset[self.act(r, reps[a])],
            format!("{}/[{}]", self.label, sub_sorted.len()),
            caps,
            None,
        )?;
        let mut from = vec![0; reps.len()];
        for (m, &a) in to.iter().enumerate() {
            from[a] = m;
        }
        let projection = coset.iter().map(|&c| from[c]).collect();
        Ok((q, projection))
    }

    /// `self (+) other`; the pair `(x, y)` has index `x + |self| y`.
    pub fn direct_sum(&self, other: &FiniteModule, caps: &Caps) -> Result<FiniteModule> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        check_size(self.size() as u128 * other.size() as u128, caps)?;
        let na = self.size();
        let group = self.group.product(&other.group);
        let m = group.size();
        let mut action = vec![0u16; self.ring.size() * m];
        for r in self.ring.elements() {
            for z in 0..m {
                action[r.0 * m + z] = (self.act(r, z % na) + na * other.act(r, z / na)) as u16;
            }
        }
        let gens = self.gens.iter().copied().chain(other.gens.iter().map(|&y| y * na)).collect();
        let label = format!("{} (+) {}", self.label, other.label);
        Self::assemble(self.ring.clone(), group, action, Some(gens), label, caps)
    }

    /// Check the module axioms on all pairs of ring elements and all pairs
    /// of module elements against additive generators; exact.
    pub fn verify_axioms(&self) -> bool {
        let ring = &self.ring;
        let basis: Vec<usize> = (0..self.group.rank()).map(|i| self.group.basis(i)).collect();
        let rbasis = ring_basis(ring);
        self.elements().all(|x| self.act(ring.one(), x) == x)
            && ring.elements().all(|r| {
                self.elements().all(|x| {
                    basis.iter().all(|&b| self.act(r, self.add(x, b)) == self.add(self.act(r, x), self.act(r, b)))
                        && rbasis.iter().all(|&s| {
                            self.act(ring.add(r, s), x) == self.add(self.act(r, x), self.act(s, x))
                                && self.act(ring.mul(r, s), x) == self.act(r, self.act(s, x))
                        })
                })
            })
    }

    /// Isomorphism invariant used to bucket modules before any search.
    pub fn invariant_key(&self) -> ModuleKey {
        let mut orders = self.group.orders().to_vec();
        orders.sort_unstable();
        let mut profile: Vec<usize> = self.elements().map(|x| self.annihilator(x).count()).collect();
        profile.sort_unstable();
        ModuleKey {
            size: self.size(),
            orders,
            annihilator: self.module_annihilator().into_iter().map(|r| r.0).collect(),
            profile,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleKey {
    pub size: usize,
    pub orders: Vec<usize>,
    pub annihilator: Vec<usize>,
    pub profile: Vec<usize>,
}

impl fmt::Display for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (|M| = {} over {})", self.label, self.size(), self.ring.label())
    }
}

/// Closure of a generating set under addition and the action of the
/// additive generators of the ring.
struct SpanBuilder<'a> {
    module: &'a FiniteModule,
    basis: Vec<RingElement>,
    span: Span,
}

impl<'a> SpanBuilder<'a> {
    fn new(module: &'a FiniteModule) -> Self {
        SpanBuilder { module, basis: ring_basis(&module.ring), span: Span::zero(module.size()) }
    }

    fn push(&mut self, g: usize) {
        let m = self.module;
        let mut queue = VecDeque::from([g]);
        while let Some(z) = queue.pop_front() {
            if !self.span.adjoin(z, |a, b| m.add(a, b)) {
                continue;
            }
            for &b in &self.basis {
                queue.push_back(m.act(b, z));
            }
        }
    }
}

/// All submodules of `m`, sorted by size then elements; `None` if there are
/// more than `limit`.
pub fn enumerate_submodules(m: &FiniteModule, limit: usize) -> Option<Vec<Vec<usize>>> {
    use std::collections::HashSet;
    let n = m.size();
    let mut seen: HashSet<BitSet> = HashSet::new();
    let zero = vec![0usize];
    seen.insert(BitSet::from_iter(n, zero.iter().copied()));
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        let base = out[i].clone();
        i += 1;
        let members = BitSet::from_iter(n, base.iter().copied());
        // one candidate per coset of the current submodule
        let mut covered = members.clone();
        for x in m.elements() {
            if covered.contains(x) {
                continue;
            }
            for &s in &base {
                covered.insert(m.add(x, s));
            }
            let mut gens = base.clone();
            gens.push(x);
            let span = m.span(&gens);
            if seen.insert(span.members().clone()) {
                if out.len() >= limit {
                    return None;
                }
                out.push(span.into_sorted());
            }
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn ring(s: &str) -> Arc<FiniteRing> {
        Arc::new(build_ring(s).unwrap())
    }

    #[test]
    fn free_modules() {
        let caps = Caps::default();
        assert_eq!(FiniteModule::free(&ring("Z/4"), 1, &caps).unwrap().size(), 4);
        let m = FiniteModule::free(&ring("Z/6"), 2, &caps).unwrap();
        assert_eq!(m.size(), 36);
        assert!(m.relations().is_empty());
        assert!(m.verify_axioms());
        let z = FiniteModule::free(&ring("Z/6"), 0, &caps).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_generators(), 0);
        let big = FiniteModule::free(&ring("M(2,GF(3))"), 2, &caps);
        assert!(matches!(big, Err(Error::Size { .. })));
    }

    #[test]
    fn quotient_of_z4_by_2() {
        let caps = Caps::default();
        let z4 = ring("Z/4");
        let m = FiniteModule::regular(&z4, &caps).unwrap();
        let (q, proj) = m.quotient(&[0, 2], &caps).unwrap();
        assert_eq!(q.size(), 2);
        assert!(q.verify_axioms());
        // 1 and 3 act as identity, 2 as zero
        for r in 0..4 {
            assert_eq!(q.act(RingElement(r), 1), r % 2);
        }
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert_eq!(q.relations().len(), 1);
        assert_eq!(q.relations()[0].coeffs, vec![RingElement(2)]);
        assert_eq!(m.quotient(&[0], &caps).unwrap().0.size(), 4);
        assert!(m.quotient(&[0, 1, 2, 3], &caps).unwrap().0.is_zero());
        assert!(matches!(m.quotient(&[0, 1], &caps), Err(Error::NotSubmodule(_))));
    }

    #[test]
    fn coordinates_reconstruct_elements() {
        let caps = Caps::default();
        let r = ring("T(2,GF(2))");
        let m = FiniteModule::free(&r, 2, &caps).unwrap();
        let (q, _) = m.quotient(&m.span(&[2 + 8 * 3]).into_sorted(), &caps).unwrap();
        for x in q.elements() {
            assert_eq!(q.combine(&q.coords(x), q.generators()), x);
        }
        for rel in q.relations() {
            assert_eq!(q.combine(&rel.coeffs, q.generators()), 0);
        }
        let wide = Caps { max_module: 1 << 16, ..caps };
        let k = q.relation_submodule(&wide).unwrap();
        assert_eq!(8usize.pow(q.num_generators() as u32) / k.len(), q.size());
    }

    #[test]
    fn direct_sums() {
        let caps = Caps::default();
        let z6 = ring("Z/6");
        let m = FiniteModule::regular(&z6, &caps).unwrap();
        let (p1, _) = m.submodule(&[3], &caps).unwrap();
        let (p2, _) = m.submodule(&[4], &caps).unwrap();
        assert_eq!((p1.size(), p2.size()), (2, 3));
        let s = p1.direct_sum(&p2, &caps).unwrap();
        assert_eq!(s.size(), 6);
        assert!(s.verify_axioms());
        let other = FiniteModule::regular(&ring("Z/4"), &caps).unwrap();
        assert!(matches!(s.direct_sum(&other, &caps), Err(Error::RingMismatch)));
    }

    #[test]
    fn submodule_lattices() {
        let caps = Caps::default();
        let m = FiniteModule::regular(&ring("Z/8"), &caps).unwrap();
        assert_eq!(enumerate_submodules(&m, 100).unwrap().len(), 4);
        let f2 = FiniteModule::free(&ring("GF(2)"), 2, &caps).unwrap();
        assert_eq!(enumerate_submodules(&f2, 100).unwrap().len(), 5);
        let p = FiniteModule::free(&ring("M(2,GF(2))"), 1, &caps).unwrap();
        // left ideals of M(2,F2): 0, R, and the 3 column spaces
        assert_eq!(enumerate_submodules(&p, 100).unwrap().len(), 5);
        assert!(enumerate_submodules(&f2, 3).is_none());
    }
}
