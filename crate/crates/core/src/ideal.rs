//! One- and two-sided ideals, the Jacobson radical, quotient rings, and the
//! ring-level predicates (local, simple, chain conditions).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{BitSet, Span};
use crate::ring::{FiniteRing, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::TwoSided => "two-sided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ideal {
    pub side: Side,
    /// Sorted ascending.
    pub elements: Vec<RingElement>,
    pub generators: Vec<RingElement>,
}

impl Ideal {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: RingElement) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        self.elements.iter().map(|e| e.0).collect()
    }

    fn members(&self, n: usize) -> BitSet {
        BitSet::from_iter(n, self.elements.iter().map(|e| e.0))
    }
}

/// Grows an ideal by generators.  Each accepted generator at least doubles
/// the span, and only multiples of accepted generators by the additive
/// generators of the ring are queued (closure under those and addition is
/// closure under every ring element).
struct IdealBuilder<'a> {
    ring: &'a FiniteRing,
    side: Side,
    basis: Vec<RingElement>,
    span: Span,
    queue: VecDeque<RingElement>,
}

impl<'a> IdealBuilder<'a> {
    fn new(ring: &'a FiniteRing, side: Side) -> Self {
        let basis = (0..ring.group().rank()).map(|i| RingElement(ring.group().basis(i))).collect();
        IdealBuilder { ring, side, basis, span: Span::zero(ring.size()), queue: VecDeque::new() }
    }

    fn from_ideal(ring: &'a FiniteRing, ideal: &Ideal) -> Self {
        let mut b = IdealBuilder::new(ring, ideal.side);
        for &g in &ideal.generators {
            b.push(g);
        }
        b.close();
        b
    }

    fn push(&mut self, g: RingElement) {
        self.queue.push_back(g);
    }

    fn close(&mut self) {
        let ring = self.ring;
        let add = |a, b| ring.group().add(a, b);
        while let Some(z) = self.queue.pop_front() {
            if !self.span.adjoin(z.0, add) {
                continue;
            }
            for &r in &self.basis {
                if matches!(self.side, Side::Left | Side::TwoSided) {
                    self.queue.push_back(ring.mul(r, z));
                }
                if matches!(self.side, Side::Right | Side::TwoSided) {
                    self.queue.push_back(ring.mul(z, r));
                }
            }
        }
    }
}

/// Least ideal of the given side containing `gens`.
pub fn ideal_generated(ring: &FiniteRing, side: Side, gens: &[RingElement]) -> Ideal {
    let mut b = IdealBuilder::new(ring, side);
    for &g in gens {
        b.push(g);
    }
    b.close();
    let elements = b.span.into_sorted().into_iter().map(RingElement).collect();
    Ideal { side, elements, generators: gens.to_vec() }
}

/// Greedy generating set: repeatedly add the least element not yet covered.
pub(crate) fn greedy_generators(ring: &FiniteRing, side: Side, elements: &[RingElement]) -> Vec<RingElement> {
    let mut b = IdealBuilder::new(ring, side);
    let mut gens = Vec::new();
    for &x in elements {
        if !b.span.contains(x.0) {
            gens.push(x);
            b.push(x);
            b.close();
        }
    }
    gens
}

/// Check closure of an element set under addition and the side's
/// multiplication.
pub fn is_ideal(ring: &FiniteRing, side: Side, elements: &[RingElement]) -> bool {
    let set = BitSet::from_iter(ring.size(), elements.iter().map(|e| e.0));
    if !set.contains(0) {
        return false;
    }
    elements.iter().all(|&a| {
        elements.iter().all(|&b| set.contains(ring.add(a, b).0))
            && ring.elements().all(|r| {
                let left = !matches!(side, Side::Left | Side::TwoSided) || set.contains(ring.mul(r, a).0);
                let right = !matches!(side, Side::Right | Side::TwoSided) || set.contains(ring.mul(a, r).0);
                left && right
            })
    })
}

/// Smallest `m` with `I^m = 0`, or `None` if the powers stabilize above zero.
pub fn nilpotency_index(ring: &FiniteRing, ideal: &Ideal) -> Option<usize> {
    let add = |a, b| ring.group().add(a, b);
    let mut power: Vec<RingElement> = ideal.elements.clone();
    let mut m = 1;
    while power.len() > 1 {
        let mut next = Span::zero(ring.size());
        for &a in &power {
            for &b in &ideal.elements {
                next.adjoin(ring.mul(a, b).0, add);
            }
        }
        if next.len() == power.len() {
            return None;
        }
        power = next.into_sorted().into_iter().map(RingElement).collect();
        m += 1;
    }
    Some(m.min(if ideal.is_zero() { 1 } else { m }))
}

/// The Jacobson radical `{x : 1 - r x is a unit for every r}`.
///
/// The result is checked to be a two-sided ideal and nilpotent; either
/// failure indicates a broken ring construction.
pub fn jacobson_radical(ring: &FiniteRing) -> Result<Ideal> {
    let one = ring.one();
    let elements: Vec<RingElement> = ring
        .elements()
        .filter(|&x| ring.elements().all(|r| ring.is_unit(ring.sub(one, ring.mul(r, x)))))
        .collect();
    if ring.size() > 1 && !is_ideal(ring, Side::TwoSided, &elements) {
        return Err(Error::Consistency(format!("quasi-regular set of {} is not a two-sided ideal", ring.label())));
    }
    let generators = greedy_generators(ring, Side::TwoSided, &elements);
    let ideal = Ideal { side: Side::TwoSided, elements, generators };
    if ring.size() > 1 && nilpotency_index(ring, &ideal).is_none() {
        return Err(Error::Consistency(format!("radical of {} is not nilpotent", ring.label())));
    }
    Ok(ideal)
}

/// A quotient ring together with the canonical projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ring: FiniteRing,
    /// New carrier index -> least element of the coset.
    pub representatives: Vec<RingElement>,
    /// Old element -> new carrier index.
    pub projection: Vec<RingElement>,
}

pub fn quotient_ring(ring: &FiniteRing, ideal: &Ideal) -> Result<FiniteRing> {
    quotient_ring_with_projection(ring, ideal, &Caps::default()).map(|q| q.ring)
}

pub fn quotient_ring_with_projection(ring: &FiniteRing, ideal: &Ideal, caps: &Caps) -> Result<Quotient> {
    if ideal.side != Side::TwoSided {
        return Err(Error::Side(ideal.side.to_string()));
    }
    let n = ring.size();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in ring.elements() {
        if coset[x.0] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x.0);
        for &i in &ideal.elements {
            coset[ring.add(x, i).0] = id;
        }
    }
    let add = |a: usize, b: usize| coset[ring.group().add(reps[a], reps[b])];
    let mul = |a: usize, b: usize| coset[ring.mul(RingElement(reps[a]), RingElement(reps[b])).0];
    let gens: Vec<String> = ideal.generators.iter().map(|g| g.to_string()).collect();
    let label = format!("{}/({})", ring.label(), gens.join(","));
    let (q, to_abstract) = FiniteRing::from_abstract::<rand_chacha::ChaCha8Rng>(
        label,
        reps.len(),
        coset[0],
        coset[ring.one().0],
        add,
        mul,
        caps,
        None,
    )?;
    let mut from_abstract = vec![0; reps.len()];
    for (m, &a) in to_abstract.iter().enumerate() {
        from_abstract[a] = m;
    }
    Ok(Quotient {
        representatives: to_abstract.iter().map(|&a| RingElement(reps[a])).collect(),
        projection: coset.iter().map(|&c| RingElement(from_abstract[c])).collect(),
        ring: q,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalWitness {
    /// The non-units, forming the unique maximal left ideal.
    MaximalIdeal { elements: Vec<RingElement> },
    /// Two non-units whose sum is a unit.
    UnitSum { a: RingElement, b: RingElement, sum: RingElement },
    ZeroRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub local: bool,
    pub witness: LocalWitness,
}

/// A ring is local iff its non-units are closed under addition.
pub fn is_local(ring: &FiniteRing) -> LocalVerdict {
    if ring.size() == 1 {
        return LocalVerdict { local: false, witness: LocalWitness::ZeroRing };
    }
    let non_units: Vec<RingElement> = ring.elements().filter(|&x| !ring.is_unit(x)).collect();
    for (i, &a) in non_units.iter().enumerate() {
        for &b in &non_units[i..] {
            let sum = ring.add(a, b);
            if ring.is_unit(sum) {
                return LocalVerdict { local: false, witness: LocalWitness::UnitSum { a, b, sum } };
            }
        }
    }
    LocalVerdict { local: true, witness: LocalWitness::MaximalIdeal { elements: non_units } }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleVerdict {
    pub simple: bool,
    /// A proper nonzero two-sided ideal when not simple.
    pub witness: Option<Ideal>,
}

/// Simple iff every nonzero element generates the whole ring as a two-sided
/// ideal.  The zero ring is not simple.
pub fn is_simple_ring(ring: &FiniteRing) -> SimpleVerdict {
    if ring.size() < 2 {
        return SimpleVerdict { simple: false, witness: None };
    }
    for x in ring.elements().skip(1) {
        let i = ideal_generated(ring, Side::TwoSided, &[x]);
        if i.size() < ring.size() {
            return SimpleVerdict { simple: false, witness: Some(i) };
        }
    }
    SimpleVerdict { simple: true, witness: None }
}

/// All ideals of one side, sorted by size then elements.
pub fn enumerate_ideals(ring: &FiniteRing, side: Side) -> Vec<Ideal> {
    let n = ring.size();
    let zero = ideal_generated(ring, side, &[]);
    let mut seen: HashSet<BitSet> = HashSet::new();
    seen.insert(zero.members(n));
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        let base = out[i].clone();
        i += 1;
        let members = base.members(n);
        for x in ring.elements() {
            if members.contains(x.0) {
                continue;
            }
            let mut b = IdealBuilder::from_ideal(ring, &base);
            b.push(x);
            b.close();
            let bits = b.span.members().clone();
            if seen.insert(bits) {
                let mut gens = base.generators.clone();
                gens.push(x);
                let elements = b.span.into_sorted().into_iter().map(RingElement).collect();
                out.push(Ideal { side, elements, generators: gens });
            }
        }
    }
    out.sort_by(|a, b| (a.size(), &a.elements).cmp(&(b.size(), &b.elements)));
    out
}

/// Number of ideals in a longest strictly increasing chain.
pub fn longest_chain(ideals: &[Ideal], n: usize) -> usize {
    let sets: Vec<BitSet> = ideals.iter().map(|i| i.members(n)).collect();
    let mut best = vec![1usize; ideals.len()];
    for j in 0..ideals.len() {
        for i in 0..j {
            if ideals[i].size() < ideals[j].size() && sets[i].is_subset(&sets[j]) {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightIdealLattice {
    pub ideals: Vec<Vec<RingElement>>,
    pub longest_chain: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConditions {
    pub right_artinian: bool,
    pub left_perfect: bool,
    pub right_coherent: bool,
    pub rationale: String,
    pub lattice: Option<RightIdealLattice>,
}

pub const FINITE_CHAIN_RATIONALE: &str = "finite ring: every descending chain of one-sided ideals stabilizes, \
     so the ring is right artinian; right artinian implies left perfect and right coherent";

/// Chain conditions of a finite ring.  All hold; below `caps.ideal_enum`
/// elements the full right-ideal lattice is attached as a witness.
pub fn chain_conditions(ring: &FiniteRing, caps: &Caps) -> ChainConditions {
    let lattice = (ring.size() <= caps.ideal_enum).then(|| {
        let ideals = enumerate_ideals(ring, Side::Right);
        RightIdealLattice {
            longest_chain: longest_chain(&ideals, ring.size()),
            ideals: ideals.into_iter().map(|i| i.elements).collect(),
        }
    });
    ChainConditions {
        right_artinian: true,
        left_perfect: true,
        right_coherent: true,
        rationale: FINITE_CHAIN_RATIONALE.to_string(),
        lattice,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn idx(i: &Ideal) -> Vec<usize> {
        i.indices()
    }

    #[test]
    fn generated_ideals() {
        let z6 = build_ring("Z/6").unwrap();
        assert_eq!(idx(&ideal_generated(&z6, Side::TwoSided, &[RingElement(2)])), vec![0, 2, 4]);
        let m2 = build_ring("M(2,GF(2))").unwrap();
        assert_eq!(ideal_generated(&m2, Side::TwoSided, &[RingElement(1)]).size(), 16);
        let t2 = build_ring("T(2,GF(2))").unwrap();
        // E12 is index 2
        assert_eq!(idx(&ideal_generated(&t2, Side::TwoSided, &[RingElement(2)])), vec![0, 2]);
        assert!(ideal_generated(&z6, Side::Left, &[]).is_zero());
    }

    #[test]
    fn radicals() {
        let j = |s: &str| idx(&jacobson_radical(&build_ring(s).unwrap()).unwrap());
        assert_eq!(j("Z/4"), vec![0, 2]);
        assert_eq!(j("Z/6"), vec![0]);
        assert_eq!(j("T(2,GF(2))"), vec![0, 2]);
        assert_eq!(j("Z/8"), vec![0, 2, 4, 6]);
        assert_eq!(j("M(2,GF(2))"), vec![0]);
    }

    #[test]
    fn quotients() {
        let z4 = build_ring("Z/4").unwrap();
        let q = quotient_ring(&z4, &jacobson_radical(&z4).unwrap()).unwrap();
        assert_eq!(q.size(), 2);
        assert!(is_simple_ring(&q).simple);
        assert!(is_local(&q).local);

        let t2 = build_ring("T(2,GF(2))").unwrap();
        let q = quotient_ring(&t2, &jacobson_radical(&t2).unwrap()).unwrap();
        assert_eq!(q.size(), 4);
        assert_eq!(q.idempotents().len(), 4);
        assert!(q.is_commutative());

        let zero = ideal_generated(&z4, Side::TwoSided, &[]);
        assert_eq!(quotient_ring(&z4, &zero).unwrap().size(), 4);

        let left = ideal_generated(&t2, Side::Left, &[RingElement(1)]);
        assert!(matches!(quotient_ring(&t2, &left), Err(Error::Side(_))));
    }

    #[test]
    fn projection_is_a_ring_map() {
        let r = build_ring("Z/12").unwrap();
        let i = ideal_generated(&r, Side::TwoSided, &[RingElement(4)]);
        let q = quotient_ring_with_projection(&r, &i, &Caps::default()).unwrap();
        for a in r.elements() {
            for b in r.elements() {
                let p = |x: RingElement| q.projection[x.0];
                assert_eq!(p(r.add(a, b)), q.ring.add(p(a), p(b)));
                assert_eq!(p(r.mul(a, b)), q.ring.mul(p(a), p(b)));
            }
        }
        assert_eq!(q.representatives[0], RingElement(0));
    }

    #[test]
    fn locality() {
        let z4 = build_ring("Z/4").unwrap();
        let v = is_local(&z4);
        assert!(v.local);
        assert_eq!(v.witness, LocalWitness::MaximalIdeal { elements: vec![RingElement(0), RingElement(2)] });
        let z6 = build_ring("Z/6").unwrap();
        let v = is_local(&z6);
        assert!(!v.local);
        assert_eq!(
            v.witness,
            LocalWitness::UnitSum { a: RingElement(2), b: RingElement(3), sum: RingElement(5) }
        );
        assert!(is_local(&build_ring("GF(4)").unwrap()).local);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple_ring(&build_ring("M(2,GF(2))").unwrap()).simple);
        assert!(is_simple_ring(&build_ring("GF(2)").unwrap()).simple);
        let v = is_simple_ring(&build_ring("Z/6").unwrap());
        assert!(!v.simple);
        assert_eq!(idx(&v.witness.unwrap()), vec![0, 2, 4]);
    }

    #[test]
    fn chain_condition_lattices() {
        let caps = Caps::default();
        let z6 = chain_conditions(&build_ring("Z/6").unwrap(), &caps);
        assert!(z6.right_artinian && z6.left_perfect && z6.right_coherent);
        let lat = z6.lattice.unwrap();
        let sets: Vec<Vec<usize>> = lat.ideals.iter().map(|i| i.iter().map(|e| e.0).collect()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);

        let z8 = chain_conditions(&build_ring("Z/8").unwrap(), &caps).lattice.unwrap();
        assert_eq!(z8.ideals.len(), 4);
        assert_eq!(z8.longest_chain, 4);

        let m = chain_conditions(&build_ring("M(2,GF(3))").unwrap(), &caps);
        assert!(m.lattice.is_none());
        assert!(m.right_artinian);
    }

    #[test]
    fn nilpotency() {
        let z8 = build_ring("Z/8").unwrap();
        let j = jacobson_radical(&z8).unwrap();
        assert_eq!(nilpotency_index(&z8, &j), Some(3));
        let z6 = build_ring("Z/6").unwrap();
        assert_eq!(nilpotency_index(&z6, &jacobson_radical(&z6).unwrap()), Some(1));
    }
}
