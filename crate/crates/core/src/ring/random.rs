//! Random small rings for property tests.
//!
//! A ring is drawn as the subring generated by 1 and one or two random
//! elements of an ambient ring (matrix, triangular, product rings over small
//! fields and `Z/4`), rejected if too large, then re-encoded over a randomly
//! chosen cyclic decomposition and rebuilt from its structure constants.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_ring_with, FiniteRing, RingElement, StructConstFile};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::Span;

const AMBIENTS: &[&str] = &[
    "M(3,GF(2))",
    "T(3,GF(2))",
    "M(2,Z/4)",
    "M(2,GF(3))",
    "M(2,GF(4))",
    "Z/4 x M(2,GF(2))",
    "T(2,Z/4)",
    "T(2,GF(3))",
    "GF(4) x T(2,GF(2))",
    "PolyQuot(Z/4,[0,0,1])",
    "Z/2 x Z/3 x Z/2",
];

pub struct RandomRings {
    ambients: Vec<FiniteRing>,
    rng: ChaCha8Rng,
    max_size: usize,
    drawn: usize,
}

impl RandomRings {
    pub fn new(seed: u64, max_size: usize) -> Result<Self> {
        let caps = Caps::default();
        let ambients = AMBIENTS.iter().map(|s| build_ring_with(s, &caps)).collect::<Result<_>>()?;
        Ok(RandomRings { ambients, rng: ChaCha8Rng::seed_from_u64(seed), max_size, drawn: 0 })
    }

    /// Elements of the subring generated by `gens` (and 1), or `None` if it
    /// outgrows `max_size`.
    fn subring(&self, a: &FiniteRing, gens: &[RingElement]) -> Option<Vec<usize>> {
        let add = |x, y| a.group().add(x, y);
        let mut span = Span::zero(a.size());
        span.adjoin(a.one().0, add);
        for g in gens {
            span.adjoin(g.0, add);
        }
        loop {
            if span.len() > self.max_size {
                return None;
            }
            let elems = span.elements().to_vec();
            let mut grew = false;
            for &x in &elems {
                for &y in &elems {
                    let p = a.mul(RingElement(x), RingElement(y)).0;
                    if span.adjoin(p, add) {
                        grew = true;
                        if span.len() > self.max_size {
                            return None;
                        }
                    }
                }
            }
            if !grew {
                return Some(span.into_sorted());
            }
        }
    }

    pub fn next_ring(&mut self) -> Result<FiniteRing> {
        let caps = Caps::default();
        for _ in 0..10_000 {
            let ai = self.rng.gen_range(0..self.ambients.len());
            let a = &self.ambients[ai];
            let k = if self.rng.gen_bool(0.75) { 1 } else { 2 };
            let gens: Vec<RingElement> = (0..k).map(|_| RingElement(self.rng.gen_range(0..a.size()))).collect();
            let Some(elems) = self.subring(a, &gens) else { continue };
            let mut id = vec![usize::MAX; a.size()];
            for (i, &e) in elems.iter().enumerate() {
                id[e] = i;
            }
            let add = |x: usize, y: usize| id[a.group().add(elems[x], elems[y])];
            let mul = |x: usize, y: usize| id[a.mul(RingElement(elems[x]), RingElement(elems[y])).0];
            let (sub, _) = FiniteRing::from_abstract(
                "sub",
                elems.len(),
                id[0],
                id[a.one().0],
                add,
                mul,
                &caps,
                Some(&mut self.rng),
            )?;
            // shuffle the generator order as well, so encodings vary
            let mut perm: Vec<usize> = (0..sub.orders().len()).collect();
            perm.shuffle(&mut self.rng);
            let mut desc = permute_digits(&sub, &perm);
            self.drawn += 1;
            desc.label = Some(format!("StructConst(random#{})", self.drawn));
            return desc.build(String::new(), &caps);
        }
        Err(Error::Consistency("random ring generation did not converge".into()))
    }
}

/// Structure constants of `ring` with its cyclic digits reordered by `perm`.
fn permute_digits(ring: &FiniteRing, perm: &[usize]) -> StructConstFile {
    let orders: Vec<usize> = perm.iter().map(|&p| ring.orders()[p]).collect();
    let g = crate::group::AbelianGroup::new(orders.clone());
    let to_new = |x: usize| {
        let c = ring.group().decode(x);
        g.encode(&perm.iter().map(|&p| c[p]).collect::<Vec<_>>())
    };
    let n = ring.size();
    let mut table = vec![vec![0; n]; n];
    for x in ring.elements() {
        for y in ring.elements() {
            table[to_new(x.0)][to_new(y.0)] = to_new(ring.mul(x, y).0);
        }
    }
    StructConstFile { orders, one: to_new(ring.one().0), table, label: None }
}

/// `count` random rings of size at most `max_size`, reproducible from `seed`.
pub fn random_rings(seed: u64, count: usize, max_size: usize) -> Result<Vec<FiniteRing>> {
    let mut gen = RandomRings::new(seed, max_size)?;
    (0..count).map(|_| gen.next_ring()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_rings_are_valid_and_small() {
        let rings = random_rings(7, 20, 16).unwrap();
        assert_eq!(rings.len(), 20);
        for r in &rings {
            assert!(r.size() <= 16);
            assert!(crate::ring::verify_ring_axioms(r, &Caps::default()).all_passed());
        }
        let sizes: std::collections::BTreeSet<usize> = rings.iter().map(|r| r.size()).collect();
        assert!(sizes.len() >= 3, "expected a spread of sizes, got {sizes:?}");
    }

    #[test]
    fn reproducible_from_seed() {
        let a = random_rings(3, 5, 16).unwrap();
        let b = random_rings(3, 5, 16).unwrap();
        assert_eq!(a, b);
    }
}
