//! Property tests over random small rings, each checked against a
//! brute-force oracle written independently of the library search code.

use std::collections::BTreeSet;
use std::sync::Arc;

use modclass::classify::{classify_with, verify_implication_chain};
use modclass::decompose::Decomposer;
use modclass::ideal::{jacobson_radical, nilpotency_index};
use modclass::module::{enumerate_submodules, FiniteModule};
use modclass::pp::{pp_evaluate, PPFormula};
use modclass::property::{is_flat_module, is_free_module, is_projective_module, DEFAULT_RELATION_BOUND};
use modclass::ring::random::random_rings;
use modclass::{build_ring, Caps, FiniteRing, RingElement};
use proptest::prelude::*;

fn random_ring(seed: u64) -> Arc<FiniteRing> {
    Arc::new(random_rings(seed, 1, 16).unwrap().remove(0))
}

fn left_span(ring: &FiniteRing, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = [0].into();
    loop {
        let mut next = set.clone();
        for &g in gens {
            for r in ring.elements() {
                next.insert(ring.mul(r, RingElement(g)).0);
            }
        }
        for &a in &set {
            for &b in &set {
                next.insert(ring.group().add(a, b));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// Every left ideal, as sums of cyclic left ideals.
fn left_ideals(ring: &FiniteRing) -> Vec<BTreeSet<usize>> {
    let mut all: BTreeSet<BTreeSet<usize>> = ring.elements().map(|x| left_span(ring, &[x.0])).collect();
    loop {
        let list: Vec<_> = all.iter().cloned().collect();
        let before = all.len();
        for a in &list {
            for b in &list {
                let gens: Vec<usize> = a.union(b).copied().collect();
                all.insert(left_span(ring, &gens));
            }
        }
        if all.len() == before {
            return list;
        }
    }
}

fn radical_by_maximal_ideals(ring: &FiniteRing) -> BTreeSet<usize> {
    let proper: Vec<_> = left_ideals(ring).into_iter().filter(|i| i.len() < ring.size()).collect();
    let maximal: Vec<_> =
        proper.iter().filter(|i| !proper.iter().any(|j| j.len() > i.len() && i.is_subset(j))).collect();
    let mut out: BTreeSet<usize> = ring.elements().map(|x| x.0).collect();
    for m in maximal {
        out = out.intersection(m).copied().collect();
    }
    out
}

/// Try every assignment of generator images and keep the well-defined
/// bijective ones.
fn brute_isomorphic(a: &FiniteModule, b: &FiniteModule) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let ring = a.ring();
    let gens = a.generators();
    let g = gens.len();
    let tuples = |base: usize| -> Vec<Vec<usize>> {
        (0..base.pow(g as u32))
            .map(|mut t| {
                (0..g)
                    .map(|_| {
                        let d = t % base;
                        t /= base;
                        d
                    })
                    .collect()
            })
            .collect()
    };
    let coeffs = tuples(ring.size());
    'images: for images in tuples(b.size()) {
        let mut map = vec![usize::MAX; a.size()];
        for c in &coeffs {
            let mut x = 0;
            let mut y = 0;
            for i in 0..g {
                x = a.add(x, a.act(RingElement(c[i]), gens[i]));
                y = b.add(y, b.act(RingElement(c[i]), images[i]));
            }
            if map[x] == usize::MAX {
                map[x] = y;
            } else if map[x] != y {
                continue 'images;
            }
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() == b.size() {
            return true;
        }
    }
    false
}

fn brute_pp(m: &FiniteModule, phi: &PPFormula) -> BTreeSet<usize> {
    let width = phi.free + phi.bound;
    let n = m.size();
    let mut out = BTreeSet::new();
    for t in 0..n.pow(width as u32) {
        let vars: Vec<usize> = (0..width).map(|i| t / n.pow(i as u32) % n).collect();
        let ok = phi.eqs.iter().all(|row| {
            row.iter().zip(&vars).fold(0, |acc, (&c, &v)| m.add(acc, m.act(RingElement(c), v))) == 0
        });
        if ok {
            let free: usize = (0..phi.free).map(|i| vars[i] * n.pow(i as u32)).sum();
            out.insert(free);
        }
    }
    out
}

fn cyclic_quotients(ring: &Arc<FiniteRing>, caps: &Caps) -> Vec<Arc<FiniteModule>> {
    let free = FiniteModule::regular(ring, caps).unwrap();
    enumerate_submodules(&free, 512)
        .unwrap()
        .iter()
        .map(|k| Arc::new(free.quotient(k, caps).unwrap().0))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn radical_is_intersection_of_maximal_left_ideals(seed in any::<u64>()) {
        let ring = random_ring(seed);
        let j = jacobson_radical(&ring).unwrap();
        let got: BTreeSet<usize> = j.indices().into_iter().collect();
        prop_assert_eq!(&got, &radical_by_maximal_ideals(&ring));
        prop_assert!(nilpotency_index(&ring, &j).is_some());
    }

    #[test]
    fn reports_satisfy_the_implication_chain(seed in any::<u64>()) {
        let ring = random_ring(seed);
        let dec = Decomposer::new(ring.clone(), &Caps::default()).unwrap();
        let rep = classify_with(&dec).unwrap();
        let chain = verify_implication_chain(std::slice::from_ref(&rep));
        prop_assert!(chain.passed(), "{:?}", chain.violations);
        prop_assert!(chain.strict_ii_not_iv.is_empty());
        let total: usize = rep.indecomposables.iter().map(|p| p.size.unwrap().pow(p.multiplicity as u32)).product();
        prop_assert_eq!(total, ring.size());
    }

    #[test]
    fn krull_schmidt_classes_match_brute_force(seed in any::<u64>()) {
        let ring = random_ring(seed);
        let caps = Caps::default();
        let dec = Decomposer::new(ring.clone(), &caps).unwrap();
        let r2 = Arc::new(FiniteModule::free(&ring, 2, &caps).unwrap());
        let ks = dec.krull_schmidt(&r2).unwrap();
        let product: usize = ks.summands.iter().map(|s| s.module.size()).product();
        prop_assert_eq!(product, ring.size() * ring.size());
        prop_assert_eq!(ks.signature.clone(), dec.regular_signature().union(&dec.regular_signature()));
        for a in &ks.summands {
            for b in &ks.summands {
                prop_assert_eq!(a.class == b.class, brute_isomorphic(&a.module, &b.module));
            }
        }
        prop_assert!(is_free_module(&dec, &r2).unwrap().free);
    }

    #[test]
    fn flat_iff_projective_on_cyclic_modules(seed in any::<u64>()) {
        let ring = random_ring(seed);
        let caps = Caps::default();
        let dec = Decomposer::new(ring.clone(), &caps).unwrap();
        for m in cyclic_quotients(&ring, &caps) {
            let flat = is_flat_module(&dec, &m, DEFAULT_RELATION_BOUND).unwrap();
            let proj = is_projective_module(&dec, &m).unwrap();
            prop_assert!(flat.exact);
            prop_assert_eq!(flat.flat, proj.projective, "{}", m.label());
            if is_free_module(&dec, &m).unwrap().free {
                prop_assert!(proj.projective);
            }
        }
    }

    #[test]
    fn pp_sets_are_subgroups_and_match_brute_force(
        seed in any::<u64>(),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
        c in any::<prop::sample::Index>(),
    ) {
        let ring = random_ring(seed);
        let caps = Caps::default();
        let n = ring.size();
        let phi = PPFormula { free: 1, bound: 1, eqs: vec![vec![a.index(n), b.index(n)]] };
        let psi = PPFormula::annihilated_by(RingElement(c.index(n)));
        let both = phi.and(&psi).unwrap();
        for m in cyclic_quotients(&ring, &caps) {
            let s = pp_evaluate(&m, &phi, &caps).unwrap();
            let expected: Vec<usize> = brute_pp(&m, &phi).into_iter().collect();
            prop_assert_eq!(&s.elements, &expected);
            prop_assert!(s.contains(0));
            for &x in &s.elements {
                for &y in &s.elements {
                    prop_assert!(s.contains(m.sub(x, y)));
                }
            }
            let t = pp_evaluate(&m, &both, &caps).unwrap();
            prop_assert!(t.is_subset(&s));
            prop_assert_eq!(t, s.intersection(&pp_evaluate(&m, &psi, &caps).unwrap()));
        }
    }
}

#[test]
fn radical_oracle_on_named_rings() {
    for (spec, size) in [("Z/4", 2), ("T(2,GF(2))", 2), ("M(2,GF(2))", 1), ("PolyQuot(GF(2),[0,0,1])", 2), ("Z/6", 1)] {
        let ring = build_ring(spec).unwrap();
        let j = radical_by_maximal_ideals(&ring);
        assert_eq!(j.len(), size, "{spec}");
        assert_eq!(jacobson_radical(&ring).unwrap().indices(), j.into_iter().collect::<Vec<_>>(), "{spec}");
    }
}

#[test]
fn regular_summands_of_m2_are_isomorphic_by_brute_force() {
    let caps = Caps::default();
    let ring = Arc::new(build_ring("M(2,GF(2))").unwrap());
    let dec = Decomposer::new(ring.clone(), &caps).unwrap();
    let r = Arc::new(FiniteModule::regular(&ring, &caps).unwrap());
    let ks = dec.krull_schmidt(&r).unwrap();
    assert_eq!(ks.summands.len(), 2);
    assert!(brute_isomorphic(&ks.summands[0].module, &ks.summands[1].module));
    assert!(!brute_isomorphic(&ks.summands[0].module, &r));
}
