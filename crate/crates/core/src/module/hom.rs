use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{same_ring, FiniteModule, Relation};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::BitSet;

/// An `R`-linear map given by its full table.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub source: Arc<FiniteModule>,
    pub target: Arc<FiniteModule>,
    pub map: Vec<usize>,
}

impl ModuleHom {
    /// Extend generator images linearly through the stored coordinates.
    /// The images are trusted to satisfy the relations of `source`.
    pub fn from_images(source: &Arc<FiniteModule>, target: &Arc<FiniteModule>, images: &[usize]) -> Self {
        let map = linear_extension(source, target, images);
        ModuleHom { source: source.clone(), target: target.clone(), map }
    }

    pub fn identity(m: &Arc<FiniteModule>) -> Self {
        ModuleHom { source: m.clone(), target: m.clone(), map: m.elements().collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Additive and commuting with the ring action; exact.
    pub fn is_valid(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.map.len() != s.size() || self.map.iter().any(|&y| y >= t.size()) {
            return false;
        }
        let basis: Vec<usize> = (0..s.group().rank()).map(|i| s.group().basis(i)).collect();
        let ring = s.ring();
        s.elements().all(|x| {
            basis.iter().all(|&b| self.map[s.add(x, b)] == t.add(self.map[x], self.map[b]))
                && ring.elements().all(|r| self.map[s.act(r, x)] == t.act(r, self.map[x]))
        })
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&x| self.map[x] == 0).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut seen = BitSet::new(self.target.size());
        for &y in &self.map {
            seen.insert(y);
        }
        seen.iter().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().filter(|&&y| y == 0).count() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&y| self.map[y]).collect(),
        }
    }
}

/// Table of the homomorphism with the given generator images.
pub fn linear_extension(source: &FiniteModule, target: &FiniteModule, images: &[usize]) -> Vec<usize> {
    let k = source.num_generators();
    source
        .elements()
        .map(|x| (0..k).fold(0, |acc, i| target.add(acc, target.act(source.coord(x, i), images[i]))))
        .collect()
}

/// Depth-first search over generator images, pruning with the relations
/// of each depth as soon as all their generators are assigned.
pub struct HomSearch<'a> {
    source: &'a FiniteModule,
    target: &'a FiniteModule,
    candidates: Vec<Vec<usize>>,
    by_depth: Vec<Vec<&'a Relation>>,
    budget: u64,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a FiniteModule, target: &'a FiniteModule, caps: &Caps) -> Result<Self> {
        if !same_ring(source.ring(), target.ring()) {
            return Err(Error::RingMismatch);
        }
        let k = source.num_generators();
        let mut by_depth: Vec<Vec<&Relation>> = vec![Vec::new(); k];
        for rel in source.relations() {
            by_depth[rel.depth].push(rel);
        }
        // relations whose only nonzero coefficient is the last one constrain
        // a single image and are applied up front
        let candidates = (0..k)
            .map(|i| {
                let own: Vec<_> = by_depth[i]
                    .iter()
                    .filter(|rel| rel.coeffs[..i].iter().all(|c| c.0 == 0))
                    .map(|rel| rel.coeffs[i])
                    .collect();
                target.elements().filter(|&y| own.iter().all(|&c| target.act(c, y) == 0)).collect()
            })
            .collect();
        Ok(HomSearch { source, target, candidates, by_depth, budget: caps.max_homs })
    }

    /// Visit candidates in a seeded random order.
    pub fn shuffled(mut self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in &mut self.candidates {
            c.shuffle(&mut rng);
        }
        self
    }

    /// Keep only the candidates accepted by `keep` at each depth.
    pub fn restrict(mut self, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        for (i, c) in self.candidates.iter_mut().enumerate() {
            c.retain(|&y| keep(i, y));
        }
        self
    }

    /// Number of tuples of generator images before relation pruning.
    pub fn raw_space(&self) -> u128 {
        self.candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// Call `visit` with the generator images of every homomorphism, in
    /// lexicographic candidate order.  Fails once more than `caps.max_homs`
    /// search nodes have been expanded.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) -> Result<u64> {
        let mut nodes = 0u64;
        let mut images = Vec::with_capacity(self.candidates.len());
        let _ = self.dfs(&mut images, &mut nodes, &mut visit)?;
        Ok(nodes)
    }

    fn dfs(
        &self,
        images: &mut Vec<usize>,
        nodes: &mut u64,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let depth = images.len();
        if depth == self.candidates.len() {
            return Ok(visit(images));
        }
        for &c in &self.candidates[depth] {
            *nodes += 1;
            if *nodes > self.budget {
                return Err(Error::Cap { what: "homomorphism search", cap: self.budget });
            }
            images.push(c);
            let ok = self.by_depth[depth].iter().all(|rel| self.target.combine(&rel.coeffs, images) == 0);
            if ok && self.dfs(images, nodes, visit)?.is_break() {
                images.pop();
                return Ok(ControlFlow::Break(()));
            }
            images.pop();
        }
        Ok(ControlFlow::Continue(()))
    }

    pub fn source(&self) -> &FiniteModule {
        self.source
    }
}

/// Every homomorphism `source -> target`, ordered lexicographically by
/// generator images.
pub fn hom_enumerate(source: &Arc<FiniteModule>, target: &Arc<FiniteModule>, caps: &Caps) -> Result<Vec<ModuleHom>> {
    let search = HomSearch::new(source, target, caps)?;
    let mut out = Vec::new();
    search.for_each(|images| {
        out.push(ModuleHom::from_images(source, target, images));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// An isomorphism `source -> target`, if one exists.  Generator images are
/// restricted to elements with the same annihilator as the generator.
pub fn find_isomorphism(
    source: &Arc<FiniteModule>,
    target: &Arc<FiniteModule>,
    caps: &Caps,
) -> Result<Option<ModuleHom>> {
    if !same_ring(source.ring(), target.ring()) {
        return Err(Error::RingMismatch);
    }
    if source.size() != target.size() {
        return Ok(None);
    }
    let anns: Vec<BitSet> = source.generators().iter().map(|&g| source.annihilator(g)).collect();
    let target_anns: Vec<BitSet> = target.elements().map(|y| target.annihilator(y)).collect();
    let search = HomSearch::new(source, target, caps)?.restrict(|i, y| target_anns[y] == anns[i]);
    let mut found = None;
    search.for_each(|images| {
        let map = linear_extension(source, target, images);
        if map.iter().filter(|&&y| y == 0).count() == 1 {
            found = Some(map);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found.map(|map| ModuleHom { source: source.clone(), target: target.clone(), map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_ring, FiniteRing};

    fn setup(s: &str) -> (Arc<FiniteRing>, Caps) {
        (Arc::new(build_ring(s).unwrap()), Caps::default())
    }

    #[test]
    fn homs_over_z4() {
        let (r, caps) = setup("Z/4");
        let z4 = Arc::new(FiniteModule::regular(&r, &caps).unwrap());
        let z2 = Arc::new(z4.quotient(&[0, 2], &caps).unwrap().0);
        let h = hom_enumerate(&z2, &z4, &caps).unwrap();
        assert_eq!(h.iter().map(|f| f.apply(1)).collect::<Vec<_>>(), vec![0, 2]);
        assert!(h.iter().all(|f| f.is_valid()));
        assert_eq!(hom_enumerate(&z4, &z4, &caps).unwrap().len(), 4);
        let zero = Arc::new(FiniteModule::zero(&r));
        assert_eq!(hom_enumerate(&z4, &zero, &caps).unwrap().len(), 1);
        assert_eq!(hom_enumerate(&zero, &z4, &caps).unwrap().len(), 1);
    }

    #[test]
    fn hom_counts_from_free_modules() {
        for s in ["Z/6", "T(2,GF(2))", "GF(4)"] {
            let (r, caps) = setup(s);
            let m = Arc::new(FiniteModule::regular(&r, &caps).unwrap());
            let (q, _) = m.quotient(&m.span(&[m.size() - 1]).into_sorted(), &caps).unwrap();
            let q = Arc::new(q);
            for n in 0..=2 {
                let f = Arc::new(FiniteModule::free(&r, n, &caps).unwrap());
                for target in [&m, &q] {
                    let homs = hom_enumerate(&f, target, &caps).unwrap();
                    assert_eq!(homs.len(), target.size().pow(n as u32), "{s} n={n}");
                }
            }
        }
    }

    #[test]
    fn isomorphisms() {
        let (r, caps) = setup("M(2,GF(2))");
        let reg = Arc::new(FiniteModule::regular(&r, &caps).unwrap());
        let (p, _) = reg.submodule(&[1], &caps).unwrap();
        assert_eq!(p.size(), 4);
        let pp = Arc::new(p.direct_sum(&p, &caps).unwrap());
        let iso = find_isomorphism(&pp, &reg, &caps).unwrap().expect("P + P is R");
        assert!(iso.is_valid() && iso.is_bijective());

        let (r, caps) = setup("Z/6");
        let reg = FiniteModule::regular(&r, &caps).unwrap();
        let p1 = Arc::new(reg.submodule(&[3], &caps).unwrap().0);
        let p2 = Arc::new(reg.submodule(&[4], &caps).unwrap().0);
        assert!(find_isomorphism(&p1, &p2, &caps).unwrap().is_none());
        let sum = Arc::new(p1.direct_sum(&p2, &caps).unwrap());
        assert!(find_isomorphism(&sum, &Arc::new(reg), &caps).unwrap().is_some());
    }

    #[test]
    fn search_budget_is_enforced() {
        let (r, _) = setup("GF(2)");
        let caps = Caps { max_homs: 10, ..Caps::default() };
        let m = Arc::new(FiniteModule::free(&r, 4, &Caps::default()).unwrap());
        assert!(matches!(hom_enumerate(&m, &m, &caps), Err(Error::Cap { .. })));
    }
}
