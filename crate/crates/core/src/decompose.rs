//! Primitive idempotent decompositions of rings and Krull-Schmidt
//! decompositions of finite modules.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::module::{find_isomorphism, FiniteModule, HomSearch, ModuleKey};
use crate::ring::{FiniteRing, RingElement};

/// Every idempotent of the ring, ascending.
pub fn idempotents(ring: &FiniteRing) -> Vec<RingElement> {
    ring.idempotents()
}

/// Central idempotents that are minimal among the nonzero ones.
pub fn primitive_central_idempotents(ring: &FiniteRing) -> Vec<RingElement> {
    let central: Vec<RingElement> =
        ring.idempotents().into_iter().filter(|&e| e != ring.zero() && ring.is_central(e)).collect();
    central
        .iter()
        .copied()
        .filter(|&c| !central.iter().any(|&d| d != c && ring.mul(d, c) == d))
        .collect()
}

/// Left ideals `Re` and `Rf` are isomorphic iff there are `a` in `eRf` and
/// `b` in `fRe` with `ab = e` and `ba = f`; returns such a pair.
pub fn corner_isomorphism(ring: &FiniteRing, e: RingElement, f: RingElement) -> Option<(RingElement, RingElement)> {
    let corner = |u: RingElement, v: RingElement| {
        let mut xs: Vec<RingElement> = ring.elements().map(|x| ring.mul(ring.mul(u, x), v)).collect();
        xs.sort_unstable();
        xs.dedup();
        xs
    };
    let (ef, fe) = (corner(e, f), corner(f, e));
    for &a in &ef {
        for &b in &fe {
            if ring.mul(a, b) == e && ring.mul(b, a) == f {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct IdempotentDecomposition {
    /// Complete orthogonal set of primitive idempotents.
    pub idempotents: Vec<RingElement>,
    /// Idempotents grouped by the isomorphism class of `Re`.
    pub classes: Vec<Vec<RingElement>>,
    pub multiplicities: Vec<usize>,
    /// `P_i = R e` for the first idempotent of each class.
    pub representatives: Vec<Arc<FiniteModule>>,
}

impl IdempotentDecomposition {
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.representatives.iter().map(|p| p.size()).collect()
    }
}

/// Refine `{1}` by splitting off corner idempotents until every corner
/// `eRe` has no idempotents besides `0` and `e`, then group the left
/// ideals `Re` by the corner criterion.  Classes are ordered by an
/// isomorphism invariant of `P_i` (size first).
pub fn primitive_decomposition(
    ring: &Arc<FiniteRing>,
    caps: &Caps,
    seed: Option<u64>,
) -> Result<IdempotentDecomposition> {
    let all = ring.idempotents();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut list = if ring.size() > 1 { vec![ring.one()] } else { Vec::new() };
    let mut i = 0;
    while i < list.len() {
        let e = list[i];
        let mut inside: Vec<RingElement> = all
            .iter()
            .copied()
            .filter(|&f| f != ring.zero() && f != e && ring.mul(e, f) == f && ring.mul(f, e) == f)
            .collect();
        if let Some(r) = rng.as_mut() {
            inside.shuffle(r);
        }
        match inside.first() {
            Some(&f) => {
                list[i] = f;
                list.push(ring.sub(e, f));
            }
            None => i += 1,
        }
    }

    let mut classes: Vec<Vec<RingElement>> = Vec::new();
    for &e in &list {
        match classes.iter_mut().find(|c| corner_isomorphism(ring, c[0], e).is_some()) {
            Some(c) => c.push(e),
            None => classes.push(vec![e]),
        }
    }
    let regular = FiniteModule::regular(ring, caps)?;
    let mut keyed = Vec::new();
    for mut class in classes {
        class.sort_unstable();
        let (p, _) = regular.submodule(&[class[0].0], caps)?;
        let p = p.with_label(format!("R*{}", class[0]));
        keyed.push((p.invariant_key(), class, Arc::new(p)));
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut idempotents = list;
    idempotents.sort_unstable();
    Ok(IdempotentDecomposition {
        idempotents,
        multiplicities: keyed.iter().map(|k| k.1.len()).collect(),
        classes: keyed.iter().map(|k| k.1.clone()).collect(),
        representatives: keyed.into_iter().map(|k| k.2).collect(),
    })
}

/// Multiset of indecomposable classes with multiplicities, sorted by class id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature(pub Vec<(usize, usize)>);

impl Signature {
    fn from_classes(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        for id in ids {
            *counts.entry(id).or_insert(0) += 1;
        }
        Signature(counts.into_iter().collect())
    }

    pub fn multiplicity(&self, class: usize) -> usize {
        self.0.iter().find(|e| e.0 == class).map_or(0, |e| e.1)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|e| e.1).sum()
    }

    /// Multiset union.
    pub fn union(&self, other: &Signature) -> Signature {
        let ids = self.0.iter().chain(&other.0).flat_map(|&(c, m)| std::iter::repeat_n(c, m));
        Signature::from_classes(ids)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(c, m)| if m == 1 { format!("[{c}]") } else { format!("[{c}]^{m}") }).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Arc<FiniteModule>,
    /// Inclusion into the decomposed module.
    pub inclusion: Vec<usize>,
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct KsDecomposition {
    pub summands: Vec<Summand>,
    pub signature: Signature,
    /// Idempotent endomorphisms used for each split, as maps on the piece
    /// being split.
    pub splits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub id: usize,
    pub size: usize,
    pub regular: bool,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoWitness {
    Sizes { left: usize, right: usize },
    Signatures { left: Signature, right: Signature },
    Map { map: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub witness: IsoWitness,
}

struct ClassEntry {
    key: ModuleKey,
    module: Arc<FiniteModule>,
    regular: bool,
}

/// One way of splitting a module: `M = A (+) B` with the idempotent
/// projecting onto `A` along `B`.
struct Split {
    image: Vec<usize>,
    kernel: Vec<usize>,
    idempotent: Vec<usize>,
}

/// Krull-Schmidt engine for one ring.  Holds the registry of
/// indecomposable classes; the regular classes `P_1, ..., P_k` are
/// registered first and keep ids `0..k`.
pub struct Decomposer {
    ring: Arc<FiniteRing>,
    caps: Caps,
    seed: Option<u64>,
    regular: IdempotentDecomposition,
    central: Vec<RingElement>,
    registry: Mutex<Vec<ClassEntry>>,
}

impl Decomposer {
    pub fn new(ring: Arc<FiniteRing>, caps: &Caps) -> Result<Self> {
        Self::build(ring, caps, None)
    }

    /// Randomized search order for idempotents and endomorphisms.
    pub fn with_seed(ring: Arc<FiniteRing>, caps: &Caps, seed: u64) -> Result<Self> {
        Self::build(ring, caps, Some(seed))
    }

    fn build(ring: Arc<FiniteRing>, caps: &Caps, seed: Option<u64>) -> Result<Self> {
        let regular = primitive_decomposition(&ring, caps, seed)?;
        let registry = regular
            .representatives
            .iter()
            .map(|p| ClassEntry { key: p.invariant_key(), module: p.clone(), regular: true })
            .collect();
        Ok(Decomposer {
            central: primitive_central_idempotents(&ring),
            ring,
            caps: *caps,
            seed,
            regular,
            registry: Mutex::new(registry),
        })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn ring_decomposition(&self) -> &IdempotentDecomposition {
        &self.regular
    }

    pub fn k(&self) -> usize {
        self.regular.k()
    }

    /// `(i, r_i)` for every regular class.
    pub fn regular_signature(&self) -> Signature {
        Signature(self.regular.multiplicities.iter().copied().enumerate().collect())
    }

    pub fn is_regular_class(&self, id: usize) -> bool {
        id < self.k()
    }

    pub fn classes(&self) -> Vec<ClassInfo> {
        let reg = self.registry.lock().expect("registry lock");
        reg.iter()
            .enumerate()
            .map(|(id, c)| ClassInfo { id, size: c.module.size(), regular: c.regular, label: c.module.label().into() })
            .collect()
    }

    pub fn class_module(&self, id: usize) -> Option<Arc<FiniteModule>> {
        self.registry.lock().expect("registry lock").get(id).map(|c| c.module.clone())
    }

    fn check_ring(&self, m: &FiniteModule) -> Result<()> {
        if crate::module::same_ring(&self.ring, m.ring()) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Split `m` into indecomposables and identify each with a registered
    /// class.
    pub fn krull_schmidt(&self, m: &Arc<FiniteModule>) -> Result<KsDecomposition> {
        self.check_ring(m)?;
        let mut pending = vec![(m.clone(), m.elements().collect::<Vec<_>>())];
        let mut pieces = Vec::new();
        let mut splits = 0;
        while let Some((piece, inclusion)) = pending.pop() {
            if piece.is_zero() {
                continue;
            }
            match self.split(&piece)? {
                Some(s) => {
                    splits += 1;
                    debug_assert!(s.idempotent.iter().all(|&y| s.idempotent[y] == y));
                    for part in [&s.image, &s.kernel] {
                        let (sub, inc) = piece.submodule_on(part, &self.caps)?;
                        let inc = inc.iter().map(|&x| inclusion[x]).collect();
                        pending.push((Arc::new(sub), inc));
                    }
                }
                None => pieces.push((piece, inclusion)),
            }
        }
        let mut summands = Vec::with_capacity(pieces.len());
        for (module, inclusion) in pieces {
            let class = self.classify_indecomposable(&module)?;
            summands.push(Summand { module, inclusion, class });
        }
        summands.sort_by_key(|s| s.class);
        let signature = Signature::from_classes(summands.iter().map(|s| s.class));
        Ok(KsDecomposition { summands, signature, splits })
    }

    pub fn signature(&self, m: &Arc<FiniteModule>) -> Result<Signature> {
        Ok(self.krull_schmidt(m)?.signature)
    }

    /// Find an endomorphism that is neither nilpotent nor invertible; its
    /// stable power splits the module into image and kernel (Fitting).
    /// Primitive central idempotents are tried before the search.
    fn split(&self, m: &FiniteModule) -> Result<Option<Split>> {
        let n = m.size();
        for &e in &self.central {
            let map: Vec<usize> = m.elements().map(|x| m.act(e, x)).collect();
            if let Some(s) = fitting_split(&map, n) {
                return Ok(Some(s));
            }
        }
        let mut search = HomSearch::new(m, m, &self.caps)?;
        if let Some(seed) = self.seed {
            search = search.shuffled(seed);
        }
        let mut found = None;
        search.for_each(|images| {
            let map = crate::module::linear_extension(m, m, images);
            match fitting_split(&map, n) {
                Some(s) => {
                    found = Some(s);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        })?;
        Ok(found)
    }

    /// Registry id of an indecomposable module, registering it if new.
    pub fn classify_indecomposable(&self, m: &Arc<FiniteModule>) -> Result<usize> {
        let key = m.invariant_key();
        let mut reg = self.registry.lock().expect("registry lock");
        for (id, entry) in reg.iter().enumerate() {
            if entry.key == key && find_isomorphism(m, &entry.module, &self.caps)?.is_some() {
                return Ok(id);
            }
        }
        reg.push(ClassEntry { key, module: m.clone(), regular: false });
        Ok(reg.len() - 1)
    }

    /// Size check, then signature comparison, with a direct isomorphism
    /// search as witness (or as fallback when decomposition hits a cap).
    pub fn is_isomorphic(&self, a: &Arc<FiniteModule>, b: &Arc<FiniteModule>) -> Result<IsoVerdict> {
        self.check_ring(a)?;
        self.check_ring(b)?;
        if a.size() != b.size() {
            return Ok(IsoVerdict {
                isomorphic: false,
                witness: IsoWitness::Sizes { left: a.size(), right: b.size() },
            });
        }
        let sigs = self.signature(a).and_then(|sa| Ok((sa, self.signature(b)?)));
        match sigs {
            Ok((sa, sb)) if sa != sb => {
                Ok(IsoVerdict { isomorphic: false, witness: IsoWitness::Signatures { left: sa, right: sb } })
            }
            Ok((sa, sb)) => {
                let witness = match find_isomorphism(a, b, &self.caps) {
                    Ok(Some(h)) => IsoWitness::Map { map: h.map },
                    Ok(None) => {
                        return Err(Error::Consistency(format!(
                            "equal signatures {sa} but no isomorphism {} -> {}",
                            a.label(),
                            b.label()
                        )))
                    }
                    Err(e) if e.is_cap() => IsoWitness::Signatures { left: sa, right: sb },
                    Err(e) => return Err(e),
                };
                Ok(IsoVerdict { isomorphic: true, witness })
            }
            Err(e) if e.is_cap() => match find_isomorphism(a, b, &self.caps)? {
                Some(h) => Ok(IsoVerdict { isomorphic: true, witness: IsoWitness::Map { map: h.map } }),
                None => Ok(IsoVerdict {
                    isomorphic: false,
                    witness: IsoWitness::Signatures { left: Signature::default(), right: Signature::default() },
                }),
            },
            Err(e) => Err(e),
        }
    }
}

/// Fitting decomposition of an endomorphism given by its table: iterate
/// powers until the image stops shrinking.  `None` when the endomorphism
/// is invertible or nilpotent.
fn fitting_split(map: &[usize], n: usize) -> Option<Split> {
    let image_size = |g: &[usize]| {
        let mut seen = vec![false; n];
        g.iter().filter(|&&y| !std::mem::replace(&mut seen[y], true)).count()
    };
    let mut power = map.to_vec();
    let mut size = image_size(&power);
    loop {
        if size == n || size == 1 {
            return None;
        }
        let next: Vec<usize> = power.iter().map(|&y| map[y]).collect();
        let s = image_size(&next);
        if s == size {
            break;
        }
        power = next;
        size = s;
    }
    let mut in_image = vec![false; n];
    for &y in &power {
        in_image[y] = true;
    }
    let image: Vec<usize> = (0..n).filter(|&y| in_image[y]).collect();
    let kernel: Vec<usize> = (0..n).filter(|&x| power[x] == 0).collect();
    // the power restricted to its image is a bijection sigma; the
    // projection onto the image is sigma^-1 after the power
    let mut inverse = vec![0; n];
    for &y in &image {
        inverse[power[y]] = y;
    }
    let idempotent = power.iter().map(|&y| inverse[y]).collect();
    Some(Split { image, kernel, idempotent })
}
