//! Finite abelian groups in mixed-radix form, plus the set and closure
//! helpers that every carrier in the engine is built from.
//!
//! An element of `Z/n_0 x Z/n_1 x ... x Z/n_{t-1}` with coordinates
//! `(c_0, ..., c_{t-1})` is stored as the single index
//! `c_0 + n_0 * (c_1 + n_1 * (c_2 + ...))`, so coordinate 0 is the least
//! significant digit.

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<usize>,
    size: usize,
    /// Every order is 2, so addition is bitwise xor.
    boolean: bool,
}

impl AbelianGroup {
    /// Panics if an order is zero; callers validate sizes beforehand.
    pub fn new(orders: Vec<usize>) -> Self {
        assert!(orders.iter().all(|&o| o >= 1), "cyclic orders must be positive");
        let size = orders.iter().product();
        let boolean = orders.iter().all(|&o| o == 2);
        AbelianGroup { orders, size, boolean }
    }

    pub fn trivial() -> Self {
        AbelianGroup::new(Vec::new())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.orders
            .iter()
            .map(|&o| {
                let c = idx % o;
                idx /= o;
                c
            })
            .collect()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.orders.len());
        coords
            .iter()
            .zip(&self.orders)
            .rev()
            .fold(0, |acc, (&c, &o)| acc * o + c % o)
    }

    /// Index of the `i`-th cyclic generator.
    pub fn basis(&self, i: usize) -> usize {
        self.orders[..i].iter().product()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.boolean {
            return a ^ b;
        }
        if let [n] = self.orders[..] {
            let s = a + b;
            return if s >= n { s - n } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut stride = 1;
        for &o in &self.orders {
            let s = a % o + b % o;
            out += if s >= o { s - o } else { s } * stride;
            a /= o;
            b /= o;
            stride *= o;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.boolean {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &o in &self.orders {
            let c = a % o;
            out += if c == 0 { 0 } else { o - c } * stride;
            a /= o;
            stride *= o;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k * a` for a non-negative integer `k`.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &o in &self.orders {
            out += ((a % o) * (k % o)) % o * stride;
            a /= o;
            stride *= o;
        }
        out
    }

    /// Additive order of `a`.
    pub fn order_of(&self, a: usize) -> usize {
        self.decode(a)
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&c, &o)| lcm(acc, o / gcd(c, o)))
    }

    /// Direct product with `self` in the low digits.
    pub fn product(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        AbelianGroup::new(orders)
    }

    /// `n`-fold power `G^n`; the index of `(x_0, ..., x_{n-1})` is `sum x_i |G|^i`.
    pub fn power(&self, n: usize) -> AbelianGroup {
        let mut orders = Vec::with_capacity(self.orders.len() * n);
        for _ in 0..n {
            orders.extend_from_slice(&self.orders);
        }
        AbelianGroup::new(orders)
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Fixed-size bit set, hashable so ideal and submodule lattices can dedupe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_iter(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if `i` was newly inserted.
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// A subgroup of a finite group with elements `0..n`, grown one generator at
/// a time.  `0` must be the identity.
#[derive(Clone, Debug)]
pub struct Span {
    members: BitSet,
    elements: Vec<usize>,
}

impl Span {
    pub fn zero(n: usize) -> Self {
        let mut members = BitSet::new(n);
        members.insert(0);
        Span { members, elements: vec![0] }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    /// Replace the span by `span + <z>`.  Returns whether it grew.
    pub fn adjoin(&mut self, z: usize, add: impl Fn(usize, usize) -> usize) -> bool {
        if self.members.contains(z) {
            return false;
        }
        let mut i = 0;
        while i < self.elements.len() {
            let y = add(self.elements[i], z);
            if self.members.insert(y) {
                self.elements.push(y);
            }
            i += 1;
        }
        true
    }

    pub fn into_sorted(mut self) -> Vec<usize> {
        self.elements.sort_unstable();
        self.elements
    }
}

/// Cyclic decomposition of an abstract finite abelian group on `0..n`.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    pub group: AbelianGroup,
    /// Abstract ids of the chosen cyclic generators, in digit order.
    pub generators: Vec<usize>,
    /// Mixed-radix index -> abstract id.
    pub to_abstract: Vec<usize>,
    /// Abstract id -> mixed-radix index.
    pub from_abstract: Vec<usize>,
}

/// Split an abstract abelian group (elements `0..n`, identity `zero`) into a
/// direct product of cyclic groups.
///
/// Each round picks an element of maximal order among those whose cyclic
/// subgroup meets the current span trivially; such an element always
/// generates a direct summand, so the result is a direct product.  Ties go
/// to the least id, or to a random candidate when `rng` is given.
pub fn decompose_abelian<R: Rng>(
    n: usize,
    zero: usize,
    add: impl Fn(usize, usize) -> usize,
    mut rng: Option<&mut R>,
) -> CyclicDecomposition {
    let mut order = vec![0usize; n];
    for (x, slot) in order.iter_mut().enumerate() {
        let mut y = x;
        let mut k = 1;
        while y != zero {
            y = add(y, x);
            k += 1;
        }
        *slot = k;
    }
    let mut by_order: Vec<usize> = (0..n).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(order[x]), x));

    let mut in_span = vec![false; n];
    in_span[zero] = true;
    let mut span = vec![zero];
    let mut generators = Vec::new();
    while span.len() < n {
        let trivially_meets = |x: usize, in_span: &[bool]| {
            let mut y = x;
            for _ in 1..order[x] {
                if in_span[y] {
                    return false;
                }
                y = add(y, x);
            }
            true
        };
        let mut best_order = 0;
        let mut pool = Vec::new();
        for &x in &by_order {
            if order[x] < best_order {
                break;
            }
            if in_span[x] || !trivially_meets(x, &in_span) {
                continue;
            }
            best_order = order[x];
            pool.push(x);
            if rng.is_none() {
                break;
            }
        }
        let g = match rng.as_deref_mut() {
            Some(r) => *pool.choose(r).expect("nonempty candidate pool"),
            None => pool[0],
        };
        let mut next = Vec::with_capacity(span.len() * order[g]);
        let mut mult = zero;
        for _ in 0..order[g] {
            for &s in &span {
                next.push(add(s, mult));
            }
            mult = add(mult, g);
        }
        for &y in &next {
            in_span[y] = true;
        }
        span = next;
        generators.push(g);
    }

    let orders: Vec<usize> = generators.iter().map(|&g| order[g]).collect();
    let group = AbelianGroup::new(orders.clone());
    let mut to_abstract = vec![zero];
    for (&g, &o) in generators.iter().zip(&orders) {
        let stride = to_abstract.len();
        let mut next = Vec::with_capacity(stride * o);
        let mut mult = zero;
        for _ in 0..o {
            for &a in &to_abstract[..stride] {
                next.push(add(a, mult));
            }
            mult = add(mult, g);
        }
        to_abstract = next;
    }
    let mut from_abstract = vec![usize::MAX; n];
    for (m, &a) in to_abstract.iter().enumerate() {
        from_abstract[a] = m;
    }
    debug_assert!(from_abstract.iter().all(|&m| m != usize::MAX));
    CyclicDecomposition { group, generators, to_abstract, from_abstract }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mixed_radix_roundtrip() {
        let g = AbelianGroup::new(vec![2, 3, 4]);
        assert_eq!(g.size(), 24);
        for i in 0..24 {
            assert_eq!(g.encode(&g.decode(i)), i);
            assert_eq!(g.add(i, g.neg(i)), 0);
        }
        assert_eq!(g.order_of(g.encode(&[1, 1, 2])), 6);
        assert_eq!(g.scale(3, g.encode(&[1, 2, 3])), g.encode(&[1, 0, 1]));
    }

    #[test]
    fn decomposition_of_z2_x_z4() {
        let g = AbelianGroup::new(vec![2, 4]);
        let d = decompose_abelian::<ChaCha8Rng>(8, 0, |a, b| g.add(a, b), None);
        let mut orders = d.group.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![2, 4]);
        for m in 0..8 {
            for k in 0..8 {
                let sum = d.group.add(m, k);
                assert_eq!(d.to_abstract[sum], g.add(d.to_abstract[m], d.to_abstract[k]));
            }
        }
    }

    #[test]
    fn span_adjoin_builds_subgroup() {
        let g = AbelianGroup::new(vec![12]);
        let mut s = Span::zero(12);
        s.adjoin(8, |a, b| g.add(a, b));
        assert_eq!(s.clone().into_sorted(), vec![0, 4, 8]);
        s.adjoin(6, |a, b| g.add(a, b));
        assert_eq!(s.into_sorted(), vec![0, 2, 4, 6, 8, 10]);
    }

    #[test]
    fn bitset_basics() {
        let s = BitSet::from_iter(130, [0, 5, 64, 129]);
        assert_eq!(s.count(), 4);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        let t = BitSet::from_iter(130, [0, 5, 64, 129, 7]);
        assert!(s.is_subset(&t));
        assert!(!t.is_subset(&s));
    }
}
