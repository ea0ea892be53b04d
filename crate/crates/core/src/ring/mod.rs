//! Finite unital rings with an explicit mixed-radix carrier.

mod axioms;
mod build;
pub mod dsl;
mod field;
pub mod random;

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{decompose_abelian, AbelianGroup};

pub use axioms::{verify_ring_axioms, Axiom, AxiomCheck, AxiomReport};
pub use build::StructConstFile;
pub(crate) use build::mat_mul;
pub use dsl::{build_ring, build_ring_with, parse_ring_spec, RingSpec};
pub use field::least_irreducible;
pub(crate) use field::prime_power;

/// An element of a [`FiniteRing`], by its canonical carrier index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement(pub usize);

impl RingElement {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
enum MulStore {
    /// `table[a * n + b] = a * b`.
    Table(Vec<u16>),
    /// Products of the cyclic generators; everything else by bilinearity.
    Basis(Vec<usize>),
}

/// A finite ring with identity.  Immutable once built.
#[derive(Debug)]
pub struct FiniteRing {
    label: String,
    group: AbelianGroup,
    one: usize,
    mul: MulStore,
    units: OnceLock<Vec<bool>>,
}

impl Clone for FiniteRing {
    fn clone(&self) -> Self {
        FiniteRing {
            label: self.label.clone(),
            group: self.group.clone(),
            one: self.one,
            mul: self.mul.clone(),
            units: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteRing {
    /// Same carrier encoding and same multiplication; labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        if self.group != other.group || self.one != other.one {
            return false;
        }
        let t = self.group.rank();
        (0..t).all(|i| {
            (0..t).all(|j| {
                let (a, b) = (RingElement(self.group.basis(i)), RingElement(self.group.basis(j)));
                self.mul(a, b) == other.mul(a, b)
            })
        })
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    /// Build a ring from a multiplication rule on carrier indices and
    /// validate it.  The rule is only consulted on all pairs when the full
    /// table is stored, otherwise on generator pairs.
    pub fn from_fn(
        label: impl Into<String>,
        group: AbelianGroup,
        one: usize,
        caps: &Caps,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        Self::build(label.into(), group, one, caps, mul, false)
    }

    /// Like [`FiniteRing::from_fn`] for a rule known to be additive in its
    /// second argument: table rows are filled from the products with the
    /// cyclic generators.  Additivity in the first argument and
    /// associativity are still verified.
    pub(crate) fn from_right_additive(
        label: impl Into<String>,
        group: AbelianGroup,
        one: usize,
        caps: &Caps,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        Self::build(label.into(), group, one, caps, mul, true)
    }

    fn build(
        label: String,
        group: AbelianGroup,
        one: usize,
        caps: &Caps,
        mul: impl Fn(usize, usize) -> usize,
        right_additive: bool,
    ) -> Result<Self> {
        let n = group.size();
        if n > caps.max_ring {
            return Err(Error::Size { what: "ring", size: n as u128, cap: caps.max_ring as u128 });
        }
        if one >= n {
            return Err(Error::validation(&label, format!("identity index {one} out of range")));
        }
        let out_of_range = |a: usize, b: usize, p: usize| {
            Error::validation(&label, format!("product {a}*{b} = {p} out of range"))
        };
        let t = group.rank();
        let store = if n <= caps.full_table.min(1 << 16) {
            let mut table = vec![0u16; n * n];
            if right_additive {
                let low: Vec<usize> = (1..n).map(|y| group.decode(y).iter().position(|&c| c != 0).unwrap()).collect();
                let strides: Vec<usize> = (0..t).map(|i| group.basis(i)).collect();
                for a in 0..n {
                    let mut gi = Vec::with_capacity(t);
                    for &b in &strides {
                        let p = mul(a, b);
                        if p >= n {
                            return Err(out_of_range(a, b, p));
                        }
                        gi.push(p);
                    }
                    let row = &mut table[a * n..(a + 1) * n];
                    for y in 1..n {
                        let i = low[y - 1];
                        row[y] = group.add(row[y - strides[i]] as usize, gi[i]) as u16;
                    }
                }
            } else {
                for a in 0..n {
                    for b in 0..n {
                        let p = mul(a, b);
                        if p >= n {
                            return Err(out_of_range(a, b, p));
                        }
                        table[a * n + b] = p as u16;
                    }
                }
            }
            MulStore::Table(table)
        } else {
            let mut products = Vec::with_capacity(t * t);
            for i in 0..t {
                for j in 0..t {
                    products.push(mul(group.basis(i), group.basis(j)));
                }
            }
            MulStore::Basis(products)
        };
        Self::finish(label, group, one, store, caps)
    }

    /// Build from a full `n x n` multiplication table.
    pub fn from_table(
        label: impl Into<String>,
        group: AbelianGroup,
        one: usize,
        table: &[Vec<usize>],
        caps: &Caps,
    ) -> Result<Self> {
        let label = label.into();
        let n = group.size();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::validation(&label, format!("multiplication table must be {n} x {n}")));
        }
        Self::from_fn(label, group, one, caps, |a, b| table[a][b])
    }

    /// A ring from a multiplication table with no validation at all.  Only
    /// for negative controls: the result may violate the ring axioms.
    pub fn from_table_unchecked(label: impl Into<String>, group: AbelianGroup, one: usize, table: &[Vec<usize>]) -> Self {
        FiniteRing {
            label: label.into(),
            group,
            one,
            mul: MulStore::Table(table.iter().flatten().map(|&v| v as u16).collect()),
            units: OnceLock::new(),
        }
    }

    /// Build from the products of the cyclic generators (`t x t`), extended
    /// bilinearly.
    pub fn from_basis_products(
        label: impl Into<String>,
        group: AbelianGroup,
        one: usize,
        products: &[Vec<usize>],
        caps: &Caps,
    ) -> Result<Self> {
        let label = label.into();
        let t = group.rank();
        let n = group.size();
        if products.len() != t || products.iter().any(|row| row.len() != t) {
            return Err(Error::validation(&label, format!("basis product table must be {t} x {t}")));
        }
        if n > caps.max_ring {
            return Err(Error::Size { what: "ring", size: n as u128, cap: caps.max_ring as u128 });
        }
        for (i, row) in products.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if p >= n {
                    return Err(Error::validation(&label, format!("basis product ({i},{j}) out of range")));
                }
                let bound = crate::group::gcd(group.orders()[i], group.orders()[j]);
                if !bound.is_multiple_of(group.order_of(p)) {
                    return Err(Error::validation(
                        &label,
                        format!("basis product ({i},{j}) has order {} not dividing {bound}", group.order_of(p)),
                    ));
                }
            }
        }
        let flat: Vec<usize> = products.iter().flatten().copied().collect();
        let basis = FiniteRing {
            label: label.clone(),
            group: group.clone(),
            one,
            mul: MulStore::Basis(flat),
            units: OnceLock::new(),
        };
        if n <= caps.full_table.min(1 << 16) {
            Self::from_right_additive(label, group, one, caps, |a, b| basis.mul(RingElement(a), RingElement(b)).0)
        } else {
            Self::finish(label, group, one, basis.mul, caps)
        }
    }

    /// Re-encode a ring given abstractly on ids `0..n` (for subrings and
    /// quotients).  Returns the ring and, for each new carrier index, the
    /// abstract id it came from.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_abstract<G: Rng>(
        label: impl Into<String>,
        n: usize,
        zero: usize,
        one: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        caps: &Caps,
        rng: Option<&mut G>,
    ) -> Result<(Self, Vec<usize>)> {
        let dec = decompose_abelian(n, zero, &add, rng);
        let to = dec.to_abstract;
        let from = dec.from_abstract;
        let ring = Self::from_fn(label, dec.group, from[one], caps, |a, b| from[mul(to[a], to[b])])?;
        Ok((ring, to))
    }

    fn finish(label: String, group: AbelianGroup, one: usize, mul: MulStore, caps: &Caps) -> Result<Self> {
        let ring = FiniteRing { label, group, one, mul, units: OnceLock::new() };
        let report = verify_ring_axioms(&ring, caps);
        if let Some(fail) = report.first_failure() {
            return Err(Error::validation(&ring.label, fail));
        }
        Ok(ring)
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

    pub fn orders(&self) -> &[usize] {
        self.group.orders()
    }

    pub fn zero(&self) -> RingElement {
        RingElement(0)
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.one)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> {
        (0..self.size()).map(RingElement)
    }

    pub fn element(&self, index: usize) -> Option<RingElement> {
        (index < self.size()).then_some(RingElement(index))
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.group.add(a.0, b.0))
    }

    pub fn neg(&self, a: RingElement) -> RingElement {
        RingElement(self.group.neg(a.0))
    }

    pub fn sub(&self, a: RingElement, b: RingElement) -> RingElement {
        RingElement(self.group.sub(a.0, b.0))
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        match &self.mul {
            MulStore::Table(t) => RingElement(t[a.0 * self.size() + b.0] as usize),
            MulStore::Basis(p) => {
                let t = self.group.rank();
                let (xa, xb) = (self.group.decode(a.0), self.group.decode(b.0));
                let mut acc = 0;
                for (i, &ci) in xa.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (j, &cj) in xb.iter().enumerate() {
                        if cj != 0 {
                            acc = self.group.add(acc, self.group.scale(ci * cj, p[i * t + j]));
                        }
                    }
                }
                RingElement(acc)
            }
        }
    }

    /// True when multiplication is stored as a full table.
    pub fn has_full_table(&self) -> bool {
        matches!(self.mul, MulStore::Table(_))
    }

    /// Full multiplication table as nested index lists.
    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n)
            .map(|a| (0..n).map(|b| self.mul(RingElement(a), RingElement(b)).0).collect())
            .collect()
    }

    /// Coordinates of an element over the cyclic orders.
    pub fn coords(&self, a: RingElement) -> Vec<usize> {
        self.group.decode(a.0)
    }

    pub fn from_coords(&self, coords: &[usize]) -> RingElement {
        RingElement(self.group.encode(coords))
    }

    fn unit_flags(&self) -> &[bool] {
        self.units.get_or_init(|| {
            let one = self.one();
            self.elements()
                .map(|x| {
                    // both a right and a left inverse must exist
                    let right = self.elements().find(|&y| self.mul(x, y) == one);
                    match right {
                        Some(y) => self.mul(y, x) == one,
                        None => false,
                    }
                })
                .collect()
        })
    }

    pub fn is_unit(&self, x: RingElement) -> bool {
        self.unit_flags()[x.0]
    }

    /// The two-sided invertible elements, ascending.
    pub fn units(&self) -> Vec<RingElement> {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let t = self.group.rank();
        (0..t).all(|i| {
            (i + 1..t).all(|j| {
                let (a, b) = (RingElement(self.group.basis(i)), RingElement(self.group.basis(j)));
                self.mul(a, b) == self.mul(b, a)
            })
        })
    }

    /// All `e` with `e * e = e`, ascending.
    pub fn idempotents(&self) -> Vec<RingElement> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn is_central(&self, x: RingElement) -> bool {
        let t = self.group.rank();
        (0..t).all(|i| {
            let b = RingElement(self.group.basis(i));
            self.mul(x, b) == self.mul(b, x)
        })
    }

    /// Multiply an element by a non-negative integer.
    pub fn scale(&self, k: usize, a: RingElement) -> RingElement {
        RingElement(self.group.scale(k, a.0))
    }

    /// Characteristic: the additive order of 1.
    pub fn characteristic(&self) -> usize {
        self.group.order_of(self.one)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (|R| = {})", self.label, self.size())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: &str) -> FiniteRing {
        build_ring(spec).unwrap()
    }

    #[test]
    fn units_of_small_rings() {
        let z4 = ring("Z/4");
        assert_eq!(z4.units(), vec![RingElement(1), RingElement(3)]);
        let gf4 = ring("GF(4)");
        assert_eq!(gf4.units().len(), 3);
        assert!(!gf4.is_unit(gf4.zero()));
        let m2 = ring("M(2,GF(2))");
        assert_eq!(m2.units().len(), 6);
    }

    #[test]
    fn idempotents_of_z6_and_z4() {
        let idx = |r: &FiniteRing| r.idempotents().into_iter().map(|e| e.0).collect::<Vec<_>>();
        assert_eq!(idx(&ring("Z/6")), vec![0, 1, 3, 4]);
        assert_eq!(idx(&ring("Z/4")), vec![0, 1]);
        assert_eq!(idx(&ring("GF(4)")), vec![0, 1]);
    }

    #[test]
    fn basis_store_agrees_with_table() {
        let small = Caps { full_table: 0, ..Caps::default() };
        let a = build_ring_with("M(2,Z/4)", &Caps::default()).unwrap();
        let b = build_ring_with("M(2,Z/4)", &small).unwrap();
        assert!(a.has_full_table());
        assert!(!b.has_full_table());
        assert_eq!(a, b);
        for x in a.elements().step_by(7) {
            for y in a.elements().step_by(5) {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }

    #[test]
    fn ill_defined_basis_products_are_rejected() {
        // Z/2 carrier with a generator square of order 4 cannot be bilinear
        let g = AbelianGroup::new(vec![2, 4]);
        let err = FiniteRing::from_basis_products("bad", g, 0, &[vec![2, 0], vec![0, 0]], &Caps::default());
        assert!(err.is_err());
    }

    #[test]
    fn encoding_roundtrip() {
        let r = ring("T(2,Z/4) x GF(4)");
        for x in r.elements() {
            assert_eq!(r.from_coords(&r.coords(x)), x);
        }
    }
}
