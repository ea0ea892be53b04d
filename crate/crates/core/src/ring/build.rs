//! Standard ring constructions: cyclic rings, fields, matrix and triangular
//! rings, products, polynomial quotients, and tables read from JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::field::{gf_mul, least_irreducible, prime_power};
use super::{FiniteRing, RingElement};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

fn checked_size(what: &'static str, base: usize, exp: usize, caps: &Caps) -> Result<()> {
    let size = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if size > caps.max_ring as u128 {
        return Err(Error::Size { what, size, cap: caps.max_ring as u128 });
    }
    Ok(())
}

/// Entry-wise encoding shared by matrix-like constructions: an element is a
/// list of `slots` elements of `base`, slot 0 least significant.
struct Slots<'a> {
    base: &'a FiniteRing,
    slots: usize,
}

impl Slots<'_> {
    fn decode(&self, mut idx: usize) -> Vec<RingElement> {
        let n = self.base.size();
        (0..self.slots)
            .map(|_| {
                let e = idx % n;
                idx /= n;
                RingElement(e)
            })
            .collect()
    }

    fn encode(&self, entries: &[RingElement]) -> usize {
        let n = self.base.size();
        entries.iter().rev().fold(0, |acc, e| acc * n + e.0)
    }

    fn group(&self) -> AbelianGroup {
        self.base.group().power(self.slots)
    }
}

pub(crate) fn mat_mul(s: &FiniteRing, n: usize, a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
    let mut out = vec![s.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == s.zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = s.add(out[i * n + j], s.mul(x, b[k * n + j]));
            }
        }
    }
    out
}

impl FiniteRing {
    /// `Z/n`.
    pub fn cyclic(n: usize, caps: &Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("Z/0 is not a finite ring".into()));
        }
        if n > caps.max_ring {
            return Err(Error::Size { what: "ring", size: n as u128, cap: caps.max_ring as u128 });
        }
        let group = AbelianGroup::new(if n == 1 { vec![] } else { vec![n] });
        FiniteRing::from_fn(format!("Z/{n}"), group, 1 % n, caps, |a, b| a * b % n)
    }

    /// `GF(q)` for a prime power `q <= 256`.
    pub fn galois_field(q: usize, caps: &Caps) -> Result<Self> {
        let (p, k) = prime_power(q)
            .filter(|_| q <= 256)
            .ok_or_else(|| Error::Argument(format!("GF({q}): order must be a prime power <= 256")))?;
        let modulus = least_irreducible(p, k);
        FiniteRing::from_right_additive(format!("GF({q})"), AbelianGroup::new(vec![p; k]), 1, caps, |a, b| {
            gf_mul(a, b, p, &modulus)
        })
    }

    /// `M(n, S)`, entries in row-major order.
    pub fn matrix(n: usize, base: &FiniteRing, caps: &Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("matrix size must be positive".into()));
        }
        checked_size("ring", base.size(), n * n, caps)?;
        let slots = Slots { base, slots: n * n };
        let mut id = vec![base.zero(); n * n];
        for i in 0..n {
            id[i * n + i] = base.one();
        }
        let one = slots.encode(&id);
        FiniteRing::from_right_additive(format!("M({n},{})", base.label()), slots.group(), one, caps, |a, b| {
            slots.encode(&mat_mul(base, n, &slots.decode(a), &slots.decode(b)))
        })
    }

    /// `T(n, S)`: upper triangular matrices; the positions `(i, j)` with
    /// `i <= j` are stored in row-major order.
    pub fn upper_triangular(n: usize, base: &FiniteRing, caps: &Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("matrix size must be positive".into()));
        }
        let positions: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        checked_size("ring", base.size(), positions.len(), caps)?;
        let slots = Slots { base, slots: positions.len() };
        let expand = |idx: usize| {
            let mut full = vec![base.zero(); n * n];
            for (e, &(i, j)) in slots.decode(idx).into_iter().zip(&positions) {
                full[i * n + j] = e;
            }
            full
        };
        let compress = |full: &[RingElement]| {
            let entries: Vec<RingElement> = positions.iter().map(|&(i, j)| full[i * n + j]).collect();
            slots.encode(&entries)
        };
        let mut id = vec![base.zero(); n * n];
        for i in 0..n {
            id[i * n + i] = base.one();
        }
        let one = compress(&id);
        FiniteRing::from_right_additive(format!("T({n},{})", base.label()), slots.group(), one, caps, |a, b| {
            compress(&mat_mul(base, n, &expand(a), &expand(b)))
        })
    }

    /// `A x B`; the index of `(a, b)` is `a + |A| * b`.
    pub fn product(a: &FiniteRing, b: &FiniteRing, caps: &Caps) -> Result<Self> {
        let size = a.size() as u128 * b.size() as u128;
        if size > caps.max_ring as u128 {
            return Err(Error::Size { what: "ring", size, cap: caps.max_ring as u128 });
        }
        let na = a.size();
        let one = a.one().0 + na * b.one().0;
        FiniteRing::from_right_additive(
            format!("{} x {}", a.label(), b.label()),
            a.group().product(b.group()),
            one,
            caps,
            |x, y| {
                let (xa, xb) = (RingElement(x % na), RingElement(x / na));
                let (ya, yb) = (RingElement(y % na), RingElement(y / na));
                a.mul(xa, ya).0 + na * b.mul(xb, yb).0
            },
        )
    }

    /// `S[x]/(f)` for a monic `f` given by its coefficients (element indices
    /// of `S`, lowest degree first, leading coefficient equal to 1).
    /// `x` commutes with `S`.
    pub fn poly_quotient(base: &FiniteRing, coeffs: &[usize], caps: &Caps) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Argument("PolyQuot needs a polynomial of degree >= 1".into()));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= base.size()) {
            return Err(Error::Argument(format!("PolyQuot coefficient {c} is not an element of {}", base.label())));
        }
        if *coeffs.last().unwrap() != base.one().0 {
            return Err(Error::Argument("PolyQuot polynomial must be monic".into()));
        }
        let d = coeffs.len() - 1;
        checked_size("ring", base.size(), d, caps)?;
        let f: Vec<RingElement> = coeffs.iter().map(|&c| RingElement(c)).collect();
        let slots = Slots { base, slots: d };
        let mut one = vec![base.zero(); d];
        one[0] = base.one();
        let coeff_str = coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        FiniteRing::from_right_additive(
            format!("PolyQuot({},[{coeff_str}])", base.label()),
            slots.group(),
            slots.encode(&one),
            caps,
            |a, b| {
                let (pa, pb) = (slots.decode(a), slots.decode(b));
                let mut prod = vec![base.zero(); 2 * d - 1];
                for (i, &x) in pa.iter().enumerate() {
                    for (j, &y) in pb.iter().enumerate() {
                        prod[i + j] = base.add(prod[i + j], base.mul(x, y));
                    }
                }
                for deg in (d..prod.len()).rev() {
                    let c = prod[deg];
                    if c == base.zero() {
                        continue;
                    }
                    prod[deg] = base.zero();
                    for (i, &fi) in f[..d].iter().enumerate() {
                        let t = deg - d + i;
                        prod[t] = base.sub(prod[t], base.mul(c, fi));
                    }
                }
                slots.encode(&prod[..d])
            },
        )
    }

    /// Read a ring from the structure-constant JSON format.
    pub fn from_struct_const_file(path: impl AsRef<Path>, caps: &Caps) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let file: StructConstFile = serde_json::from_str(&text)?;
        file.build(format!("StructConst({})", path.display()), caps)
    }
}

/// On-disk ring description: `{orders, one, table}`.
///
/// `table` is either the full `|R| x |R|` multiplication table or the
/// `t x t` table of products of the cyclic generators (`t = orders.len()`).
/// The two shapes never coincide for a nontrivial ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructConstFile {
    pub orders: Vec<usize>,
    pub one: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StructConstFile {
    pub fn build(&self, default_label: String, caps: &Caps) -> Result<FiniteRing> {
        let label = self.label.clone().unwrap_or(default_label);
        if self.orders.iter().any(|&o| o < 2) {
            return Err(Error::validation(&label, "cyclic orders must be at least 2"));
        }
        let size = self.orders.iter().try_fold(1u128, |acc, &o| acc.checked_mul(o as u128)).unwrap_or(u128::MAX);
        if size > caps.max_ring as u128 {
            return Err(Error::Size { what: "ring", size, cap: caps.max_ring as u128 });
        }
        let group = AbelianGroup::new(self.orders.clone());
        if self.table.len() == group.size() && group.size() != group.rank() {
            FiniteRing::from_table(label, group, self.one, &self.table, caps)
        } else {
            FiniteRing::from_basis_products(label, group, self.one, &self.table, caps)
        }
    }

    /// Full-table ring with only shape and range checks; the axioms are not
    /// verified.  For negative controls.
    pub fn build_unchecked(&self, default_label: String) -> Result<FiniteRing> {
        let label = self.label.clone().unwrap_or(default_label);
        let group = AbelianGroup::new(self.orders.clone());
        let n = group.size();
        if n > 1 << 16 || self.table.len() != n || self.table.iter().flatten().count() != n * n {
            return Err(Error::validation(&label, format!("unchecked rings need a full {n} x {n} table")));
        }
        if self.one >= n || self.table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::validation(&label, "table entry out of range"));
        }
        Ok(FiniteRing::from_table_unchecked(label, group, self.one, &self.table))
    }

    /// Full-table description of a ring.
    pub fn from_ring(ring: &FiniteRing) -> Self {
        StructConstFile {
            orders: ring.orders().to_vec(),
            one: ring.one().0,
            table: ring.mul_table(),
            label: Some(ring.label().to_string()),
        }
    }
}
