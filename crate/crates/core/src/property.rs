//! Freeness, projectivity and flatness of finite modules.

use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::decompose::{Decomposer, Signature};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Span};
use crate::ideal::{enumerate_ideals, greedy_generators, ideal_generated, Ideal, Side};
use crate::module::{FiniteModule, HomSearch, ModuleHom};
use crate::ring::{FiniteRing, RingElement};

pub const DEFAULT_RELATION_BOUND: usize = 3;

/// Tuples in `M^n` are enumerated only up to `max_module` times this.
const TUPLE_FACTOR: usize = 256;

/// Right ideals are enumerated only for rings up to this size.
const IDEAL_SCAN_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FreeWitness {
    Rank { rank: usize },
    NonRegularClass { class: usize },
    Multiplicity { class: usize, multiplicity: usize, regular: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeVerdict {
    pub free: bool,
    pub signature: Signature,
    pub witness: FreeWitness,
}

/// `M` is free iff its signature is `c` times the regular signature.
pub fn is_free_module(dec: &Decomposer, m: &Arc<FiniteModule>) -> Result<FreeVerdict> {
    let signature = dec.signature(m)?;
    let witness = free_rank(dec, &signature);
    Ok(FreeVerdict { free: matches!(witness, FreeWitness::Rank { .. }), signature, witness })
}

fn free_rank(dec: &Decomposer, sig: &Signature) -> FreeWitness {
    if let Some(&(class, _)) = sig.0.iter().find(|e| !dec.is_regular_class(e.0)) {
        return FreeWitness::NonRegularClass { class };
    }
    let regular = dec.regular_signature();
    let (_, r0) = regular.0[0];
    let rank = sig.multiplicity(0) / r0;
    for &(class, r) in &regular.0 {
        let multiplicity = sig.multiplicity(class);
        if multiplicity != rank * r {
            return FreeWitness::Multiplicity { class, multiplicity, regular: r };
        }
    }
    FreeWitness::Rank { rank }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectiveVerdict {
    pub projective: bool,
    pub signature: Signature,
    /// A class of the signature that is not a summand of `R`.
    pub offending_class: Option<usize>,
    /// Outcome of the splitting search, when it ran within caps.
    pub section_found: Option<bool>,
    pub section: Option<Vec<usize>>,
}

/// Projective iff every indecomposable summand is some `P_i`.  When
/// `R^g` fits the module cap, the canonical surjection `R^g -> M` is also
/// searched for a section and the two answers must agree.
pub fn is_projective_module(dec: &Decomposer, m: &Arc<FiniteModule>) -> Result<ProjectiveVerdict> {
    let signature = dec.signature(m)?;
    let offending_class = signature.0.iter().map(|e| e.0).find(|&c| !dec.is_regular_class(c));
    let projective = offending_class.is_none();
    let caps = dec.caps();
    let (mut section_found, mut section) = (None, None);
    let free_size = (m.ring().size() as u128).checked_pow(m.num_generators() as u32);
    if free_size.is_some_and(|s| s <= caps.max_module as u128) {
        let pi = canonical_surjection(m, caps)?;
        match split_surjection_search(&pi, caps) {
            Ok(s) => {
                section_found = Some(s.is_some());
                section = s.map(|s| s.map);
            }
            Err(e) if e.is_cap() => {}
            Err(e) => return Err(e),
        }
    }
    if section_found.is_some_and(|found| found != projective) {
        return Err(Error::Consistency(format!(
            "projectivity of {}: signature {signature} says {projective}, splitting search says {}",
            m.label(),
            !projective
        )));
    }
    Ok(ProjectiveVerdict { projective, signature, offending_class, section_found, section })
}

/// `R^g -> M` sending the unit vectors to the generators of `M`.
pub fn canonical_surjection(m: &Arc<FiniteModule>, caps: &Caps) -> Result<ModuleHom> {
    let free = Arc::new(FiniteModule::free(m.ring(), m.num_generators(), caps)?);
    Ok(ModuleHom::from_images(&free, m, m.generators()))
}

/// A homomorphism `s` with `pi s = id`, or `None` if there is none.
/// Only homomorphisms sending each generator of the target into its fiber
/// are visited.
pub fn split_surjection_search(pi: &ModuleHom, caps: &Caps) -> Result<Option<ModuleHom>> {
    if !pi.is_surjective() {
        return Err(Error::Argument("section search needs a surjective homomorphism".into()));
    }
    let (source, target) = (&pi.target, &pi.source);
    let gens = source.generators().to_vec();
    let search = HomSearch::new(source, target, caps)?.restrict(|i, y| pi.apply(y) == gens[i]);
    let mut found = None;
    search.for_each(|images| {
        found = Some(images.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found.map(|images| ModuleHom::from_images(source, target, &images)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatWitness {
    /// Coefficients `r_1, ..., r_n`.
    pub relation: Vec<RingElement>,
    /// Elements `m_1, ..., m_n` with `sum r_i m_i = 0` that do not factor.
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatVerdict {
    pub flat: bool,
    /// False when some right ideal needed more than `relation_bound`
    /// generators and was skipped.
    pub exact: bool,
    pub relation_bound: usize,
    pub ideals_checked: usize,
    pub skipped: Vec<Vec<RingElement>>,
    pub witness: Option<FlatWitness>,
    pub projective: bool,
}

struct RelationShape {
    /// Generators `r` of one right ideal.
    coeffs: Vec<RingElement>,
    /// Additive generators of `{h in R^n : sum r_j h_j = 0}`.
    syzygies: Vec<Vec<RingElement>>,
}

/// Flatness test against all right ideals of one ring.
///
/// A relation `sum r_i m_i = 0` factors as `m = H m'` with `r H = 0` iff
/// `m` lies in the additive span `T(r)` of the vectors `(h_1 b, ..., h_n b)`
/// for `h` in the right annihilator of `r` and `b` in `M`.  Whether
/// `T(r)` fills the solution set `Z(r)` depends only on the right ideal
/// generated by `r`, so one generating tuple per right ideal suffices and
/// the matrix width `l` is unbounded.
pub struct FlatnessTester {
    ring: Arc<FiniteRing>,
    bound: usize,
    shapes: Vec<RelationShape>,
    skipped: Vec<Vec<RingElement>>,
    caps: Caps,
}

impl FlatnessTester {
    pub fn new(ring: &Arc<FiniteRing>, bound: usize, caps: &Caps) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Argument("relation length bound must be at least 1".into()));
        }
        if ring.size() > IDEAL_SCAN_LIMIT {
            return Err(Error::Size {
                what: "right ideal scan",
                size: ring.size() as u128,
                cap: IDEAL_SCAN_LIMIT as u128,
            });
        }
        let limit = caps.max_module.saturating_mul(TUPLE_FACTOR) as u128;
        let mut shapes = Vec::new();
        let mut skipped = Vec::new();
        for ideal in enumerate_ideals(ring, Side::Right) {
            if ideal.is_zero() {
                continue;
            }
            let coeffs = short_generators(ring, &ideal);
            let n = coeffs.len();
            if n > bound || (ring.size() as u128).pow(n as u32) > limit {
                skipped.push(coeffs);
                continue;
            }
            let syzygies = right_syzygies(ring, &coeffs);
            shapes.push(RelationShape { coeffs, syzygies });
        }
        Ok(FlatnessTester { ring: ring.clone(), bound, shapes, skipped, caps: *caps })
    }

    /// Flatness of `m`, cross-checked against the projectivity verdict.
    pub fn check(&self, dec: &Decomposer, m: &Arc<FiniteModule>) -> Result<FlatVerdict> {
        if !crate::module::same_ring(&self.ring, m.ring()) {
            return Err(Error::RingMismatch);
        }
        let outcomes: Vec<Result<Option<Vec<usize>>>> =
            self.shapes.par_iter().map(|s| tuple_violation(m, &s.coeffs, &s.syzygies, &self.caps)).collect();
        let mut witness = None;
        let mut skipped = self.skipped.clone();
        let mut ideals_checked = 0;
        for (shape, outcome) in self.shapes.iter().zip(outcomes) {
            match outcome {
                Ok(Some(elements)) => {
                    ideals_checked += 1;
                    witness = Some(FlatWitness { relation: shape.coeffs.clone(), elements });
                    break;
                }
                Ok(None) => ideals_checked += 1,
                Err(e) if e.is_cap() => skipped.push(shape.coeffs.clone()),
                Err(e) => return Err(e),
            }
        }
        let flat = witness.is_none();
        let exact = skipped.is_empty();
        let projective = is_projective_module(dec, m)?.projective;
        if (!flat && projective) || (exact && flat != projective) {
            return Err(Error::Consistency(format!(
                "{}: flat = {flat} but projective = {projective} over a finite ring",
                m.label()
            )));
        }
        Ok(FlatVerdict {
            flat,
            exact,
            relation_bound: self.bound,
            ideals_checked,
            skipped,
            witness,
            projective,
        })
    }
}

pub fn is_flat_module(dec: &Decomposer, m: &Arc<FiniteModule>, relation_bound: usize) -> Result<FlatVerdict> {
    FlatnessTester::new(m.ring(), relation_bound, dec.caps())?.check(dec, m)
}

/// A single generator when the right ideal is principal, else the greedy
/// generating set.
fn short_generators(ring: &FiniteRing, ideal: &Ideal) -> Vec<RingElement> {
    ideal
        .elements
        .iter()
        .find(|&&x| ideal_generated(ring, Side::Right, &[x]).size() == ideal.size())
        .map(|&x| vec![x])
        .unwrap_or_else(|| greedy_generators(ring, Side::Right, &ideal.elements))
}

/// Additive generators of `{h in R^n : sum r_j h_j = 0}`, scanning `R^n`.
fn right_syzygies(ring: &FiniteRing, r: &[RingElement]) -> Vec<Vec<RingElement>> {
    let n = r.len();
    let rs = ring.size();
    let g = ring.group().power(n);
    let mut span = Span::zero(g.size());
    let mut gens = Vec::new();
    for x in 0..g.size() {
        let h: Vec<RingElement> = (0..n).map(|j| RingElement(x / rs.pow(j as u32) % rs)).collect();
        let sum = r.iter().zip(&h).fold(ring.zero(), |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)));
        if sum == ring.zero() && span.adjoin(x, |a, b| g.add(a, b)) {
            gens.push(h);
        }
    }
    gens
}

/// First `m` in `Z(r) \ T(r)` in index order, or `None` when every
/// solution factors.
fn tuple_violation(
    m: &FiniteModule,
    r: &[RingElement],
    syzygies: &[Vec<RingElement>],
    caps: &Caps,
) -> Result<Option<Vec<usize>>> {
    let (t, z_size) = factoring_part(m, r, syzygies, caps)?;
    if t.len() == z_size {
        return Ok(None);
    }
    let n = r.len();
    for x in 0..t.members().capacity() {
        if t.contains(x) {
            continue;
        }
        let xs = decode_tuple(x, m.size(), n);
        if m.combine(r, &xs) == 0 {
            return Ok(Some(xs));
        }
    }
    Err(Error::Consistency("solution set smaller than its factoring part".into()))
}

fn decode_tuple(mut x: usize, ms: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = x % ms;
            x /= ms;
            d
        })
        .collect()
}

/// `T(r)` as a subgroup of `M^n` (filled only until it reaches `|Z(r)|`),
/// together with `|Z(r)|`.
fn factoring_part(
    m: &FiniteModule,
    r: &[RingElement],
    syzygies: &[Vec<RingElement>],
    caps: &Caps,
) -> Result<(Span, usize)> {
    let n = r.len();
    let ms = m.size();
    let total = (ms as u128).pow(n as u32);
    let limit = caps.max_module.saturating_mul(TUPLE_FACTOR);
    if total > limit as u128 {
        return Err(Error::Size { what: "relation tuples", size: total, cap: limit as u128 });
    }
    let g: AbelianGroup = m.group().power(n);
    let mut image = Span::zero(ms);
    for &c in r {
        for b in basis(m) {
            image.adjoin(m.act(c, b), |a, b| m.add(a, b));
        }
    }
    let z_size = total as usize / image.len();
    let mut t = Span::zero(g.size());
    'fill: for h in syzygies {
        for b in basis(m) {
            let v = h.iter().rev().fold(0, |acc, &hj| acc * ms + m.act(hj, b));
            t.adjoin(v, |a, b| g.add(a, b));
            if t.len() == z_size {
                break 'fill;
            }
        }
    }
    Ok((t, z_size))
}

fn basis(m: &FiniteModule) -> impl Iterator<Item = usize> + '_ {
    (0..m.group().rank()).map(|i| m.group().basis(i))
}
