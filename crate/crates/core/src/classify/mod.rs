//! Ring-level verdicts on the module classes and on the theory of free
//! modules of infinite rank.
//!
//! The four properties compared throughout:
//!
//! * (I) every infinite direct power `R^I` is free;
//! * (II) the theory of infinite-rank free modules is categorical in
//!   cardinalities above `|R| + aleph_0`;
//! * (III) every model of that theory is free;
//! * (IV) the class of free modules is elementary.

mod family;
mod meta;
mod table;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::decompose::Decomposer;
use crate::error::Result;
use crate::ideal::{chain_conditions, is_local, is_simple_ring, jacobson_radical, quotient_ring_with_projection};
use crate::ideal::LocalWitness;
use crate::ring::{build_ring_with, FiniteRing};

pub use family::{
    classify_matrix_family, BridgeCheck, Claim, ClaimStatus, CounterexampleCertificate, FieldKind, MatrixFamily, CLAIM_IDS,
};
pub use meta::{
    projective_free_check, verify_implication_chain, ChainReport, FreeProjectiveEntry, FreeProjectiveReport,
    FreeProjectiveStatus, Violation,
};
pub use table::{report_table, table_header, table_row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    ImpliedTrue,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    /// True and implied-true both count as holding.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::True | Verdict::ImpliedTrue)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::ImpliedTrue => "implied_true",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indecomposable {
    /// `None` over an infinite ring.
    pub size: Option<usize>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReportWitnesses {
    pub radical: Option<Vec<usize>>,
    pub local: Option<LocalWitness>,
    /// A proper nonzero ideal of `R/J`, by quotient index, when it is not
    /// simple.
    pub quotient_ideal: Option<Vec<usize>>,
    pub chain_rationale: String,
    /// Primitive idempotents grouped by class.
    pub idempotents: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub ring_label: String,
    /// `None` for the symbolic infinite-field entries.
    pub carrier_size: Option<usize>,
    pub radical_size: Option<usize>,
    pub is_local: bool,
    pub r_mod_j_simple: bool,
    pub right_artinian: bool,
    pub left_perfect: bool,
    pub right_coherent: bool,
    pub indecomposables: Vec<Indecomposable>,
    pub k: usize,
    pub flats_elementary: bool,
    pub projectives_elementary: bool,
    pub frees_elementary: bool,
    #[serde(rename = "property_I")]
    pub property_i: Verdict,
    #[serde(rename = "property_II")]
    pub property_ii: Verdict,
    #[serde(rename = "property_III")]
    pub property_iii: Verdict,
    #[serde(rename = "property_IV")]
    pub property_iv: Verdict,
    pub categorical: bool,
    pub projective_equals_free: bool,
    /// Field name -> the result that produced it.
    pub provenance: BTreeMap<String, String>,
    pub witnesses: ReportWitnesses,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn is_symbolic(&self) -> bool {
        self.carrier_size.is_none()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.indecomposables.iter().map(|p| p.multiplicity).collect()
    }
}

pub(crate) mod tags {
    pub const FINITE_CHAIN: &str = "finite rings are right artinian, hence left perfect and right coherent";
    pub const FLATS: &str = "flat modules form an elementary class iff R is right coherent";
    pub const PROJECTIVES: &str = "projective modules form an elementary class iff R is left perfect and right coherent";
    pub const FREES: &str =
        "free modules form an elementary class iff R is right artinian and either local, or finite with R/J simple";
    pub const CATEGORICAL: &str = "categoricity iff left perfect, right coherent, and a unique indecomposable projective";
    pub const IV: &str = "(IV) is the elementarity of the free modules";
    pub const III: &str = "(III) and (IV) are equivalent";
    pub const I: &str = "(II) implies (I); no criterion is known for (I) alone";
    pub const PROJ_FREE: &str = "every indecomposable projective is free iff k = 1 and r_1 = 1";
    pub const RADICAL: &str = "J = {x : 1 - rx is a unit for every r}";
    pub const LOCAL: &str = "local iff the non-units are closed under addition";
    pub const SIMPLE: &str = "R/J simple iff every nonzero element generates R/J as a two-sided ideal";
    pub const DECOMPOSITION: &str = "R = P_1^(r_1) + ... + P_k^(r_k) from a complete set of primitive idempotents";
}

/// Verdicts derived from the structural fields; shared by the enumerative
/// and symbolic paths.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_report(
    ring_label: String,
    carrier_size: Option<usize>,
    radical_size: Option<usize>,
    is_local: bool,
    r_mod_j_simple: bool,
    indecomposables: Vec<Indecomposable>,
    witnesses: ReportWitnesses,
) -> ClassificationReport {
    let (right_artinian, left_perfect, right_coherent) = (true, true, true);
    let k = indecomposables.len();
    let finite = carrier_size.is_some();
    let flats_elementary = right_coherent;
    let projectives_elementary = left_perfect && right_coherent;
    let frees_elementary = right_artinian && (is_local || (finite && r_mod_j_simple));
    let property_ii = Verdict::from_bool(left_perfect && right_coherent && k == 1);
    let property_iv = Verdict::from_bool(frees_elementary);
    let property_iii = property_iv;
    let property_i = if property_ii.holds() { Verdict::ImpliedTrue } else { Verdict::Unknown };
    let projective_equals_free = k == 1 && indecomposables[0].multiplicity == 1;

    let mut provenance = BTreeMap::new();
    for field in ["right_artinian", "left_perfect", "right_coherent"] {
        provenance.insert(field.to_string(), tags::FINITE_CHAIN.to_string());
    }
    for (field, tag) in [
        ("radical_size", tags::RADICAL),
        ("is_local", tags::LOCAL),
        ("r_mod_j_simple", tags::SIMPLE),
        ("indecomposables", tags::DECOMPOSITION),
        ("flats_elementary", tags::FLATS),
        ("projectives_elementary", tags::PROJECTIVES),
        ("frees_elementary", tags::FREES),
        ("property_I", tags::I),
        ("property_II", tags::CATEGORICAL),
        ("property_III", tags::III),
        ("property_IV", tags::IV),
        ("categorical", tags::CATEGORICAL),
        ("projective_equals_free", tags::PROJ_FREE),
    ] {
        provenance.insert(field.to_string(), tag.to_string());
    }

    let mut notes = Vec::new();
    if !finite {
        provenance.insert("right_artinian".into(), "finite-dimensional algebra over a field".into());
        provenance.insert("left_perfect".into(), "right artinian".into());
        provenance.insert("right_coherent".into(), "right artinian".into());
        notes.push("symbolic entry: structure derived from matrix-unit identities, nothing enumerated".into());
    }
    if property_ii.holds() {
        notes.push("(II) holds, so (I) holds as well".into());
    }
    if finite && property_ii.holds() {
        notes.push("finite ring with a unique indecomposable projective: R/J is simple and (II) coincides with (IV)".into());
    }
    if property_ii.holds() && !property_iv.holds() {
        notes.push("categorical but the free modules are not elementary: (II) does not imply (III)".into());
    }
    if frees_elementary && !projective_equals_free {
        notes.push("free modules are elementary although projective modules need not be free".into());
    }
    if k == 1 && indecomposables[0].multiplicity == 1 {
        notes.push("unique indecomposable projective with r = 1: P = R".into());
    }

    ClassificationReport {
        ring_label,
        carrier_size,
        radical_size,
        is_local,
        r_mod_j_simple,
        right_artinian,
        left_perfect,
        right_coherent,
        indecomposables,
        k,
        flats_elementary,
        projectives_elementary,
        frees_elementary,
        property_i,
        property_ii,
        property_iii,
        property_iv,
        categorical: property_ii.holds(),
        projective_equals_free,
        provenance,
        witnesses,
        notes,
    }
}

/// Classify one ring, building a fresh decomposition engine.
pub fn classify_ring(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<ClassificationReport> {
    let dec = Decomposer::new(ring.clone(), caps)?;
    classify_with(&dec)
}

/// Classify using an existing engine (its class registry is reused).
pub fn classify_with(dec: &Decomposer) -> Result<ClassificationReport> {
    let ring = dec.ring();
    let caps = dec.caps();
    let radical = jacobson_radical(ring)?;
    let local = is_local(ring);
    let quotient = quotient_ring_with_projection(ring, &radical, caps)?;
    let simple = is_simple_ring(&quotient.ring);
    let chains = chain_conditions(ring, caps);
    let decomposition = dec.ring_decomposition();
    let indecomposables = decomposition
        .sizes()
        .into_iter()
        .zip(&decomposition.multiplicities)
        .map(|(size, &multiplicity)| Indecomposable { size: Some(size), multiplicity })
        .collect();
    let witnesses = ReportWitnesses {
        radical: Some(radical.indices()),
        local: Some(local.witness.clone()),
        quotient_ideal: simple.witness.as_ref().map(|i| i.indices()),
        chain_rationale: chains.rationale.clone(),
        idempotents: decomposition.classes.iter().map(|c| c.iter().map(|e| e.0).collect()).collect(),
    };
    Ok(assemble_report(
        ring.label().to_string(),
        Some(ring.size()),
        Some(radical.size()),
        local.local,
        simple.simple,
        indecomposables,
        witnesses,
    ))
}

/// Build and classify each spec in parallel; results keep input order.
pub fn classify_specs(specs: &[String], caps: &Caps) -> Vec<Result<ClassificationReport>> {
    specs
        .par_iter()
        .map(|s| {
            let ring = Arc::new(build_ring_with(s, caps)?);
            classify_ring(&ring, caps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn classify(s: &str) -> ClassificationReport {
        classify_ring(&Arc::new(build_ring(s).unwrap()), &Caps::default()).unwrap()
    }

    #[test]
    fn z6() {
        let r = classify("Z/6");
        assert_eq!(r.k, 2);
        assert_eq!(r.indecomposables.iter().map(|p| p.size.unwrap()).collect::<Vec<_>>(), vec![2, 3]);
        assert!(!r.categorical && !r.frees_elementary && !r.is_local && !r.r_mod_j_simple);
        assert!(r.flats_elementary && r.projectives_elementary);
        assert_eq!(r.property_i, Verdict::Unknown);
        assert_eq!(r.radical_size, Some(1));
    }

    #[test]
    fn m2_gf2() {
        let r = classify("M(2,GF(2))");
        assert_eq!((r.k, r.multiplicities(), r.indecomposables[0].size), (1, vec![2], Some(4)));
        assert!(r.categorical && r.frees_elementary && !r.projective_equals_free);
        assert_eq!(r.property_i, Verdict::ImpliedTrue);
        assert!(!r.is_local && r.r_mod_j_simple);
    }

    #[test]
    fn z4() {
        let r = classify("Z/4");
        assert!(r.is_local);
        assert_eq!((r.k, r.multiplicities()), (1, vec![1]));
        for v in [r.property_ii, r.property_iii, r.property_iv] {
            assert_eq!(v, Verdict::True);
        }
        assert!(r.projective_equals_free);
    }

    #[test]
    fn json_round_trip() {
        let r = classify("T(2,GF(2))");
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"property_II\""));
        let back: ClassificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn every_boolean_has_provenance() {
        let r = classify("Z/12");
        let v = serde_json::to_value(&r).unwrap();
        for (field, value) in v.as_object().unwrap() {
            if value.is_boolean() {
                assert!(r.provenance.contains_key(field), "{field}");
            }
        }
    }
}
