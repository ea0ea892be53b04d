//! The matrix rings `M(n, F)` and the uncountably categorical variety that
//! is not free.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{assemble_report, classify_with, ClassificationReport, Indecomposable, ReportWitnesses};
use crate::caps::Caps;
use crate::decompose::Decomposer;
use crate::error::{Error, Result};
use crate::module::{find_isomorphism, FiniteModule};
use crate::property::is_free_module;
use crate::ring::{build_ring_with, mat_mul, FiniteRing, RingElement};

pub const MAX_FAMILY_N: usize = 4;
pub const MAX_FAMILY_Q: usize = 9;
/// Fields on which the matrix-unit identities are re-checked.
pub const BRIDGE_FIELDS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    Finite { q: usize },
    Infinite,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Finite { q } => write!(f, "GF({q})"),
            FieldKind::Infinite => f.write_str("F"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "infinite" | "inf" => Ok(FieldKind::Infinite),
            t => t
                .parse()
                .map(|q| FieldKind::Finite { q })
                .map_err(|_| Error::Argument(format!("field must be `infinite` or a prime power, got `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    /// Computed by enumeration over the finite ring.
    Verified,
    /// Backed by field-independent matrix-unit identities.
    Certificate,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub holds: bool,
    pub status: ClaimStatus,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeCheck {
    pub q: usize,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub n: usize,
    pub field: FieldKind,
    pub ring_label: String,
    /// `n = 1`: `P = R` and nothing is a counterexample.
    pub degenerate: bool,
    pub claims: Vec<Claim>,
    pub generic_witness: Value,
    pub bridge: Vec<BridgeCheck>,
}

impl CounterexampleCertificate {
    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn all_supported(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Failed) && self.bridge.iter().all(|b| b.passed)
    }
}

#[derive(Clone, Debug)]
pub struct MatrixFamily {
    pub report: ClassificationReport,
    pub certificate: CounterexampleCertificate,
}

pub const CLAIM_IDS: [&str; 5] =
    ["unique_indecomposable", "p_power_is_r", "p_not_free", "categorical", "frees_not_elementary"];

fn statement(id: &str, n: usize) -> String {
    match id {
        "unique_indecomposable" => "every module is uniquely a direct sum of copies of the column module P = R E11".into(),
        "p_power_is_r" => format!("P^({n}) is isomorphic to R"),
        "p_not_free" => "P is not free".into(),
        "categorical" => "the variety of R-modules is uncountably categorical".into(),
        _ => "the free modules do not form an elementary class".into(),
    }
}

fn unit_name(i: usize, j: usize) -> String {
    format!("E{}{}", i + 1, j + 1)
}

fn generic_witness(n: usize) -> Value {
    let isos: Vec<Value> = (1..n)
        .map(|j| {
            json!({
                "from": format!("R {}", unit_name(0, 0)),
                "to": format!("R {}", unit_name(j, j)),
                "map": format!("x -> x {}", unit_name(0, j)),
                "inverse": format!("x -> x {}", unit_name(j, 0)),
            })
        })
        .collect();
    json!({
        "idempotents": (0..n).map(|i| unit_name(i, i)).collect::<Vec<_>>(),
        "identities": [
            "E_ij E_kl = delta_jk E_il",
            "E_11 + ... + E_nn = 1",
            "E_ii R E_ii = F E_ii, a division ring, so E_ii is primitive",
        ],
        "isomorphisms": isos,
        "decomposition": format!("R = R E11 + ... + R E{n}{n}, each summand isomorphic to P"),
        "bridge_fields": BRIDGE_FIELDS,
    })
}

/// Matrix-unit identities over `GF(q)`, plus the column-module
/// isomorphisms checked on every column vector when there are at most
/// 6561 of them.
fn bridge_check(n: usize, q: usize, caps: &Caps) -> BridgeCheck {
    let run = || -> Result<Option<String>> {
        let f = build_ring_with(&format!("GF({q})"), caps)?;
        let unit = |i: usize, j: usize| {
            let mut m = vec![f.zero(); n * n];
            m[i * n + j] = f.one();
            m
        };
        let zero = vec![f.zero(); n * n];
        for (i, j, k, l) in quads(n) {
            let expected = if j == k { unit(i, l) } else { zero.clone() };
            if mat_mul(&f, n, &unit(i, j), &unit(k, l)) != expected {
                return Ok(Some(format!("{} {} != delta {}", unit_name(i, j), unit_name(k, l), unit_name(i, l))));
            }
        }
        let sum = (0..n).fold(zero.clone(), |acc, i| acc.iter().zip(unit(i, i)).map(|(&a, b)| f.add(a, b)).collect());
        let mut id = zero.clone();
        for i in 0..n {
            id[i * n + i] = f.one();
        }
        if sum != id {
            return Ok(Some("matrix units do not sum to 1".into()));
        }
        let columns = q.checked_pow(n as u32).filter(|&c| c <= 6561);
        if let Some(count) = columns {
            for idx in 0..count {
                let mut x = zero.clone();
                let mut t = idx;
                for i in 0..n {
                    x[i * n] = RingElement(t % q);
                    t /= q;
                }
                for j in 1..n {
                    let y = mat_mul(&f, n, &x, &unit(0, j));
                    let in_column = (0..n * n).all(|p| p % n == j || y[p] == f.zero());
                    if !in_column || mat_mul(&f, n, &y, &unit(j, 0)) != x {
                        return Ok(Some(format!("column map to R {} fails", unit_name(j, j))));
                    }
                }
            }
        }
        Ok(None)
    };
    match run() {
        Ok(detail) => BridgeCheck { q, passed: detail.is_none(), detail },
        Err(e) => BridgeCheck { q, passed: false, detail: Some(e.to_string()) },
    }
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n.pow(4)).map(move |x| (x % n, x / n % n, x / n / n % n, x / n / n / n))
}

/// `M(n, F)` for a finite field (enumerated) or a symbolic infinite one.
pub fn classify_matrix_family(n: usize, field: FieldKind, caps: &Caps) -> Result<MatrixFamily> {
    if n == 0 || n > MAX_FAMILY_N {
        return Err(Error::Argument(format!("n must be between 1 and {MAX_FAMILY_N}, got {n}")));
    }
    if let FieldKind::Finite { q } = field {
        if q > MAX_FAMILY_Q || crate::ring::prime_power(q).is_none() {
            return Err(Error::Argument(format!("q must be a prime power at most {MAX_FAMILY_Q}, got {q}")));
        }
    }
    let bridge: Vec<BridgeCheck> = BRIDGE_FIELDS.iter().map(|&q| bridge_check(n, q, caps)).collect();
    let generic = generic_witness(n);
    match field {
        FieldKind::Infinite => {
            let label = format!("M({n},F), F infinite");
            let report = assemble_report(
                label.clone(),
                None,
                Some(1),
                n == 1,
                true,
                vec![Indecomposable { size: None, multiplicity: n }],
                ReportWitnesses {
                    chain_rationale: "finite-dimensional algebra over a field: right artinian".into(),
                    idempotents: vec![(0..n).collect()],
                    ..Default::default()
                },
            );
            let bridge_ok = bridge.iter().all(|b| b.passed);
            let status = if bridge_ok { ClaimStatus::Certificate } else { ClaimStatus::Failed };
            let holds = [true, true, n > 1, report.categorical, !report.frees_elementary];
            let claims = CLAIM_IDS
                .iter()
                .zip(holds)
                .map(|(&id, holds)| Claim {
                    id: id.into(),
                    statement: statement(id, n),
                    holds,
                    status,
                    witness: generic.clone(),
                })
                .collect();
            let certificate = CounterexampleCertificate {
                n,
                field,
                ring_label: label,
                degenerate: n == 1,
                claims,
                generic_witness: generic,
                bridge,
            };
            Ok(MatrixFamily { report, certificate })
        }
        FieldKind::Finite { q } => {
            let ring = Arc::new(build_ring_with(&format!("M({n},GF({q}))"), caps)?);
            let dec = Decomposer::new(ring.clone(), caps)?;
            let report = classify_with(&dec)?;
            let claims = finite_claims(&dec, &ring, &report, n, q, caps)?;
            let certificate = CounterexampleCertificate {
                n,
                field,
                ring_label: ring.label().to_string(),
                degenerate: n == 1,
                claims,
                generic_witness: generic,
                bridge,
            };
            Ok(MatrixFamily { report, certificate })
        }
    }
}

fn finite_claims(
    dec: &Decomposer,
    ring: &Arc<FiniteRing>,
    report: &ClassificationReport,
    n: usize,
    q: usize,
    caps: &Caps,
) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let mut push = |id: &str, holds: bool, witness: Value| {
        claims.push(Claim { id: id.into(), statement: statement(id, n), holds, status: ClaimStatus::Verified, witness });
    };

    // matrix units in the entry encoding of M(n, GF(q))
    let one = build_ring_with(&format!("GF({q})"), caps)?.one().0;
    let e = |i: usize, j: usize| RingElement(one * q.pow((i * n + j) as u32));
    let units_ok = quads(n).all(|(i, j, k, l)| {
        let expected = if j == k { e(i, l) } else { ring.zero() };
        ring.mul(e(i, j), e(k, l)) == expected
    }) && (0..n).fold(ring.zero(), |acc, i| ring.add(acc, e(i, i))) == ring.one();
    // each corner E_ii R E_ii is a copy of the field
    let corners_ok = (0..n).all(|i| {
        let mut corner: Vec<RingElement> = ring.elements().map(|x| ring.mul(ring.mul(e(i, i), x), e(i, i))).collect();
        corner.sort_unstable();
        corner.dedup();
        corner.len() == q
    });

    let regular = Arc::new(FiniteModule::regular(ring, caps)?);
    let ks = dec.krull_schmidt(&regular)?;
    push(
        "unique_indecomposable",
        report.k == 1 && ks.signature.0.len() == 1 && units_ok && corners_ok,
        json!({
            "k": report.k,
            "regular_signature": ks.signature.to_string(),
            "matrix_units_ok": units_ok,
            "corners_are_fields": corners_ok,
        }),
    );

    let p = dec.ring_decomposition().representatives[0].clone();
    let mut power = (*p).clone();
    for _ in 1..n {
        power = power.direct_sum(&p, caps)?;
    }
    let power = Arc::new(power);
    let iso = find_isomorphism(&power, &regular, caps)?;
    push("p_power_is_r", iso.is_some(), json!({ "p_size": p.size(), "r_size": ring.size(), "isomorphism_found": iso.is_some() }));

    let free = is_free_module(dec, &p)?;
    push("p_not_free", !free.free, serde_json::to_value(&free.witness)?);
    push("categorical", report.categorical, json!({ "property_II": report.property_ii }));
    push(
        "frees_not_elementary",
        !report.frees_elementary,
        json!({ "frees_elementary": report.frees_elementary, "r_mod_j_simple": report.r_mod_j_simple }),
    );
    Ok(claims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_ring, Verdict};

    #[test]
    fn symbolic_two_by_two() {
        let fam = classify_matrix_family(2, FieldKind::Infinite, &Caps::default()).unwrap();
        let r = &fam.report;
        assert!(r.categorical && !r.frees_elementary);
        assert_eq!((r.k, r.multiplicities()), (1, vec![2]));
        assert_eq!(r.property_iv, Verdict::False);
        let c = &fam.certificate;
        for id in CLAIM_IDS {
            let claim = c.claim(id).unwrap();
            assert!(claim.holds && claim.status == ClaimStatus::Certificate, "{id}");
        }
        assert!(c.bridge.iter().all(|b| b.passed));
    }

    #[test]
    fn degenerate_n1() {
        let fam = classify_matrix_family(1, FieldKind::Infinite, &Caps::default()).unwrap();
        assert!(fam.certificate.degenerate);
        assert!(!fam.certificate.claim("p_not_free").unwrap().holds);
        let r = &fam.report;
        assert!(r.is_local && r.frees_elementary && r.projective_equals_free);
        assert_eq!(r.property_i, Verdict::ImpliedTrue);
    }

    #[test]
    fn finite_matches_direct_classification() {
        let caps = Caps::default();
        let fam = classify_matrix_family(2, FieldKind::Finite { q: 2 }, &caps).unwrap();
        let direct = classify_ring(&Arc::new(build_ring_with("M(2,GF(2))", &caps).unwrap()), &caps).unwrap();
        assert_eq!(fam.report, direct);
        let c = &fam.certificate;
        for id in ["unique_indecomposable", "p_power_is_r", "p_not_free", "categorical"] {
            let claim = c.claim(id).unwrap();
            assert!(claim.holds && claim.status == ClaimStatus::Verified, "{id}");
        }
        assert!(!c.claim("frees_not_elementary").unwrap().holds);
    }

    #[test]
    fn parameter_bounds() {
        let caps = Caps::default();
        assert!(matches!(classify_matrix_family(5, FieldKind::Infinite, &caps), Err(Error::Argument(_))));
        assert!(matches!(classify_matrix_family(2, FieldKind::Finite { q: 6 }, &caps), Err(Error::Argument(_))));
        assert!(matches!(classify_matrix_family(2, FieldKind::Finite { q: 11 }, &caps), Err(Error::Argument(_))));
        assert!(classify_matrix_family(2, FieldKind::Finite { q: 9 }, &caps).unwrap_err().is_cap());
        assert_eq!("infinite".parse::<FieldKind>().unwrap(), FieldKind::Infinite);
        assert_eq!("3".parse::<FieldKind>().unwrap(), FieldKind::Finite { q: 3 });
    }

    #[test]
    fn three_by_three_over_gf2() {
        let fam = classify_matrix_family(3, FieldKind::Finite { q: 2 }, &Caps::default()).unwrap();
        assert_eq!(fam.report.multiplicities(), vec![3]);
        assert!(fam.certificate.all_supported());
        assert!(fam.certificate.claim("p_power_is_r").unwrap().holds);
    }
}
