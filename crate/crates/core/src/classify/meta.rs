//! Checks that run over a finished set of reports.

use serde::{Deserialize, Serialize};

use super::{ClassificationReport, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub ring: String,
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub reports_checked: usize,
    pub violations: Vec<Violation>,
    /// Rings where (II) holds but (IV) fails.
    pub strict_ii_not_iv: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `IV => III => II => I`, `III <=> IV`, and for finite rings `II <=> IV`,
/// plus the agreement of each report's summary fields with its verdicts.
pub fn verify_implication_chain(reports: &[ClassificationReport]) -> ChainReport {
    let mut violations = Vec::new();
    let mut strict = Vec::new();
    for r in reports {
        let mut flag = |rule: &str, ok: bool, detail: String| {
            if !ok {
                violations.push(Violation { ring: r.ring_label.clone(), rule: rule.into(), detail });
            }
        };
        let (i, ii, iii, iv) =
            (r.property_i.holds(), r.property_ii.holds(), r.property_iii.holds(), r.property_iv.holds());
        let show = |v: Verdict| v.as_str();
        flag("IV implies III", !iv || iii, format!("IV={} III={}", show(r.property_iv), show(r.property_iii)));
        flag("III implies II", !iii || ii, format!("III={} II={}", show(r.property_iii), show(r.property_ii)));
        flag("II implies I", !ii || i, format!("II={} I={}", show(r.property_ii), show(r.property_i)));
        flag("III iff IV", iii == iv, format!("III={} IV={}", show(r.property_iii), show(r.property_iv)));
        if !r.is_symbolic() {
            flag("finite ring: II iff IV", ii == iv, format!("II={} IV={}", show(r.property_ii), show(r.property_iv)));
        }
        flag("categorical is II", r.categorical == ii, format!("categorical={} II={}", r.categorical, ii));
        flag(
            "frees elementary is IV",
            r.frees_elementary == iv,
            format!("frees_elementary={} IV={}", r.frees_elementary, iv),
        );
        if ii && !iv {
            strict.push(r.ring_label.clone());
        }
    }
    ChainReport { reports_checked: reports.len(), violations, strict_ii_not_iv: strict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeProjectiveStatus {
    /// Both sides agree.
    Equivalent,
    /// A finite ring whose frees are elementary while some projective is
    /// not free.
    FiniteCounterexample,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeProjectiveEntry {
    pub ring: String,
    pub infinite: bool,
    pub frees_elementary: bool,
    pub projectives_elementary: bool,
    pub projective_equals_free: bool,
    pub status: FreeProjectiveStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeProjectiveReport {
    pub entries: Vec<FreeProjectiveEntry>,
    pub violations: Vec<Violation>,
}

impl FreeProjectiveReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn finite_counterexamples(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.status == FreeProjectiveStatus::FiniteCounterexample)
            .map(|e| e.ring.as_str())
            .collect()
    }
}

/// Frees elementary versus (projectives elementary and projective = free).
/// Right to left must hold everywhere; left to right is asserted only for
/// infinite rings, and finite rings may fail it.
pub fn projective_free_check(reports: &[ClassificationReport]) -> FreeProjectiveReport {
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for r in reports {
        let rhs = r.projectives_elementary && r.projective_equals_free;
        let lhs = r.frees_elementary;
        let infinite = r.is_symbolic();
        let status = if lhs == rhs {
            FreeProjectiveStatus::Equivalent
        } else if lhs && !infinite {
            FreeProjectiveStatus::FiniteCounterexample
        } else {
            FreeProjectiveStatus::Violation
        };
        if status == FreeProjectiveStatus::Violation {
            violations.push(Violation {
                ring: r.ring_label.clone(),
                rule: if rhs { "projectives free and elementary implies frees elementary" } else { "infinite ring: frees elementary implies projectives free and elementary" }
                    .into(),
                detail: format!(
                    "frees_elementary={lhs} projectives_elementary={} projective_equals_free={}",
                    r.projectives_elementary, r.projective_equals_free
                ),
            });
        }
        entries.push(FreeProjectiveEntry {
            ring: r.ring_label.clone(),
            infinite,
            frees_elementary: lhs,
            projectives_elementary: r.projectives_elementary,
            projective_equals_free: r.projective_equals_free,
            status,
        });
    }
    FreeProjectiveReport { entries, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::classify::{classify_matrix_family, classify_ring, FieldKind};
    use crate::ring::build_ring;
    use std::sync::Arc;

    fn report(s: &str) -> ClassificationReport {
        classify_ring(&Arc::new(build_ring(s).unwrap()), &Caps::default()).unwrap()
    }

    #[test]
    fn forged_report_is_flagged() {
        let mut r = report("Z/6");
        r.property_iv = Verdict::True;
        r.property_iii = Verdict::True;
        r.frees_elementary = true;
        let chain = verify_implication_chain(&[r]);
        assert!(chain.violations.iter().any(|v| v.rule == "III implies II"));
        assert!(chain.violations.iter().all(|v| v.ring == "Z/6"));
    }

    #[test]
    fn strictness_only_in_the_symbolic_entry() {
        let mut reports: Vec<_> = ["Z/4", "Z/6", "M(2,GF(2))", "T(2,GF(2))"].iter().map(|s| report(s)).collect();
        reports.push(classify_matrix_family(2, FieldKind::Infinite, &Caps::default()).unwrap().report);
        let chain = verify_implication_chain(&reports);
        assert!(chain.passed(), "{:?}", chain.violations);
        assert_eq!(chain.strict_ii_not_iv, vec!["M(2,F), F infinite".to_string()]);
    }

    #[test]
    fn free_projective_entries() {
        let mut reports: Vec<_> = ["M(2,GF(2))", "Z/4"].iter().map(|s| report(s)).collect();
        reports.push(classify_matrix_family(2, FieldKind::Infinite, &Caps::default()).unwrap().report);
        let check = projective_free_check(&reports);
        assert!(check.passed());
        assert_eq!(check.finite_counterexamples(), vec!["M(2,GF(2))"]);
        let z4 = &check.entries[1];
        assert!(z4.frees_elementary && z4.projective_equals_free && z4.status == FreeProjectiveStatus::Equivalent);
        let sym = &check.entries[2];
        assert!(!sym.frees_elementary && !sym.projective_equals_free && sym.infinite);
    }
}
