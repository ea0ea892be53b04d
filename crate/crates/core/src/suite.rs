//! Corpus-wide consistency checks shared by `check-paper` and the
//! acceptance run.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::classify::{
    classify_matrix_family, classify_with, projective_free_check, verify_implication_chain, ClassificationReport,
    FieldKind,
};
use crate::decompose::{Decomposer, Signature};
use crate::error::{Error, Result};
use crate::ideal::jacobson_radical;
use crate::module::FiniteModule;
use crate::pp::{baur_monk_invariant, FormulaLibrary, Invariant, PPFormula};
use crate::property::{is_free_module, is_projective_module, FlatWitness, FlatnessTester, DEFAULT_RELATION_BOUND};
use crate::ring::{verify_ring_axioms, FiniteRing};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl CheckOutcome {
    fn new(name: &str, start: Instant, instances: usize, skipped: usize, failures: Vec<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: failures.is_empty(),
            instances,
            skipped,
            failures,
            elapsed: start.elapsed(),
        }
    }
}

/// Ring axioms on every ring; returns the rings that pass.
pub fn ring_axioms(rings: &[Arc<FiniteRing>], caps: &Caps) -> (CheckOutcome, Vec<Arc<FiniteRing>>) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut good = Vec::new();
    for r in rings {
        let rep = verify_ring_axioms(r, caps);
        match rep.first_failure() {
            Some(f) => failures.push(format!("{}: {f}", r.label())),
            None => good.push(r.clone()),
        }
    }
    (CheckOutcome::new("ring axioms", start, rings.len(), 0, failures), good)
}

/// Classification of each ring in parallel, in input order.
pub fn classify_all(decs: &[Decomposer]) -> Result<Vec<ClassificationReport>> {
    decs.par_iter().map(classify_with).collect()
}

pub fn engines(rings: &[Arc<FiniteRing>], caps: &Caps) -> Result<Vec<Decomposer>> {
    rings.par_iter().map(|r| Decomposer::new(r.clone(), caps)).collect()
}

/// Implication chain and the frees/projectives comparison over the reports
/// plus the symbolic `M(2, F)` entry.
pub fn implication_chain(reports: &[ClassificationReport], caps: &Caps) -> Result<CheckOutcome> {
    let start = Instant::now();
    let mut all = reports.to_vec();
    all.push(classify_matrix_family(2, FieldKind::Infinite, caps)?.report);
    let chain = verify_implication_chain(&all);
    let pf = projective_free_check(&all);
    let mut failures: Vec<String> =
        chain.violations.iter().chain(&pf.violations).map(|v| format!("{}: {} ({})", v.ring, v.rule, v.detail)).collect();
    let symbolic = all.last().map(|r| r.ring_label.clone()).unwrap_or_default();
    if chain.strict_ii_not_iv != vec![symbolic] {
        failures.push(format!("(II) without (IV) found in {:?}, expected only the symbolic entry", chain.strict_ii_not_iv));
    }
    Ok(CheckOutcome::new("implication chain", start, all.len(), 0, failures))
}

#[derive(Clone, Debug, Serialize)]
pub struct NonFlatInstance {
    pub ring: String,
    pub module: String,
    pub witness: FlatWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatOutcome {
    pub outcome: CheckOutcome,
    pub non_flat: Vec<NonFlatInstance>,
}

/// Modules checked, modules skipped, failures, non-flat instances.
type RingFlat = (usize, usize, Vec<String>, Vec<NonFlatInstance>);

/// Flat iff projective on every generated test module, together with
/// free => projective => flat and "semisimple => all projective".
pub fn flat_projective(decs: &[Decomposer], caps: &Caps) -> Result<FlatOutcome> {
    let start = Instant::now();
    let per_ring: Vec<Result<RingFlat>> = decs
        .par_iter()
        .map(|dec| {
            let ring = dec.ring();
            let modules = crate::corpus::test_modules(ring, caps)?;
            let tester = FlatnessTester::new(ring, DEFAULT_RELATION_BOUND, caps)?;
            let semisimple = jacobson_radical(ring)?.is_zero();
            let (mut checked, mut skipped) = (0, 0);
            let mut failures = Vec::new();
            let mut non_flat = Vec::new();
            for m in &modules {
                let name = format!("{} over {}", m.label(), ring.label());
                let flat = match tester.check(dec, m) {
                    Ok(v) => v,
                    Err(e) if e.is_cap() => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => {
                        failures.push(format!("{name}: {e}"));
                        continue;
                    }
                };
                checked += 1;
                let free = is_free_module(dec, m)?.free;
                let proj = is_projective_module(dec, m)?.projective;
                if !flat.exact {
                    failures.push(format!("{name}: flatness only up to bound"));
                }
                if flat.flat != proj {
                    failures.push(format!("{name}: flat={} projective={proj}", flat.flat));
                }
                if free && !proj {
                    failures.push(format!("{name}: free but not projective"));
                }
                if semisimple && !proj {
                    failures.push(format!("{name}: not projective over a semisimple ring"));
                }
                if let Some(w) = flat.witness {
                    non_flat.push(NonFlatInstance { ring: ring.label().into(), module: m.label().into(), witness: w });
                }
            }
            Ok((checked, skipped, failures, non_flat))
        })
        .collect();
    let (mut instances, mut skipped, mut failures, mut non_flat) = (0, 0, Vec::new(), Vec::new());
    for r in per_ring {
        let (c, s, f, n) = r?;
        instances += c;
        skipped += s;
        failures.extend(f);
        non_flat.extend(n);
    }
    if non_flat.is_empty() {
        failures.push("no non-flat module found in the family".into());
    }
    Ok(FlatOutcome { outcome: CheckOutcome::new("flat iff projective", start, instances, skipped, failures), non_flat })
}

/// Test modules with one representative per isomorphism class.
fn distinct_modules(dec: &Decomposer, caps: &Caps) -> Result<Vec<Arc<FiniteModule>>> {
    let mut seen: HashMap<Signature, ()> = HashMap::new();
    let mut out = Vec::new();
    for m in crate::corpus::test_modules(dec.ring(), caps)? {
        if seen.insert(dec.signature(&m)?, ()).is_none() {
            out.push(m);
        }
    }
    Ok(out)
}

/// `Inv(M + N) = Inv(M) Inv(N)` for every library pair and every pair of
/// test modules (one per isomorphism class) whose evaluation fits the caps.
pub fn invariant_multiplicativity(decs: &[Decomposer], library: &FormulaLibrary, caps: &Caps) -> Result<CheckOutcome> {
    let start = Instant::now();
    library.validate()?;
    let per_ring: Vec<Result<(usize, usize, Vec<String>)>> = decs
        .par_iter()
        .map(|dec| {
            let ring = dec.ring();
            let modules = distinct_modules(dec, caps)?;
            let formulas: Vec<(String, PPFormula, PPFormula)> = library
                .pairs
                .iter()
                .map(|p| Ok((p.name.clone(), p.phi.instantiate(ring)?, p.psi.instantiate(ring)?)))
                .collect::<Result<_>>()?;
            let inv = |m: &FiniteModule, phi: &PPFormula, psi: &PPFormula| -> Result<Option<Invariant>> {
                match baur_monk_invariant(m, phi, psi, caps) {
                    Ok(v) => Ok(Some(v)),
                    Err(e) if e.is_cap() => Ok(None),
                    Err(e) => Err(e),
                }
            };
            let single: Vec<Vec<Option<Invariant>>> = modules
                .iter()
                .map(|m| formulas.iter().map(|(_, phi, psi)| inv(m, phi, psi)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            let (mut checked, mut skipped, mut failures) = (0, 0, Vec::new());
            for i in 0..modules.len() {
                for j in i..modules.len() {
                    let (a, b) = (&modules[i], &modules[j]);
                    let bound = formulas.iter().map(|f| f.1.bound.max(f.2.bound)).max().unwrap_or(0) as u32;
                    let size = (a.size() * b.size()) as u128;
                    if size.pow(bound + 1) > caps.max_homs as u128 || size > caps.max_module as u128 {
                        // the sum is too large for some formula; try those that fit
                        if size > caps.max_module as u128 {
                            skipped += formulas.len();
                            continue;
                        }
                    }
                    let sum = a.direct_sum(b, caps)?;
                    for (k, (name, phi, psi)) in formulas.iter().enumerate() {
                        let (Some(x), Some(y)) = (single[i][k], single[j][k]) else {
                            skipped += 1;
                            continue;
                        };
                        match inv(&sum, phi, psi)? {
                            Some(z) => {
                                checked += 1;
                                if z.index != x.index * y.index {
                                    failures.push(format!(
                                        "{}: `{name}` on {} (+) {}: {} != {} * {}",
                                        ring.label(),
                                        a.label(),
                                        b.label(),
                                        z.index,
                                        x.index,
                                        y.index
                                    ));
                                }
                            }
                            None => skipped += 1,
                        }
                    }
                }
            }
            Ok((checked, skipped, failures))
        })
        .collect();
    let (mut instances, mut skipped, mut failures) = (0, 0, Vec::new());
    for r in per_ring {
        let (c, s, f) = r?;
        instances += c;
        skipped += s;
        failures.extend(f);
    }
    Ok(CheckOutcome::new("invariant multiplicativity", start, instances, skipped, failures))
}

/// Signatures of `R` and `R^2` under several randomized search orders must
/// agree with the deterministic ones.
pub fn krull_schmidt_determinism(rings: &[Arc<FiniteRing>], seeds: &[u64], caps: &Caps) -> Result<CheckOutcome> {
    let start = Instant::now();
    let per_ring: Vec<Result<(usize, Vec<String>)>> = rings
        .par_iter()
        .map(|ring| {
            let mut modules = vec![Arc::new(FiniteModule::free(ring, 1, caps)?)];
            if (ring.size() as u128).pow(2) <= caps.max_module as u128 {
                modules.push(Arc::new(FiniteModule::free(ring, 2, caps)?));
            }
            let base = Decomposer::new(ring.clone(), caps)?;
            let expected: Vec<Signature> = modules.iter().map(|m| base.signature(m)).collect::<Result<_>>()?;
            let mut failures = Vec::new();
            let mut checked = 0;
            for &seed in seeds {
                let dec = Decomposer::with_seed(ring.clone(), caps, seed)?;
                for (m, want) in modules.iter().zip(&expected) {
                    let got = dec.signature(m)?;
                    checked += 1;
                    if &got != want {
                        failures.push(format!("{} seed {seed}: {got} != {want}", m.label()));
                    }
                }
            }
            Ok((checked, failures))
        })
        .collect();
    let (mut instances, mut failures) = (0, Vec::new());
    for r in per_ring {
        let (c, f) = r?;
        instances += c;
        failures.extend(f);
    }
    Ok(CheckOutcome::new("Krull-Schmidt determinism", start, instances, 0, failures))
}

/// A local ring with one indecomposable projective has `P = R`.
pub fn local_rings(decs: &[Decomposer], reports: &[ClassificationReport]) -> Result<CheckOutcome> {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (dec, r) in decs.iter().zip(reports) {
        if !(r.is_local && r.k == 1) {
            continue;
        }
        checked += 1;
        let caps = dec.caps();
        let reg = Arc::new(FiniteModule::regular(dec.ring(), caps)?);
        let p = dec.ring_decomposition().representatives[0].clone();
        if r.multiplicities() != vec![1] || !dec.is_isomorphic(&p, &reg)?.isomorphic {
            failures.push(format!("{}: local with k = 1 but P is not R", r.ring_label));
        }
    }
    Ok(CheckOutcome::new("local rings have P = R", start, checked, 0, failures))
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperCheck {
    pub rings: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub reports: Vec<ClassificationReport>,
}

impl PaperCheck {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Every corpus-level check.  Rings failing the axiom check are reported
/// and left out of the remaining checks.
pub fn check_paper(rings: &[Arc<FiniteRing>], seeds: &[u64], caps: &Caps) -> Result<PaperCheck> {
    let (axioms, good) = ring_axioms(rings, caps);
    let decs = engines(&good, caps)?;
    let reports = classify_all(&decs)?;
    let mut checks = vec![axioms];
    checks.push(implication_chain(&reports, caps)?);
    checks.push(flat_projective(&decs, caps)?.outcome);
    checks.push(invariant_multiplicativity(&decs, &FormulaLibrary::builtin(), caps)?);
    checks.push(krull_schmidt_determinism(&good, seeds, caps)?);
    checks.push(local_rings(&decs, &reports)?);
    if checks.iter().any(|c| c.instances == 0 && c.name != "local rings have P = R") {
        return Err(Error::Consistency("a corpus check ran on no instances".into()));
    }
    Ok(PaperCheck { rings: rings.iter().map(|r| r.label().to_string()).collect(), checks, reports })
}
