//! The built-in ring corpus and the generated families of test modules.

use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::module::{enumerate_submodules, FiniteModule};
use crate::ring::{build_ring_with, FiniteRing};

/// Frozen corpus, in output order.
pub const BUILTIN_CORPUS: [&str; 12] = [
    "GF(2)",
    "GF(3)",
    "GF(4)",
    "Z/4",
    "Z/6",
    "Z/8",
    "Z/12",
    "PolyQuot(GF(2),[0,0,1])",
    "T(2,GF(2))",
    "M(2,GF(2))",
    "M(2,GF(3))",
    "GF(2) x M(2,GF(2))",
];

/// Largest number of submodules enumerated per generating module.
pub const SUBMODULE_LIMIT: usize = 512;

pub fn corpus_specs(name: &str) -> Result<Vec<String>> {
    match name {
        "builtin" => Ok(BUILTIN_CORPUS.iter().map(|s| s.to_string()).collect()),
        other => Err(Error::Argument(format!("unknown corpus `{other}` (available: builtin)"))),
    }
}

pub fn builtin_rings(caps: &Caps) -> Result<Vec<Arc<FiniteRing>>> {
    BUILTIN_CORPUS.iter().map(|s| build_ring_with(s, caps).map(Arc::new)).collect()
}

/// `Z/6` with the product `2 * 3` changed from `0` to `1`.  Not a ring;
/// used as a negative control.
pub fn corrupted_ring() -> FiniteRing {
    let mut table: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| a * b % 6).collect()).collect();
    table[2][3] = 1;
    FiniteRing::from_table_unchecked("Z/6 (corrupted)", AbelianGroup::new(vec![6]), 1, &table)
}

/// Every quotient of `R` and of `R^2` (the latter when it fits the module
/// cap), one per submodule, in submodule order.
pub fn test_modules(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<Vec<Arc<FiniteModule>>> {
    let mut out = Vec::new();
    for rank in 1..=2 {
        let fits = (ring.size() as u128).pow(rank) <= caps.max_module as u128;
        if !fits {
            continue;
        }
        let free = FiniteModule::free(ring, rank as usize, caps)?;
        let subs = enumerate_submodules(&free, SUBMODULE_LIMIT)
            .ok_or(Error::Cap { what: "submodule enumeration", cap: SUBMODULE_LIMIT as u64 })?;
        for (i, sub) in subs.iter().enumerate() {
            let (q, _) = free.quotient(sub, caps)?;
            out.push(Arc::new(q.with_label(format!("{}/K{i}", free.label()))));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_ring_axioms;

    #[test]
    fn corpus_builds() {
        let rings = builtin_rings(&Caps::default()).unwrap();
        let sizes: Vec<usize> = rings.iter().map(|r| r.size()).collect();
        assert_eq!(sizes, vec![2, 3, 4, 4, 6, 8, 12, 4, 8, 16, 81, 32]);
    }

    #[test]
    fn corrupted_ring_fails_axioms() {
        let r = corrupted_ring();
        assert!(!verify_ring_axioms(&r, &Caps::default()).all_passed());
    }

    #[test]
    fn module_family() {
        let caps = Caps::default();
        let z4 = Arc::new(build_ring_with("Z/4", &caps).unwrap());
        let fam = test_modules(&z4, &caps).unwrap();
        // Z/4 has 3 submodules, (Z/4)^2 has 15
        assert_eq!(fam.len(), 3 + 15);
        assert!(fam.iter().any(|m| m.size() == 2));
    }
}
