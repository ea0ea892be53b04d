//! Size and enumeration limits shared by every engine operation.

/// Environment variable overriding [`Caps::max_ring`].
pub const MAX_SIZE_ENV: &str = "MODCLASS_MAX_SIZE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest ring carrier that may be constructed.
    pub max_ring: usize,
    /// Largest module carrier that may be constructed.
    pub max_module: usize,
    /// Budget for homomorphism search nodes and other exhaustive scans.
    pub max_homs: u64,
    /// Rings up to this size get exhaustive axiom checks; larger ones are sampled.
    pub axiom_exhaustive: usize,
    /// Number of random triples checked above `axiom_exhaustive`.
    pub axiom_samples: usize,
    /// Rings up to this size get full ideal-lattice enumeration.
    pub ideal_enum: usize,
    /// Multiplication is stored as a full table up to this size.
    pub full_table: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ring: 4096,
            max_module: 4096,
            max_homs: 1_000_000,
            axiom_exhaustive: 256,
            axiom_samples: 100_000,
            ideal_enum: 64,
            full_table: 4096,
        }
    }
}

impl Caps {
    /// Defaults, with `MODCLASS_MAX_SIZE` applied when set to a valid integer.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(n) = std::env::var(MAX_SIZE_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            caps.max_ring = n;
        }
        caps
    }
}
