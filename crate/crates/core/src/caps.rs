/// Search and size limits shared by every pipeline. Hitting any of them is
/// reported as an error, never by silently truncating a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest carrier |T| accepted by constructions, validation and K-pipelines.
    pub carrier: usize,
    /// Largest matrix size k for idempotents in the projective classification.
    pub rank: usize,
    /// Number of levels of the automorphism tower.
    pub k1_levels: usize,
    /// Largest semimodule carrier handed to the isomorphism search.
    pub iso: usize,
    /// Largest number of candidates a brute-force enumeration may visit.
    pub budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            carrier: 16,
            rank: 2,
            k1_levels: 2,
            iso: 64,
            budget: 1 << 20,
        }
    }
}

impl Caps {
    pub fn with_carrier(mut self, carrier: usize) -> Self {
        self.carrier = carrier;
        self
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_k1_levels(mut self, levels: usize) -> Self {
        self.k1_levels = levels;
        self
    }

    pub fn with_iso(mut self, iso: usize) -> Self {
        self.iso = iso;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub(crate) fn check_carrier(&self, what: &'static str, size: u64) -> crate::Result<()> {
        if size > self.carrier as u64 {
            return Err(crate::Error::CapExceeded {
                what,
                limit: self.carrier as u64,
                actual: size,
            });
        }
        Ok(())
    }

    pub(crate) fn check_iso(&self, what: &'static str, size: u64) -> crate::Result<()> {
        if size > self.iso as u64 {
            return Err(crate::Error::CapExceeded {
                what,
                limit: self.iso as u64,
                actual: size,
            });
        }
        Ok(())
    }
}

/// Which maps count as module morphisms.
///
/// `Right` uses right-linear maps of free right modules (matrices under the
/// unit-weighted product). `StrictBimodule` additionally demands commuting
/// with the left action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModuleMode {
    #[default]
    Right,
    StrictBimodule,
}

/// `base^exp` as u64, saturating.
pub(crate) fn pow_sat(base: usize, exp: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u64);
    }
    acc
}
