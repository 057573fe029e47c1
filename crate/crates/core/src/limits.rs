//! Brute-force size limits.
//!
//! Every exhaustive procedure takes an explicit cap and fails loudly when an
//! instance exceeds it; nothing ever falls back to silent sampling.

/// Table valuations store `2^m` entries; hard cap on `m`.
pub const TABLE_GOODS_LIMIT: usize = 24;

/// Output width cap for circuits fed into the EFX reduction (the scale factor
/// is `2^(2^w - 1)`, so this grows doubly exponentially).
pub const KNESER_CIRCUIT_WIDTH_LIMIT: usize = 16;

/// Caps for the exhaustive checkers and enumerators.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Max goods for the pairwise brute-force checks (monotone, submodular,
    /// cancelable).
    pub brute_force_goods: usize,
    /// Max goods for the weakly-well-layered / well-layered-at-price scans.
    pub layered_goods: usize,
    /// Max ground-set size for exhaustive greedy trajectory enumeration.
    pub trajectory_goods: usize,
    /// Max number of allocations (`n^m`) a brute-force enumeration may visit.
    pub enumeration: u64,
    /// Max feasible-point width for the generic local-search runner.
    pub search_width: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force_goods: 16,
            layered_goods: 10,
            trajectory_goods: 12,
            enumeration: 20_000_000,
            search_width: 32,
        }
    }
}

impl Limits {
    /// Scales the per-kind caps from one headline figure, as exposed by the
    /// CLI `--limit` flag and the `EFXLAB_LIMIT` environment variable.
    pub fn with_enumeration(mut self, cap: u64) -> Self {
        self.enumeration = cap;
        self
    }
}
