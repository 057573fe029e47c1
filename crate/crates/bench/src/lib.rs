//! Shared fixtures for the criterion benches.

use efxlab_core::{gen, FlipInstance, Valuation};

/// A mid-sized budget-additive valuation for the greedy benches.
pub fn budget_valuation() -> Valuation {
    gen::budget_additive(8, 17)
}

/// A monotone table for the local-search benches.
pub fn table_valuation() -> Valuation {
    gen::monotone_table(7, 23)
}

/// A random flip objective for the reduction benches.
pub fn flip_instance(p: usize) -> FlipInstance {
    FlipInstance::new(gen::flip_circuit(p, 30, 4, 99)).expect("generator emits valid circuits")
}
