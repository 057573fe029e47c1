//! Exact-arithmetic toolkit for EFX fair division of indivisible goods.
//!
//! The crate provides:
//!
//! - valuation functions (additive, budget-additive, unit-demand, OXS
//!   matchings, explicit tables, composed rules) over bit-vector bundles,
//!   evaluated in exact rational arithmetic;
//! - brute-force checkers for monotonicity, submodularity, cancelability and
//!   the weakly-well-layered property, each returning re-checkable witnesses;
//! - the greedy EFX solver for identical agents, cut-and-choose for two
//!   agents, and the leximin++ local-search solver;
//! - boolean circuits with integer outputs, a combinational block library,
//!   and the reduction pipeline flip -> Kneser -> identical-agent EFX with
//!   verified solution back-mappings.

pub mod allocation;
pub mod bundle;
pub mod canonical;
pub mod checks;
pub mod circuit;
pub mod error;
pub mod gen;
pub mod greedy;
pub mod instance;
pub mod leximin;
pub mod limits;
pub mod pls;
pub mod reduction;
pub mod valuation;
pub mod value;

pub use allocation::{
    brute_force_efx, efx_violation_partial, find_monotonicity_violation, is_efx, is_efx_identical,
    is_envy_free, single_move_neighbors, Allocation, EfxVerdict, EnvyVerdict,
    MonotonicityViolation,
};
pub use bundle::{Bundle, GoodId};
pub use canonical::{
    budget_cap_example, canonical_examples, greedy_trap_example, pair_synergy_example,
    CanonicalExample, ExpectedVerdicts,
};
pub use checks::{
    check_cancelable, check_monotone, check_submodular, check_weakly_well_layered,
    check_well_layered_at_price, greedy_trajectories, greedy_with_prices, CancelabilityWitness,
    CheckOutcome, LayeredWitness, SubmodularityWitness,
};
pub use circuit::{
    adder, comparator_lt, compose, const_k, equality, hamming_distance, identity, min_of, mux,
    negate_outputs, parse_circuit, parse_dsl, BoolCircuit, CircuitBuilder, CircuitValue, Gate,
};
pub use error::{Error, Result};
pub use gen::SplitMix64;
pub use greedy::{
    cut_and_choose, greedy_efx, greedy_efx_seeded, greedy_partial_efx_invariant, GreedyTrace,
    TraceStep,
};
pub use instance::Instance;
pub use leximin::{
    brute_force_leximinpp_max, leximin_key, leximinpp_local_search, leximinpp_local_search_traced,
    IdenticalEfxSolution, LeximinKey,
};
pub use limits::Limits;
pub use pls::{
    is_local_optimum, local_search, Direction, FlipInstance, KneserInstance, LocalSearchInstance,
    Pivot, SearchOutcome,
};
pub use reduction::{
    end_to_end, flip_to_kneser, kneser_to_efx, lift_two_to_n, map_back_flip, map_back_kneser,
    BackMap, FlipToKneserArtifact, KneserToEfxArtifact, KneserValuation, LiftArtifact, PipelineRun,
};
pub use valuation::Valuation;
pub use value::{PriceVector, Value};
