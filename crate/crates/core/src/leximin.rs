//! The leximin++ ordering on allocations and the local-search solver for
//! identical agents.
//!
//! Allocations are compared by listing `(utility, cardinality)` pairs from
//! the worst-off agent upward (ties between agents broken by agent index) and
//! comparing those lists lexicographically. A local maximum of this order
//! under single-good moves is an EFX allocation whenever the shared valuation
//! is monotone; when it is not, the failed improvement step exposes a
//! concrete monotonicity violation.

use serde::{Deserialize, Serialize};

use crate::allocation::{allocation_count, Allocation, MonotonicityViolation};
use crate::bundle::GoodId;
use crate::error::Result;
use crate::limits::Limits;
use crate::valuation::{Memo, Valuation};
use crate::value::Value;

/// Comparison key for the leximin++ order: `(utility, cardinality)` pairs
/// sorted from the worst-off agent to the best-off.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LeximinKey(pub Vec<(Value, usize)>);

/// Key of `x` under the shared valuation `v`.
pub fn leximin_key(v: &Valuation, x: &Allocation) -> Result<LeximinKey> {
    let utils = (0..x.agents())
        .map(|i| v.value(x.bundle(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(key_from_utilities(&utils, x))
}

fn key_from_utilities(utils: &[Value], x: &Allocation) -> LeximinKey {
    let mut order: Vec<usize> = (0..x.agents()).collect();
    order.sort_by(|&a, &b| utils[a].cmp(&utils[b]).then(a.cmp(&b)));
    LeximinKey(
        order
            .into_iter()
            .map(|i| (utils[i].clone(), x.bundle(i).cardinality()))
            .collect(),
    )
}

/// Answer to the identical-agents EFX search problem: an EFX allocation, or
/// a re-checkable witness that the valuation is not monotone.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdenticalEfxSolution {
    Efx { allocation: Allocation },
    NonMonotone { violation: MonotonicityViolation },
}

/// Local search for an EFX allocation among `n` agents sharing `v`.
///
/// Starts from the allocation where agent 0 holds everything and repeatedly
/// applies the targeted improving move: pick the worst-off agent (last among
/// ties in the agent ordering), move over a good whose removal it still
/// envies, and confirm that the leximin++ key strictly increased. A failed
/// confirmation can only happen on non-monotone input, in which case the
/// allocation-local scan is guaranteed to surface a violation.
pub fn leximinpp_local_search(v: &Valuation, n: usize) -> IdenticalEfxSolution {
    leximinpp_local_search_traced(v, n).0
}

/// As [`leximinpp_local_search`], also reporting the number of improving
/// moves taken.
pub fn leximinpp_local_search_traced(v: &Valuation, n: usize) -> (IdenticalEfxSolution, u64) {
    assert!(n >= 1, "at least one agent");
    let m = v.goods();
    let memo = Memo::new(v);
    let mut x = Allocation::all_to_first(n, m);
    let mut steps = 0u64;

    loop {
        let utils: Vec<Value> = (0..n).map(|i| memo.value(x.bundle(i))).collect();

        // EFX scan; the lexicographically smallest violation is only used to
        // decide whether we are done.
        let violation = find_efx_violation(&memo, &x, &utils);
        let Some(_) = violation else {
            return (IdenticalEfxSolution::Efx { allocation: x }, steps);
        };

        // The improving move targets the worst-off agent; among tied minima
        // take the one appearing last in the tie-broken agent ordering,
        // i.e. the largest index.
        let min_util = utils.iter().min().expect("n >= 1");
        let receiver = (0..n)
            .rev()
            .find(|&i| &utils[i] == min_util)
            .expect("n >= 1");

        // Smallest (j, g) the receiver still envies after removing g.
        let mut donor: Option<(usize, GoodId)> = None;
        'scan: for j in 0..n {
            if j == receiver {
                continue;
            }
            for g in x.bundle(j).iter() {
                if utils[receiver] < memo.value(&x.bundle(j).without(g)) {
                    donor = Some((j, g));
                    break 'scan;
                }
            }
        }

        let Some((j, g)) = donor else {
            // Every violation involves the receiver's own bundle: removing
            // some good from it raises its value, which is itself a
            // monotonicity violation.
            for g in x.bundle(receiver).iter() {
                let smaller = x.bundle(receiver).without(g);
                if memo.value(&smaller) > utils[receiver] {
                    return (
                        IdenticalEfxSolution::NonMonotone {
                            violation: MonotonicityViolation {
                                s: smaller,
                                t: *x.bundle(receiver),
                            },
                        },
                        steps,
                    );
                }
            }
            unreachable!("EFX violation exists but neither a donor nor a self-violation found");
        };

        let moved = x.moved(j, receiver, g);
        let old_key = key_from_utilities(&utils, &x);
        let new_utils: Vec<Value> = (0..n).map(|i| memo.value(moved.bundle(i))).collect();
        let new_key = key_from_utilities(&new_utils, &moved);

        if new_key > old_key {
            x = moved;
            steps += 1;
            continue;
        }

        // The move is guaranteed to improve the key on monotone input, so a
        // non-improving move means the current allocation yields a
        // monotonicity violation somewhere; find it.
        let violation = crate::allocation::find_monotonicity_violation(v, &x)
            .expect("leximin++ move failed to improve on a locally monotone allocation");
        return (IdenticalEfxSolution::NonMonotone { violation }, steps);
    }
}

fn find_efx_violation(
    memo: &Memo,
    x: &Allocation,
    utils: &[Value],
) -> Option<(usize, usize, GoodId)> {
    for (i, own) in utils.iter().enumerate() {
        for j in 0..x.agents() {
            if j == i {
                continue;
            }
            for g in x.bundle(j).iter() {
                if *own < memo.value(&x.bundle(j).without(g)) {
                    return Some((i, j, g));
                }
            }
        }
    }
    None
}

/// Exhaustively finds the allocation with the greatest leximin++ key.
pub fn brute_force_leximinpp_max(v: &Valuation, n: usize, limits: &Limits) -> Result<Allocation> {
    let m = v.goods();
    let count = allocation_count(n, m, limits)?;
    let memo = Memo::new(v);
    let mut best: Option<(LeximinKey, Allocation)> = None;
    for code in 0..count {
        let x = Allocation::from_code(code, n, m);
        let utils: Vec<Value> = (0..n).map(|i| memo.value(x.bundle(i))).collect();
        let key = key_from_utilities(&utils, &x);
        match &best {
            Some((best_key, _)) if *best_key >= key => {}
            _ => best = Some((key, x)),
        }
    }
    Ok(best.expect("at least one allocation exists").1)
}
