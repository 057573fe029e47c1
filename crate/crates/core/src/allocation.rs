//! Allocations and the envy-based verifiers.

use serde::{Deserialize, Serialize};

use crate::bundle::{Bundle, GoodId};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::valuation::{Memo, Valuation};
use crate::value::Value;

/// An ordered list of pairwise-disjoint bundles, one per agent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Allocation {
    bundles: Vec<Bundle>,
    m: usize,
}

impl Allocation {
    pub fn new(bundles: Vec<Bundle>) -> Result<Self> {
        let m = bundles.first().map_or(0, Bundle::width);
        let mut seen = Bundle::empty(m);
        for b in &bundles {
            if b.width() != m {
                return Err(Error::WidthMismatch {
                    expected: m,
                    got: b.width(),
                });
            }
            if !b.is_disjoint_from(&seen) {
                return Err(Error::OverlappingBundles);
            }
            seen = seen.union(b);
        }
        Ok(Allocation { bundles, m })
    }

    /// Allocation in which one agent holds every good.
    pub fn all_to_first(n: usize, m: usize) -> Self {
        let mut bundles = vec![Bundle::empty(m); n];
        bundles[0] = Bundle::full(m);
        Allocation { bundles, m }
    }

    /// Decodes `digits` of an `n`-ary counter: good `g` goes to agent
    /// `(code / n^g) % n`.
    pub fn from_code(code: u64, n: usize, m: usize) -> Self {
        let mut bundles = vec![Bundle::empty(m); n];
        let mut rest = code;
        for g in 0..m {
            let agent = (rest % n as u64) as usize;
            rest /= n as u64;
            bundles[agent] = bundles[agent].with(GoodId(g));
        }
        Allocation { bundles, m }
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn goods(&self) -> usize {
        self.m
    }

    pub fn bundle(&self, agent: usize) -> &Bundle {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn is_complete(&self) -> bool {
        self.bundles
            .iter()
            .fold(Bundle::empty(self.m), |acc, b| acc.union(b))
            == Bundle::full(self.m)
    }

    /// Moves good `g` from agent `from` to agent `to`.
    #[must_use]
    pub fn moved(&self, from: usize, to: usize, g: GoodId) -> Allocation {
        debug_assert!(self.bundles[from].contains(g));
        let mut bundles = self.bundles.clone();
        bundles[from] = bundles[from].without(g);
        bundles[to] = bundles[to].with(g);
        Allocation { bundles, m: self.m }
    }
}

#[derive(Serialize, Deserialize)]
struct AllocationRepr {
    n: usize,
    m: usize,
    bundles: Vec<Vec<usize>>,
}

impl Serialize for Allocation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AllocationRepr {
            n: self.agents(),
            m: self.m,
            bundles: self.bundles.iter().map(Bundle::goods).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Allocation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = AllocationRepr::deserialize(d)?;
        if repr.bundles.len() != repr.n {
            return Err(D::Error::custom(format!(
                "allocation declares n={} but lists {} bundles",
                repr.n,
                repr.bundles.len()
            )));
        }
        let bundles = repr
            .bundles
            .iter()
            .map(|goods| Bundle::from_goods(goods, repr.m))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Allocation::new(bundles).map_err(D::Error::custom)
    }
}

/// Outcome of the EFX check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EfxVerdict {
    Ok,
    /// Agent `i` envies agent `j` even after removing good `g` from `j`'s
    /// bundle: `v_i(X_i) < v_i(X_j - g)`.
    Violation {
        i: usize,
        j: usize,
        g: usize,
    },
}

impl EfxVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, EfxVerdict::Ok)
    }
}

/// Outcome of the plain envy-freeness check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EnvyVerdict {
    Ok,
    /// `v_i(X_i) < v_i(X_j)`.
    Violation {
        i: usize,
        j: usize,
    },
}

impl EnvyVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, EnvyVerdict::Ok)
    }
}

/// A witnessed failure of monotonicity: `s` is a subset of `t`, yet
/// `v(s) > v(t)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    #[serde(with = "bundle_as_goods")]
    pub s: Bundle,
    #[serde(with = "bundle_as_goods")]
    pub t: Bundle,
}

impl MonotonicityViolation {
    /// Re-evaluates the witness against `v`.
    pub fn verify(&self, v: &Valuation) -> bool {
        self.s.is_subset_of(&self.t)
            && match (v.value(&self.s), v.value(&self.t)) {
                (Ok(vs), Ok(vt)) => vs > vt,
                _ => false,
            }
    }
}

/// Serializes a bundle as a sorted list of good ids plus the width.
pub(crate) mod bundle_as_goods {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        m: usize,
        goods: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(b: &Bundle, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            m: b.width(),
            goods: b.goods(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Bundle, D::Error> {
        use serde::de::Error as _;
        let repr = Repr::deserialize(d)?;
        Bundle::from_goods(&repr.goods, repr.m).map_err(D::Error::custom)
    }
}

fn check_widths(valuations: &[&Valuation], x: &Allocation) -> Result<()> {
    if valuations.len() != x.agents() {
        return Err(Error::WidthMismatch {
            expected: x.agents(),
            got: valuations.len(),
        });
    }
    for v in valuations {
        if v.goods() != x.goods() {
            return Err(Error::WidthMismatch {
                expected: x.goods(),
                got: v.goods(),
            });
        }
    }
    Ok(())
}

/// Core EFX scan over a (possibly partial) allocation. Returns the
/// lexicographically smallest violating `(i, j, g)`.
pub fn efx_violation_partial(valuations: &[&Valuation], x: &Allocation) -> Result<EfxVerdict> {
    check_widths(valuations, x)?;
    for (i, v_i) in valuations.iter().enumerate() {
        let own = v_i.value(x.bundle(i))?;
        for j in 0..x.agents() {
            if j == i {
                continue;
            }
            for g in x.bundle(j).iter() {
                let reduced = v_i.value(&x.bundle(j).without(g))?;
                if own < reduced {
                    return Ok(EfxVerdict::Violation { i, j, g: g.0 });
                }
            }
        }
    }
    Ok(EfxVerdict::Ok)
}

/// EFX check for a complete allocation.
pub fn is_efx(valuations: &[Valuation], x: &Allocation) -> Result<EfxVerdict> {
    if !x.is_complete() {
        return Err(Error::IncompleteAllocation);
    }
    let refs: Vec<&Valuation> = valuations.iter().collect();
    efx_violation_partial(&refs, x)
}

/// EFX check when all agents share a single valuation.
pub fn is_efx_identical(v: &Valuation, x: &Allocation) -> Result<EfxVerdict> {
    if !x.is_complete() {
        return Err(Error::IncompleteAllocation);
    }
    let refs: Vec<&Valuation> = (0..x.agents()).map(|_| v).collect();
    efx_violation_partial(&refs, x)
}

/// Plain envy-freeness: every agent weakly prefers its own bundle.
pub fn is_envy_free(valuations: &[Valuation], x: &Allocation) -> Result<EnvyVerdict> {
    if !x.is_complete() {
        return Err(Error::IncompleteAllocation);
    }
    let refs: Vec<&Valuation> = valuations.iter().collect();
    check_widths(&refs, x)?;
    for (i, v_i) in valuations.iter().enumerate() {
        let own = v_i.value(x.bundle(i))?;
        for j in 0..x.agents() {
            if j != i && own < v_i.value(x.bundle(j))? {
                return Ok(EnvyVerdict::Violation { i, j });
            }
        }
    }
    Ok(EnvyVerdict::Ok)
}

/// Scans the allocation-local neighborhood of each bundle for a monotonicity
/// violation: a good whose removal raises a bundle's value or whose addition
/// lowers it. Returns the first hit (agents ascending, goods ascending).
pub fn find_monotonicity_violation(v: &Valuation, x: &Allocation) -> Option<MonotonicityViolation> {
    for i in 0..x.agents() {
        let own = v.value(x.bundle(i)).ok()?;
        for g in 0..x.goods() {
            let g = GoodId(g);
            if x.bundle(i).contains(g) {
                let smaller = x.bundle(i).without(g);
                if v.value(&smaller).ok()? > own {
                    return Some(MonotonicityViolation {
                        s: smaller,
                        t: *x.bundle(i),
                    });
                }
            } else {
                let larger = x.bundle(i).with(g);
                if v.value(&larger).ok()? < own {
                    return Some(MonotonicityViolation {
                        s: *x.bundle(i),
                        t: larger,
                    });
                }
            }
        }
    }
    None
}

/// All allocations reachable by moving one good to a different agent.
pub fn single_move_neighbors(x: &Allocation) -> impl Iterator<Item = Allocation> + '_ {
    let n = x.agents();
    (0..n).flat_map(move |j| {
        x.bundle(j).iter().flat_map(move |g| {
            (0..n)
                .filter(move |&i| i != j)
                .map(move |i| x.moved(j, i, g))
        })
    })
}

/// Number of complete allocations of `m` goods to `n` agents, if it fits the
/// enumeration cap.
pub(crate) fn allocation_count(n: usize, m: usize, limits: &Limits) -> Result<u64> {
    let count = (n as u64)
        .checked_pow(m as u32)
        .ok_or(Error::LimitExceeded {
            what: "allocation enumeration",
            requested: u64::MAX,
            limit: limits.enumeration,
        })?;
    if count > limits.enumeration {
        return Err(Error::LimitExceeded {
            what: "allocation enumeration",
            requested: count,
            limit: limits.enumeration,
        });
    }
    Ok(count)
}

/// Enumerates every complete allocation and returns those that are EFX, in
/// enumeration order.
pub fn brute_force_efx(valuations: &[Valuation], limits: &Limits) -> Result<Vec<Allocation>> {
    let n = valuations.len();
    let m = valuations.first().map_or(0, Valuation::goods);
    let count = allocation_count(n, m, limits)?;
    let memos: Vec<Memo> = valuations.iter().map(Memo::new).collect();
    let mut found = Vec::new();
    for code in 0..count {
        let x = Allocation::from_code(code, n, m);
        if efx_ok_memo(&memos, &x) {
            found.push(x);
        }
    }
    Ok(found)
}

pub(crate) fn efx_ok_memo(memos: &[Memo], x: &Allocation) -> bool {
    let own: Vec<Value> = (0..x.agents())
        .map(|i| memos[i].value(x.bundle(i)))
        .collect();
    for i in 0..x.agents() {
        for j in 0..x.agents() {
            if j == i {
                continue;
            }
            for g in x.bundle(j).iter() {
                if own[i] < memos[i].value(&x.bundle(j).without(g)) {
                    return false;
                }
            }
        }
    }
    true
}
