//! Valuation functions over bundles of goods.
//!
//! Every variant evaluates exactly (rational arithmetic) and is normalized so
//! that the empty bundle is worth zero. Tables may be non-monotone; the
//! identical-agent EFX problem explicitly admits such inputs.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::bundle::{Bundle, GoodId};
use crate::error::{Error, Result};
use crate::limits::TABLE_GOODS_LIMIT;
use crate::reduction::KneserValuation;
use crate::value::Value;

/// Pure evaluation procedure used by the composed-rule variant.
pub type Rule = Arc<dyn Fn(&Bundle) -> Value + Send + Sync>;

/// A valuation function `2^[m] -> Q>=0`.
#[derive(Clone)]
pub enum Valuation {
    /// `v(S) = sum of weights over S`.
    Additive { weights: Vec<Value> },
    /// `v(S) = min(budget, sum of weights over S)`.
    BudgetAdditive { weights: Vec<Value>, budget: Value },
    /// `v(S) = max weight in S` (0 for the empty bundle).
    UnitDemand { weights: Vec<Value> },
    /// Maximum-weight bipartite matching between the goods of `S` and a set
    /// of slots; `matrix[g][s]` is the weight of assigning good `g` to slot `s`.
    Oxs { matrix: Vec<Vec<Value>> },
    /// Explicit table of all ` 2^m` values, indexed by bundle bits.
    Table { m: usize, values: Vec<Value> },
    /// The circuit-backed valuation produced by the local-search reduction.
    KneserReduced(KneserValuation),
    /// An arbitrary pure rule; not serializable.
    ComposedRule { m: usize, rule: Rule },
}

impl Valuation {
    pub fn additive(weights: Vec<Value>) -> Self {
        Valuation::Additive { weights }
    }

    pub fn budget_additive(weights: Vec<Value>, budget: Value) -> Self {
        Valuation::BudgetAdditive { weights, budget }
    }

    pub fn unit_demand(weights: Vec<Value>) -> Self {
        Valuation::UnitDemand { weights }
    }

    pub fn oxs(matrix: Vec<Vec<Value>>) -> Result<Self> {
        if let Some(first) = matrix.first() {
            let s = first.len();
            if s == 0 {
                return Err(Error::InvalidValuation("OXS matrix has zero slots".into()));
            }
            if matrix.iter().any(|row| row.len() != s) {
                return Err(Error::InvalidValuation(
                    "OXS matrix rows have unequal lengths".into(),
                ));
            }
        }
        Ok(Valuation::Oxs { matrix })
    }

    /// Builds a table valuation. Requires `m <= 24`, exactly `2^m` entries,
    /// and a normalized empty bundle (`values[0] = 0`). Monotonicity is *not*
    /// enforced.
    pub fn table(m: usize, values: Vec<Value>) -> Result<Self> {
        if m > TABLE_GOODS_LIMIT {
            return Err(Error::LimitExceeded {
                what: "table goods",
                requested: m as u64,
                limit: TABLE_GOODS_LIMIT as u64,
            });
        }
        if values.len() != 1usize << m {
            return Err(Error::InvalidValuation(format!(
                "table for {m} goods needs {} values, got {}",
                1usize << m,
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidValuation(
                "table is not normalized: v(empty) != 0".into(),
            ));
        }
        Ok(Valuation::Table { m, values })
    }

    pub fn table_from_ints(m: usize, values: &[u64]) -> Result<Self> {
        Valuation::table(m, values.iter().map(|&n| Value::from_int(n)).collect())
    }

    pub fn composed(m: usize, rule: Rule) -> Self {
        Valuation::ComposedRule { m, rule }
    }

    /// Number of goods this valuation is defined over.
    pub fn goods(&self) -> usize {
        match self {
            Valuation::Additive { weights }
            | Valuation::BudgetAdditive { weights, .. }
            | Valuation::UnitDemand { weights } => weights.len(),
            Valuation::Oxs { matrix } => matrix.len(),
            Valuation::Table { m, .. } => *m,
            Valuation::KneserReduced(kv) => kv.goods(),
            Valuation::ComposedRule { m, .. } => *m,
        }
    }

    /// Exact value of a bundle.
    pub fn value(&self, s: &Bundle) -> Result<Value> {
        if s.width() != self.goods() {
            return Err(Error::WidthMismatch {
                expected: self.goods(),
                got: s.width(),
            });
        }
        Ok(self.value_unchecked(s))
    }

    pub(crate) fn value_unchecked(&self, s: &Bundle) -> Value {
        match self {
            Valuation::Additive { weights } => s.iter().map(|g| weights[g.0].clone()).sum(),
            Valuation::BudgetAdditive { weights, budget } => {
                let total: Value = s.iter().map(|g| weights[g.0].clone()).sum();
                total.min(budget.clone())
            }
            Valuation::UnitDemand { weights } => s
                .iter()
                .map(|g| weights[g.0].clone())
                .max()
                .unwrap_or_else(Value::zero),
            Valuation::Oxs { matrix } => oxs_value(matrix, s),
            Valuation::Table { values, .. } => values[s.bits() as usize].clone(),
            Valuation::KneserReduced(kv) => kv.value(s),
            Valuation::ComposedRule { rule, .. } => rule(s),
        }
    }

    /// Signed marginal `v(S + g) - v(S)`; `g` must not already be in `S`.
    pub fn marginal(&self, s: &Bundle, g: GoodId) -> Result<BigRational> {
        if s.contains(g) {
            return Err(Error::GoodInBundle { good: g.0 });
        }
        let base = self.value(s)?;
        let with = self.value(&s.with(g))?;
        Ok(with.diff(&base))
    }

    /// Materializes this valuation as an explicit table (small `m` only).
    pub fn materialize_table(&self) -> Result<Valuation> {
        let m = self.goods();
        let values: Vec<Value> = Bundle::all(m)
            .map(|b| self.value(&b))
            .collect::<Result<_>>()?;
        Valuation::table(m, values)
    }
}

/// Maximum-weight matching between the goods of `s` and the slot columns.
///
/// Exact subset DP over the smaller side; goods may stay unmatched, so with
/// nonnegative weights this is the standard OXS semantics.
#[allow(clippy::needless_range_loop)] // slots index columns of a row-major matrix
fn oxs_value(matrix: &[Vec<Value>], s: &Bundle) -> Value {
    let goods: Vec<usize> = s.iter().map(|g| g.0).collect();
    if goods.is_empty() || matrix.is_empty() {
        return Value::zero();
    }
    let slots = matrix[0].len();
    if goods.len() <= slots {
        // dp over good subsets, slots processed one at a time
        let n = goods.len();
        let mut dp = vec![Value::zero(); 1 << n];
        for slot in 0..slots {
            let prev = dp.clone();
            for mask in 0..1usize << n {
                for (i, &g) in goods.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        let cand = &prev[mask & !(1 << i)] + &matrix[g][slot];

                        if cand > dp[mask] {
                            dp[mask] = cand;
                        }
                    }
                }
            }
        }
        dp[(1 << n) - 1].clone()
    } else {
        // dp over slot subsets, goods processed one at a time
        let mut dp = vec![Value::zero(); 1 << slots];
        for &g in &goods {
            let prev = dp.clone();
            for mask in 0..1usize << slots {
                for slot in 0..slots {
                    if mask >> slot & 1 == 1 {
                        let cand = &prev[mask & !(1 << slot)] + &matrix[g][slot];
                        if cand > dp[mask] {
                            dp[mask] = cand;
                        }
                    }
                }
            }
        }
        dp[(1 << slots) - 1].clone()
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Additive { weights } => write!(f, "Additive({weights:?})"),
            Valuation::BudgetAdditive { weights, budget } => {
                write!(f, "BudgetAdditive({weights:?}, budget={budget:?})")
            }
            Valuation::UnitDemand { weights } => write!(f, "UnitDemand({weights:?})"),
            Valuation::Oxs { matrix } => write!(f, "Oxs({matrix:?})"),
            Valuation::Table { m, .. } => write!(f, "Table(m={m})"),
            Valuation::KneserReduced(kv) => write!(f, "KneserReduced(k={})", kv.k()),
            Valuation::ComposedRule { m, .. } => write!(f, "ComposedRule(m={m})"),
        }
    }
}

impl PartialEq for Valuation {
    fn eq(&self, other: &Self) -> bool {
        use Valuation::*;
        match (self, other) {
            (Additive { weights: a }, Additive { weights: b }) => a == b,
            (
                BudgetAdditive {
                    weights: a,
                    budget: ba,
                },
                BudgetAdditive {
                    weights: b,
                    budget: bb,
                },
            ) => a == b && ba == bb,
            (UnitDemand { weights: a }, UnitDemand { weights: b }) => a == b,
            (Oxs { matrix: a }, Oxs { matrix: b }) => a == b,
            (Table { m: ma, values: va }, Table { m: mb, values: vb }) => ma == mb && va == vb,
            (KneserReduced(a), KneserReduced(b)) => a == b,
            (ComposedRule { m: ma, rule: ra }, ComposedRule { m: mb, rule: rb }) => {
                ma == mb && Arc::ptr_eq(ra, rb)
            }
            _ => false,
        }
    }
}

// --- JSON encoding -------------------------------------------------------
//
// {"type":"additive","weights":[...]}
// {"type":"budget_additive","weights":[...],"budget":...}
// {"type":"unit_demand","weights":[...]}
// {"type":"oxs","matrix":[[...]]}
// {"type":"table","m":N,"values":[... 2^N entries ...]}
// {"type":"kneser_efx","circuit":{...},"k":K}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ValuationRepr {
    Additive {
        weights: Vec<Value>,
    },
    BudgetAdditive {
        weights: Vec<Value>,
        budget: Value,
    },
    UnitDemand {
        weights: Vec<Value>,
    },
    Oxs {
        matrix: Vec<Vec<Value>>,
    },
    Table {
        m: usize,
        values: Vec<Value>,
    },
    KneserEfx {
        circuit: crate::circuit::BoolCircuit,
        k: usize,
    },
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Valuation::Additive { weights } => ValuationRepr::Additive {
                weights: weights.clone(),
            },
            Valuation::BudgetAdditive { weights, budget } => ValuationRepr::BudgetAdditive {
                weights: weights.clone(),
                budget: budget.clone(),
            },
            Valuation::UnitDemand { weights } => ValuationRepr::UnitDemand {
                weights: weights.clone(),
            },
            Valuation::Oxs { matrix } => ValuationRepr::Oxs {
                matrix: matrix.clone(),
            },
            Valuation::Table { m, values } => ValuationRepr::Table {
                m: *m,
                values: values.clone(),
            },
            Valuation::KneserReduced(kv) => ValuationRepr::KneserEfx {
                circuit: kv.circuit().clone(),
                k: kv.k(),
            },
            Valuation::ComposedRule { .. } => {
                return Err(serde::ser::Error::custom(
                    "composed-rule valuations have no JSON form",
                ))
            }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ValuationRepr::deserialize(deserializer)?;
        let v = match repr {
            ValuationRepr::Additive { weights } => Valuation::additive(weights),
            ValuationRepr::BudgetAdditive { weights, budget } => {
                Valuation::budget_additive(weights, budget)
            }
            ValuationRepr::UnitDemand { weights } => Valuation::unit_demand(weights),
            ValuationRepr::Oxs { matrix } => Valuation::oxs(matrix).map_err(D::Error::custom)?,
            ValuationRepr::Table { m, values } => {
                Valuation::table(m, values).map_err(D::Error::custom)?
            }
            ValuationRepr::KneserEfx { circuit, k } => Valuation::KneserReduced(
                KneserValuation::new(circuit, k).map_err(D::Error::custom)?,
            ),
        };
        Ok(v)
    }
}

/// Single-threaded per-bundle cache around a valuation.
///
/// Sound because valuations are pure; the brute-force checkers and solvers
/// touch the same bundles many times. Dense storage for small instances,
/// hash-map fallback beyond that.
pub(crate) struct Memo<'a> {
    v: &'a Valuation,
    cache: RefCell<MemoStore>,
}

enum MemoStore {
    Dense(Vec<Option<Value>>),
    Sparse(std::collections::HashMap<u64, Value>),
}

impl<'a> Memo<'a> {
    pub fn new(v: &'a Valuation) -> Self {
        let m = v.goods();
        let store = if m <= 20 {
            MemoStore::Dense(vec![None; 1 << m])
        } else {
            MemoStore::Sparse(std::collections::HashMap::new())
        };
        Memo {
            v,
            cache: RefCell::new(store),
        }
    }

    pub fn value(&self, b: &Bundle) -> Value {
        let bits = b.bits();
        match &*self.cache.borrow() {
            MemoStore::Dense(vec) => {
                if let Some(v) = &vec[bits as usize] {
                    return v.clone();
                }
            }
            MemoStore::Sparse(map) => {
                if let Some(v) = map.get(&bits) {
                    return v.clone();
                }
            }
        }
        let v = self
            .v
            .value(b)
            .expect("memo bundle width matches valuation");
        match &mut *self.cache.borrow_mut() {
            MemoStore::Dense(vec) => vec[bits as usize] = Some(v.clone()),
            MemoStore::Sparse(map) => {
                map.insert(bits, v.clone());
            }
        }
        v
    }
}
