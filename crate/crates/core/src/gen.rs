//! Deterministic generators for test corpora and CLI fixtures.
//!
//! Everything is driven by an explicitly specified splitmix-style 64-bit
//! PRNG so fixtures reproduce bit-for-bit across platforms and
//! implementations; `rand` is deliberately not used here.

use num::{BigInt, BigRational};

use crate::circuit::{BoolCircuit, CircuitBuilder};
use crate::valuation::Valuation;
use crate::value::{PriceVector, Value};

/// SplitMix64: `next = mix(state += 0x9E3779B97F4A7C15)`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `[0, n)` by reduction; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Inclusive range.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

const WEIGHT_CAP: u64 = 20;

pub fn additive(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    Valuation::additive(
        (0..m)
            .map(|_| Value::from_int(rng.below(WEIGHT_CAP + 1)))
            .collect(),
    )
}

pub fn budget_additive(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    let weights: Vec<Value> = (0..m)
        .map(|_| Value::from_int(rng.below(WEIGHT_CAP + 1)))
        .collect();
    let total: u64 = weights
        .iter()
        .map(|w| w.as_ratio().to_integer().try_into().unwrap_or(0u64))
        .sum();
    let budget = Value::from_int(rng.below(total.max(1) + 1));
    Valuation::budget_additive(weights, budget)
}

pub fn unit_demand(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    Valuation::unit_demand(
        (0..m)
            .map(|_| Value::from_int(rng.below(WEIGHT_CAP + 1)))
            .collect(),
    )
}

pub fn oxs(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    let slots = rng.range(1, m.max(1) as u64) as usize;
    let matrix: Vec<Vec<Value>> = (0..m)
        .map(|_| {
            (0..slots)
                .map(|_| Value::from_int(rng.below(WEIGHT_CAP + 1)))
                .collect()
        })
        .collect();
    Valuation::oxs(matrix).expect("matrix rows are uniform")
}

/// Monotone table built by walking subsets in mask order (every `S - g`
/// precedes `S`) and adding a fresh nonnegative marginal on top of the best
/// predecessor.
pub fn monotone_table(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    let mut values = vec![Value::zero(); 1 << m];
    for bits in 1u64..1 << m {
        let mut base = Value::zero();
        for g in 0..m {
            if bits >> g & 1 == 1 {
                let pred = values[(bits & !(1 << g)) as usize].clone();
                base = base.max(pred);
            }
        }
        values[bits as usize] = base + Value::from_int(rng.below(9));
    }
    Valuation::table(m, values).expect("normalized by construction")
}

/// Weighted-coverage table: each good covers a random subset of a small
/// weighted universe, and a bundle is worth the total weight it covers.
/// Monotone and submodular by construction.
pub fn coverage_table(m: usize, seed: u64) -> Valuation {
    let mut rng = SplitMix64::new(seed);
    let universe = (2 * m).max(1);
    let weights: Vec<u64> = (0..universe).map(|_| rng.range(1, 5)).collect();
    let covers: Vec<u64> = (0..m)
        .map(|_| {
            let mut mask = 0u64;
            for e in 0..universe {
                if rng.coin() {
                    mask |= 1 << e;
                }
            }
            mask
        })
        .collect();
    let mut values = Vec::with_capacity(1 << m);
    for bits in 0u64..1 << m {
        let mut covered = 0u64;
        for (g, cover) in covers.iter().enumerate() {
            if bits >> g & 1 == 1 {
                covered |= cover;
            }
        }
        let total: u64 = (0..universe)
            .filter(|&e| covered >> e & 1 == 1)
            .map(|e| weights[e])
            .sum();
        values.push(Value::from_int(total));
    }
    Valuation::table(m, values).expect("coverage of nothing is zero")
}

/// Random table with at least one planted monotonicity violation
/// (the full bundle is worth less than some singleton).
pub fn nonmonotone_table(m: usize, seed: u64) -> Valuation {
    assert!(m >= 1);
    let mut rng = SplitMix64::new(seed);
    let mut values: Vec<Value> = (0..1u64 << m)
        .map(|_| Value::from_int(rng.below(WEIGHT_CAP + 1)))
        .collect();
    values[0] = Value::zero();
    values[1] = values[1].clone().max(Value::from_int(1));
    if m >= 2 {
        let full = (1u64 << m) - 1;
        values[full as usize] = Value::zero();
    }
    Valuation::table(m, values).expect("normalized by construction")
}

/// A table materialized from one of the weakly-well-layered families
/// (additive, budget-additive, unit-demand, OXS), chosen by seed.
pub fn wwl_family_table(m: usize, seed: u64) -> Valuation {
    let v = match seed % 4 {
        0 => additive(m, seed),
        1 => budget_additive(m, seed),
        2 => unit_demand(m, seed),
        _ => oxs(m, seed),
    };
    v.materialize_table()
        .expect("family generators stay within table limits")
}

/// Signed rational prices with numerators in `[-8, 8]` and denominators in
/// `{1, 2, 3}`.
pub fn price_vector(m: usize, seed: u64) -> PriceVector {
    let mut rng = SplitMix64::new(seed);
    PriceVector(
        (0..m)
            .map(|_| {
                let num = rng.range(0, 16) as i64 - 8;
                let den = rng.range(1, 3) as i64;
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect(),
    )
}

/// Random combinational circuit: `p` inputs, up to `extra_gates` internal
/// gates drawn over the full basis, and `out_width` outputs sampled from the
/// gate list.
pub fn flip_circuit(p: usize, extra_gates: usize, out_width: usize, seed: u64) -> BoolCircuit {
    assert!(p >= 1 && out_width >= 1);
    let mut rng = SplitMix64::new(seed);
    let mut b = CircuitBuilder::new(p);
    let mut count = p;
    for _ in 0..extra_gates {
        let a = rng.below(count as u64) as usize;
        let c = rng.below(count as u64) as usize;
        match rng.below(4) {
            0 => b.not(a),
            1 => b.and(a, c),
            2 => b.or(a, c),
            _ => b.xor(a, c),
        };
        count += 1;
    }
    let outputs: Vec<usize> = (0..out_width)
        .map(|_| rng.below(count as u64) as usize)
        .collect();
    b.finish(outputs)
}

/// Random Kneser objective on `2k + 1` inputs.
pub fn kneser_circuit(k: usize, extra_gates: usize, out_width: usize, seed: u64) -> BoolCircuit {
    flip_circuit(2 * k + 1, extra_gates, out_width, seed)
}
