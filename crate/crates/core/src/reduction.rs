//! Instance reductions between the flip problem, Kneser local optimization,
//! and identical-agent EFX, with solution back-mappings and the end-to-end
//! pipeline.

use std::sync::Arc;

use num::{BigInt, One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::allocation::Allocation;
use crate::bundle::Bundle;
use crate::circuit::{negate_outputs, BoolCircuit, CircuitBuilder};
use crate::error::{Error, Result};
use crate::leximin::{leximinpp_local_search_traced, IdenticalEfxSolution};
use crate::limits::KNESER_CIRCUIT_WIDTH_LIMIT;
use crate::pls::{is_local_optimum, Direction, FlipInstance, KneserInstance, LocalSearchInstance};
use crate::valuation::Valuation;
use crate::value::Value;

/// How a target solution maps back to a source solution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BackMap {
    /// Keep the first `p` bits of the Kneser point.
    Prefix,
    /// Take the size-`k` bundle of the EFX pair.
    SizeKBundle,
    /// Drop the forced singleton bundles of the lifted instance.
    DropSingletons,
}

// --- flip -> kneser ---------------------------------------------------------

/// The Kneser cost circuit over points `s = u v b` (`u, v` of width `p`,
/// one flag bit), realizing the three cases
///
/// 1. `v = !u, b = 0`:            `2 * C_F(u)`
/// 2. `dist(!u, v) = 1, b = 1`:   `2 * min(C_F(!u), C_F(v)) + 1`
/// 3. otherwise:                  `BIG_M + dist(!u, v)`
///
/// with `BIG_M = 2 * (2^w - 1) + 2`, the smallest round bound strictly above
/// every case-1/2 cost.
fn build_kneser_cost_circuit(flip: &BoolCircuit) -> Result<BoolCircuit> {
    let p = flip.inputs();
    let w = flip.output_width();
    if w > 24 {
        return Err(Error::LimitExceeded {
            what: "flip circuit output width",
            requested: w as u64,
            limit: 24,
        });
    }
    let big_m: u64 = 1u64 << (w + 1);
    let out_w = bit_len(big_m + 2 * p as u64 + 1);

    let mut b = CircuitBuilder::new(2 * p + 1);
    let u = b.input_word(0, p);
    let v = b.input_word(p, p);
    let flag = b.input(2 * p);

    let nu = b.not_word(&u);
    let cf_u = b.splice(flip, &u)?;
    let cf_nu = b.splice(flip, &nu)?;
    let cf_v = b.splice(flip, &v)?;

    let diff = b.xor_word(&nu, &v);
    let dist = b.popcount(&diff);
    let any_diff = b.or_all(&diff);
    let dist_is_zero = b.not(any_diff);
    let one = b.const_word(1, dist.len());
    let dist_is_one = b.eq(&dist, &one);
    let no_flag = b.not(flag);
    let case1 = b.and(dist_is_zero, no_flag);
    let case2 = b.and(dist_is_one, flag);

    let doubled = b.shl1(&cf_u);
    let out1 = b.zext(&doubled, out_w);

    let smaller = b.min(&cf_nu, &cf_v);
    let mut odd = b.shl1(&smaller);
    odd[0] = b.constant(true);
    let out2 = b.zext(&odd, out_w);

    let penalty = b.const_word(big_m, out_w);
    let sum = b.add(&penalty, &dist);
    let out3: Vec<usize> = sum.into_iter().take(out_w).collect();

    let fallback = b.mux(case2, &out3, &out2);
    let out = b.mux(case1, &fallback, &out1);
    Ok(b.finish(out))
}

fn bit_len(x: u64) -> usize {
    (64 - x.leading_zeros()) as usize
}

/// Result of the flip -> Kneser reduction: a minimization Kneser instance
/// whose local minima all have the form `u !u 0` with `u` a flip local
/// minimum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlipToKneserArtifact {
    pub target: KneserInstance,
    pub backmap: BackMap,
}

impl FlipToKneserArtifact {
    pub fn map_back(&self, kneser_point: u64) -> Result<u64> {
        map_back_prefix(kneser_point, self.target.k())
    }
}

#[derive(Serialize, Deserialize)]
struct FlipToKneserRepr {
    target: KneserInstance,
    backmap: BackMap,
}

impl Serialize for FlipToKneserArtifact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlipToKneserRepr {
            target: self.target.clone(),
            backmap: self.backmap,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlipToKneserArtifact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FlipToKneserRepr::deserialize(d)?;
        Ok(FlipToKneserArtifact {
            target: repr.target,
            backmap: repr.backmap,
        })
    }
}

/// Reduces a flip instance on `p` bits to a minimization Kneser instance on
/// `2p + 1` bits.
pub fn flip_to_kneser(flip: &FlipInstance) -> Result<FlipToKneserArtifact> {
    let circuit = build_kneser_cost_circuit(&flip.circuit)?;
    let target = KneserInstance::new(circuit, flip.width(), Direction::Minimize)?;
    Ok(FlipToKneserArtifact {
        target,
        backmap: BackMap::Prefix,
    })
}

fn map_back_prefix(s: u64, p: usize) -> Result<u64> {
    let mask = (1u64 << p) - 1;
    let u = s & mask;
    let v = s >> p & mask;
    let flag = s >> (2 * p) & 1;
    if flag != 0 || v != !u & mask {
        return Err(Error::MalformedSolution(format!(
            "Kneser point {s:#b} is not of the form u,!u,0"
        )));
    }
    Ok(u)
}

/// Extracts the flip point from a Kneser local minimum of the reduced
/// instance. Only points of the form `u !u 0` qualify; anything else signals
/// a non-optimal input.
pub fn map_back_flip(kneser_point: u64, flip: &FlipInstance) -> Result<u64> {
    map_back_prefix(kneser_point, flip.width())
}

// --- kneser -> identical EFX -------------------------------------------------

/// The submodular valuation carved from a maximization Kneser objective `C`
/// on `2k + 1` goods, rescaled to integers by `S = 2^(2^w - 1)`:
///
/// - `2 S |X|`                    for `|X| < k`
/// - `2 S k - 2^(Cmax - C(X))`    for `|X| = k`
/// - `2 S k`                      for `|X| > k`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KneserValuation {
    circuit: Arc<BoolCircuit>,
    k: usize,
    cmax: u64,
    scale: BigInt,
    top: BigInt,
}

impl KneserValuation {
    pub fn new(circuit: BoolCircuit, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidValuation(
                "Kneser valuation needs k >= 1".into(),
            ));
        }
        if circuit.inputs() != 2 * k + 1 {
            return Err(Error::WidthMismatch {
                expected: 2 * k + 1,
                got: circuit.inputs(),
            });
        }
        let w = circuit.output_width();
        if w > KNESER_CIRCUIT_WIDTH_LIMIT {
            return Err(Error::LimitExceeded {
                what: "Kneser circuit output width",
                requested: w as u64,
                limit: KNESER_CIRCUIT_WIDTH_LIMIT as u64,
            });
        }
        let cmax = (1u64 << w) - 1;
        let scale = BigInt::one() << cmax;
        let top = BigInt::from(2 * k as u64) * &scale;
        Ok(KneserValuation {
            circuit: Arc::new(circuit),
            k,
            cmax,
            scale,
            top,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn goods(&self) -> usize {
        2 * self.k + 1
    }

    pub fn circuit(&self) -> &BoolCircuit {
        &self.circuit
    }

    /// Largest representable objective value, `2^w - 1`.
    pub fn cost_max(&self) -> u64 {
        self.cmax
    }

    pub fn value(&self, bundle: &Bundle) -> Value {
        let card = bundle.cardinality();
        let int = if card < self.k {
            BigInt::from(2 * card as u64) * &self.scale
        } else if card > self.k {
            self.top.clone()
        } else {
            let cost = self
                .circuit
                .eval(bundle.bits())
                .to_u64()
                .expect("output width is capped well below 64 bits");
            &self.top - (BigInt::one() << (self.cmax - cost))
        };
        Value::from_bigint(int).expect("reduced valuation is nonnegative")
    }
}

/// Result of the Kneser -> EFX reduction: a two-agent identical instance
/// whose EFX allocations split the goods `k` / `k + 1`, the size-`k` side
/// being a Kneser local maximum.
#[derive(Clone, PartialEq, Debug)]
pub struct KneserToEfxArtifact {
    pub valuation: Valuation,
    pub agents: usize,
    pub k: usize,
    pub backmap: BackMap,
}

impl KneserToEfxArtifact {
    pub fn map_back(&self, allocation: &Allocation) -> Result<u64> {
        map_back_size_k(allocation, self.k)
    }
}

#[derive(Serialize, Deserialize)]
struct KneserToEfxRepr {
    target: EfxTargetRepr,
    backmap: BackMap,
}

#[derive(Serialize, Deserialize)]
struct EfxTargetRepr {
    n: usize,
    m: usize,
    valuation: Valuation,
}

impl Serialize for KneserToEfxArtifact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KneserToEfxRepr {
            target: EfxTargetRepr {
                n: self.agents,
                m: self.valuation.goods(),
                valuation: self.valuation.clone(),
            },
            backmap: self.backmap,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KneserToEfxArtifact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = KneserToEfxRepr::deserialize(d)?;
        let k = match &repr.target.valuation {
            Valuation::KneserReduced(kv) => kv.k(),
            _ => {
                return Err(D::Error::custom(
                    "kneser-to-efx target must carry a kneser_efx valuation",
                ))
            }
        };
        Ok(KneserToEfxArtifact {
            valuation: repr.target.valuation,
            agents: repr.target.n,
            k,
            backmap: repr.backmap,
        })
    }
}

/// Reduces a *maximization* Kneser instance to a two-agent identical EFX
/// instance on the same ground set. Minimization inputs must be converted by
/// negating the circuit outputs first.
pub fn kneser_to_efx(instance: &KneserInstance) -> Result<KneserToEfxArtifact> {
    if instance.direction != Direction::Maximize {
        return Err(Error::WrongDirection {
            expected: "maximize",
            got: "minimize",
        });
    }
    let kv = KneserValuation::new(instance.circuit().clone(), instance.k())?;
    Ok(KneserToEfxArtifact {
        valuation: Valuation::KneserReduced(kv),
        agents: 2,
        k: instance.k(),
        backmap: BackMap::SizeKBundle,
    })
}

fn map_back_size_k(allocation: &Allocation, k: usize) -> Result<u64> {
    for bundle in allocation.bundles() {
        if bundle.cardinality() == k {
            return Ok(bundle.bits());
        }
    }
    Err(Error::MalformedSolution(format!(
        "no bundle of size {k}: the allocation cannot come from an EFX solution"
    )))
}

/// Extracts the characteristic vector of the size-`k` bundle of an EFX pair.
pub fn map_back_kneser(allocation: &Allocation, instance: &KneserInstance) -> Result<u64> {
    if allocation.goods() != instance.width() {
        return Err(Error::WidthMismatch {
            expected: instance.width(),
            got: allocation.goods(),
        });
    }
    map_back_size_k(allocation, instance.k())
}

// --- two agents -> n agents ---------------------------------------------------

/// The `n`-agent lift of a two-agent identical instance: `n - 2` fresh goods
/// are appended, each singly worth more than the whole original ground set,
/// which forces them into singleton bundles of any EFX allocation.
#[derive(Clone)]
pub struct LiftArtifact {
    pub valuation: Valuation,
    pub agents: usize,
    pub base_goods: usize,
    pub backmap: BackMap,
}

/// Lifts a monotone two-agent instance to `n` identical agents.
pub fn lift_two_to_n(v: &Valuation, n: usize) -> Result<LiftArtifact> {
    if n < 2 {
        return Err(Error::InvalidValuation(format!(
            "lift needs n >= 2, got {n}"
        )));
    }
    let base_goods = v.goods();
    let extra = n - 2;
    let total = base_goods + extra;
    if total > crate::bundle::MAX_GOODS {
        return Err(Error::LimitExceeded {
            what: "lifted goods",
            requested: total as u64,
            limit: crate::bundle::MAX_GOODS as u64,
        });
    }
    let bonus = v.value(&Bundle::full(base_goods))? + Value::from_int(1);
    let base = v.clone();
    let rule = move |bundle: &Bundle| -> Value {
        let base_mask = if base_goods == 0 {
            0
        } else {
            (1u64 << base_goods) - 1
        };
        let original = Bundle::from_bits(bundle.bits() & base_mask, base_goods)
            .expect("mask keeps original width");
        let extras = (bundle.bits() >> base_goods).count_ones() as u64;
        let mut total = base.value(&original).expect("width preserved");
        for _ in 0..extras {
            total += &bonus;
        }
        total
    };
    Ok(LiftArtifact {
        valuation: Valuation::composed(total, Arc::new(rule)),
        agents: n,
        base_goods,
        backmap: BackMap::DropSingletons,
    })
}

impl LiftArtifact {
    /// Strips the forced singleton bundles from an EFX allocation of the
    /// lifted instance and returns the induced two-agent allocation on the
    /// original goods (in ascending agent order).
    pub fn map_back(&self, allocation: &Allocation) -> Result<Allocation> {
        let extra = self.agents - 2;
        let total = self.base_goods + extra;
        if allocation.goods() != total || allocation.agents() != self.agents {
            return Err(Error::WidthMismatch {
                expected: total,
                got: allocation.goods(),
            });
        }
        let base_mask = if self.base_goods == 0 {
            0
        } else {
            (1u64 << self.base_goods) - 1
        };
        let mut originals = Vec::with_capacity(2);
        for agent in 0..self.agents {
            let bundle = allocation.bundle(agent);
            let added = bundle.bits() & !base_mask;
            if added == 0 {
                originals.push(Bundle::from_bits(bundle.bits(), self.base_goods)?);
            } else if bundle.cardinality() != 1 {
                return Err(Error::MalformedSolution(format!(
                    "agent {agent} holds an added good inside a non-singleton bundle"
                )));
            }
        }
        if originals.len() != 2 {
            return Err(Error::MalformedSolution(format!(
                "expected exactly 2 original bundles, found {}",
                originals.len()
            )));
        }
        Allocation::new(originals)
    }
}

// --- the full pipeline ---------------------------------------------------------

/// Everything the pipeline produced on its way to a verified flip local
/// minimum.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub flip_point: u64,
    pub kneser_point: u64,
    pub allocation: Allocation,
    pub efx_steps: u64,
}

/// Runs flip -> Kneser -> (negate) -> EFX, solves the EFX instance by
/// leximin++ local search, maps the solution back through both reductions,
/// and verifies each stage. Fails loudly if any verification misses, which
/// would indicate a defect in a reduction.
pub fn end_to_end(flip: &FlipInstance) -> Result<PipelineRun> {
    let stage1 = flip_to_kneser(flip)?;
    let maximized = KneserInstance::new(
        negate_outputs(stage1.target.circuit()),
        stage1.target.k(),
        Direction::Maximize,
    )?;
    let stage2 = kneser_to_efx(&maximized)?;

    let (solution, efx_steps) = leximinpp_local_search_traced(&stage2.valuation, 2);
    let allocation = match solution {
        IdenticalEfxSolution::Efx { allocation } => allocation,
        IdenticalEfxSolution::NonMonotone { .. } => {
            return Err(Error::MalformedSolution(
                "reduced valuation is monotone by construction; solver disagreed".into(),
            ))
        }
    };

    let kneser_point = map_back_kneser(&allocation, &maximized)?;
    if !is_local_optimum(
        &LocalSearchInstance::Kneser(maximized.clone()),
        kneser_point,
    ) {
        return Err(Error::MalformedSolution(
            "mapped-back point is not a Kneser local maximum".into(),
        ));
    }

    let flip_point = map_back_flip(kneser_point, flip)?;
    let flip_search = LocalSearchInstance::Flip(flip.clone());
    if !is_local_optimum(&flip_search, flip_point) {
        return Err(Error::MalformedSolution(
            "mapped-back point is not a flip local minimum".into(),
        ));
    }

    Ok(PipelineRun {
        flip_point,
        kneser_point,
        allocation,
        efx_steps,
    })
}
