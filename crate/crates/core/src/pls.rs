//! Local-search problems over circuit objectives.
//!
//! Two problem shapes: bit vectors under single-bit flips (minimizing), and
//! the odd Kneser graph `K(2k+1, k)` whose vertices are the weight-`k`
//! vectors and whose neighbors are disjoint vertices.

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::circuit::BoolCircuit;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    pub fn improves(&self, candidate: &BigUint, current: &BigUint) -> bool {
        match self {
            Direction::Minimize => candidate < current,
            Direction::Maximize => candidate > current,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Minimize => "minimize",
            Direction::Maximize => "maximize",
        }
    }
}

/// Minimize a circuit objective over all bit vectors, neighbors at Hamming
/// distance one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FlipInstance {
    pub circuit: BoolCircuit,
}

impl FlipInstance {
    pub fn new(circuit: BoolCircuit) -> Result<Self> {
        if circuit.inputs() == 0 {
            return Err(Error::InvalidCircuit(
                "flip objective needs at least one input".into(),
            ));
        }
        Ok(FlipInstance { circuit })
    }

    pub fn width(&self) -> usize {
        self.circuit.inputs()
    }

    pub fn cost(&self, x: u64) -> BigUint {
        self.circuit.eval(x)
    }
}

/// Optimize a circuit objective over the vertices of the odd Kneser graph
/// `K(2k+1, k)`: feasible points are the weight-`k` vectors, and `x, x'` are
/// neighbors exactly when they are disjoint as sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KneserInstance {
    circuit: BoolCircuit,
    k: usize,
    pub direction: Direction,
}

impl KneserInstance {
    pub fn new(circuit: BoolCircuit, k: usize, direction: Direction) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidCircuit("Kneser instances need k >= 1".into()));
        }
        if circuit.inputs() != 2 * k + 1 {
            return Err(Error::WidthMismatch {
                expected: 2 * k + 1,
                got: circuit.inputs(),
            });
        }
        Ok(KneserInstance {
            circuit,
            k,
            direction,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn circuit(&self) -> &BoolCircuit {
        &self.circuit
    }

    pub fn width(&self) -> usize {
        2 * self.k + 1
    }

    pub fn cost(&self, x: u64) -> BigUint {
        self.circuit.eval(x)
    }
}

#[derive(Serialize, Deserialize)]
struct KneserRepr {
    circuit: BoolCircuit,
    k: usize,
    direction: Direction,
}

impl Serialize for KneserInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KneserRepr {
            circuit: self.circuit.clone(),
            k: self.k,
            direction: self.direction,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KneserInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = KneserRepr::deserialize(d)?;
        KneserInstance::new(repr.circuit, repr.k, repr.direction).map_err(D::Error::custom)
    }
}

/// A Flip or Kneser problem behind one interface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LocalSearchInstance {
    Flip(FlipInstance),
    Kneser(KneserInstance),
}

impl LocalSearchInstance {
    pub fn width(&self) -> usize {
        match self {
            LocalSearchInstance::Flip(f) => f.width(),
            LocalSearchInstance::Kneser(k) => k.width(),
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            LocalSearchInstance::Flip(_) => Direction::Minimize,
            LocalSearchInstance::Kneser(k) => k.direction,
        }
    }

    pub fn objective(&self, x: u64) -> BigUint {
        match self {
            LocalSearchInstance::Flip(f) => f.cost(x),
            LocalSearchInstance::Kneser(k) => k.cost(x),
        }
    }

    pub fn is_feasible(&self, x: u64) -> bool {
        let w = self.width();
        if w < 64 && x >> w != 0 {
            return false;
        }
        match self {
            LocalSearchInstance::Flip(_) => true,
            LocalSearchInstance::Kneser(k) => x.count_ones() as usize == k.k,
        }
    }

    /// Neighbors of a feasible point, sorted ascending. A Kneser vertex has
    /// exactly `k + 1` neighbors: the `k`-subsets of its `(k+1)`-element
    /// complement.
    pub fn neighbors(&self, x: u64) -> Vec<u64> {
        let mut out = match self {
            LocalSearchInstance::Flip(f) => {
                (0..f.width()).map(|i| x ^ (1 << i)).collect::<Vec<_>>()
            }
            LocalSearchInstance::Kneser(k) => {
                let comp = !x & ((1u64 << k.width()) - 1);
                (0..k.width())
                    .filter(|&i| comp >> i & 1 == 1)
                    .map(|i| comp & !(1 << i))
                    .collect()
            }
        };
        out.sort_unstable();
        out
    }

    /// Every feasible point, ascending. Guarded by the search-width cap.
    pub fn feasible_points(&self, limits: &Limits) -> Result<Vec<u64>> {
        let w = self.width();
        if w > limits.search_width {
            return Err(Error::LimitExceeded {
                what: "feasible-set enumeration width",
                requested: w as u64,
                limit: limits.search_width as u64,
            });
        }
        Ok((0..1u64 << w).filter(|&x| self.is_feasible(x)).collect())
    }
}

/// Pivoting rule for the local-search runner.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pivot {
    /// Take the first improving neighbor in ascending point order.
    First,
    /// Take the neighbor with the best objective; ties go to the smallest
    /// point.
    Best,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub optimum: u64,
    pub objective: BigUint,
    pub steps: u64,
    pub trajectory: Vec<u64>,
}

/// Iterated improvement from `start` until no neighbor improves.
pub fn local_search(
    instance: &LocalSearchInstance,
    start: u64,
    pivot: Pivot,
) -> Result<SearchOutcome> {
    if !instance.is_feasible(start) {
        return Err(Error::InfeasibleStart);
    }
    let direction = instance.direction();
    let mut current = start;
    let mut current_obj = instance.objective(current);
    let mut trajectory = vec![current];
    let mut steps = 0u64;

    loop {
        let mut chosen: Option<(u64, BigUint)> = None;
        for nb in instance.neighbors(current) {
            let obj = instance.objective(nb);
            if !direction.improves(&obj, &current_obj) {
                continue;
            }
            match pivot {
                Pivot::First => {
                    chosen = Some((nb, obj));
                    break;
                }
                Pivot::Best => match &chosen {
                    Some((_, best)) if !direction.improves(&obj, best) => {}
                    _ => chosen = Some((nb, obj)),
                },
            }
        }
        match chosen {
            Some((nb, obj)) => {
                current = nb;
                current_obj = obj;
                trajectory.push(current);
                steps += 1;
            }
            None => {
                return Ok(SearchOutcome {
                    optimum: current,
                    objective: current_obj,
                    steps,
                    trajectory,
                })
            }
        }
    }
}

/// True when `x` is feasible and no neighbor improves the objective.
pub fn is_local_optimum(instance: &LocalSearchInstance, x: u64) -> bool {
    if !instance.is_feasible(x) {
        return false;
    }
    let obj = instance.objective(x);
    let dir = instance.direction();
    instance
        .neighbors(x)
        .into_iter()
        .all(|nb| !dir.improves(&instance.objective(nb), &obj))
}
