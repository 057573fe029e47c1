//! Boolean circuits with multi-bit integer outputs.
//!
//! Circuits are topologically ordered gate lists over the basis
//! {INPUT, CONST, NOT, AND, OR, XOR}. The output is decoded little-endian:
//! output bit `i` contributes `2^i`. XOR is kept primitive because it keeps
//! the Hamming-distance blocks small.

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decoded circuit output (always `< 2^output_width`).
pub type CircuitValue = BigUint;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Gate {
    /// Reads input bit `i`.
    Input(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
}

impl Gate {
    fn refs(&self) -> [Option<usize>; 2] {
        match *self {
            Gate::Input(_) | Gate::Const(_) => [None, None],
            Gate::Not(a) => [Some(a), None],
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => [Some(a), Some(b)],
        }
    }
}

/// A combinational circuit: `inputs` input bits, a gate list in topological
/// order, and a nonempty ordered list of output gate references.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoolCircuit {
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl BoolCircuit {
    pub fn new(inputs: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        if inputs > crate::bundle::MAX_GOODS {
            return Err(Error::InvalidCircuit(format!("too many inputs: {inputs}")));
        }
        if outputs.is_empty() {
            return Err(Error::InvalidCircuit("output list is empty".into()));
        }
        for (idx, gate) in gates.iter().enumerate() {
            if let Gate::Input(i) = gate {
                if *i >= inputs {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {idx} reads input {i}, but the circuit has {inputs} inputs"
                    )));
                }
            }
            for r in gate.refs().into_iter().flatten() {
                if r >= idx {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {idx} references gate {r}, which is not earlier in the list"
                    )));
                }
            }
        }
        for &o in &outputs {
            if o >= gates.len() {
                return Err(Error::InvalidCircuit(format!(
                    "output ref {o} out of range"
                )));
            }
        }
        Ok(BoolCircuit {
            inputs,
            gates,
            outputs,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn output_width(&self) -> usize {
        self.outputs.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Largest representable output value, `2^w - 1`.
    pub fn max_output(&self) -> BigUint {
        (BigUint::from(1u8) << self.output_width()) - 1u8
    }

    /// Evaluates on the low `inputs` bits of `x`.
    pub fn eval(&self, x: u64) -> CircuitValue {
        let mut wires = vec![false; self.gates.len()];
        for (idx, gate) in self.gates.iter().enumerate() {
            wires[idx] = match *gate {
                Gate::Input(i) => x >> i & 1 == 1,
                Gate::Const(b) => b,
                Gate::Not(a) => !wires[a],
                Gate::And(a, b) => wires[a] && wires[b],
                Gate::Or(a, b) => wires[a] || wires[b],
                Gate::Xor(a, b) => wires[a] ^ wires[b],
            };
        }
        let mut out = BigUint::from(0u8);
        for (i, &o) in self.outputs.iter().enumerate() {
            if wires[o] {
                out.set_bit(i as u64, true);
            }
        }
        out
    }

    /// Width-checked evaluation on an explicit bit slice.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<CircuitValue> {
        if bits.len() != self.inputs {
            return Err(Error::WidthMismatch {
                expected: self.inputs,
                got: bits.len(),
            });
        }
        let mut x = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                x |= 1 << i;
            }
        }
        Ok(self.eval(x))
    }
}

// --- builder --------------------------------------------------------------

/// Incremental circuit construction. Gate 0..inputs are the input gates;
/// word helpers operate on little-endian slices of gate refs (index 0 = LSB).
pub struct CircuitBuilder {
    inputs: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(inputs: usize) -> Self {
        let gates = (0..inputs).map(Gate::Input).collect();
        CircuitBuilder { inputs, gates }
    }

    pub fn input(&self, i: usize) -> usize {
        debug_assert!(i < self.inputs);
        i
    }

    pub fn input_word(&self, start: usize, width: usize) -> Vec<usize> {
        (start..start + width).collect()
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn constant(&mut self, b: bool) -> usize {
        self.push(Gate::Const(b))
    }

    pub fn not(&mut self, a: usize) -> usize {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::And(a, b))
    }

    pub fn or(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Or(a, b))
    }

    pub fn xor(&mut self, a: usize, b: usize) -> usize {
        self.push(Gate::Xor(a, b))
    }

    pub fn const_word(&mut self, value: u64, width: usize) -> Vec<usize> {
        (0..width)
            .map(|i| self.constant(value >> i & 1 == 1))
            .collect()
    }

    pub fn not_word(&mut self, a: &[usize]) -> Vec<usize> {
        a.iter().map(|&r| self.not(r)).collect()
    }

    pub fn xor_word(&mut self, a: &[usize], b: &[usize]) -> Vec<usize> {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(&x, &y)| self.xor(x, y)).collect()
    }

    /// Zero-extends `a` to `width` bits.
    pub fn zext(&mut self, a: &[usize], width: usize) -> Vec<usize> {
        debug_assert!(a.len() <= width);
        let mut out = a.to_vec();
        while out.len() < width {
            let z = self.constant(false);
            out.push(z);
        }
        out
    }

    /// Ripple-carry addition; result has `max(|a|,|b|) + 1` bits.
    pub fn add(&mut self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let width = a.len().max(b.len());
        let a = self.zext(a, width);
        let b = self.zext(b, width);
        let mut carry = self.constant(false);
        let mut out = Vec::with_capacity(width + 1);
        for i in 0..width {
            let axb = self.xor(a[i], b[i]);
            let sum = self.xor(axb, carry);
            let ab = self.and(a[i], b[i]);
            let ac = self.and(axb, carry);
            carry = self.or(ab, ac);
            out.push(sum);
        }
        out.push(carry);
        out
    }

    /// Unsigned `a < b` (operands are zero-extended to a common width).
    pub fn lt(&mut self, a: &[usize], b: &[usize]) -> usize {
        let width = a.len().max(b.len());
        let a = self.zext(a, width);
        let b = self.zext(b, width);
        // ripple from the LSB: strictly-below so far
        let mut below = self.constant(false);
        for i in 0..width {
            let na = self.not(a[i]);
            let bit_lt = self.and(na, b[i]);
            let x = self.xor(a[i], b[i]);
            let eq = self.not(x);
            let keep = self.and(eq, below);
            below = self.or(bit_lt, keep);
        }
        below
    }

    /// `a == b` (common zero-extension).
    pub fn eq(&mut self, a: &[usize], b: &[usize]) -> usize {
        let width = a.len().max(b.len());
        let a = self.zext(a, width);
        let b = self.zext(b, width);
        let mut acc = self.constant(true);
        for i in 0..width {
            let x = self.xor(a[i], b[i]);
            let eq = self.not(x);
            acc = self.and(acc, eq);
        }
        acc
    }

    /// `sel == 0` selects `a`, `sel == 1` selects `b`.
    pub fn mux(&mut self, sel: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
        debug_assert_eq!(a.len(), b.len());
        let nsel = self.not(sel);
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let xa = self.and(nsel, x);
                let yb = self.and(sel, y);
                self.or(xa, yb)
            })
            .collect()
    }

    pub fn min(&mut self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let width = a.len().max(b.len());
        let a = self.zext(a, width);
        let b = self.zext(b, width);
        let a_below = self.lt(&a, &b);
        self.mux(a_below, &b, &a)
    }

    /// Number of set bits among `bits`, as a word of `bitlen(|bits|)` bits.
    pub fn popcount(&mut self, bits: &[usize]) -> Vec<usize> {
        if bits.is_empty() {
            return vec![self.constant(false)];
        }
        let mut words: Vec<Vec<usize>> = bits.iter().map(|&b| vec![b]).collect();
        while words.len() > 1 {
            let mut next = Vec::with_capacity(words.len().div_ceil(2));
            let mut it = words.chunks(2);
            for pair in &mut it {
                if pair.len() == 2 {
                    next.push(self.add(&pair[0], &pair[1]));
                } else {
                    next.push(pair[0].clone());
                }
            }
            words = next;
        }
        let word = words.pop().unwrap();
        let needed = usize::BITS as usize - bits.len().leading_zeros() as usize;
        word.into_iter().take(needed.max(1)).collect()
    }

    pub fn or_all(&mut self, bits: &[usize]) -> usize {
        match bits {
            [] => self.constant(false),
            [one] => *one,
            _ => {
                let mut acc = bits[0];
                for &b in &bits[1..] {
                    acc = self.or(acc, b);
                }
                acc
            }
        }
    }

    /// Multiply by two: append a zero LSB.
    pub fn shl1(&mut self, a: &[usize]) -> Vec<usize> {
        let mut out = vec![self.constant(false)];
        out.extend_from_slice(a);
        out
    }

    /// Inlines `sub`, wiring its inputs to the given refs; returns the refs
    /// of the sub-circuit's outputs.
    pub fn splice(&mut self, sub: &BoolCircuit, inputs: &[usize]) -> Result<Vec<usize>> {
        if inputs.len() != sub.inputs {
            return Err(Error::WidthMismatch {
                expected: sub.inputs,
                got: inputs.len(),
            });
        }
        let mut remap = Vec::with_capacity(sub.gates.len());
        for gate in &sub.gates {
            let new = match *gate {
                Gate::Input(i) => inputs[i],
                Gate::Const(b) => self.constant(b),
                Gate::Not(a) => self.not(remap[a]),
                Gate::And(a, b) => self.and(remap[a], remap[b]),
                Gate::Or(a, b) => self.or(remap[a], remap[b]),
                Gate::Xor(a, b) => self.xor(remap[a], remap[b]),
            };
            remap.push(new);
        }
        Ok(sub.outputs.iter().map(|&o| remap[o]).collect())
    }

    pub fn finish(self, outputs: Vec<usize>) -> BoolCircuit {
        BoolCircuit::new(self.inputs, self.gates, outputs)
            .expect("builder produces gates in topological order")
    }
}

// --- block library ---------------------------------------------------------

/// `w`-bit identity: output word equals the input word.
pub fn identity(w: usize) -> BoolCircuit {
    let b = CircuitBuilder::new(w);
    let outs = b.input_word(0, w);
    b.finish(outs)
}

/// `(a, b) -> a + b` on two `w`-bit inputs; `w + 1` output bits.
pub fn adder(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w);
    let (x, y) = (b.input_word(0, w), b.input_word(w, w));
    let s = b.add(&x, &y);
    b.finish(s)
}

/// One output bit: `a < b` unsigned.
pub fn comparator_lt(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w);
    let (x, y) = (b.input_word(0, w), b.input_word(w, w));
    let r = b.lt(&x, &y);
    b.finish(vec![r])
}

/// One output bit: `a == b`.
pub fn equality(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w);
    let (x, y) = (b.input_word(0, w), b.input_word(w, w));
    let r = b.eq(&x, &y);
    b.finish(vec![r])
}

/// Inputs `a (w) | b (w) | sel (1)`; outputs `a` when `sel = 0`, `b` otherwise.
pub fn mux(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w + 1);
    let (x, y, sel) = (b.input_word(0, w), b.input_word(w, w), b.input(2 * w));
    let r = b.mux(sel, &x, &y);
    b.finish(r)
}

/// `(a, b) -> min(a, b)` on two `w`-bit inputs.
pub fn min_of(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w);
    let (x, y) = (b.input_word(0, w), b.input_word(w, w));
    let r = b.min(&x, &y);
    b.finish(r)
}

/// Hamming distance of two `w`-bit words.
pub fn hamming_distance(w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(2 * w);
    let (x, y) = (b.input_word(0, w), b.input_word(w, w));
    let d = b.xor_word(&x, &y);
    let c = b.popcount(&d);
    b.finish(c)
}

/// Constant `k` as a `w`-bit circuit with no inputs.
pub fn const_k(k: u64, w: usize) -> BoolCircuit {
    let mut b = CircuitBuilder::new(0);
    let word = b.const_word(k, w);
    b.finish(word)
}

/// Complements every output bit: `eval' = (2^w - 1) - eval`. This converts a
/// minimization objective into the equivalent maximization one and back.
pub fn negate_outputs(c: &BoolCircuit) -> BoolCircuit {
    let mut gates = c.gates.clone();
    let outputs = c
        .outputs
        .iter()
        .map(|&o| {
            gates.push(Gate::Not(o));
            gates.len() - 1
        })
        .collect();
    BoolCircuit::new(c.inputs, gates, outputs).expect("negation preserves validity")
}

/// Feeds the outputs of `inner` circuits (concatenated) into `outer`. The
/// composed circuit's inputs are the concatenated inputs of the inner
/// circuits, and `eval(compose) = outer(inner_1(x_1), ..., inner_r(x_r))`.
pub fn compose(outer: &BoolCircuit, inner: &[BoolCircuit]) -> Result<BoolCircuit> {
    let fed: usize = inner.iter().map(|c| c.output_width()).sum();
    if fed != outer.inputs {
        return Err(Error::WidthMismatch {
            expected: outer.inputs,
            got: fed,
        });
    }
    let total_inputs: usize = inner.iter().map(|c| c.inputs).sum();
    let mut b = CircuitBuilder::new(total_inputs);
    let mut offset = 0;
    let mut wired = Vec::with_capacity(fed);
    for c in inner {
        let ins = b.input_word(offset, c.inputs);
        wired.extend(b.splice(c, &ins)?);
        offset += c.inputs;
    }
    let outs = b.splice(outer, &wired)?;
    Ok(b.finish(outs))
}

// --- JSON encoding ----------------------------------------------------------
//
// {"inputs":N,"gates":[{"op":"AND","args":[i,j]},...],"outputs":[refs]}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    op: String,
    args: Vec<usize>,
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (op, args) = match *self {
            Gate::Input(i) => ("INPUT", vec![i]),
            Gate::Const(b) => ("CONST", vec![usize::from(b)]),
            Gate::Not(a) => ("NOT", vec![a]),
            Gate::And(a, b) => ("AND", vec![a, b]),
            Gate::Or(a, b) => ("OR", vec![a, b]),
            Gate::Xor(a, b) => ("XOR", vec![a, b]),
        };
        GateRepr {
            op: op.to_string(),
            args,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = GateRepr::deserialize(d)?;
        gate_from_parts(&repr.op, &repr.args).map_err(D::Error::custom)
    }
}

fn gate_from_parts(op: &str, args: &[usize]) -> Result<Gate> {
    let arity_err = || Error::Parse(format!("gate {op} has wrong arity: {args:?}"));
    match op.to_ascii_uppercase().as_str() {
        "INPUT" => Ok(Gate::Input(*args.first().ok_or_else(arity_err)?)),
        "CONST" => match args {
            [0] => Ok(Gate::Const(false)),
            [1] => Ok(Gate::Const(true)),
            _ => Err(Error::Parse(format!("CONST takes 0 or 1, got {args:?}"))),
        },
        "NOT" => match args {
            [a] => Ok(Gate::Not(*a)),
            _ => Err(arity_err()),
        },
        "AND" => match args {
            [a, b] => Ok(Gate::And(*a, *b)),
            _ => Err(arity_err()),
        },
        "OR" => match args {
            [a, b] => Ok(Gate::Or(*a, *b)),
            _ => Err(arity_err()),
        },
        "XOR" => match args {
            [a, b] => Ok(Gate::Xor(*a, *b)),
            _ => Err(arity_err()),
        },
        other => Err(Error::Parse(format!("unknown gate op {other:?}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Serialize for BoolCircuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CircuitRepr {
            inputs: self.inputs,
            gates: self.gates.clone(),
            outputs: self.outputs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoolCircuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CircuitRepr::deserialize(d)?;
        BoolCircuit::new(repr.inputs, repr.gates, repr.outputs).map_err(D::Error::custom)
    }
}

// --- textual DSL ------------------------------------------------------------
//
//     inputs 3
//     a = INPUT 0
//     b = INPUT 1
//     s = XOR a b
//     outputs s b
//
// Blank lines and `#` comments are ignored; op names are case-insensitive.

/// Parses the hand-written circuit DSL.
pub fn parse_dsl(text: &str) -> Result<BoolCircuit> {
    use std::collections::HashMap;

    let mut inputs: Option<usize> = None;
    let mut names: HashMap<&str, usize> = HashMap::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut outputs: Option<Vec<usize>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["inputs", n] => {
                inputs = Some(
                    n.parse()
                        .map_err(|_| err(format!("bad input count {n:?}")))?,
                );
            }
            ["outputs", rest @ ..] if !rest.is_empty() => {
                let refs = rest
                    .iter()
                    .map(|name| {
                        names
                            .get(name)
                            .copied()
                            .ok_or_else(|| err(format!("unknown gate name {name:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                outputs = Some(refs);
            }
            [name, "=", op, args @ ..] => {
                if names.contains_key(name) {
                    return Err(err(format!("gate {name:?} defined twice")));
                }
                let upper = op.to_ascii_uppercase();
                let arg_ids: Vec<usize> = if upper == "INPUT" || upper == "CONST" {
                    args.iter()
                        .map(|a| a.parse().map_err(|_| err(format!("bad literal {a:?}"))))
                        .collect::<Result<Vec<_>>>()?
                } else {
                    args.iter()
                        .map(|a| {
                            names
                                .get(a)
                                .copied()
                                .ok_or_else(|| err(format!("unknown gate name {a:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?
                };
                let gate = gate_from_parts(&upper, &arg_ids).map_err(|e| err(format!("{e}")))?;
                gates.push(gate);
                names.insert(name, gates.len() - 1);
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }

    let inputs = inputs.ok_or_else(|| Error::Parse("missing `inputs N` line".into()))?;
    let outputs = outputs.ok_or_else(|| Error::Parse("missing `outputs ...` line".into()))?;
    BoolCircuit::new(inputs, gates, outputs)
}

/// Parses a circuit from either JSON (leading `{`) or the textual DSL.
pub fn parse_circuit(text: &str) -> Result<BoolCircuit> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("circuit JSON: {e}")))
    } else {
        parse_dsl(text)
    }
}
