//! Oracles shared by the integration suites. These are deliberately written
//! against the problem definitions, independent of the gate-level and
//! solver-side implementations they check.

use efxlab_core::BoolCircuit;
use num::ToPrimitive;

/// Direct three-case evaluator for the reduced Kneser cost over `s = u v b`:
/// doubled flip cost on canonical points, odd min-cost on flag points at
/// distance one, penalty plus distance everywhere else.
pub fn kneser_cost_reference(flip: &BoolCircuit, s: u64) -> u64 {
    let p = flip.inputs();
    let w = flip.output_width();
    let mask = (1u64 << p) - 1;
    let u = s & mask;
    let v = s >> p & mask;
    let b = s >> (2 * p) & 1;
    let nu = !u & mask;
    let dist = u64::from((nu ^ v).count_ones());
    let cf = |x: u64| flip.eval(x).to_u64().expect("small output widths");
    let big_m = 1u64 << (w + 1);
    if b == 0 && dist == 0 {
        2 * cf(u)
    } else if b == 1 && dist == 1 {
        2 * cf(nu).min(cf(v)) + 1
    } else {
        big_m + dist
    }
}
