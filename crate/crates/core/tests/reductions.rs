//! Scale checks for the reduction circuitry beyond the exhaustive desk
//! range: random feasible points at widths the exhaustive scans cannot
//! reach.

mod common;

use common::kneser_cost_reference;
use efxlab_core::*;
use num::ToPrimitive;

/// Draws a uniform weight-`k` vector over `2k + 1` bits by seeded shuffling.
fn random_feasible_point(k: usize, rng: &mut SplitMix64) -> u64 {
    let width = 2 * k + 1;
    let mut positions: Vec<usize> = (0..width).collect();
    for i in (1..width).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        positions.swap(i, j);
    }
    positions[..k].iter().fold(0u64, |acc, &b| acc | 1 << b)
}

#[test]
fn gate_level_cost_matches_the_rule_on_random_points_up_to_p8() {
    for p in [6usize, 7, 8] {
        let circuit = gen::flip_circuit(p, 35, 4, 7_000 + p as u64);
        let flip = FlipInstance::new(circuit).unwrap();
        let art = flip_to_kneser(&flip).unwrap();
        let mut rng = SplitMix64::new(9_100 + p as u64);
        for _ in 0..10_000 {
            let s = random_feasible_point(p, &mut rng);
            assert_eq!(s.count_ones() as usize, p);
            let gate = art.target.cost(s).to_u64().unwrap();
            assert_eq!(
                gate,
                kneser_cost_reference(&flip.circuit, s),
                "p={p} s={s:#b}"
            );
        }
    }
}

#[test]
fn every_feasible_point_matches_at_p3_even_for_wide_outputs() {
    let limits = Limits::default();
    for seed in 0..5u64 {
        let circuit = gen::flip_circuit(3, 25, 6, 7_600 + seed);
        let flip = FlipInstance::new(circuit).unwrap();
        let art = flip_to_kneser(&flip).unwrap();
        let instance = LocalSearchInstance::Kneser(art.target.clone());
        for s in instance.feasible_points(&limits).unwrap() {
            assert_eq!(
                art.target.cost(s).to_u64().unwrap(),
                kneser_cost_reference(&flip.circuit, s)
            );
        }
    }
}
