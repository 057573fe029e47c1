//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its runtime budget. Run with
//! `cargo test -p efxlab-core --test acceptance -- --nocapture` to see the
//! per-criterion lines.

mod common;

use std::time::{Duration, Instant};

use common::kneser_cost_reference;
use num::{BigInt, ToPrimitive};

use efxlab_core::checks::CheckOutcome;
use efxlab_core::*;

fn finish(number: usize, name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("criterion {number} [{name}]: PASS ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {number} blew its {budget:?} budget: {elapsed:?}"
    );
}

fn bundle(goods: &[usize], m: usize) -> Bundle {
    Bundle::from_goods(goods, m).unwrap()
}

#[test]
fn criterion_1_example_reproduction() {
    let start = Instant::now();
    let limits = Limits::default();

    // budget-cap example: price-greedy at (1,1,2) picks c first, then fails
    // the size-2 optimality check against {a,b}
    let e1 = budget_cap_example().valuation;
    let prices = PriceVector::parse("1,1,2").unwrap();
    let picks = greedy_with_prices(&e1, &prices).unwrap();
    assert_eq!(picks[0].0, GoodId(2));
    match check_well_layered_at_price(&e1, &prices, &limits).unwrap() {
        CheckOutcome::Fails(w) => {
            assert_eq!(w.prefix_len, 2);
            assert_eq!(w.better, bundle(&[0, 1], 3));
        }
        CheckOutcome::Holds => panic!("price-greedy must fail at size 2"),
    }

    // pair-synergy example: well-layered at 100 seeded price vectors, but
    // not submodular, witnessed at the empty set
    let e2 = pair_synergy_example().valuation;
    for seed in 0..100u64 {
        let p = gen::price_vector(2, seed);
        assert!(
            check_well_layered_at_price(&e2, &p, &limits)
                .unwrap()
                .is_holds(),
            "price seed {seed}"
        );
    }
    match check_submodular(&e2, &limits).unwrap() {
        CheckOutcome::Fails(w) => {
            assert_eq!((w.s, w.t, w.x), (bundle(&[], 2), bundle(&[0], 2), 1));
        }
        CheckOutcome::Holds => panic!("pair synergy is not submodular"),
    }

    // greedy-trap example: greedy splits ({d}, {a,b,c}), the verifier reports
    // the violation v({d}) = 16 < 17 = v({b,c}), the table is submodular but
    // not weakly well-layered
    let e3 = greedy_trap_example().valuation;
    let (alloc, _) = greedy_efx(&e3, 2);
    assert_eq!(*alloc.bundle(0), bundle(&[3], 4));
    assert_eq!(*alloc.bundle(1), bundle(&[0, 1, 2], 4));
    match is_efx_identical(&e3, &alloc).unwrap() {
        EfxVerdict::Violation { i, j, g } => {
            let reduced = alloc.bundle(j).without(GoodId(g));
            assert_eq!(e3.value(alloc.bundle(i)).unwrap(), Value::from_int(16));
            assert_eq!(e3.value(&reduced).unwrap(), Value::from_int(17));
        }
        EfxVerdict::Ok => panic!("greedy output must fail EFX here"),
    }
    assert!(check_submodular(&e3, &limits).unwrap().is_holds());
    assert!(!check_weakly_well_layered(&e3, &limits).unwrap().is_holds());

    finish(1, "example reproduction", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_greedy_property_suite() {
    let start = Instant::now();
    let limits = Limits::default();

    // 504 seeded instances across the four families, m <= 8, n in {2,3,4}
    let mut runs = 0usize;
    for family in 0..4u64 {
        for i in 0..126u64 {
            let seed = family * 1000 + i;
            let m = 1 + (i % 8) as usize;
            let n = 2 + (i % 3) as usize;
            let v = match family {
                0 => gen::additive(m, seed),
                1 => gen::budget_additive(m, seed),
                2 => gen::unit_demand(m, seed),
                _ => gen::oxs(m, seed),
            };
            let (alloc, _) = greedy_efx(&v, n);
            assert!(
                is_efx_identical(&v, &alloc).unwrap().is_ok(),
                "family {family} seed {seed} m {m} n {n}"
            );
            runs += 1;
        }
    }
    assert!(runs >= 500);

    // 100 random monotone tables with m <= 7: whenever the WWL check holds,
    // greedy output verifies EFX (for every n)
    let mut wwl_positive = 0usize;
    for i in 0..100u64 {
        let m = 2 + (i % 6) as usize; // up to 7
        let v = if i % 2 == 0 {
            gen::monotone_table(m, 5000 + i)
        } else {
            gen::wwl_family_table(m, 5000 + i)
        };
        if check_weakly_well_layered(&v, &limits).unwrap().is_holds() {
            wwl_positive += 1;
            for n in 2..=4 {
                let (alloc, _) = greedy_efx(&v, n);
                assert!(
                    is_efx_identical(&v, &alloc).unwrap().is_ok(),
                    "table {i} n {n}: WWL holds but greedy output failed EFX"
                );
            }
        }
    }
    assert!(wwl_positive > 0, "the implication must not be vacuous");

    finish(
        2,
        "greedy EFX property suite",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_3_class_inclusions() {
    let start = Instant::now();
    let limits = Limits::default();

    // 200 instances per class, m <= 6: all weakly well-layered
    for i in 0..200u64 {
        let m = 1 + (i % 6) as usize;
        for (name, v) in [
            ("budget-additive", gen::budget_additive(m, 9000 + i)),
            ("unit-demand", gen::unit_demand(m, 9000 + i)),
            ("oxs", gen::oxs(m, 9000 + i)),
        ] {
            assert!(
                check_weakly_well_layered(&v, &limits).unwrap().is_holds(),
                "{name} instance {i} (m = {m})"
            );
        }
    }

    // closure under strictly increasing post-maps and budget caps on 100
    // WWL-positive tables each
    let mut closed = 0usize;
    let mut seed = 20_000u64;
    while closed < 100 {
        seed += 1;
        let m = 2 + (seed % 4) as usize; // up to 5
        let v = gen::wwl_family_table(m, seed);
        if !check_weakly_well_layered(&v, &limits).unwrap().is_holds() {
            continue;
        }
        closed += 1;

        let slope = Value::ratio(1 + seed % 4, 2);
        let shift = Value::from_int(seed % 5);
        let base = v.clone();
        let affine = Valuation::composed(
            m,
            std::sync::Arc::new(move |b: &Bundle| &(&slope * &base.value(b).unwrap()) + &shift),
        );
        assert!(
            check_weakly_well_layered(&affine, &limits)
                .unwrap()
                .is_holds(),
            "affine closure, seed {seed}"
        );

        let full = v.value(&Bundle::full(m)).unwrap();
        let cap = Value::from_ratio(
            full.into_ratio() * num::BigRational::new(BigInt::from(2), BigInt::from(3)),
        )
        .unwrap();
        let capped_base = v.clone();
        let capped = Valuation::composed(
            m,
            std::sync::Arc::new(move |b: &Bundle| capped_base.value(b).unwrap().min(cap.clone())),
        );
        assert!(
            check_weakly_well_layered(&capped, &limits)
                .unwrap()
                .is_holds(),
            "budget-cap closure, seed {seed}"
        );
    }

    finish(3, "class inclusion suite", start, Duration::from_secs(120));
}

#[test]
fn criterion_4_leximin_solver() {
    let start = Instant::now();

    // 200 random monotone tables, m <= 7, n in {2,3}: EFX arm, verified
    for i in 0..200u64 {
        let m = 2 + (i % 6) as usize;
        let n = 2 + (i % 2) as usize;
        let v = gen::monotone_table(m, 31_000 + i);
        match leximinpp_local_search(&v, n) {
            IdenticalEfxSolution::Efx { allocation } => {
                assert!(allocation.is_complete());
                assert!(
                    is_efx_identical(&v, &allocation).unwrap().is_ok(),
                    "table {i} n {n}"
                );
            }
            IdenticalEfxSolution::NonMonotone { .. } => {
                panic!("monotone table {i} produced a violation arm")
            }
        }
    }

    // 20 deliberately non-monotone tables: either a verified EFX allocation
    // or a re-checkable violation
    for i in 0..20u64 {
        let m = 2 + (i % 4) as usize;
        let v = gen::nonmonotone_table(m, 32_000 + i);
        match leximinpp_local_search(&v, 2) {
            IdenticalEfxSolution::Efx { allocation } => {
                assert!(
                    is_efx_identical(&v, &allocation).unwrap().is_ok(),
                    "table {i}"
                );
            }
            IdenticalEfxSolution::NonMonotone { violation } => {
                assert!(violation.verify(&v), "table {i}: witness must re-evaluate");
            }
        }
    }

    // key order matches the numeric positional encoding on all allocation
    // pairs of 20 integer instances with n, m <= 4
    for i in 0..20u64 {
        let m = 2 + (i % 3) as usize; // up to 4
        let n = 2 + (i % 3) as usize; // up to 4
        let v = gen::monotone_table(m, 33_000 + i);
        let v_all = v.value(&Bundle::full(m)).unwrap();
        let k_base = BigInt::from(m as u64).max(v_all.as_ratio().to_integer()) + 1;
        let count = (n as u64).pow(m as u32);
        let keyed: Vec<(LeximinKey, BigInt)> = (0..count)
            .map(|code| {
                let x = Allocation::from_code(code, n, m);
                (leximin_key(&v, &x).unwrap(), numeric_key(&v, &x, &k_base))
            })
            .collect();
        for a in 0..keyed.len() {
            for b in 0..keyed.len() {
                assert_eq!(
                    keyed[a].0.cmp(&keyed[b].0),
                    keyed[a].1.cmp(&keyed[b].1),
                    "instance {i}: orders disagree on pair ({a}, {b})"
                );
            }
        }
    }

    finish(4, "leximin++ solver suite", start, Duration::from_secs(120));
}

/// Independent numeric encoding of the leximin++ order: positional base-K
/// sum with the worst-off agent in the highest-order slots.
fn numeric_key(v: &Valuation, x: &Allocation, k_base: &BigInt) -> BigInt {
    let n = x.agents();
    let mut agents: Vec<(Value, usize)> =
        (0..n).map(|i| (v.value(x.bundle(i)).unwrap(), i)).collect();
    agents.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut total = BigInt::from(0);
    for (t, (util, agent)) in agents.iter().enumerate() {
        let card = x.bundle(*agent).cardinality();
        let exp_card = 2 * (n - 1 - t) as u32;
        total += BigInt::from(card) * k_base.pow(exp_card)
            + util.as_ratio().to_integer() * k_base.pow(exp_card + 1);
    }
    total
}

#[test]
fn criterion_5_flip_to_kneser_soundness() {
    let start = Instant::now();
    let limits = Limits::default();

    for i in 0..50u64 {
        let p = 2 + (i % 2) as usize; // p <= 3
        let circuit = gen::flip_circuit(p, 20, 3, 40_000 + i);
        let flip = FlipInstance::new(circuit).unwrap();
        let art = flip_to_kneser(&flip).unwrap();
        let reduced = LocalSearchInstance::Kneser(art.target.clone());
        let flip_search = LocalSearchInstance::Flip(flip.clone());

        for s in reduced.feasible_points(&limits).unwrap() {
            // (c) gate-level cost equals the direct three-case rule
            let gate = art.target.cost(s).to_u64().unwrap();
            assert_eq!(
                gate,
                kneser_cost_reference(&flip.circuit, s),
                "circuit {i}, s {s:#b}"
            );

            if is_local_optimum(&reduced, s) {
                // (a) + (b): every local minimum is type (1) and projects to
                // a flip local minimum; types (2) and (3) never survive
                let u = art
                    .map_back(s)
                    .expect("local minima must have the canonical u,!u,0 form");
                assert!(
                    is_local_optimum(&flip_search, u),
                    "circuit {i}: mapped-back point is not locally minimal"
                );
            }
        }
    }

    finish(
        5,
        "flip-to-Kneser soundness",
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_6_kneser_to_efx_soundness() {
    let start = Instant::now();
    let limits = Limits::default();

    for i in 0..20u64 {
        let k = 2 + (i % 2) as usize; // k in {2, 3}
        let circuit = gen::kneser_circuit(k, 18, 3, 50_000 + i);
        let instance = KneserInstance::new(circuit, k, Direction::Maximize).unwrap();
        let art = kneser_to_efx(&instance).unwrap();
        let v = &art.valuation;

        assert!(
            check_monotone(v, &limits).unwrap().is_holds(),
            "circuit {i}"
        );
        assert!(
            check_submodular(v, &limits).unwrap().is_holds(),
            "circuit {i}"
        );

        let search = LocalSearchInstance::Kneser(instance.clone());
        let efx_allocs = brute_force_efx(&[v.clone(), v.clone()], &limits).unwrap();
        assert!(!efx_allocs.is_empty(), "circuit {i}: EFX must exist");
        for alloc in &efx_allocs {
            let mut sizes: Vec<usize> = alloc.bundles().iter().map(Bundle::cardinality).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![k, k + 1], "circuit {i}: EFX bundle sizes");
            let point = map_back_kneser(alloc, &instance).unwrap();
            assert!(
                is_local_optimum(&search, point),
                "circuit {i}: mapped-back point is not a Kneser local maximum"
            );
        }
    }

    finish(
        6,
        "Kneser-to-EFX soundness",
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_7_end_to_end_pipeline() {
    let start = Instant::now();

    for i in 0..100u64 {
        let p = 2 + (i % 3) as usize; // p <= 4
        let gates = 10 + (i % 31) as usize; // <= 40
        let circuit = gen::flip_circuit(p, gates, 4, 60_000 + i);
        let flip = FlipInstance::new(circuit).unwrap();
        let run = end_to_end(&flip).expect("pipeline verifies every stage");
        // re-verify the final point by flipping every bit
        let base = flip.cost(run.flip_point);
        for bit in 0..p {
            assert!(
                flip.cost(run.flip_point ^ (1 << bit)) >= base,
                "circuit {i}: bit {bit} improves the returned point"
            );
        }
    }

    finish(7, "end-to-end pipeline", start, Duration::from_secs(300));
}

#[test]
fn criterion_8_identical_agent_lift() {
    let start = Instant::now();

    for i in 0..20u64 {
        let m = 2 + (i % 5) as usize; // m <= 6
        let v = gen::monotone_table(m, 70_000 + i);
        for n in [3usize, 4, 5] {
            let art = lift_two_to_n(&v, n).unwrap();
            match leximinpp_local_search(&art.valuation, n) {
                IdenticalEfxSolution::Efx { allocation } => {
                    let back = art.map_back(&allocation).unwrap();
                    assert!(
                        is_efx_identical(&v, &back).unwrap().is_ok(),
                        "instance {i} n {n}: back-mapped pair must be EFX"
                    );
                }
                IdenticalEfxSolution::NonMonotone { .. } => {
                    panic!("instance {i} n {n}: lifted monotone instance produced a violation")
                }
            }
        }
    }

    finish(8, "identical-agent lift", start, Duration::from_secs(60));
}

#[test]
fn criterion_9_brute_force_oracles() {
    let start = Instant::now();
    let limits = Limits::default();

    for i in 0..50u64 {
        let m = 2 + (i % 4) as usize; // m <= 5
        let v = gen::monotone_table(m, 80_000 + i);
        let best = brute_force_leximinpp_max(&v, 2, &limits).unwrap();
        assert!(
            is_efx_identical(&v, &best).unwrap().is_ok(),
            "table {i}: global leximin++ maximum must be EFX"
        );
        let all = brute_force_efx(&[v.clone(), v.clone()], &limits).unwrap();
        assert!(!all.is_empty(), "table {i}: EFX allocations must exist");
    }

    finish(9, "brute-force oracles", start, Duration::from_secs(60));
}
