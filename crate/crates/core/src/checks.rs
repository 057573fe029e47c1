//! Brute-force checkers for the valuation-class hierarchy.
//!
//! Every checker enumerates exhaustively under an explicit size cap and, on
//! failure, returns a witness that re-evaluates to the violation. Scan orders
//! are fixed so the reported witness is deterministic (and lexicographically
//! smallest for the pairwise checks).

use std::collections::{BTreeMap, BTreeSet};

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::allocation::{bundle_as_goods, MonotonicityViolation};
use crate::bundle::{Bundle, GoodId};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::valuation::Valuation;
use crate::value::PriceVector;

/// Verdict of a class checker, with a witness on failure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CheckOutcome<W> {
    Holds,
    Fails(W),
}

impl<W> CheckOutcome<W> {
    pub fn is_holds(&self) -> bool {
        matches!(self, CheckOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            CheckOutcome::Holds => None,
            CheckOutcome::Fails(w) => Some(w),
        }
    }
}

impl<W: Serialize> Serialize for CheckOutcome<W> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            CheckOutcome::Holds => map.serialize_entry("verdict", "holds")?,
            CheckOutcome::Fails(w) => {
                map.serialize_entry("verdict", "fails")?;
                map.serialize_entry("witness", w)?;
            }
        }
        map.end()
    }
}

/// Marginal-gap witness: adding `x` to the superset `t` gains strictly more
/// than adding it to the subset `s`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SubmodularityWitness {
    #[serde(with = "bundle_as_goods")]
    pub s: Bundle,
    #[serde(with = "bundle_as_goods")]
    pub t: Bundle,
    pub x: usize,
}

/// Cancelability witness: `v(s + x) > v(t + x)` yet `v(s) <= v(t)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CancelabilityWitness {
    #[serde(with = "bundle_as_goods")]
    pub s: Bundle,
    #[serde(with = "bundle_as_goods")]
    pub t: Bundle,
    pub x: usize,
}

/// A greedy prefix that is not cardinality-optimal: running greedy inside
/// `ground`, some tie-branch reaches `trajectory` (its first `prefix_len`
/// picks) whose value falls short of the size-`prefix_len` optimum `better`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LayeredWitness {
    #[serde(with = "bundle_as_goods")]
    pub ground: Bundle,
    pub trajectory: Vec<usize>,
    pub prefix_len: usize,
    #[serde(with = "bundle_as_goods")]
    pub better: Bundle,
}

fn ensure_goods_cap(v: &Valuation, cap: usize, what: &'static str) -> Result<usize> {
    let m = v.goods();
    if m > cap {
        return Err(Error::LimitExceeded {
            what,
            requested: m as u64,
            limit: cap as u64,
        });
    }
    Ok(m)
}

/// Materializes all `2^m` values of `v` as signed rationals, indexed by
/// bundle bits.
fn value_table(v: &Valuation, m: usize) -> Result<Vec<BigRational>> {
    Bundle::all(m)
        .map(|b| v.value(&b).map(crate::value::Value::into_ratio))
        .collect()
}

/// Monotonicity, via nonnegative single-good marginals; the witness pair is
/// `(S, S + g)`.
pub fn check_monotone(
    v: &Valuation,
    limits: &Limits,
) -> Result<CheckOutcome<MonotonicityViolation>> {
    let m = ensure_goods_cap(v, limits.brute_force_goods, "monotonicity scan goods")?;
    let table = value_table(v, m)?;
    for s in Bundle::all(m) {
        for g in s.complement().iter() {
            let t = s.with(g);
            if table[t.bits() as usize] < table[s.bits() as usize] {
                return Ok(CheckOutcome::Fails(MonotonicityViolation { s, t }));
            }
        }
    }
    Ok(CheckOutcome::Holds)
}

/// Submodularity via the pairwise local characterization: for every `S` and
/// distinct `x, y` outside `S`, the marginal of `x` at `S` must be at least
/// its marginal at `S + y`. Equivalent to the subset-pair definition; the
/// test suite cross-checks the two routes.
pub fn check_submodular(
    v: &Valuation,
    limits: &Limits,
) -> Result<CheckOutcome<SubmodularityWitness>> {
    let m = ensure_goods_cap(v, limits.brute_force_goods, "submodularity scan goods")?;
    let table = value_table(v, m)?;
    for s in Bundle::all(m) {
        let sv = &table[s.bits() as usize];
        for y in s.complement().iter() {
            let t = s.with(y);
            let tv = &table[t.bits() as usize];
            for x in s.complement().iter() {
                if x == y {
                    continue;
                }
                let at_s = &table[s.with(x).bits() as usize] - sv;
                let at_t = &table[t.with(x).bits() as usize] - tv;
                if at_s < at_t {
                    return Ok(CheckOutcome::Fails(SubmodularityWitness { s, t, x: x.0 }));
                }
            }
        }
    }
    Ok(CheckOutcome::Holds)
}

/// Cancelability: `v(S + x) > v(T + x)` must imply `v(S) > v(T)` for all
/// `S`, `T` and `x` outside both.
pub fn check_cancelable(
    v: &Valuation,
    limits: &Limits,
) -> Result<CheckOutcome<CancelabilityWitness>> {
    let m = ensure_goods_cap(v, limits.brute_force_goods, "cancelability scan goods")?;
    let table = value_table(v, m)?;
    for s in Bundle::all(m) {
        for t in Bundle::all(m) {
            for x in s.union(&t).complement().iter() {
                let with_s = &table[s.with(x).bits() as usize];
                let with_t = &table[t.with(x).bits() as usize];
                if with_s > with_t && table[s.bits() as usize] <= table[t.bits() as usize] {
                    return Ok(CheckOutcome::Fails(CancelabilityWitness { s, t, x: x.0 }));
                }
            }
        }
    }
    Ok(CheckOutcome::Holds)
}

/// All maximal greedy pick sequences on `ground`, branching exhaustively on
/// argmax ties, in lexicographic order.
pub fn greedy_trajectories(
    v: &Valuation,
    ground: &Bundle,
    limits: &Limits,
) -> Result<Vec<Vec<GoodId>>> {
    if ground.width() != v.goods() {
        return Err(Error::WidthMismatch {
            expected: v.goods(),
            got: ground.width(),
        });
    }
    if ground.cardinality() > limits.trajectory_goods {
        return Err(Error::LimitExceeded {
            what: "trajectory ground set",
            requested: ground.cardinality() as u64,
            limit: limits.trajectory_goods as u64,
        });
    }

    fn extend(
        v: &Valuation,
        ground: &Bundle,
        current: Bundle,
        picks: &mut Vec<GoodId>,
        out: &mut Vec<Vec<GoodId>>,
    ) {
        if current == *ground {
            out.push(picks.clone());
            return;
        }
        let mut best: Option<crate::value::Value> = None;
        let mut tied = Vec::new();
        for g in ground.iter().filter(|g| !current.contains(*g)) {
            let val = v.value(&current.with(g)).expect("widths checked");
            match &best {
                Some(top) if val < *top => {}
                Some(top) if val == *top => tied.push(g),
                _ => {
                    best = Some(val);
                    tied.clear();
                    tied.push(g);
                }
            }
        }
        for g in tied {
            picks.push(g);
            extend(v, ground, current.with(g), picks, out);
            picks.pop();
        }
    }

    let mut out = Vec::new();
    extend(
        v,
        ground,
        Bundle::empty(ground.width()),
        &mut Vec::new(),
        &mut out,
    );
    Ok(out)
}

/// Shared scan: runs greedy inside `ground` over the value table (branching
/// on every tie, deduplicating by reached set), and reports the first prefix
/// that misses the size-`i` optimum.
fn greedy_prefix_scan(table: &[BigRational], ground: Bundle) -> Option<LayeredWitness> {
    let size = ground.cardinality();
    if size == 0 {
        return None;
    }

    // per-cardinality optimum over subsets of `ground`; ties keep the
    // smallest mask (subset order is ascending)
    let mut best: Vec<Option<(BigRational, Bundle)>> = vec![None; size + 1];
    for sub in ground.subsets() {
        let c = sub.cardinality();
        let val = &table[sub.bits() as usize];
        match &best[c] {
            Some((top, _)) if top >= val => {}
            _ => best[c] = Some((val.clone(), sub)),
        }
    }

    let m = ground.width();
    let mut level: Vec<u64> = vec![Bundle::empty(m).bits()];
    let mut parents: BTreeMap<u64, (u64, GoodId)> = BTreeMap::new();

    for (i, size_best) in best.iter().enumerate().take(size + 1).skip(1) {
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for &s_bits in &level {
            let s = Bundle::from_bits(s_bits, m).expect("scan stays in width");
            let mut top: Option<&BigRational> = None;
            let mut tied: Vec<GoodId> = Vec::new();
            for g in ground.iter().filter(|g| !s.contains(*g)) {
                let val = &table[s.with(g).bits() as usize];
                match top {
                    Some(t) if val < t => {}
                    Some(t) if val == t => tied.push(g),
                    _ => {
                        top = Some(val);
                        tied.clear();
                        tied.push(g);
                    }
                }
            }
            for g in tied {
                let child = s.with(g).bits();
                if next.insert(child) {
                    parents.insert(child, (s_bits, g));
                }
            }
        }

        let (opt_val, opt_set) = size_best
            .as_ref()
            .expect("ground has subsets of every size");
        for &child in &next {
            if &table[child as usize] < opt_val {
                // rebuild one trajectory leading to this prefix
                let mut picks = Vec::with_capacity(i);
                let mut cur = child;
                while cur != 0 {
                    let (prev, g) = parents[&cur];
                    picks.push(g.0);
                    cur = prev;
                }
                picks.reverse();
                return Some(LayeredWitness {
                    ground,
                    trajectory: picks,
                    prefix_len: i,
                    better: *opt_set,
                });
            }
        }
        level = next.into_iter().collect();
    }
    None
}

/// Weakly well-layered: for every ground subset, every greedy tie-branch
/// produces cardinality-optimal prefixes.
pub fn check_weakly_well_layered(
    v: &Valuation,
    limits: &Limits,
) -> Result<CheckOutcome<LayeredWitness>> {
    let m = ensure_goods_cap(v, limits.layered_goods, "well-layered scan goods")?;
    let table = value_table(v, m)?;
    for ground in Bundle::all(m) {
        if let Some(witness) = greedy_prefix_scan(&table, ground) {
            return Ok(CheckOutcome::Fails(witness));
        }
    }
    Ok(CheckOutcome::Holds)
}

fn priced_table(v: &Valuation, p: &PriceVector, m: usize) -> Result<Vec<BigRational>> {
    if p.len() != m {
        return Err(Error::WidthMismatch {
            expected: m,
            got: p.len(),
        });
    }
    let mut table = Vec::with_capacity(1 << m);
    for b in Bundle::all(m) {
        let mut vp = v.value(&b)?.into_ratio();
        for g in b.iter() {
            vp -= &p.0[g.0];
        }
        table.push(vp);
    }
    Ok(table)
}

/// Deterministic greedy on the price-perturbed valuation `v_p`, smallest good
/// id on ties; returns each pick with the running `v_p` value (which may be
/// negative).
pub fn greedy_with_prices(v: &Valuation, p: &PriceVector) -> Result<Vec<(GoodId, BigRational)>> {
    let m = v.goods();
    if p.len() != m {
        return Err(Error::WidthMismatch {
            expected: m,
            got: p.len(),
        });
    }
    let vp = |b: &Bundle| -> Result<BigRational> {
        let mut val = v.value(b)?.into_ratio();
        for g in b.iter() {
            val -= &p.0[g.0];
        }
        Ok(val)
    };
    let mut current = Bundle::empty(m);
    let mut picks = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(BigRational, GoodId)> = None;
        for g in current.complement().iter() {
            let val = vp(&current.with(g))?;
            match &best {
                Some((top, _)) if *top >= val => {}
                _ => best = Some((val, g)),
            }
        }
        let (val, g) = best.expect("loop runs while goods remain");
        current = current.with(g);
        picks.push((g, val));
    }
    Ok(picks)
}

/// Well-layeredness at one fixed price vector: every greedy tie-branch on
/// `v_p` over the full ground set must reach size-`i` optima of `v_p`.
///
/// This checks a single price vector only; the full property quantifies over
/// all real price vectors and is out of reach for enumeration.
pub fn check_well_layered_at_price(
    v: &Valuation,
    p: &PriceVector,
    limits: &Limits,
) -> Result<CheckOutcome<LayeredWitness>> {
    let m = ensure_goods_cap(v, limits.layered_goods, "well-layered scan goods")?;
    let table = priced_table(v, p, m)?;
    match greedy_prefix_scan(&table, Bundle::full(m)) {
        Some(witness) => Ok(CheckOutcome::Fails(witness)),
        None => Ok(CheckOutcome::Holds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{budget_cap_example, greedy_trap_example, pair_synergy_example};
    use crate::gen;
    use crate::value::Value;
    use num::BigInt;
    use num::Zero;

    fn limits() -> Limits {
        Limits::default()
    }

    fn b(goods: &[usize], m: usize) -> Bundle {
        Bundle::from_goods(goods, m).unwrap()
    }

    #[test]
    fn greedy_trap_table_is_monotone_and_submodular() {
        let v = greedy_trap_example().valuation;
        assert!(check_monotone(&v, &limits()).unwrap().is_holds());
        assert!(check_submodular(&v, &limits()).unwrap().is_holds());
    }

    #[test]
    fn constructed_drop_fails_monotonicity_with_witness() {
        let v = Valuation::table_from_ints(2, &[0, 1, 0, 0]).unwrap();
        match check_monotone(&v, &limits()).unwrap() {
            CheckOutcome::Fails(w) => {
                assert_eq!(w.s, b(&[0], 2));
                assert_eq!(w.t, b(&[0, 1], 2));
                assert!(w.verify(&v));
            }
            CheckOutcome::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn pair_synergy_fails_submodularity_at_the_empty_set() {
        let v = pair_synergy_example().valuation;
        match check_submodular(&v, &limits()).unwrap() {
            CheckOutcome::Fails(w) => {
                assert_eq!(w.s, b(&[], 2));
                assert_eq!(w.t, b(&[0], 2));
                assert_eq!(w.x, 1);
                // re-evaluate: marginal of b at {} is 0, at {a} is 1
                let at_s = v.marginal(&w.s, GoodId(w.x)).unwrap();
                let at_t = v.marginal(&w.t, GoodId(w.x)).unwrap();
                assert!(at_s < at_t);
            }
            CheckOutcome::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn additive_valuations_are_submodular() {
        let v = gen::additive(5, 42);
        assert!(check_submodular(&v, &limits()).unwrap().is_holds());
    }

    /// Direct subset-pair definition of submodularity, as an oracle for the
    /// pairwise characterization.
    fn submodular_by_definition(v: &Valuation) -> bool {
        let m = v.goods();
        for s in Bundle::all(m) {
            for t in Bundle::all(m) {
                if !s.is_subset_of(&t) {
                    continue;
                }
                for x in t.complement().iter() {
                    let at_s = v.marginal(&s, x).unwrap();
                    let at_t = v.marginal(&t, x).unwrap();
                    if at_s < at_t {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn pairwise_characterization_agrees_with_subset_pair_definition() {
        for seed in 0..60u64 {
            let m = 2 + (seed % 4) as usize; // up to 5 goods
            let v = gen::nonmonotone_table(m, seed);
            assert_eq!(
                check_submodular(&v, &limits()).unwrap().is_holds(),
                submodular_by_definition(&v),
                "seed {seed}"
            );
        }
        for seed in 0..10u64 {
            let v = gen::coverage_table(5, seed);
            assert!(check_submodular(&v, &limits()).unwrap().is_holds());
            assert!(submodular_by_definition(&v));
        }
    }

    #[test]
    fn unit_demand_and_budget_additive_are_cancelable() {
        for seed in 0..15u64 {
            let m = 2 + (seed % 5) as usize; // up to 6
            let ud = gen::unit_demand(m, seed);
            assert!(
                check_cancelable(&ud, &limits()).unwrap().is_holds(),
                "ud seed {seed}"
            );
            let ba = gen::budget_additive(m, seed);
            assert!(
                check_cancelable(&ba, &limits()).unwrap().is_holds(),
                "ba seed {seed}"
            );
        }
    }

    #[test]
    fn greedy_trap_table_is_not_cancelable() {
        let v = greedy_trap_example().valuation;
        match check_cancelable(&v, &limits()).unwrap() {
            CheckOutcome::Fails(w) => {
                let x = GoodId(w.x);
                assert!(!w.s.contains(x) && !w.t.contains(x));
                let vs = v.value(&w.s.with(x)).unwrap();
                let vt = v.value(&w.t.with(x)).unwrap();
                assert!(vs > vt);
                assert!(v.value(&w.s).unwrap() <= v.value(&w.t).unwrap());
            }
            CheckOutcome::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn distinct_additive_weights_have_one_trajectory() {
        let v = Valuation::additive(vec![3u64.into(), 2u64.into(), 1u64.into()]);
        let trajectories = greedy_trajectories(&v, &Bundle::full(3), &limits()).unwrap();
        assert_eq!(trajectories, vec![vec![GoodId(0), GoodId(1), GoodId(2)]]);
    }

    #[test]
    fn all_equal_weights_branch_into_every_permutation() {
        let v = Valuation::additive(vec![1u64.into(); 4])
            .materialize_table()
            .unwrap();
        let trajectories = greedy_trajectories(&v, &Bundle::full(4), &limits()).unwrap();
        assert_eq!(trajectories.len(), 24);
        // ground-set restriction also branches fully
        let sub = b(&[1, 3], 4);
        assert_eq!(greedy_trajectories(&v, &sub, &limits()).unwrap().len(), 2);
    }

    #[test]
    fn budget_cap_first_pick_is_the_big_good() {
        let v = budget_cap_example().valuation;
        let trajectories = greedy_trajectories(&v, &Bundle::full(3), &limits()).unwrap();
        for t in &trajectories {
            assert_eq!(
                t[0],
                GoodId(2),
                "under zero prices the first pick is good c"
            );
        }
    }

    #[test]
    fn trajectory_limit_is_enforced() {
        let v = Valuation::additive(vec![1u64.into(); 13]);
        let caps = Limits {
            trajectory_goods: 12,
            ..Limits::default()
        };
        assert!(matches!(
            greedy_trajectories(&v, &Bundle::full(13), &caps),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn greedy_trap_is_not_weakly_well_layered() {
        let v = greedy_trap_example().valuation;
        match check_weakly_well_layered(&v, &limits()).unwrap() {
            CheckOutcome::Fails(w) => {
                // earliest failure: inside {a,b,c}, greedy takes a then b or c
                // for 15, but {b,c} is worth 17
                assert_eq!(w.ground, b(&[0, 1, 2], 4));
                assert_eq!(w.prefix_len, 2);
                assert_eq!(w.trajectory.len(), 2);
                assert_eq!(w.trajectory[0], 0);
                assert_eq!(w.better, b(&[1, 2], 4));
                // the witness re-evaluates as a genuine gap
                let prefix = b(&w.trajectory, 4);
                assert!(v.value(&prefix).unwrap() < v.value(&w.better).unwrap());
            }
            CheckOutcome::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn budget_additive_and_unit_demand_are_weakly_well_layered() {
        for seed in 0..20u64 {
            let m = 2 + (seed % 5) as usize;
            assert!(
                check_weakly_well_layered(&gen::budget_additive(m, seed), &limits())
                    .unwrap()
                    .is_holds(),
                "ba seed {seed}"
            );
            assert!(
                check_weakly_well_layered(&gen::unit_demand(m, seed), &limits())
                    .unwrap()
                    .is_holds(),
                "ud seed {seed}"
            );
        }
    }

    #[test]
    fn oxs_instances_are_weakly_well_layered() {
        for seed in 0..20u64 {
            let m = 2 + (seed % 5) as usize; // up to 6
            let v = gen::oxs(m, seed);
            assert!(
                check_weakly_well_layered(&v, &limits()).unwrap().is_holds(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn cancelable_tables_are_weakly_well_layered() {
        let mut seen_cancelable = 0;
        for seed in 0..80u64 {
            let m = 2 + (seed % 3) as usize; // up to 4: keeps the scan cheap
            let v = gen::monotone_table(m, seed);
            if check_cancelable(&v, &limits()).unwrap().is_holds() {
                seen_cancelable += 1;
                assert!(
                    check_weakly_well_layered(&v, &limits()).unwrap().is_holds(),
                    "seed {seed}"
                );
            }
        }
        assert!(seen_cancelable > 5);
    }

    #[test]
    fn wwl_closure_under_increasing_maps_and_budget_caps() {
        let mut tested = 0;
        for seed in 0..30u64 {
            let m = 2 + (seed % 3) as usize;
            let v = gen::wwl_family_table(m, seed);
            if !check_weakly_well_layered(&v, &limits()).unwrap().is_holds() {
                continue;
            }
            tested += 1;
            let (table_m, values) = match &v {
                Valuation::Table { m, values } => (*m, values.clone()),
                _ => unreachable!("generator materializes tables"),
            };

            // pure positive scaling keeps the table normalized
            let slope = Value::ratio(3 + seed % 5, 2);
            let scaled: Vec<Value> = values.iter().map(|val| &slope * val).collect();
            let scaled_v = Valuation::table(table_m, scaled).unwrap();
            assert!(
                check_weakly_well_layered(&scaled_v, &limits())
                    .unwrap()
                    .is_holds(),
                "scaling, seed {seed}"
            );

            // an affine map with positive shift leaves the normalized world;
            // wrap it as a composed rule (the scan does not need v(empty) = 0)
            let shift = Value::from_int(1 + seed % 7);
            let base = v.clone();
            let affine = Valuation::composed(
                table_m,
                std::sync::Arc::new(move |bundle: &Bundle| {
                    &(&slope * &base.value(bundle).unwrap()) + &shift
                }),
            );
            assert!(
                check_weakly_well_layered(&affine, &limits())
                    .unwrap()
                    .is_holds(),
                "affine map, seed {seed}"
            );

            // budget cap at roughly half the top value
            let cap = Value::from_ratio(
                v.value(&Bundle::full(table_m)).unwrap().into_ratio()
                    / BigRational::from_integer(BigInt::from(2)),
            )
            .unwrap();
            let capped: Vec<Value> = values
                .iter()
                .map(|val| val.clone().min(cap.clone()))
                .collect();
            let capped_v = Valuation::table(table_m, capped).unwrap();
            assert!(
                check_weakly_well_layered(&capped_v, &limits())
                    .unwrap()
                    .is_holds(),
                "budget cap, seed {seed}"
            );
        }
        assert!(tested > 10);
    }

    #[test]
    fn budget_cap_price_greedy_picks_c_then_misses_the_pair() {
        let v = budget_cap_example().valuation;
        let p = PriceVector::parse("1,1,2").unwrap();
        let picks = greedy_with_prices(&v, &p).unwrap();
        assert_eq!(picks[0].0, GoodId(2), "good c first");
        assert_eq!(picks[0].1, BigRational::from_integer(2.into()));

        match check_well_layered_at_price(&v, &p, &limits()).unwrap() {
            CheckOutcome::Fails(w) => {
                assert_eq!(w.prefix_len, 2);
                assert_eq!(
                    w.better,
                    b(&[0, 1], 3),
                    "{{a,b}} is the unique optimum of size 2"
                );
                assert!(w.trajectory.contains(&2));
            }
            CheckOutcome::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn pair_synergy_is_well_layered_at_sampled_prices() {
        let v = pair_synergy_example().valuation;
        for seed in 0..100u64 {
            let p = gen::price_vector(2, seed);
            assert!(
                check_well_layered_at_price(&v, &p, &limits())
                    .unwrap()
                    .is_holds(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn additive_is_well_layered_at_any_price() {
        for seed in 0..25u64 {
            let m = 2 + (seed % 5) as usize;
            let v = gen::additive(m, seed);
            let p = gen::price_vector(m, seed + 17);
            assert!(
                check_well_layered_at_price(&v, &p, &limits())
                    .unwrap()
                    .is_holds(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn high_prices_keep_greedy_inside_the_cheap_set() {
        for seed in 0..15u64 {
            let m = 5;
            let v = gen::monotone_table(m, seed);
            let ground = b(&[0, 2, 3], m);
            let fence = v.value(&Bundle::full(m)).unwrap().into_ratio()
                + BigRational::from_integer(1.into());
            let prices: Vec<BigRational> = (0..m)
                .map(|g| {
                    if ground.contains(GoodId(g)) {
                        BigRational::zero()
                    } else {
                        fence.clone()
                    }
                })
                .collect();
            let picks = greedy_with_prices(&v, &PriceVector(prices)).unwrap();
            for (g, _) in picks.iter().take(ground.cardinality()) {
                assert!(
                    ground.contains(*g),
                    "seed {seed}: pick {g} left the cheap set"
                );
            }
        }
    }

    #[test]
    fn zero_prices_on_additive_sort_by_weight() {
        let v = Valuation::additive(vec![2u64.into(), 9u64.into(), 4u64.into()]);
        let picks = greedy_with_prices(&v, &PriceVector::zeros(3)).unwrap();
        let order: Vec<usize> = picks.iter().map(|(g, _)| g.0).collect();
        assert_eq!(order, vec![1, 2, 0]);
    }

    #[test]
    fn size_caps_are_errors_not_samples() {
        let v = Valuation::additive(vec![1u64.into(); 11]);
        let caps = Limits {
            layered_goods: 10,
            ..Limits::default()
        };
        assert!(matches!(
            check_weakly_well_layered(&v, &caps),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
