//! The three canonical valuations used throughout the tests and fixtures,
//! each tagged with its expected class verdicts.

use crate::valuation::Valuation;

/// Expected verdicts of the class checkers for a named valuation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExpectedVerdicts {
    pub monotone: bool,
    pub submodular: bool,
    pub cancelable: bool,
    pub weakly_well_layered: bool,
}

#[derive(Clone, Debug)]
pub struct CanonicalExample {
    pub name: &'static str,
    pub valuation: Valuation,
    pub expected: ExpectedVerdicts,
}

/// Budget-additive on three goods `a, b, c` worth `2, 2, 4` under a budget
/// of 4. Weakly well-layered like every budget-additive valuation, but not
/// well-layered: at prices `(1, 1, 2)` greedy grabs `c` first and can no
/// longer reach the unique size-2 optimum `{a, b}`.
pub fn budget_cap_example() -> CanonicalExample {
    CanonicalExample {
        name: "budget_cap",
        valuation: Valuation::budget_additive(
            vec![2u64.into(), 2u64.into(), 4u64.into()],
            4u64.into(),
        ),
        expected: ExpectedVerdicts {
            monotone: true,
            submodular: true,
            cancelable: true,
            weakly_well_layered: true,
        },
    }
}

/// Two complementary goods: only the pair has value. Well-layered (subsets of
/// equal size are interchangeable) but not submodular.
pub fn pair_synergy_example() -> CanonicalExample {
    CanonicalExample {
        name: "pair_synergy",
        valuation: Valuation::table_from_ints(2, &[0, 0, 0, 1]).unwrap(),
        expected: ExpectedVerdicts {
            monotone: true,
            submodular: false,
            cancelable: false,
            weakly_well_layered: true,
        },
    }
}

/// Four goods `a, b, c, d` where the lone spike `d` baits greedy away from
/// the strong pair `{b, c}`: submodular, yet greedy produces the non-EFX
/// split `({d}, {a, b, c})`.
pub fn greedy_trap_example() -> CanonicalExample {
    // a=11 b=10 c=10 d=16, ab=15 ac=15 bc=17, abc=18,
    // and every set containing d with at least two goods is 18
    let values: Vec<u64> = (0u64..16)
        .map(|bits| {
            let has_d = bits >> 3 & 1 == 1;
            if has_d && bits.count_ones() >= 2 {
                return 18;
            }
            match bits {
                0b0000 => 0,
                0b0001 => 11,
                0b0010 => 10,
                0b0100 => 10,
                0b1000 => 16,
                0b0011 => 15,
                0b0101 => 15,
                0b0110 => 17,
                0b0111 => 18,
                _ => unreachable!("all 16 subsets covered"),
            }
        })
        .collect();
    CanonicalExample {
        name: "greedy_trap",
        valuation: Valuation::table_from_ints(4, &values).unwrap(),
        expected: ExpectedVerdicts {
            monotone: true,
            submodular: true,
            cancelable: false,
            weakly_well_layered: false,
        },
    }
}

/// All canonical examples.
pub fn canonical_examples() -> Vec<CanonicalExample> {
    vec![
        budget_cap_example(),
        pair_synergy_example(),
        greedy_trap_example(),
    ]
}
