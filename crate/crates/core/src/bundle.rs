//! Goods and bundles.
//!
//! A bundle is a subset of the `m` goods of an instance, stored as a bit
//! mask. All subset enumeration used by the brute-force checkers lives here.

use std::fmt;

use crate::error::{Error, Result};

/// Bundles are 64-bit masks; instances larger than this are far beyond any
/// brute-force limit in this crate anyway.
pub const MAX_GOODS: usize = 63;

/// Index of a good, in `[0, m)` for the owning instance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GoodId(pub usize);

impl fmt::Display for GoodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// A subset of the goods `[0, m)` as a fixed-width bit vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bundle {
    bits: u64,
    m: usize,
}

impl Bundle {
    pub fn empty(m: usize) -> Self {
        debug_assert!(m <= MAX_GOODS);
        Bundle { bits: 0, m }
    }

    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_GOODS);
        Bundle { bits: mask(m), m }
    }

    /// Builds a bundle from a raw mask; bits at or above `m` must be clear.
    pub fn from_bits(bits: u64, m: usize) -> Result<Self> {
        if m > MAX_GOODS {
            return Err(Error::LimitExceeded {
                what: "goods per instance",
                requested: m as u64,
                limit: MAX_GOODS as u64,
            });
        }
        if bits & !mask(m) != 0 {
            return Err(Error::InvalidValuation(format!(
                "bundle mask {bits:#b} has bits above width {m}"
            )));
        }
        Ok(Bundle { bits, m })
    }

    pub fn from_goods(goods: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &g in goods {
            if g >= m {
                return Err(Error::WidthMismatch {
                    expected: m,
                    got: g + 1,
                });
            }
            bits |= 1 << g;
        }
        Bundle::from_bits(bits, m)
    }

    pub fn singleton(g: GoodId, m: usize) -> Self {
        debug_assert!(g.0 < m);
        Bundle { bits: 1 << g.0, m }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, g: GoodId) -> bool {
        g.0 < self.m && self.bits >> g.0 & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Bundle) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint_from(&self, other: &Bundle) -> bool {
        self.bits & other.bits == 0
    }

    #[must_use]
    pub fn with(&self, g: GoodId) -> Bundle {
        debug_assert!(g.0 < self.m);
        Bundle {
            bits: self.bits | 1 << g.0,
            m: self.m,
        }
    }

    #[must_use]
    pub fn without(&self, g: GoodId) -> Bundle {
        Bundle {
            bits: self.bits & !(1 << g.0),
            m: self.m,
        }
    }

    #[must_use]
    pub fn union(&self, other: &Bundle) -> Bundle {
        debug_assert_eq!(self.m, other.m);
        Bundle {
            bits: self.bits | other.bits,
            m: self.m,
        }
    }

    #[must_use]
    pub fn complement(&self) -> Bundle {
        Bundle {
            bits: !self.bits & mask(self.m),
            m: self.m,
        }
    }

    /// Goods in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = GoodId> + '_ {
        let m = self.m;
        (0..m).filter(move |&g| self.bits >> g & 1 == 1).map(GoodId)
    }

    pub fn goods(&self) -> Vec<usize> {
        self.iter().map(|g| g.0).collect()
    }

    /// All `2^m` bundles of width `m` in ascending mask order.
    pub fn all(m: usize) -> impl Iterator<Item = Bundle> {
        debug_assert!(m <= MAX_GOODS);
        (0..=mask(m)).map(move |bits| Bundle { bits, m })
    }

    /// All subsets of `self` (including the empty set and `self`), in
    /// ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = Bundle> + '_ {
        let sup = self.bits;
        let m = self.m;
        std::iter::successors(Some(0u64), move |&cur| {
            if cur == sup {
                None
            } else {
                // next submask of `sup` above `cur`
                Some(cur.wrapping_sub(sup) & sup)
            }
        })
        .map(move |bits| Bundle { bits, m })
    }
}

fn mask(m: usize) -> u64 {
    if m == 0 {
        0
    } else {
        u64::MAX >> (64 - m)
    }
}

fn fmt_bundle(b: &Bundle, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (idx, g) in b.iter().enumerate() {
        if idx > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", g.0)?;
    }
    write!(f, "}}")
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bundle(self, f)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bundle(self, f)
    }
}
