//! Binomial coefficients and lexicographic ranking of k-subsets of `[n]`.
//!
//! Every identifier in the caching scheme is a subset of cache labels: a user
//! is the r-subset of caches it reads, a subfile is indexed by a t-subset and a
//! coded transmission by a (t+r)-subset. Labels are 1-based and a subset is
//! packed into a `u128` bitmask, so universes hold at most [`MAX_UNIVERSE`]
//! labels. Ranks are 0-based positions in lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;

/// Largest supported universe size `n`.
pub const MAX_UNIVERSE: u32 = 128;

/// Exact, arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// `n choose k`, zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigCount::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigCount::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Pascal table for `n <= MAX_UNIVERSE`; every entry fits in a `u128`.
fn pascal() -> &'static [[u128; MAX_UNIVERSE as usize + 1]] {
    static TABLE: OnceLock<Vec<[u128; MAX_UNIVERSE as usize + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let size = MAX_UNIVERSE as usize + 1;
        let mut rows = vec![[0u128; MAX_UNIVERSE as usize + 1]; size];
        for n in 0..size {
            rows[n][0] = 1;
            for k in 1..=n {
                rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
        }
        rows
    })
}

/// `n choose k` as a machine integer, for `n <= MAX_UNIVERSE`.
pub fn binom_small(n: u32, k: u32) -> u128 {
    assert!(n <= MAX_UNIVERSE, "universe size {n} exceeds {MAX_UNIVERSE}");
    if k > n {
        0
    } else {
        pascal()[n as usize][k as usize]
    }
}

/// A subset of the cache labels `1..=universe`.
///
/// Ordering is lexicographic on the sorted element sequence, which for
/// subsets of equal size is the order used for user numbering.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetId {
    mask: u128,
    universe: u8,
}

impl SubsetId {
    /// Builds a subset from labels in any order. Duplicates and labels outside
    /// `1..=universe` are rejected.
    pub fn new(elements: &[u32], universe: u32) -> Result<Self, Error> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        let mut mask = 0u128;
        for &e in elements {
            if e == 0 || e > universe {
                return Err(Error::LabelOutOfRange { label: e, universe });
            }
            let bit = 1u128 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::DuplicateLabel(e));
            }
            mask |= bit;
        }
        Ok(SubsetId { mask, universe: universe as u8 })
    }

    pub(crate) fn from_mask(mask: u128, universe: u32) -> Self {
        debug_assert!(universe <= MAX_UNIVERSE);
        debug_assert!(universe == MAX_UNIVERSE || mask >> universe == 0);
        SubsetId { mask, universe: universe as u8 }
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn universe(&self) -> u32 {
        u32::from(self.universe)
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, label: u32) -> bool {
        (1..=128).contains(&label) && self.mask & (1u128 << (label - 1)) != 0
    }

    /// Sorted labels.
    pub fn elements(&self) -> Elements {
        Elements { rest: self.mask }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.elements().collect()
    }

    pub fn is_subset_of(&self, other: &SubsetId) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersects(&self, other: &SubsetId) -> bool {
        self.mask & other.mask != 0
    }

    pub fn intersection(&self, other: &SubsetId) -> SubsetId {
        SubsetId { mask: self.mask & other.mask, universe: self.universe }
    }

    pub fn difference(&self, other: &SubsetId) -> SubsetId {
        SubsetId { mask: self.mask & !other.mask, universe: self.universe }
    }

    /// All `k`-subsets of this set, in lexicographic order.
    pub fn subsets(&self, k: u32) -> SubsetsOf {
        SubsetsOf::new(self.to_vec(), k, self.universe())
    }
}

/// Iterator over the labels of a [`SubsetId`] in increasing order.
#[derive(Clone)]
pub struct Elements {
    rest: u128,
}

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.rest == 0 {
            return None;
        }
        let bit = self.rest.trailing_zeros();
        self.rest &= self.rest - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.rest.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl Ord for SubsetId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements()
            .cmp(other.elements())
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for SubsetId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.universe())
    }
}

/// 0-based position of `s` among all `|s|`-subsets of its universe in
/// lexicographic order.
pub fn rank_subset(s: &SubsetId) -> u128 {
    let n = s.universe();
    let k = s.len();
    let mut rank = 0u128;
    let mut prev = 0u32;
    for (i, c) in s.elements().enumerate() {
        let remaining = k - i as u32 - 1;
        // Count subsets that agree on the first i labels but put a smaller
        // label in position i.
        for skipped in (prev + 1)..c {
            rank += binom_small(n - skipped, remaining);
        }
        prev = c;
    }
    rank
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(index: u128, k: u32, n: u32) -> Result<SubsetId, Error> {
    if n > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(n));
    }
    let total = binom_small(n, k);
    if index >= total {
        return Err(Error::RankOutOfRange { index, k, n });
    }
    let mut rest = index;
    let mut mask = 0u128;
    let mut next = 1u32;
    for i in 0..k {
        let remaining = k - i - 1;
        loop {
            let block = binom_small(n - next, remaining);
            if rest < block {
                break;
            }
            rest -= block;
            next += 1;
        }
        mask |= 1u128 << (next - 1);
        next += 1;
    }
    Ok(SubsetId::from_mask(mask, n))
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn enumerate_subsets(n: u32, k: u32) -> Vec<SubsetId> {
    Subsets::new(n, k).collect()
}

/// Lazy lexicographic enumeration of the `k`-subsets of `[n]`.
pub struct Subsets {
    inner: SubsetsOf,
}

impl Subsets {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n <= MAX_UNIVERSE, "universe size {n} exceeds {MAX_UNIVERSE}");
        Subsets { inner: SubsetsOf::new((1..=n).collect(), k, n) }
    }
}

impl Iterator for Subsets {
    type Item = SubsetId;

    fn next(&mut self) -> Option<SubsetId> {
        self.inner.next()
    }
}

/// Lexicographic `k`-subsets of an arbitrary sorted label list.
pub struct SubsetsOf {
    pool: Vec<u32>,
    positions: Vec<usize>,
    universe: u32,
    done: bool,
}

impl SubsetsOf {
    fn new(pool: Vec<u32>, k: u32, universe: u32) -> Self {
        let k = k as usize;
        let done = k > pool.len();
        SubsetsOf { positions: (0..k.min(pool.len())).collect(), pool, universe, done }
    }
}

impl Iterator for SubsetsOf {
    type Item = SubsetId;

    fn next(&mut self) -> Option<SubsetId> {
        if self.done {
            return None;
        }
        let mask = self
            .positions
            .iter()
            .fold(0u128, |m, &p| m | 1u128 << (self.pool[p] - 1));
        let current = SubsetId::from_mask(mask, self.universe);

        // Advance to the lexicographic successor.
        let n = self.pool.len();
        let k = self.positions.len();
        match (0..k).rev().find(|&i| self.positions[i] < n - k + i) {
            Some(i) => {
                self.positions[i] += 1;
                for j in i + 1..k {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(current)
    }
}
