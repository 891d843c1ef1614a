use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{SchemeParams, SubfileId};
use crate::combinatorics::{binom, SubsetId, Subsets};
use crate::error::Result;

/// Content `Z_k` of cache `k`: `W_{i,T}` for every file `i` and every t-subset
/// `T` containing `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheContent {
    pub label: u32,
    files: u32,
    index_sets: Vec<SubsetId>,
}

impl CacheContent {
    /// Index sets `T ∋ label`, lexicographic.
    pub fn index_sets(&self) -> &[SubsetId] {
        &self.index_sets
    }

    /// Stored subfiles, grouped by index set and then by file.
    pub fn subfiles(&self) -> impl Iterator<Item = SubfileId> + '_ {
        self.index_sets
            .iter()
            .flat_map(move |t| (1..=self.files).map(move |i| SubfileId::new(i, *t)))
    }

    pub fn contains(&self, w: &SubfileId) -> bool {
        w.file >= 1
            && w.file <= self.files
            && w.index_set.contains(self.label)
            && self.index_sets.binary_search(&w.index_set).is_ok()
    }

    /// Number of stored subfiles, `N · binom(C-1, t-1)`.
    pub fn len(&self) -> usize {
        self.index_sets.len() * self.files as usize
    }

    pub fn is_empty(&self) -> bool {
        self.index_sets.is_empty() || self.files == 0
    }
}

pub fn build_placement(p: &SchemeParams) -> Vec<CacheContent> {
    let mut caches: Vec<CacheContent> = (1..=p.caches)
        .map(|label| CacheContent { label, files: p.files, index_sets: Vec::new() })
        .collect();
    for t in Subsets::new(p.caches, p.t) {
        for k in t.elements() {
            caches[k as usize - 1].index_sets.push(t);
        }
    }
    caches
}

/// The t-subsets `T` with `T ∩ user ≠ ∅`: exactly the subfile indices `user`
/// can read from at least one of its caches.
pub fn accessible_subfile_indices(p: &SchemeParams, user: &SubsetId) -> Result<Vec<SubsetId>> {
    p.check_user(user)?;
    Ok(Subsets::new(p.caches, p.t).filter(|t| t.intersects(user)).collect())
}

/// `M'/N`, the fraction of the library a user reaches through its `r` caches,
/// by inclusion-exclusion over the cache intersections.
pub fn accessible_fraction(p: &SchemeParams) -> BigRational {
    let (c, r, t) = (i64::from(p.caches), i64::from(p.access), i64::from(p.t));
    let mut sum = BigInt::zero();
    for n in 1..=r {
        let term = BigInt::from(binom(r as u64, n)) * BigInt::from(binom((c - n) as u64, t - n));
        if n % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    BigRational::new(sum, binom(c as u64, t).into())
}
