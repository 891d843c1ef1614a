//! The multi-access coded caching scheme.
//!
//! `C` caches each store every subfile `W_{i,T}` whose t-subset index `T`
//! contains the cache label. A user reads a distinct set of `r` caches and is
//! identified with that r-subset. For each (t+r)-subset `S` of caches the
//! server broadcasts the XOR of `W_{d_U, S\U}` over all users `U ⊂ S`; every
//! user in `S` already holds all but its own term.

mod decode;
mod delivery;
mod placement;
mod simulate;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_bigint::BigInt;
use serde::Serialize;

use crate::combinatorics::{binom_small, rank_subset, unrank_subset, Subsets, SubsetId, MAX_UNIVERSE};
use crate::error::{Error, Result};

pub use decode::{decode_user, DecodePlan, PeelStep};
pub use delivery::generate_transmissions;
pub use placement::{accessible_fraction, accessible_subfile_indices, build_placement, CacheContent};
pub use simulate::{random_payloads, simulate_end_to_end, Simulation};

/// One instance of the scheme: `C` caches, access degree `r`, integer cache
/// parameter `t = C·M/N` and `N` files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeParams {
    pub caches: u32,
    pub access: u32,
    pub t: u32,
    pub files: u32,
}

impl SchemeParams {
    pub fn new(caches: u32, access: u32, t: u32, files: u32) -> Result<Self> {
        if caches == 0 || caches > MAX_UNIVERSE {
            return Err(Error::InvalidParams(format!("C = {caches} must be in 1..={MAX_UNIVERSE}")));
        }
        if access == 0 || access > caches {
            return Err(Error::InvalidParams(format!("r = {access} must be in 1..={caches}")));
        }
        if t == 0 || t > caches {
            return Err(Error::InvalidParams(format!("t = {t} must be in 1..={caches}")));
        }
        if files == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        Ok(SchemeParams { caches, access, t, files })
    }

    /// `K = binom(C, r)`.
    pub fn num_users(&self) -> u128 {
        binom_small(self.caches, self.access)
    }

    /// `F = binom(C, t)`.
    pub fn subpacketization(&self) -> u128 {
        binom_small(self.caches, self.t)
    }

    /// Cache size `M = tN/C` in file units.
    pub fn memory(&self) -> BigRational {
        BigRational::new(BigInt::from(self.t) * self.files, BigInt::from(self.caches))
    }

    /// `M/N = t/C`.
    pub fn memory_fraction(&self) -> BigRational {
        BigRational::new(self.t.into(), self.caches.into())
    }

    /// The `index`-th user (0-based) in lexicographic order.
    pub fn user(&self, index: u128) -> Result<SubsetId> {
        unrank_subset(index, self.access, self.caches)
    }

    pub fn users(&self) -> Subsets {
        Subsets::new(self.caches, self.access)
    }

    pub fn is_user(&self, s: &SubsetId) -> bool {
        s.universe() == self.caches && s.len() == self.access
    }

    fn check_user(&self, s: &SubsetId) -> Result<()> {
        if self.is_user(s) {
            Ok(())
        } else {
            Err(Error::UnknownUser { user: *s, access: self.access, caches: self.caches })
        }
    }
}

/// Subfile `W_{file, index_set}`; `file` is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubfileId {
    pub file: u32,
    pub index_set: SubsetId,
}

impl SubfileId {
    pub fn new(file: u32, index_set: SubsetId) -> Self {
        SubfileId { file, index_set }
    }

    /// `"fileIndex:indexSet"`, e.g. `"3:{1,4}"`.
    pub fn label(&self) -> String {
        format!("{}:{}", self.file, self.index_set)
    }
}

/// Compact notation: `W_{1,3}` for singleton index sets, `W_{1,{4,5}}`
/// otherwise.
impl fmt::Display for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index_set.len() == 1 {
            write!(f, "W_{{{},{}}}", self.file, self.index_set.to_vec()[0])
        } else {
            write!(f, "W_{{{},{}}}", self.file, self.index_set)
        }
    }
}

impl fmt::Debug for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DemandMode {
    /// Demanded files must be pairwise distinct.
    #[default]
    Distinct,
    /// Repeated demands are allowed.
    Permissive,
}

/// Demands `d_U` of the active users.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandAssignment {
    params: SchemeParams,
    mode: DemandMode,
    entries: BTreeMap<SubsetId, u32>,
}

impl DemandAssignment {
    pub fn new(
        params: &SchemeParams,
        entries: impl IntoIterator<Item = (SubsetId, u32)>,
        mode: DemandMode,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut owner: BTreeMap<u32, SubsetId> = BTreeMap::new();
        for (user, file) in entries {
            params.check_user(&user)?;
            if file == 0 || file > params.files {
                return Err(Error::FileOutOfRange { user, file, files: params.files });
            }
            if mode == DemandMode::Distinct {
                if let Some(first) = owner.insert(file, user) {
                    if first != user {
                        return Err(Error::DuplicateDemand { file, first, second: user });
                    }
                }
            }
            if let Some(old) = map.insert(user, file) {
                if old != file {
                    return Err(Error::InvalidParams(format!("user {user} has two demands")));
                }
            }
        }
        Ok(DemandAssignment { params: *params, mode, entries: map })
    }

    /// Request vector `(d_1, ..., d_m)` for the first `m` users in
    /// lexicographic order.
    pub fn from_request_vector(params: &SchemeParams, request: &[u32], mode: DemandMode) -> Result<Self> {
        let k = params.num_users();
        if request.len() as u128 > k {
            return Err(Error::TooManyDemands { got: request.len(), max: k });
        }
        let pairs = params.users().zip(request.iter().copied());
        Self::new(params, pairs, mode)
    }

    /// Every user active, user `j` (1-based, lexicographic) requesting file `j`.
    pub fn identity(params: &SchemeParams) -> Result<Self> {
        let k = params.num_users();
        if k > u128::from(params.files) {
            return Err(Error::InvalidParams(format!(
                "{k} users need at least {k} files for distinct demands, N = {}",
                params.files
            )));
        }
        let request: Vec<u32> = (1..=k as u32).collect();
        Self::from_request_vector(params, &request, DemandMode::Distinct)
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn mode(&self) -> DemandMode {
        self.mode
    }

    pub fn get(&self, user: &SubsetId) -> Option<u32> {
        self.entries.get(user).copied()
    }

    pub fn is_active(&self, user: &SubsetId) -> bool {
        self.entries.contains_key(user)
    }

    /// Active users with their demands, in lexicographic user order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetId, u32)> + '_ {
        self.entries.iter().map(|(u, d)| (*u, *d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps only the users for which `keep` returns true.
    pub fn retain(&self, mut keep: impl FnMut(&SubsetId) -> bool) -> Self {
        let entries = self.entries.iter().filter(|(u, _)| keep(u)).map(|(u, d)| (*u, *d)).collect();
        DemandAssignment { params: self.params, mode: self.mode, entries }
    }

    fn check_params(&self, params: &SchemeParams) -> Result<()> {
        if self.params.caches != params.caches || self.params.access != params.access || self.params.files != params.files {
            return Err(Error::InvalidParams(format!(
                "demands were built for {:?}, not {:?}",
                self.params, params
            )));
        }
        Ok(())
    }
}

/// One XOR term of a transmission: the subfile that `user` is missing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub user: SubsetId,
    pub subfile: SubfileId,
}

/// Coded broadcast `Y_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub coded_set: SubsetId,
    pub terms: Vec<Term>,
}

impl Transmission {
    pub fn subfiles(&self) -> impl Iterator<Item = SubfileId> + '_ {
        self.terms.iter().map(|t| t.subfile)
    }

    pub fn term_for(&self, user: &SubsetId) -> Option<&Term> {
        self.terms.iter().find(|t| t.user == *user)
    }
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.coded_set.to_vec().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "Y_{{{s}}} = ")?;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊕ ")?;
            }
            write!(f, "{}", term.subfile)?;
        }
        Ok(())
    }
}

/// Rank of a subfile's index set among the t-subsets; the chunk position of
/// that subfile inside its file.
pub(crate) fn chunk_index(index_set: &SubsetId) -> usize {
    rank_subset(index_set) as usize
}
