use std::collections::BTreeSet;

use super::{chunk_index, CacheContent, DemandAssignment, SchemeParams, SubfileId, Transmission};
use crate::combinatorics::SubsetId;
use crate::error::{Error, Result};

/// How one user rebuilds its requested file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodePlan {
    pub user: SubsetId,
    pub file: u32,
    /// Subfiles of `file` read directly, with the cache each is read from.
    pub cached: Vec<(SubfileId, u32)>,
    /// Subfiles recovered by cancelling known terms out of a transmission.
    pub peeled: Vec<PeelStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    /// Position of the transmission in the delivered list.
    pub transmission: usize,
    pub target: SubfileId,
    /// Every other term with the cache it is read from.
    pub cancel: Vec<(SubfileId, u32)>,
}

impl DecodePlan {
    /// All subfiles of the requested file the plan yields.
    pub fn recovered(&self) -> BTreeSet<SubfileId> {
        self.cached.iter().map(|(w, _)| *w).chain(self.peeled.iter().map(|s| s.target)).collect()
    }

    pub(crate) fn build(
        p: &SchemeParams,
        user: &SubsetId,
        demands: &DemandAssignment,
        transmissions: &[Transmission],
        caches: &[CacheContent],
    ) -> Result<Self> {
        p.check_user(user)?;
        demands.check_params(p)?;
        let file = demands.get(user).ok_or(Error::InactiveUser(*user))?;
        let fail = |detail: String| Error::DecodeFailure { user: *user, detail };
        if caches.len() != p.caches as usize {
            return Err(fail(format!("expected {} caches, got {}", p.caches, caches.len())));
        }
        let reachable: Vec<&CacheContent> = user.elements().map(|c| &caches[c as usize - 1]).collect();
        let lookup = |w: &SubfileId| reachable.iter().find(|z| z.contains(w)).map(|z| z.label);

        let f = p.subpacketization() as usize;
        let mut have = vec![false; f];
        let mut cached = Vec::new();
        for z in &reachable {
            for t in z.index_sets() {
                let slot = chunk_index(t);
                if !have[slot] {
                    have[slot] = true;
                    cached.push((SubfileId::new(file, *t), z.label));
                }
            }
        }

        let mut peeled = Vec::new();
        for (i, y) in transmissions.iter().enumerate() {
            if !user.is_subset_of(&y.coded_set) {
                continue;
            }
            let mine = y
                .term_for(user)
                .ok_or_else(|| fail(format!("no term for this user in transmission {}", y.coded_set)))?;
            let expected = SubfileId::new(file, y.coded_set.difference(user));
            if mine.subfile != expected {
                return Err(fail(format!("transmission {} carries {} instead of {}", y.coded_set, mine.subfile, expected)));
            }
            let mut cancel = Vec::with_capacity(y.terms.len() - 1);
            for term in y.terms.iter().filter(|t| t.user != *user) {
                let label = lookup(&term.subfile).ok_or_else(|| {
                    fail(format!("term {} of transmission {} is not in any reachable cache", term.subfile, y.coded_set))
                })?;
                cancel.push((term.subfile, label));
            }
            let slot = chunk_index(&expected.index_set);
            if have[slot] {
                return Err(fail(format!("{expected} delivered although already cached")));
            }
            have[slot] = true;
            peeled.push(PeelStep { transmission: i, target: expected, cancel });
        }

        if let Some(missing) = have.iter().position(|h| !h) {
            let t = crate::combinatorics::unrank_subset(missing as u128, p.t, p.caches)?;
            return Err(fail(format!("{} is neither cached nor delivered", SubfileId::new(file, t))));
        }
        Ok(DecodePlan { user: *user, file, cached, peeled })
    }
}

/// Symbolic decoding: the set of subfiles of `d_user` the user ends up with.
///
/// Checks that every non-target term of every transmission `S ⊇ user` is
/// readable from one of the user's caches, and that cached plus peeled
/// subfiles cover all `binom(C, t)` pieces of the requested file. Any violation
/// is reported as [`Error::DecodeFailure`].
pub fn decode_user(
    p: &SchemeParams,
    user: &SubsetId,
    demands: &DemandAssignment,
    transmissions: &[Transmission],
    caches: &[CacheContent],
) -> Result<BTreeSet<SubfileId>> {
    DecodePlan::build(p, user, demands, transmissions, caches).map(|plan| plan.recovered())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{build_placement, generate_transmissions, Term};

    fn set(elems: &[u32], n: u32) -> SubsetId {
        SubsetId::new(elems, n).unwrap()
    }

    #[test]
    fn example_one_user_12() {
        let p = SchemeParams::new(4, 2, 1, 6).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = generate_transmissions(&p, &d).unwrap();
        let caches = build_placement(&p);
        let user = set(&[1, 2], 4);
        let plan = DecodePlan::build(&p, &user, &d, &tx, &caches).unwrap();
        let cached: Vec<String> = plan.cached.iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(cached, ["W_{1,1}", "W_{1,2}"]);
        let peeled: Vec<(usize, String)> = plan.peeled.iter().map(|s| (s.transmission, s.target.to_string())).collect();
        assert_eq!(peeled, [(0, "W_{1,3}".to_string()), (1, "W_{1,4}".to_string())]);
        assert_eq!(plan.recovered().len(), 4);
    }

    #[test]
    fn example_two_user_123() {
        let p = SchemeParams::new(5, 3, 2, 10).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = generate_transmissions(&p, &d).unwrap();
        let caches = build_placement(&p);
        let plan = DecodePlan::build(&p, &set(&[1, 2, 3], 5), &d, &tx, &caches).unwrap();
        assert_eq!(plan.peeled.len(), 1);
        assert_eq!(plan.peeled[0].target.to_string(), "W_{1,{4,5}}");
        assert_eq!(plan.peeled[0].cancel.len(), 9);
        assert_eq!(plan.cached.len(), 9);
    }

    #[test]
    fn full_access_needs_no_transmissions() {
        let p = SchemeParams::new(4, 4, 1, 1).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = generate_transmissions(&p, &d).unwrap();
        assert!(tx.is_empty());
        let got = decode_user(&p, &set(&[1, 2, 3, 4], 4), &d, &tx, &build_placement(&p)).unwrap();
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn tampered_transmission_is_detected() {
        let p = SchemeParams::new(4, 2, 1, 6).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let mut tx = generate_transmissions(&p, &d).unwrap();
        let caches = build_placement(&p);
        // user {1,2} cannot read W_{4,4}
        tx[0].terms[2] = Term { user: set(&[2, 3], 4), subfile: SubfileId::new(4, set(&[4], 4)) };
        let err = decode_user(&p, &set(&[1, 2], 4), &d, &tx, &caches).unwrap_err();
        assert!(matches!(err, Error::DecodeFailure { .. }), "{err}");
    }

    #[test]
    fn missing_transmission_is_detected() {
        let p = SchemeParams::new(4, 2, 1, 6).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = generate_transmissions(&p, &d).unwrap();
        let caches = build_placement(&p);
        let err = decode_user(&p, &set(&[1, 2], 4), &d, &tx[1..], &caches).unwrap_err();
        assert!(err.to_string().contains("W_{1,3}"), "{err}");
    }

    #[test]
    fn inactive_user_rejected() {
        let p = SchemeParams::new(4, 2, 1, 6).unwrap();
        let d = DemandAssignment::from_request_vector(&p, &[1], Default::default()).unwrap();
        let err = decode_user(&p, &set(&[3, 4], 4), &d, &[], &build_placement(&p)).unwrap_err();
        assert!(matches!(err, Error::InactiveUser(_)));
    }
}
