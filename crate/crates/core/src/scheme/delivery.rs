use rayon::prelude::*;

use super::{DemandAssignment, SchemeParams, SubfileId, Term, Transmission};
use crate::combinatorics::{enumerate_subsets, SubsetId};
use crate::error::Result;

/// Coded transmissions for the active users in `demands`.
///
/// One transmission per (t+r)-subset `S` that contains at least one active
/// user, in lexicographic order of `S`; terms are in lexicographic order of the
/// user they serve. With every user active there are `binom(C, t+r)`
/// transmissions of `binom(t+r, r)` terms each. Empty when `t + r > C`.
pub fn generate_transmissions(p: &SchemeParams, demands: &DemandAssignment) -> Result<Vec<Transmission>> {
    demands.check_params(p)?;
    let size = p.t + p.access;
    if size > p.caches || demands.is_empty() {
        return Ok(Vec::new());
    }
    let coded_sets = enumerate_subsets(p.caches, size);
    let out = coded_sets
        .into_par_iter()
        .filter_map(|s| transmission_for(p, demands, s))
        .collect();
    Ok(out)
}

fn transmission_for(p: &SchemeParams, demands: &DemandAssignment, coded_set: SubsetId) -> Option<Transmission> {
    let terms: Vec<Term> = coded_set
        .subsets(p.access)
        .filter_map(|user| {
            demands.get(&user).map(|file| Term {
                user,
                subfile: SubfileId::new(file, coded_set.difference(&user)),
            })
        })
        .collect();
    if terms.is_empty() {
        None
    } else {
        Some(Transmission { coded_set, terms })
    }
}
