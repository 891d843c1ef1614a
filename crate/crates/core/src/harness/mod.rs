//! Drivers behind the `macc` subcommands: JSON reports, simulation runs,
//! sweeps, table recomputation and golden-example checks.

pub mod golden;
pub mod sweep;
pub mod tables;

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metrics::{analyze, SchemeReport};
use crate::rational::{decimal, ratio_string};
use crate::scheme::{
    build_placement, random_payloads, simulate_end_to_end, DemandAssignment, DemandMode, SchemeParams, Transmission,
};

/// Largest user population `simulate` accepts without `force`.
pub const SIMULATION_USER_CAP: u128 = 1_000_000;

/// `{"exact": "p/q", "decimal": "..."}`.
pub fn rational_json(x: &BigRational) -> Value {
    json!({ "exact": ratio_string(x), "decimal": decimal(x) })
}

fn params_json(p: &SchemeParams) -> Value {
    json!({
        "caches": p.caches,
        "access": p.access,
        "t": p.t,
        "files": p.files,
        "memory": rational_json(&p.memory()),
    })
}

/// Report of `analyze`. Counts are decimal strings since they are unbounded.
pub fn report_json(rep: &SchemeReport) -> Value {
    json!({
        "params": params_json(&rep.params),
        "num_users": rep.num_users.to_string(),
        "subpacketization": rep.subpacketization.to_string(),
        "coding_gain": rep.coding_gain.to_string(),
        "rate": rational_json(&rep.rate),
        "per_user_rate": rational_json(&rep.per_user_rate),
        "cache_fraction": rational_json(&rep.cache_fraction),
        "accessible_fraction": rational_json(&rep.accessible_fraction),
    })
}

/// Placement, demands and transmissions in `W_{i,T}` terms: caches map a
/// label to `"fileIndex:indexSet"` strings, transmissions list their coded set
/// and terms the same way. Labels are 1-based.
pub fn scheme_dump_json(p: &SchemeParams, demands: &DemandAssignment, transmissions: &[Transmission]) -> Value {
    let caches: BTreeMap<String, Vec<String>> = build_placement(p)
        .iter()
        .map(|z| (z.label.to_string(), z.subfiles().map(|w| w.label()).collect()))
        .collect();
    let demand_map: BTreeMap<String, u32> = demands.iter().map(|(u, d)| (u.to_string(), d)).collect();
    let tx: Vec<Value> = transmissions
        .iter()
        .map(|y| {
            json!({
                "set": y.coded_set.to_string(),
                "terms": y.subfiles().map(|w| w.label()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "params": params_json(p),
        "caches": caches,
        "demands": demand_map,
        "transmissions": tx,
    })
}

/// How `simulate` picks demands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DemandPolicy {
    /// A seeded random permutation of `[N]`, truncated to the active users.
    #[default]
    Distinct,
    /// Independent uniform picks from `[N]`; repeats allowed.
    Random,
}

impl std::str::FromStr for DemandPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "distinct" | "worst" => Ok(DemandPolicy::Distinct),
            "random" => Ok(DemandPolicy::Random),
            other => Err(Error::InvalidParams(format!("unknown demand mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationRequest {
    pub params: SchemeParams,
    pub file_size: usize,
    pub seed: u64,
    pub policy: DemandPolicy,
    /// Number of active users, the first ones in lexicographic order; all when `None`.
    pub active: Option<u128>,
    pub force: bool,
}

#[derive(Clone, Debug)]
pub struct SimulationReport {
    pub params: SchemeParams,
    pub demands: DemandAssignment,
    pub transmissions: Vec<Transmission>,
    pub users_decoded: usize,
    pub users_failed: Vec<String>,
    pub chunk_len: usize,
    pub transmitted_bytes: usize,
    pub measured_rate: BigRational,
    pub analytic_rate: BigRational,
}

impl SimulationReport {
    /// Every user byte-exact and, with everyone active, the measured rate
    /// equal to the analytic one.
    pub fn passed(&self) -> bool {
        let full = self.demands.len() as u128 == self.params.num_users();
        self.users_failed.is_empty() && (!full || self.measured_rate == self.analytic_rate)
    }

    pub fn to_json(&self, include_dump: bool) -> Value {
        let mut v = json!({
            "params": params_json(&self.params),
            "active_users": self.demands.len(),
            "users_decoded": self.users_decoded,
            "users_failed": self.users_failed,
            "transmissions": self.transmissions.len(),
            "subpacketization": self.params.subpacketization().to_string(),
            "chunk_len": self.chunk_len,
            "transmitted_bytes": self.transmitted_bytes,
            "measured_rate": rational_json(&self.measured_rate),
            "analytic_rate": rational_json(&self.analytic_rate),
            "passed": self.passed(),
        });
        if include_dump {
            v["scheme"] = scheme_dump_json(&self.params, &self.demands, &self.transmissions);
        }
        v
    }
}

fn pick_demands(req: &SimulationRequest, active: u128) -> Result<DemandAssignment> {
    let p = &req.params;
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed ^ 0x9e37_79b9_7f4a_7c15);
    let request: Vec<u32> = match req.policy {
        DemandPolicy::Distinct => {
            if active > u128::from(p.files) {
                return Err(Error::InvalidParams(format!(
                    "{active} active users need at least {active} files for distinct demands, N = {}",
                    p.files
                )));
            }
            let mut files: Vec<u32> = (1..=p.files).collect();
            files.shuffle(&mut rng);
            files.truncate(active as usize);
            files
        }
        DemandPolicy::Random => (0..active).map(|_| rng.gen_range(1..=p.files)).collect(),
    };
    let mode = match req.policy {
        DemandPolicy::Distinct => DemandMode::Distinct,
        DemandPolicy::Random => DemandMode::Permissive,
    };
    DemandAssignment::from_request_vector(p, &request, mode)
}

/// Seeded payloads through placement, delivery and decoding, each user's
/// output compared byte for byte with the file it asked for.
pub fn run_simulation(req: &SimulationRequest) -> Result<SimulationReport> {
    let p = &req.params;
    let k = p.num_users();
    if k > SIMULATION_USER_CAP && !req.force {
        return Err(Error::TooLarge(format!("{k} users (cap {SIMULATION_USER_CAP}; pass force to override)")));
    }
    let active = req.active.unwrap_or(k).min(k);
    let demands = pick_demands(req, active)?;
    let payloads = random_payloads(p.files, req.file_size, req.seed);
    let sim = simulate_end_to_end(p, &payloads, &demands)?;

    let mut users_failed = Vec::new();
    for (user, file) in demands.iter() {
        if sim.decoded.get(&user) != Some(&payloads[file as usize - 1]) {
            users_failed.push(user.to_string());
        }
    }
    let measured_rate = BigRational::new(sim.transmissions.len().into(), p.subpacketization().into());
    Ok(SimulationReport {
        params: *p,
        users_decoded: demands.len() - users_failed.len(),
        users_failed,
        chunk_len: sim.chunk_len,
        transmitted_bytes: sim.transmitted_bytes(),
        measured_rate,
        analytic_rate: analyze(p).rate,
        transmissions: sim.transmissions,
        demands,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binom_small;
    use crate::rational::int;

    fn request(c: u32, r: u32, t: u32, n: u32) -> SimulationRequest {
        SimulationRequest {
            params: SchemeParams::new(c, r, t, n).unwrap(),
            file_size: 64,
            seed: 1,
            policy: DemandPolicy::Distinct,
            active: None,
            force: false,
        }
    }

    #[test]
    fn analyze_json_fields() {
        let v = report_json(&analyze(&SchemeParams::new(4, 2, 1, 6).unwrap()));
        assert_eq!(v["rate"]["exact"], "1/1");
        assert_eq!(v["num_users"], "6");
        assert_eq!(v["subpacketization"], "4");
        assert_eq!(v["coding_gain"], "3");
        let v = report_json(&analyze(&SchemeParams::new(5, 3, 2, 10).unwrap()));
        assert_eq!(v["rate"]["exact"], "1/10");
        assert_eq!(v["coding_gain"], "10");
        let v = report_json(&analyze(&SchemeParams::new(5, 3, 3, 10).unwrap()));
        assert_eq!(v["rate"]["exact"], "0/1");
    }

    #[test]
    fn simulate_c6_r2_t2() {
        let rep = run_simulation(&request(6, 2, 2, 15)).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.users_decoded, 15);
        assert_eq!(rep.measured_rate, int(1));
        assert_eq!(rep.analytic_rate, int(1));
    }

    #[test]
    fn simulate_single_active_user() {
        let mut req = request(6, 2, 2, 15);
        req.active = Some(1);
        let rep = run_simulation(&req).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.transmissions.len() as u128, binom_small(4, 2));
    }

    #[test]
    fn simulate_full_access_user() {
        let mut req = request(4, 4, 1, 1);
        req.active = Some(1);
        let rep = run_simulation(&req).unwrap();
        assert!(rep.passed());
        assert!(rep.transmissions.is_empty());
    }

    #[test]
    fn simulate_random_demands() {
        let mut req = request(6, 3, 2, 4);
        req.policy = DemandPolicy::Random;
        let rep = run_simulation(&req).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.users_decoded, 20);
    }

    #[test]
    fn simulate_needs_enough_files_for_distinct() {
        assert!(run_simulation(&request(6, 3, 2, 4)).is_err());
    }

    #[test]
    fn user_cap() {
        let req = request(40, 20, 1, 1);
        assert!(matches!(run_simulation(&req), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dump_shape() {
        let p = SchemeParams::new(4, 2, 1, 6).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = crate::scheme::generate_transmissions(&p, &d).unwrap();
        let v = scheme_dump_json(&p, &d, &tx);
        assert_eq!(v["caches"]["1"][0], "1:{1}");
        assert_eq!(v["caches"]["1"].as_array().unwrap().len(), 6);
        assert_eq!(v["transmissions"][0]["set"], "{1,2,3}");
        assert_eq!(v["transmissions"][0]["terms"], json!(["1:{3}", "2:{2}", "4:{1}"]));
        assert_eq!(v["demands"]["{3,4}"], 6);
    }

    #[test]
    fn demand_policy_names() {
        assert_eq!("worst".parse::<DemandPolicy>().unwrap(), DemandPolicy::Distinct);
        assert_eq!("random".parse::<DemandPolicy>().unwrap(), DemandPolicy::Random);
        assert!("other".parse::<DemandPolicy>().is_err());
    }
}
