use std::collections::BTreeSet;

use macc_core::combinatorics::binom_small;
use macc_core::harness::sweep::{run_sweep, MemoryGrid, Metric, Scheme, SweepSpec};
use macc_core::metrics::closed_form_rate;
use macc_core::rational::ratio;
use macc_core::scheme::random_payloads;
use macc_core::{
    analyze, build_placement, decode_user, generate_transmissions, simulate_end_to_end, DemandAssignment, DemandMode,
    SchemeParams, SubfileId,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_params(max_caches: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (1..=max_caches).flat_map(|c| (1..=c).flat_map(move |r| (1..=c - r).map(move |t| (c, r, t))))
}

fn random_distinct(p: &SchemeParams, rng: &mut ChaCha8Rng) -> DemandAssignment {
    let mut files: Vec<u32> = (1..=p.files).collect();
    files.shuffle(rng);
    DemandAssignment::new(p, p.users().zip(files), DemandMode::Distinct).unwrap()
}

#[test]
fn every_user_decodes_under_random_distinct_demands() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (c, r, t) in all_params(8) {
        let k = binom_small(c, r) as u32;
        let p = SchemeParams::new(c, r, t, k + 3).unwrap();
        let d = random_distinct(&p, &mut rng);
        let payloads = random_payloads(p.files, 50, rng.gen());
        let sim = simulate_end_to_end(&p, &payloads, &d).unwrap();
        for (user, file) in d.iter() {
            assert_eq!(sim.decoded[&user], payloads[file as usize - 1], "({c},{r},{t}) user {user}");
        }
    }
}

#[test]
fn symbolic_decoding_recovers_all_pieces() {
    for (c, r, t) in all_params(7) {
        let k = binom_small(c, r) as u32;
        let p = SchemeParams::new(c, r, t, k).unwrap();
        let d = DemandAssignment::identity(&p).unwrap();
        let tx = generate_transmissions(&p, &d).unwrap();
        let caches = build_placement(&p);
        for (user, file) in d.iter() {
            let got = decode_user(&p, &user, &d, &tx, &caches).unwrap();
            assert_eq!(got.len() as u128, p.subpacketization());
            assert!(got.iter().all(|w| w.file == file));
        }
    }
}

#[test]
fn measured_rate_matches_analysis() {
    for (c, r, t) in all_params(10) {
        let k = binom_small(c, r) as u32;
        let p = SchemeParams::new(c, r, t, k).unwrap();
        let tx = generate_transmissions(&p, &DemandAssignment::identity(&p).unwrap()).unwrap();
        let measured = ratio(tx.len() as u64, p.subpacketization() as u64);
        assert_eq!(measured, analyze(&p).rate, "({c},{r},{t})");
        let gain = binom_small(t + r, r) as usize;
        assert!(tx.iter().all(|y| y.terms.len() == gain));
    }
}

#[test]
fn inactive_users_only_remove_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (c, r, t) in all_params(7) {
        let k = binom_small(c, r) as u32;
        let p = SchemeParams::new(c, r, t, k).unwrap();
        let full_demands = DemandAssignment::identity(&p).unwrap();
        let full = generate_transmissions(&p, &full_demands).unwrap();
        for _ in 0..4 {
            let d = full_demands.retain(|_| rng.gen_bool(0.4));
            let tx = generate_transmissions(&p, &d).unwrap();
            let expected: Vec<(String, Vec<SubfileId>)> = full
                .iter()
                .map(|y| {
                    let terms = y.terms.iter().filter(|term| d.is_active(&term.user)).map(|term| term.subfile);
                    (y.coded_set.to_string(), terms.collect::<Vec<_>>())
                })
                .filter(|(_, terms)| !terms.is_empty())
                .collect();
            let got: Vec<(String, Vec<SubfileId>)> =
                tx.iter().map(|y| (y.coded_set.to_string(), y.subfiles().collect())).collect();
            assert_eq!(got, expected, "({c},{r},{t}) with {} active", d.len());
            let caches = build_placement(&p);
            for (user, _) in d.iter() {
                decode_user(&p, &user, &d, &tx, &caches).unwrap();
            }
        }
    }
}

#[test]
fn cache_overlap_depends_on_t() {
    for c in 2..=9u32 {
        for r in 2..=c {
            for t in 1..=c {
                let p = SchemeParams::new(c, r, t, 1).unwrap();
                let caches = build_placement(&p);
                let overlapping = p.users().any(|user| {
                    let labels: Vec<u32> = user.elements().collect();
                    labels.iter().enumerate().any(|(i, &a)| {
                        let left: BTreeSet<_> = caches[a as usize - 1].index_sets().iter().copied().collect();
                        labels[i + 1..]
                            .iter()
                            .any(|&b| caches[b as usize - 1].index_sets().iter().any(|s| left.contains(s)))
                    })
                });
                assert_eq!(overlapping, t >= 2, "C={c} r={r} t={t}");
            }
        }
    }
}

#[test]
fn sweep_rows_rederive_from_parameters() {
    let spec = SweepSpec {
        caches: vec![6, 12, 24],
        access: vec![1, 2, 3, 5],
        memory: MemoryGrid::AllIntegral,
        schemes: vec![Scheme::Proposed],
        metric: Metric::Rate,
    };
    for row in run_sweep(&spec).unwrap() {
        let (c, r, t) = (row.caches, row.access.unwrap(), row.t.unwrap());
        if r > c {
            assert!(!row.defined);
            continue;
        }
        assert_eq!(row.rate.unwrap(), closed_form_rate(c, r, t));
    }
}
