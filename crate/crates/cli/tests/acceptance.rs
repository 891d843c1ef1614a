//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use macc_core::baselines::{clwzc_rate, hkd_rate, rk_lower_bound, rk_rate};
use macc_core::combinatorics::binom_small;
use macc_core::harness::golden::{verify_examples, Verdict};
use macc_core::metrics::closed_form_rate;
use macc_core::rational::{int, ratio, BigRational};
use macc_core::scheme::{accessible_fraction, random_payloads};
use macc_core::{
    analyze, enumerate_subsets, generate_transmissions, simulate_end_to_end, DemandAssignment, DemandMode,
    SchemeParams,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn macc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_macc")).args(args).output().expect("run macc");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_examples() -> Outcome {
    let (code, out) = macc(&["verify-examples", "--json"]);
    ensure(code == 0, || format!("verify-examples exited {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(v["passed"] == true, || "report not passed".into())?;

    let checks = verify_examples().map_err(|e| e.to_string())?;
    let counts: Vec<usize> = checks.iter().map(|c| c.generated_count).collect();
    ensure(counts == [4, 1, 5], || format!("transmission counts {counts:?}"))?;
    let first = &checks[0].transmissions[0].generated;
    ensure(first == "W_{1,3} ⊕ W_{2,2} ⊕ W_{4,1}", || format!("(4,2,1) first line {first}"))?;
    let terms = checks[1].transmissions[0].generated.matches('⊕').count() + 1;
    ensure(terms == 10, || format!("(5,3,2) has {terms} terms"))?;
    for (i, t) in checks[2].transmissions.iter().enumerate() {
        let want = if i < 4 { Verdict::Exact } else { Verdict::MatchesCorrection };
        ensure(t.verdict == want, || format!("(5,2,2) line {} verdict {:?}", i + 1, t.verdict))?;
    }
    let flagged = checks[2].transmissions[4].note.is_some();
    ensure(flagged, || "(5,2,2) misprint not flagged".into())?;
    Ok("all three references regenerated; Y_{2,3,4,5} follows the delivery rule, misprint flagged".into())
}

fn table_reproduction() -> Outcome {
    let (code, out) = macc(&["tables", "--json"]);
    ensure(code == 0, || format!("tables exited {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let ratios = v["ratios"].as_array().ok_or("no ratios")?;
    let count = |table: &str| ratios.iter().filter(|r| r["table"] == table).count();
    ensure(count("I") == 32 && count("II") == 21, || format!("row counts {} / {}", count("I"), count("II")))?;
    let worst = ratios.iter().map(|r| r["delta"].as_f64().unwrap()).fold(0.0, f64::max);
    ensure(worst <= 0.002, || format!("max delta {worst}"))?;
    let find = |c: u64, r: u64, t: u64| {
        ratios
            .iter()
            .find(|x| x["caches"] == c && x["access"] == r && x["t"] == t)
            .and_then(|x| x["computed"].as_f64())
    };
    let a = find(5, 2, 2).ok_or("row (5,2,2) missing")?;
    let b = find(25, 6, 4).ok_or("row (25,6,4) missing")?;
    ensure((a - 1.25).abs() < 1e-12 && (b - 1.097).abs() <= 0.0005, || format!("spot values {a} {b}"))?;
    for s in v["small_cache"].as_array().ok_or("no small-cache rows")? {
        let c = s["caches"].as_u64().unwrap();
        ensure(
            s["proposed_rate"] == "1/1"
                && s["cyclic_rate"] == "1/1"
                && s["proposed_subpacketization"].as_str() == Some(c.to_string().as_str())
                && s["cyclic_subpacketization"].as_str() == Some((3 * c).to_string().as_str()),
            || format!("small-cache row C={c}"),
        )?;
    }
    Ok(format!("53 ratios within 0.002 (max {worst:.5}); F = C vs 3C at rate 1"))
}

/// Criteria 3, 4 and 5 share one sweep: (points, users decoded, transmissions).
fn decodability_sweep() -> Result<(usize, usize, usize), String> {
    let (mut points, mut users, mut total_tx) = (0, 0, 0);
    for c in 1..=8u32 {
        for r in 1..=c {
            for t in 1..=c - r {
                let k = binom_small(c, r) as u32;
                let p = SchemeParams::new(c, r, t, k).map_err(|e| e.to_string())?;
                let d = DemandAssignment::identity(&p).map_err(|e| e.to_string())?;
                let payloads = random_payloads(k, 97, u64::from(c * 100 + r * 10 + t));
                let sim = simulate_end_to_end(&p, &payloads, &d).map_err(|e| format!("({c},{r},{t}): {e}"))?;
                for (user, file) in d.iter() {
                    ensure(sim.decoded.get(&user) == Some(&payloads[file as usize - 1]), || {
                        format!("({c},{r},{t}) user {user} decoded wrong bytes")
                    })?;
                }
                let measured = ratio(sim.transmissions.len() as u64, p.subpacketization() as u64);
                ensure(measured == closed_form_rate(c, r, t), || format!("({c},{r},{t}) measured rate {measured}"))?;
                let gain = binom_small(t + r, r) as usize;
                ensure(sim.transmissions.iter().all(|y| y.terms.len() == gain), || {
                    format!("({c},{r},{t}) transmission without {gain} terms")
                })?;
                points += 1;
                users += d.len();
                total_tx += sim.transmissions.len();
            }
        }
    }
    Ok((points, users, total_tx))
}

fn accessible_fraction_oracle() -> Outcome {
    let mut points = 0;
    for c in 1..=10u32 {
        for r in 1..=c {
            for t in 1..=c {
                let p = SchemeParams::new(c, r, t, 1).map_err(|e| e.to_string())?;
                let closed = accessible_fraction(&p);
                let index_sets = enumerate_subsets(c, t);
                for user in p.users() {
                    let reached = index_sets.iter().filter(|s| s.intersects(&user)).count();
                    let brute = ratio(reached as u64, index_sets.len() as u64);
                    ensure(brute == closed, || format!("C={c} r={r} t={t} user {user}: {brute} vs {closed}"))?;
                }
                ensure(analyze(&p).accessible_fraction == closed, || format!("analyze disagrees at ({c},{r},{t})"))?;
                points += 1;
            }
        }
    }
    let spot = accessible_fraction(&SchemeParams::new(5, 3, 2, 1).unwrap());
    ensure(spot == ratio(9, 10), || format!("C=5 r=3 t=2 gave {spot}"))?;
    Ok(format!("{points} parameter points match brute force; C=5,r=3,t=2 -> 9/10"))
}

fn man_recovery() -> Outcome {
    let mut points = 0;
    for c in 2..=30u32 {
        for t in 1..c {
            let rate = analyze(&SchemeParams::new(c, 1, t, c).unwrap()).rate;
            ensure(rate == ratio(c - t, t + 1), || format!("C={c} t={t}: {rate}"))?;
            points += 1;
        }
    }
    Ok(format!("rate = (C-t)/(t+1) exactly at {points} points"))
}

fn baseline_consistency() -> Outcome {
    let mut shared = 0;
    for c in 1..=40u32 {
        for r in 1..=c {
            for t in 0..=c {
                if let (Ok(a), Ok(b)) = (clwzc_rate(c, r, t), hkd_rate(c, r, &ratio(t, c))) {
                    ensure(a == b, || format!("C={c} r={r} t={t}: CLWZC {a} vs HKD {b}"))?;
                    shared += 1;
                }
            }
        }
    }
    let mut breakpoints = 0;
    for c in 2..=40u32 {
        for r in c.div_ceil(2)..=c {
            let eps = ratio(1, 1_000_000 * c);
            let f = |x: &BigRational| rk_lower_bound(c, r, x).map_err(|e| e.reason);
            for b in [ratio(1, c), ratio(2, c)] {
                if b > int(1) {
                    continue;
                }
                let at = f(&b)?;
                let left = int(2) * f(&(&b - &eps))? - f(&(&b - &eps - &eps))?;
                ensure(left == at, || format!("C={c} r={r}: left limit {left} vs {at} at {b}"))?;
                if b < int(1) {
                    let right = int(2) * f(&(&b + &eps))? - f(&(&b + &eps + &eps))?;
                    ensure(right == at, || format!("C={c} r={r}: right limit {right} vs {at} at {b}"))?;
                }
                breakpoints += 1;
            }
        }
    }
    Ok(format!("CLWZC = HKD at {shared} shared points; RK bound continuous at {breakpoints} breakpoints"))
}

fn dynamism() -> Outcome {
    let p = SchemeParams::new(6, 2, 2, 15).unwrap();
    let users: Vec<_> = p.users().collect();
    let full = binom_small(6, 4) as usize;
    let payloads = random_payloads(15, 41, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut max_tx = 0;
    for trial in 0..200 {
        let active: Vec<_> = loop {
            let pick: Vec<_> = users.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if !pick.is_empty() {
                break pick;
            }
        };
        let mut files: Vec<u32> = (1..=15).collect();
        files.shuffle(&mut rng);
        let d = DemandAssignment::new(&p, active.iter().copied().zip(files), DemandMode::Distinct)
            .map_err(|e| e.to_string())?;
        let sim = simulate_end_to_end(&p, &payloads, &d).map_err(|e| format!("trial {trial}: {e}"))?;
        for (user, file) in d.iter() {
            ensure(sim.decoded.get(&user) == Some(&payloads[file as usize - 1]), || {
                format!("trial {trial}: user {user} failed")
            })?;
        }
        let tx = generate_transmissions(&p, &d).map_err(|e| e.to_string())?.len();
        ensure(tx <= full, || format!("trial {trial}: {tx} transmissions > {full}"))?;
        max_tx = max_tx.max(tx);
    }
    Ok(format!("200 random active sets decoded; at most {max_tx} of {full} transmissions"))
}

fn dominance_over_baselines() -> Outcome {
    let mut strict = 0;
    let mut ties = Vec::new();
    let proposed = |c: u32, r: u32, t: u32| closed_form_rate(c, r, t) / int(binom_small(c, r) as u64);
    for r in [2u32, 3, 4, 6, 8] {
        for t in (1..24).filter(|t| t * r < 24) {
            let hkd = hkd_rate(24, r, &ratio(t, 24)).map_err(|e| e.reason)? / int(24);
            let ours = proposed(24, r, t);
            ensure(ours < hkd, || format!("HKD C=24 r={r} t={t}: {ours} vs {hkd}"))?;
            strict += 1;
        }
    }
    for r in 12..=24u32 {
        for t in (1..24).filter(|t| t * r < 24) {
            let rk = rk_rate(24, r, t).map_err(|e| e.reason)? / int(24);
            let ours = proposed(24, r, t);
            if r == 23 {
                ensure(ours <= rk, || format!("RK C=24 r={r} t={t}: {ours} vs {rk}"))?;
                if ours == rk {
                    ties.push(format!("RK r={r} t={t}"));
                    continue;
                }
            }
            ensure(ours < rk, || format!("RK C=24 r={r} t={t}: {ours} vs {rk}"))?;
            strict += 1;
        }
    }
    for r in 2..=15u32 {
        for t in (1..15).filter(|t| t * r < 15) {
            let cyc = clwzc_rate(15, r, t).map_err(|e| e.reason)? / int(15);
            let ours = proposed(15, r, t);
            ensure(ours < cyc, || format!("CLWZC C=15 r={r} t={t}: {ours} vs {cyc}"))?;
            strict += 1;
        }
    }
    let ties = if ties.is_empty() { String::new() } else { format!("; equal at {}", ties.join(", ")) };
    Ok(format!("proposed strictly lower at {strict} grid points{ties}"))
}

fn run(id: u32, name: &str, limit: Option<Duration>, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(detail) => println!("criterion {id:>2} {name}: PASS ({detail}; {elapsed:.2?})"),
        Err(why) => println!("criterion {id:>2} {name}: FAIL ({why})"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= run(1, "golden examples", Some(Duration::from_secs(1)), golden_examples);
    ok &= run(2, "table reproduction", Some(Duration::from_secs(5)), table_reproduction);

    let mut sweep = Err("sweep did not run".to_string());
    ok &= run(3, "decodability sweep", Some(Duration::from_secs(60)), || {
        sweep = decodability_sweep();
        sweep.clone().map(|(p, u, _)| format!("{u} users byte-exact over {p} (C,r,t) points"))
    });
    let (points, _, transmissions) = sweep.clone().unwrap_or_default();
    ok &= run(4, "rate formula agreement", None, || {
        sweep.clone().map(|_| format!("{transmissions} transmissions, rate exact at {points} points"))
    });
    ok &= run(5, "coding gain invariant", None, || {
        sweep.clone().map(|_| format!("all {transmissions} transmissions have binom(t+r,r) terms"))
    });
    ok &= run(6, "accessible fraction oracle", None, accessible_fraction_oracle);
    ok &= run(7, "MAN recovery at r=1", None, man_recovery);
    ok &= run(8, "baseline consistency", None, baseline_consistency);
    ok &= run(9, "dynamism", None, dynamism);
    ok &= run(10, "dominance over baselines", None, dominance_over_baselines);

    if ok {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
