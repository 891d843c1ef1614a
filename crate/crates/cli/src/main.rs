use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use macc_core::harness::golden::{verify_examples, Verdict};
use macc_core::harness::sweep::{run_sweep, summarize, write_csv, MemoryGrid, Metric, Scheme, SweepSpec};
use macc_core::harness::tables::check_tables;
use macc_core::harness::{report_json, run_simulation, DemandPolicy, SimulationRequest};
use macc_core::rational::{decimal, parse_rational, ratio_string};
use macc_core::{analyze, Error, SchemeParams};
use serde_json::Value;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;

/// Multi-access coded caching: analysis, simulation and baseline sweeps.
#[derive(Parser, Debug)]
#[command(name = "macc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact rate, subpacketization and coding gain for one parameter set (JSON).
    Analyze(ParamArgs),
    /// Run placement, delivery and decoding on seeded payloads.
    Simulate(SimulateArgs),
    /// Evaluate schemes over a parameter grid and write CSV.
    Sweep(SweepArgs),
    /// Regenerate the worked examples and compare them with the printed transmissions.
    VerifyExamples(OutputArgs),
    /// Recompute the comparison tables against the cyclic baselines.
    Tables(OutputArgs),
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Number of caches C.
    #[arg(short = 'C', long)]
    caches: u32,
    /// Caches each user reads, r.
    #[arg(short = 'r', long)]
    access: u32,
    /// Cache parameter t = C·M/N.
    #[arg(long)]
    t: u32,
    /// Number of files N.
    #[arg(short = 'N', long)]
    files: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<SchemeParams, Error> {
        SchemeParams::new(self.caches, self.access, self.t, self.files)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Bytes per file.
    #[arg(long, default_value_t = 1024)]
    file_size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// distinct, worst (same as distinct) or random.
    #[arg(long, default_value = "distinct")]
    demand_mode: String,
    /// Only the first K' users (lexicographic) make requests.
    #[arg(long)]
    active: Option<u128>,
    /// Run even when there are more than a million users.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    json: bool,
    /// With --json, include placement, demands and transmissions.
    #[arg(long, requires = "json")]
    dump: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Cache counts, comma separated.
    #[arg(short = 'C', long, value_delimiter = ',', required = true)]
    caches: Vec<u32>,
    /// Access degrees, comma separated.
    #[arg(short = 'r', long, value_delimiter = ',')]
    access: Vec<u32>,
    /// Cache parameters t, comma separated. Defaults to every t in 1..=C.
    #[arg(long, value_delimiter = ',', conflicts_with = "mn")]
    t: Vec<u32>,
    /// Memory fractions M/N ("p/q" or decimal), comma separated.
    #[arg(long, value_delimiter = ',')]
    mn: Vec<String>,
    /// Schemes to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "PROPOSED")]
    schemes: Vec<String>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// per_user_rate, rate or subpacketization; used for the summary.
    #[arg(long, default_value = "per_user_rate")]
    metric: String,
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn cmd_analyze(args: &ParamArgs) -> Result<(), Failure> {
    print_json(&report_json(&analyze(&args.params()?)));
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let req = SimulationRequest {
        params: args.params.params()?,
        file_size: args.file_size,
        seed: args.seed,
        policy: args.demand_mode.parse::<DemandPolicy>()?,
        active: args.active,
        force: args.force,
    };
    let rep = run_simulation(&req)?;
    if args.json {
        print_json(&rep.to_json(args.dump));
    } else {
        println!(
            "{} users decoded OK, {} failed; {} transmissions of {} bytes",
            rep.users_decoded,
            rep.users_failed.len(),
            rep.transmissions.len(),
            rep.chunk_len
        );
        let relation = if rep.measured_rate == rep.analytic_rate { "=" } else { "!=" };
        println!(
            "measured rate {} {relation} analytic rate {} ({})",
            ratio_string(&rep.measured_rate),
            ratio_string(&rep.analytic_rate),
            decimal(&rep.analytic_rate)
        );
    }
    if rep.passed() {
        Ok(())
    } else if rep.users_failed.is_empty() {
        Err(Failure::Verify("measured rate differs from the analytic rate".into()))
    } else {
        Err(Failure::Verify(format!("users failed to decode: {}", rep.users_failed.join(" "))))
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let memory = if !args.mn.is_empty() {
        MemoryGrid::Fractions(args.mn.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)
    } else if !args.t.is_empty() {
        MemoryGrid::CacheParams(args.t.clone())
    } else {
        MemoryGrid::AllIntegral
    };
    let spec = SweepSpec {
        caches: args.caches.clone(),
        access: args.access.clone(),
        memory,
        schemes: args.schemes.iter().map(|s| s.parse()).collect::<Result<Vec<Scheme>, _>>()?,
        metric: args.metric.parse::<Metric>()?,
    };
    let rows = run_sweep(&spec)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            write_csv(&rows, BufWriter::new(file))?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            for s in summarize(&rows, spec.metric) {
                let range = match (&s.min, &s.max) {
                    (Some(lo), Some(hi)) => format!("{} .. {}", decimal(lo), decimal(hi)),
                    _ => "-".to_string(),
                };
                println!("  {:<10} {:>5} rows {:>5} defined  {}", s.scheme, s.rows, s.defined, range);
            }
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_verify_examples(args: &OutputArgs) -> Result<(), Failure> {
    let checks = verify_examples()?;
    let passed = checks.iter().all(|c| c.passed());
    if args.json {
        print_json(&serde_json::json!({ "examples": checks, "passed": passed }));
    } else {
        for c in &checks {
            println!("{}: {} transmissions (expected {})", c.name, c.generated_count, c.expected_count);
            for t in &c.transmissions {
                let tag = match t.verdict {
                    Verdict::Exact => "exact",
                    Verdict::Reordered => "same terms, reordered",
                    Verdict::MatchesCorrection => "matches corrected line",
                    Verdict::Mismatch => "MISMATCH",
                };
                println!("  Y_{} = {}  [{tag}]", t.coded_set, t.generated);
                if let Some(note) = &t.note {
                    println!("    note: {note}");
                }
            }
        }
        println!("{}", if passed { "all examples reproduced" } else { "verification FAILED" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify("example mismatch".into()))
    }
}

fn cmd_tables(args: &OutputArgs) -> Result<(), Failure> {
    let report = check_tables(3..=30);
    let passed = report.passed();
    if args.json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["passed"] = Value::Bool(passed);
        print_json(&v);
    } else {
        println!("table  (C, r, t)      computed   printed   |delta|");
        for r in &report.ratios {
            let params = format!("({}, {}, {})", r.caches, r.access, r.t);
            println!(
                "{:<6} {:<13} {:>9.4} {:>9} {:>9.4}{}",
                r.table,
                params,
                r.computed,
                r.printed,
                r.delta,
                if r.passed { "" } else { "  OUT OF TOLERANCE" }
            );
        }
        println!();
        println!("t = 1, r = C - 2:   C   K(prop)  F(prop)  R(prop)  K(cyc)  F(cyc)  R(cyc)");
        for s in &report.small_cache {
            println!(
                "                  {:>3} {:>8} {:>8} {:>8} {:>7} {:>7} {:>7}{}",
                s.caches,
                s.proposed_users,
                s.proposed_subpacketization,
                s.proposed_rate,
                s.cyclic_users,
                s.cyclic_subpacketization,
                s.cyclic_rate,
                if s.passed { "" } else { "  MISMATCH" }
            );
        }
        println!("{}", if passed { "all rows within tolerance" } else { "tables FAILED" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify("table rows out of tolerance".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::VerifyExamples(a) => cmd_verify_examples(a),
        Command::Tables(a) => cmd_tables(a),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
