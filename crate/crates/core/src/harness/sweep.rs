//! Parameter sweeps over the proposed scheme and the baselines, emitted as
//! plot-ready CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::baselines::{self, Undefined};
use crate::combinatorics::{binom, BigCount};
use crate::error::{Error, Result};
use crate::metrics::{rate_memory_curve, closed_form_rate};
use crate::rational::{decimal, int, ratio};

/// CSV header, fixed.
pub const CSV_HEADER: [&str; 11] = ["scheme", "C", "r", "t", "mn", "K", "rate", "per_user_rate", "F", "defined", "note"];

/// Schemes a sweep can evaluate, in output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Proposed,
    Hkd,
    Rk,
    RkLb,
    Spe,
    Clwzc,
    Sr1,
    Sr2,
    CrdAffine,
}

impl Scheme {
    pub const ALL: [Scheme; 9] = [
        Scheme::Proposed,
        Scheme::Hkd,
        Scheme::Rk,
        Scheme::RkLb,
        Scheme::Spe,
        Scheme::Clwzc,
        Scheme::Sr1,
        Scheme::Sr2,
        Scheme::CrdAffine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "PROPOSED",
            Scheme::Hkd => "HKD",
            Scheme::Rk => "RK",
            Scheme::RkLb => "RK_LB",
            Scheme::Spe => "SPE",
            Scheme::Clwzc => "CLWZC",
            Scheme::Sr1 => "SR1",
            Scheme::Sr2 => "SR2",
            Scheme::CrdAffine => "CRD_AFFINE",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == wanted)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    PerUserRate,
    Rate,
    Subpacketization,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "per_user_rate" => Ok(Metric::PerUserRate),
            "rate" => Ok(Metric::Rate),
            "subpacketization" | "f" => Ok(Metric::Subpacketization),
            other => Err(Error::InvalidSweep(format!("unknown metric {other:?}"))),
        }
    }
}

/// Memory points of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemoryGrid {
    /// Integer cache parameters `t`, i.e. `M/N = t/C`.
    CacheParams(Vec<u32>),
    /// Arbitrary `M/N` values in `[0, 1]`.
    Fractions(Vec<BigRational>),
    /// Every `t` in `1..=C`.
    AllIntegral,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub caches: Vec<u32>,
    pub access: Vec<u32>,
    pub memory: MemoryGrid,
    pub schemes: Vec<Scheme>,
    pub metric: Metric,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::InvalidSweep("no schemes selected".into()));
        }
        if self.caches.is_empty() || self.caches.contains(&0) {
            return Err(Error::InvalidSweep("cache counts must be a nonempty list of positive integers".into()));
        }
        if let Some(c) = self.caches.iter().find(|&&c| c > crate::combinatorics::MAX_UNIVERSE) {
            return Err(Error::InvalidSweep(format!("C = {c} exceeds 128")));
        }
        let needs_access = self.schemes.iter().any(|s| *s != Scheme::CrdAffine);
        if needs_access && (self.access.is_empty() || self.access.contains(&0)) {
            return Err(Error::InvalidSweep("access degrees must be a nonempty list of positive integers".into()));
        }
        match &self.memory {
            MemoryGrid::CacheParams(ts) if ts.is_empty() => Err(Error::InvalidSweep("empty t list".into())),
            MemoryGrid::Fractions(f) if f.is_empty() => Err(Error::InvalidSweep("empty M/N list".into())),
            MemoryGrid::Fractions(f) => match f.iter().find(|x| **x < BigRational::zero() || **x > int(1)) {
                Some(x) => Err(Error::MemoryFractionOutOfRange(crate::rational::ratio_string(x))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

/// One evaluated point. Exact values; rendering happens at CSV time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub scheme: Scheme,
    pub caches: u32,
    /// Absent for the affine-plane design, whose access structure is fixed.
    pub access: Option<u32>,
    /// Present when `C·M/N` is an integer.
    pub t: Option<u32>,
    pub memory_fraction: BigRational,
    pub num_users: Option<BigCount>,
    pub rate: Option<BigRational>,
    pub per_user_rate: Option<BigRational>,
    pub subpacketization: Option<BigCount>,
    pub defined: bool,
    pub note: String,
}

impl ComparisonRow {
    fn new(scheme: Scheme, caches: u32, access: Option<u32>, mn: BigRational) -> Self {
        let scaled = &mn * int(caches);
        let t = scaled.is_integer().then(|| scaled.to_integer().to_u32()).flatten();
        ComparisonRow {
            scheme,
            caches,
            access,
            t,
            memory_fraction: mn,
            num_users: None,
            rate: None,
            per_user_rate: None,
            subpacketization: None,
            defined: false,
            note: String::new(),
        }
    }

    fn with_rate(mut self, users: BigCount, rate: std::result::Result<BigRational, Undefined>) -> Self {
        match rate {
            Ok(rate) => {
                self.per_user_rate = Some(&rate / BigRational::from_integer(users.clone().into()));
                self.rate = Some(rate);
                self.defined = true;
            }
            Err(e) => self.push_note(&e.reason),
        }
        self.num_users = Some(users);
        self
    }

    fn with_subpacketization(mut self, f: std::result::Result<BigCount, Undefined>) -> Self {
        match f {
            Ok(f) => self.subpacketization = Some(f),
            Err(e) => self.push_note(&format!("F: {}", e.reason)),
        }
        self
    }

    fn push_note(&mut self, note: &str) {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(note);
    }

    pub fn metric(&self, metric: Metric) -> Option<BigRational> {
        match metric {
            Metric::PerUserRate => self.per_user_rate.clone(),
            Metric::Rate => self.rate.clone(),
            Metric::Subpacketization => self.subpacketization.clone().map(|f| BigRational::from_integer(f.into())),
        }
    }

    fn csv_record(&self) -> [String; 11] {
        let opt = |x: &Option<BigRational>| x.as_ref().map(decimal).unwrap_or_default();
        let count = |x: &Option<BigCount>| x.as_ref().map(ToString::to_string).unwrap_or_default();
        [
            self.scheme.name().to_string(),
            self.caches.to_string(),
            self.access.map(|r| r.to_string()).unwrap_or_default(),
            self.t.map(|t| t.to_string()).unwrap_or_default(),
            decimal(&self.memory_fraction),
            count(&self.num_users),
            opt(&self.rate),
            opt(&self.per_user_rate),
            count(&self.subpacketization),
            self.defined.to_string(),
            self.note.clone(),
        ]
    }
}

fn undefined<T>(reason: &str) -> std::result::Result<T, Undefined> {
    Err(Undefined { reason: reason.to_string() })
}

fn needs_integer_t(t: Option<u32>) -> std::result::Result<u32, Undefined> {
    t.map(Ok).unwrap_or_else(|| undefined("requires integer t = C·M/N"))
}

fn evaluate(scheme: Scheme, caches: u32, access: u32, mn: &BigRational) -> ComparisonRow {
    let row = ComparisonRow::new(scheme, caches, Some(access), mn.clone());
    let t = row.t;
    let cyclic_users = BigCount::from(caches);
    if access > caches {
        let mut row = row;
        row.push_note("r exceeds C");
        return row;
    }
    match scheme {
        Scheme::Proposed => {
            let users = binom(caches.into(), access.into());
            match t {
                Some(t) => row
                    .with_rate(users, Ok(closed_form_rate(caches, access, t)))
                    .with_subpacketization(Ok(binom(caches.into(), t.into()))),
                None => {
                    let rate = rate_memory_curve(caches, access, std::slice::from_ref(mn))
                        .map(|mut pts| pts.remove(0).rate)
                        .map_err(|e| Undefined { reason: e.to_string() });
                    let mut row = row.with_rate(users, rate);
                    let lo = (mn * int(caches)).floor().to_integer();
                    let hi = &lo + 1u32;
                    row.push_note(&format!("memory sharing between t={} and t={}", lo, hi));
                    row
                }
            }
        }
        Scheme::Hkd => row.with_rate(cyclic_users, baselines::hkd_rate(caches, access, mn)).with_subpacketization(
            needs_integer_t(t).and_then(|t| baselines::hkd_subpacketization(caches, access, t)),
        ),
        Scheme::Rk => {
            let mut row = row.with_rate(cyclic_users, needs_integer_t(t).and_then(|i| baselines::rk_rate(caches, access, i)));
            row.push_note("F not tabulated");
            row
        }
        Scheme::RkLb => row.with_rate(cyclic_users, baselines::rk_lower_bound(caches, access, mn)),
        Scheme::Spe => {
            let special = needs_integer_t(t).and_then(|t| baselines::spe_special_rate(caches, access, t));
            match special {
                Ok(rate) => {
                    let mut row = row.with_rate(cyclic_users, Ok(rate)).with_subpacketization(Ok(BigCount::from(caches)));
                    row.push_note("special case r·t = C-1");
                    row
                }
                Err(_) if t == Some(2) => row
                    .with_rate(cyclic_users, undefined("general rate for C·M/N = 2 not stated"))
                    .with_subpacketization(baselines::spe_subpacketization(caches, access)),
                Err(e) => row.with_rate(cyclic_users, Err(e)),
            }
        }
        Scheme::Clwzc => {
            let t = needs_integer_t(t);
            row.with_rate(cyclic_users, t.clone().and_then(|t| baselines::clwzc_rate(caches, access, t)))
                .with_subpacketization(t.and_then(|t| baselines::clwzc_subpacketization(caches, access, t)))
        }
        Scheme::Sr1 => {
            let eval = needs_integer_t(t).and_then(|t| baselines::sr1_rate(caches, access, t));
            let flagged = matches!(&eval, Ok(x) if x.interpretation_dependent);
            let mut row = row.with_rate(cyclic_users, eval.map(|x| x.rate));
            if row.defined {
                row.push_note("F at most C^2");
            }
            if flagged {
                row.push_note("interpretation-dependent (odd C - tr)");
            }
            row
        }
        Scheme::Sr2 => {
            let t = needs_integer_t(t);
            row.with_rate(cyclic_users, t.clone().and_then(|t| baselines::sr2_rate(caches, access, t)))
                .with_subpacketization(t.and_then(|t| baselines::sr2_subpacketization(caches, access, t)))
        }
        Scheme::CrdAffine => unreachable!("evaluated per C"),
    }
}

fn evaluate_crd(caches: u32) -> ComparisonRow {
    match baselines::crd_order_for_caches(caches.into()) {
        Some(n) => {
            let crd = baselines::crd_affine(n).expect("order is a prime power");
            let mut row = ComparisonRow::new(Scheme::CrdAffine, caches, None, crd.memory_fraction.clone());
            row.num_users = Some(crd.num_users);
            row.rate = Some(crd.rate);
            row.per_user_rate = Some(crd.per_user_rate);
            row.subpacketization = Some(crd.subpacketization);
            row.defined = true;
            row.note = format!("affine plane of order {n}");
            row
        }
        None => {
            let mut row = ComparisonRow::new(Scheme::CrdAffine, caches, None, BigRational::zero());
            row.t = None;
            row.note = format!("C = {caches} is not n(n+1) for a prime power n");
            row
        }
    }
}

fn memory_points(grid: &MemoryGrid, caches: u32) -> Vec<BigRational> {
    let mut points: Vec<BigRational> = match grid {
        MemoryGrid::CacheParams(ts) => ts.iter().filter(|&&t| t <= caches).map(|&t| ratio(t, caches)).collect(),
        MemoryGrid::Fractions(f) => f.clone(),
        MemoryGrid::AllIntegral => (1..=caches).map(|t| ratio(t, caches)).collect(),
    };
    points.sort();
    points.dedup();
    points
}

/// Evaluates every (scheme, C, r, M/N) point of `spec`, ordered by scheme,
/// then C, r and M/N.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ComparisonRow>> {
    spec.validate()?;
    let mut schemes = spec.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let mut caches = spec.caches.clone();
    caches.sort();
    caches.dedup();
    let mut access = spec.access.clone();
    access.sort();
    access.dedup();

    let mut jobs: Vec<(Scheme, u32, Option<u32>, Option<BigRational>)> = Vec::new();
    for &scheme in &schemes {
        for &c in &caches {
            if scheme == Scheme::CrdAffine {
                jobs.push((scheme, c, None, None));
                continue;
            }
            for &r in &access {
                for mn in memory_points(&spec.memory, c) {
                    jobs.push((scheme, c, Some(r), Some(mn)));
                }
            }
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(scheme, c, r, mn)| match (r, mn) {
            (Some(r), Some(mn)) => evaluate(scheme, c, r, &mn),
            _ => evaluate_crd(c),
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

/// Count of defined points and the range of `metric` for one scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    pub rows: usize,
    pub defined: usize,
    pub min: Option<BigRational>,
    pub max: Option<BigRational>,
}

pub fn summarize(rows: &[ComparisonRow], metric: Metric) -> Vec<SchemeSummary> {
    let mut out: Vec<SchemeSummary> = Vec::new();
    for row in rows {
        if out.last().map(|s| s.scheme) != Some(row.scheme) {
            out.push(SchemeSummary { scheme: row.scheme, rows: 0, defined: 0, min: None, max: None });
        }
        let s = out.last_mut().expect("just pushed");
        s.rows += 1;
        if row.defined {
            s.defined += 1;
        }
        if let Some(v) = row.metric(metric) {
            if s.min.as_ref().map_or(true, |m| v < *m) {
                s.min = Some(v.clone());
            }
            if s.max.as_ref().map_or(true, |m| v > *m) {
                s.max = Some(v);
            }
        }
    }
    out
}
