//! Closed-form metrics of the scheme and its memory-sharing curve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, BigCount};
use crate::error::{Error, Result};
use crate::scheme::{accessible_fraction, SchemeParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeReport {
    pub params: SchemeParams,
    /// `R = binom(C, t+r) / binom(C, t)`.
    pub rate: BigRational,
    /// `R / K`.
    pub per_user_rate: BigRational,
    /// `F = binom(C, t)`.
    pub subpacketization: BigCount,
    /// `g = binom(t+r, r)`, users served by each transmission.
    pub coding_gain: BigCount,
    /// `M'/N`.
    pub accessible_fraction: BigRational,
    /// `K = binom(C, r)`.
    pub num_users: BigCount,
    /// `M/N = t/C`.
    pub cache_fraction: BigRational,
}

pub fn analyze(p: &SchemeParams) -> SchemeReport {
    let (c, r, t) = (u64::from(p.caches), i64::from(p.access), i64::from(p.t));
    let rate = closed_form_rate(p.caches, p.access, p.t);
    let num_users = binom(c, r);
    SchemeReport {
        params: *p,
        per_user_rate: &rate / BigRational::from_integer(num_users.clone().into()),
        rate,
        subpacketization: binom(c, t),
        coding_gain: binom((t + r) as u64, r),
        accessible_fraction: accessible_fraction(p),
        num_users,
        cache_fraction: p.memory_fraction(),
    }
}

/// `binom(C, t+r) / binom(C, t)` for any `0 <= t <= C`.
///
/// `t = 0` (no caching) gives `binom(C, r)`, one full file per user; `t + r > C`
/// gives 0.
pub fn closed_form_rate(caches: u32, access: u32, t: u32) -> BigRational {
    assert!(t <= caches, "t = {t} exceeds C = {caches}");
    let c = u64::from(caches);
    BigRational::new(binom(c, i64::from(t + access)).into(), binom(c, i64::from(t)).into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateMemoryPoint {
    pub memory_fraction: BigRational,
    pub rate: BigRational,
}

/// Achievable rate at arbitrary `M/N` by memory sharing between the two
/// neighbouring integer-t points.
pub fn rate_memory_curve(caches: u32, access: u32, memory_points: &[BigRational]) -> Result<Vec<RateMemoryPoint>> {
    memory_points.iter().map(|mn| rate_at(caches, access, mn)).collect()
}

fn rate_at(caches: u32, access: u32, mn: &BigRational) -> Result<RateMemoryPoint> {
    if *mn < BigRational::zero() || *mn > BigRational::one() {
        return Err(Error::MemoryFractionOutOfRange(crate::rational::ratio_string(mn)));
    }
    let scaled = mn * BigRational::from_integer(BigInt::from(caches));
    let lo = scaled.floor().to_integer();
    let lo = u32::try_from(lo).expect("floor(C·M/N) lies in 0..=C");
    let rate = if scaled.is_integer() {
        closed_form_rate(caches, access, lo)
    } else {
        check_convex(caches, access, lo)?;
        check_convex(caches, access, lo + 1)?;
        let theta = &scaled - BigRational::from_integer(lo.into());
        let r_lo = closed_form_rate(caches, access, lo);
        let r_hi = closed_form_rate(caches, access, lo + 1);
        &r_lo + theta * (r_hi - &r_lo)
    };
    Ok(RateMemoryPoint { memory_fraction: mn.clone(), rate })
}

/// Second difference of the integer-t rate sequence at `t` must be
/// nonnegative for interpolation to give the lower envelope.
fn check_convex(caches: u32, access: u32, t: u32) -> Result<()> {
    if t == 0 || t >= caches {
        return Ok(());
    }
    let second = closed_form_rate(caches, access, t - 1) + closed_form_rate(caches, access, t + 1)
        - BigRational::from_integer(2.into()) * closed_form_rate(caches, access, t);
    if second < BigRational::zero() {
        Err(Error::NonConvex(t))
    } else {
        Ok(())
    }
}
