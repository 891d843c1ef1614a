//! Rate and subpacketization formulas of existing multi-access schemes.
//!
//! Apart from the cross-resolvable-design scheme, every baseline here uses the
//! cyclic wraparound topology: `K = C` users, user `k` reading caches
//! `k, ..., k+r-1 (mod C)`. A formula whose preconditions do not hold returns
//! [`Undefined`] with the reason, so sweeps can render a gap instead of
//! aborting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, BigCount};
use crate::rational::{int, ratio};

/// Why a baseline has no value at the requested point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undefined {
    pub reason: String,
}

impl Undefined {
    fn new(reason: impl Into<String>) -> Self {
        Undefined { reason: reason.into() }
    }
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)
    }
}

pub type Eval<T> = Result<T, Undefined>;

fn check_fraction(mn: &BigRational) -> Eval<()> {
    if *mn < BigRational::zero() || *mn > BigRational::one() {
        Err(Undefined::new("M/N outside [0, 1]"))
    } else {
        Ok(())
    }
}

/// Centralized rate `(C - C·r·M/N) / (1 + C·M/N)` of the hierarchical
/// multi-access scheme, 0 once `M/N >= 1/r`. Needs `r | C`.
pub fn hkd_rate(caches: u32, access: u32, mn: &BigRational) -> Eval<BigRational> {
    check_fraction(mn)?;
    if access == 0 || caches % access != 0 {
        return Err(Undefined::new(format!("r = {access} does not divide C = {caches}")));
    }
    let c = int(caches);
    if mn * int(access) >= BigRational::one() {
        return Ok(BigRational::zero());
    }
    Ok((&c - &c * int(access) * mn) / (BigRational::one() + &c * mn))
}

/// `r · binom(C/r, t)`.
pub fn hkd_subpacketization(caches: u32, access: u32, t: u32) -> Eval<BigCount> {
    if access == 0 || caches % access != 0 {
        return Err(Undefined::new(format!("r = {access} does not divide C = {caches}")));
    }
    Ok(BigCount::from(access) * binom(u64::from(caches / access), i64::from(t)))
}

/// Rate `C(1 - r·i/C)²` at `M/N = i/C` for `i <= floor(C/r)`, and 0 at
/// `i = ceil(C/r)`.
pub fn rk_rate(caches: u32, access: u32, i: u32) -> Eval<BigRational> {
    if access == 0 {
        return Err(Undefined::new("r must be positive"));
    }
    let floor = caches / access;
    let ceil = caches.div_ceil(access);
    if i <= floor {
        let gap = BigRational::one() - ratio(access * i, caches);
        Ok(int(caches) * &gap * &gap)
    } else if i == ceil {
        Ok(BigRational::zero())
    } else {
        Err(Undefined::new(format!("i = {i} outside 0..={ceil}")))
    }
}

/// Three-piece lower bound on the optimal rate under uncoded placement,
/// valid for `r >= C/2`.
pub fn rk_lower_bound(caches: u32, access: u32, mn: &BigRational) -> Eval<BigRational> {
    check_fraction(mn)?;
    if 2 * access < caches {
        return Err(Undefined::new(format!("bound requires r >= C/2, got r = {access}, C = {caches}")));
    }
    if access > caches {
        return Err(Undefined::new("r exceeds C"));
    }
    let k = int(caches);
    let gap = caches - access;
    let a = ratio(gap * (gap + 1), 2 * caches);
    let load = mn * &k;
    if load <= BigRational::one() {
        Ok(&k - (&k - &a) * load)
    } else if load <= int(2) {
        Ok(a * (int(2) - load))
    } else {
        Ok(BigRational::zero())
    }
}

/// Subpacketization `C(C - 2r + 2)/4` of the general scheme for `C·M/N = 2`.
pub fn spe_subpacketization(caches: u32, access: u32) -> Eval<BigCount> {
    if 2 * access >= caches + 2 {
        return Err(Undefined::new(format!("requires r < (C+2)/2, got r = {access}")));
    }
    let numer = u64::from(caches) * u64::from(caches + 2 - 2 * access);
    if numer % 4 != 0 {
        return Err(Undefined::new(format!("C(C-2r+2) = {numer} is not divisible by 4")));
    }
    Ok(BigCount::from(numer / 4))
}

/// Rate of the optimal scheme for the special case `r·t = C - 1`: the
/// dedicated-cache rate with each of the `C` users holding memory `rM`,
/// `(C - rt)/(1 + rt)`.
pub fn spe_special_rate(caches: u32, access: u32, t: u32) -> Eval<BigRational> {
    if u64::from(access) * u64::from(t) + 1 != u64::from(caches) {
        return Err(Undefined::new(format!("requires r·t = C-1, got r·t = {}", access * t)));
    }
    let rt = access * t;
    Ok(ratio(caches - rt, 1 + rt))
}

/// Subpacketization `C` of the special case `r·t = C - 1`.
pub fn spe_special_subpacketization(caches: u32, access: u32, t: u32) -> Eval<BigCount> {
    spe_special_rate(caches, access, t).map(|_| BigCount::from(caches))
}

/// `(C - t·r)/(1 + t)`, 0 when `t·r >= C`.
pub fn clwzc_rate(caches: u32, access: u32, t: u32) -> Eval<BigRational> {
    if t > caches {
        return Err(Undefined::new(format!("t = {t} exceeds C = {caches}")));
    }
    let load = u64::from(t) * u64::from(access);
    if load >= u64::from(caches) {
        return Ok(BigRational::zero());
    }
    Ok(ratio(u64::from(caches) - load, 1 + t))
}

/// `C · binom(C - t(r-1), t)`; zero when the inner binomial vanishes.
pub fn clwzc_subpacketization(caches: u32, access: u32, t: u32) -> Eval<BigCount> {
    if t > caches || access == 0 {
        return Err(Undefined::new("requires 1 <= r and t <= C"));
    }
    let top = i64::from(caches) - i64::from(t) * (i64::from(access) - 1);
    if top < 0 {
        return Ok(BigCount::zero());
    }
    Ok(BigCount::from(caches) * binom(top as u64, i64::from(t)))
}

/// Value of the first-scheme rate, with a flag for results that depend on the
/// chosen reading of the odd-case leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sr1Rate {
    pub rate: BigRational,
    pub interpretation_dependent: bool,
}

/// Default ceiling in the odd-case leading term `1/(ceil(·) + 1)`:
/// `ceil(2tr / (C - tr + 1))`.
pub fn sr1_default_leading(caches: u32, access: u32, t: u32) -> BigInt {
    let tr = u64::from(t) * u64::from(access);
    BigInt::from((2 * tr).div_ceil(u64::from(caches) - tr + 1))
}

/// First cyclic scheme of Sasi and Rajan, defined for `gcd(t, C) = 1`.
pub fn sr1_rate(caches: u32, access: u32, t: u32) -> Eval<Sr1Rate> {
    sr1_rate_with(caches, access, t, sr1_default_leading)
}

pub fn sr1_rate_with(
    caches: u32,
    access: u32,
    t: u32,
    leading: impl Fn(u32, u32, u32) -> BigInt,
) -> Eval<Sr1Rate> {
    if t == 0 || t.gcd(&caches) != 1 {
        return Err(Undefined::new(format!("requires gcd(t, C) = 1, got gcd({t}, {caches}) = {}", t.gcd(&caches))));
    }
    sr1_piecewise(caches, access, t, leading)
}

/// The piecewise rate expression without the `gcd(t, C) = 1` check.
pub fn sr1_piecewise(
    caches: u32,
    access: u32,
    t: u32,
    leading: impl Fn(u32, u32, u32) -> BigInt,
) -> Eval<Sr1Rate> {
    let tr = u64::from(t) * u64::from(access);
    if tr > u64::from(caches) {
        return Err(Undefined::new(format!("requires t·r <= C, got {tr}")));
    }
    let gap = u64::from(caches) - tr;
    let summand = |i: u64| ratio(2, 1 + tr.div_ceil(i));
    if gap == 1 {
        return Ok(Sr1Rate { rate: ratio(1, caches), interpretation_dependent: false });
    }
    if gap % 2 == 0 {
        let rate = (gap / 2 + 1..=gap).map(summand).fold(BigRational::zero(), |a, b| a + b);
        return Ok(Sr1Rate { rate, interpretation_dependent: false });
    }
    let lead = BigRational::new(BigInt::one(), leading(caches, access, t) + 1);
    let rate = ((gap + 3) / 2..=gap).map(summand).fold(lead, |a, b| a + b);
    Ok(Sr1Rate { rate, interpretation_dependent: true })
}

/// Second cyclic scheme of Sasi and Rajan: `(C - tr)(C - tr + t)/(2C)`, for
/// `t | C` and `(C - tr + t) | C`.
pub fn sr2_rate(caches: u32, access: u32, t: u32) -> Eval<BigRational> {
    let tr = u64::from(t) * u64::from(access);
    let c = u64::from(caches);
    if t == 0 || tr > c {
        return Err(Undefined::new(format!("requires 1 <= t and t·r <= C, got t·r = {tr}")));
    }
    if c % u64::from(t) != 0 {
        return Err(Undefined::new(format!("t = {t} does not divide C = {caches}")));
    }
    let width = c - tr + u64::from(t);
    if c % width != 0 {
        return Err(Undefined::new(format!("C - tr + t = {width} does not divide C = {caches}")));
    }
    Ok(ratio((c - tr) * width, 2 * c))
}

/// Subpacketization `C`, under the same preconditions as [`sr2_rate`].
pub fn sr2_subpacketization(caches: u32, access: u32, t: u32) -> Eval<BigCount> {
    sr2_rate(caches, access, t).map(|_| BigCount::from(caches))
}

/// Parameters of the cross-resolvable-design scheme built from the affine
/// plane of order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrdAffine {
    pub order: u64,
    pub caches: u64,
    pub num_users: BigCount,
    pub subpacketization: BigCount,
    pub memory_fraction: BigRational,
    pub per_user_rate: BigRational,
    pub rate: BigRational,
}

pub fn crd_affine(n: u64) -> Eval<CrdAffine> {
    if !is_prime_power(n) {
        return Err(Undefined::new(format!("n = {n} is not a prime power")));
    }
    let nb = BigInt::from(n);
    let num_users: BigInt = (&nb * &nb * &nb * (&nb + 1u32)) / 2u32;
    let per_user_rate = BigRational::new((&nb - 1u32) * (&nb - 1u32), BigInt::from(4u32) * &nb * &nb);
    let rate = &per_user_rate * BigRational::from_integer(num_users.clone());
    Ok(CrdAffine {
        order: n,
        caches: n * (n + 1),
        num_users: num_users.to_biguint().expect("positive"),
        subpacketization: BigCount::from(n) * n,
        memory_fraction: ratio(1, n),
        per_user_rate,
        rate,
    })
}

/// Trial division up to `sqrt(n)`, then checks that `n` is a power of its
/// smallest prime factor.
pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    let smallest = loop {
        if p * p > n {
            break n;
        }
        if n % p == 0 {
            break p;
        }
        p += 1;
    };
    let mut rest = n;
    while rest % smallest == 0 {
        rest /= smallest;
    }
    rest == 1
}

/// If `C = n(n+1)` for some prime power `n`, that `n`.
pub fn crd_order_for_caches(caches: u64) -> Option<u64> {
    let mut n = 1u64;
    while n * (n + 1) < caches {
        n += 1;
    }
    (n * (n + 1) == caches && is_prime_power(n)).then_some(n)
}
