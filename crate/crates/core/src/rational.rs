//! Exact-rational helpers: parsing, `p/q` rendering and deterministic
//! decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Significant digits used for every decimal rendering.
pub const SIGNIFICANT_DIGITS: u32 = 12;

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

pub fn int(value: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(value.into())
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

/// Always `"p/q"`, integers included (`"1/1"`).
pub fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `%.12g`-style rendering computed from the exact value: 12 significant
/// digits rounded half away from zero, trailing zeros dropped, scientific
/// notation when the decimal exponent is below -5 or at least 12.
pub fn decimal(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let value = x.abs();
    let ten = BigInt::from(10u32);

    // Decimal exponent e with 10^e <= value < 10^(e+1).
    let mut exp = value.numer().to_string().len() as i64 - value.denom().to_string().len() as i64;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(ten.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-e) as u32))
        }
    };
    while pow(exp) > value {
        exp -= 1;
    }
    while pow(exp + 1) <= value {
        exp += 1;
    }

    let digits_wanted = i64::from(SIGNIFICANT_DIGITS);
    let scaled = &value * pow(digits_wanted - 1 - exp);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if BigInt::from(2u32) * r >= *scaled.denom() { q + 1 } else { q };
    if mantissa == ten.pow(SIGNIFICANT_DIGITS) {
        mantissa /= 10;
        exp += 1;
    }
    let digits = mantissa.to_string();
    debug_assert_eq!(digits.len() as u32, SIGNIFICANT_DIGITS);

    let body = if exp < -5 || exp >= digits_wanted {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let sign = if exp < 0 { '-' } else { '+' };
        if rest.is_empty() {
            format!("{lead}e{sign}{:02}", exp.abs())
        } else {
            format!("{lead}.{rest}e{sign}{:02}", exp.abs())
        }
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let (int_part, frac) = digits.split_at(split);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
