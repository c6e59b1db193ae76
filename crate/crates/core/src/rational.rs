//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q` with integer `p`, `q` (q nonzero).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let parse_int = |s: &str| -> Option<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse::<BigInt>().ok()
    };
    match text.split_once('/') {
        None => parse_int(text).map(Rational::from_integer),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                None
            } else {
                Some(Rational::new(num, den))
            }
        }
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact `m`-th root of a nonnegative rational, when it is rational.
pub fn exact_root(value: &Rational, m: u32) -> Option<Rational> {
    if m == 0 || value.is_negative() {
        return None;
    }
    if m == 1 {
        return Some(value.clone());
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(m);
        (num_traits::pow(r.clone(), m as usize) == *n).then_some(r)
    };
    Some(Rational::new(root(value.numer())?, root(value.denom())?))
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()))
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
