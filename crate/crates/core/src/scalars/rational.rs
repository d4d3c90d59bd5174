//! Helpers around [`BigRational`]: parsing, `l`-adic valuations and
//! reduction of `l`-integral rationals modulo prime powers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/3"` or `"  7 / 2 "`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .or_else(|_| invalid(format!("not an integer literal: {t:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return invalid(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Exponent of the prime `l` in the nonzero integer `n`.
pub fn int_valuation(n: &BigInt, l: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let l = BigInt::from(l);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `l`-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, l: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    int_valuation(x.numer(), l) - int_valuation(x.denom(), l)
}

/// Valuation with `+inf` encoded as `i64::MAX` for zero.
pub fn valuation_or_inf(x: &Rational, l: u64) -> i64 {
    if x.is_zero() {
        i64::MAX
    } else {
        valuation(x, l)
    }
}

pub fn pow_i(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `l^e` as a rational for any integer `e`.
pub fn l_pow(l: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow_i(l, e as u32))
    } else {
        Rational::new(BigInt::one(), pow_i(l, (-e) as u32))
    }
}

/// Reduces an `l`-integral rational modulo `modulus` (which must be a power
/// of `l`). Returns `None` if the denominator is divisible by `l`.
pub fn reduce_mod(x: &Rational, modulus: &BigInt) -> Option<BigInt> {
    if modulus.is_one() {
        return Some(BigInt::zero());
    }
    let d = x.denom().mod_floor(modulus);
    let inv = mod_inverse(&d, modulus)?;
    Some((x.numer().mod_floor(modulus) * inv).mod_floor(modulus))
}

pub fn reduce_mod_u64(x: &Rational, modulus: u64) -> Option<u64> {
    reduce_mod(x, &BigInt::from(modulus)).map(|v| v.to_u64().expect("residue fits u64"))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    mod_inverse(&BigInt::from(a), &BigInt::from(m)).map(|v| v.to_u64().unwrap())
}

pub fn is_integral_at(x: &Rational, l: u64) -> bool {
    x.is_zero() || valuation(x, l) >= 0
}

/// JSON form `[num, den]`.
pub fn rational_to_json(x: &Rational) -> Value {
    Value::Array(vec![bigint_to_json(x.numer()), bigint_to_json(x.denom())])
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse().expect("integer literal is a JSON number"))
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .or_else(|_| invalid(format!("expected an integer, found {n}"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .or_else(|_| invalid(format!("expected an integer, found {s:?}"))),
        other => invalid(format!("expected an integer, found {other}")),
    }
}

/// Accepts `[num, den]`, a JSON integer, or a string literal such as `"-1/3"`.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let n = bigint_from_json(&a[0])?;
            let d = bigint_from_json(&a[1])?;
            if d.is_zero() {
                return invalid("zero denominator");
            }
            Ok(Rational::new(n, d))
        }
        Value::Number(_) => Ok(Rational::from_integer(bigint_from_json(v)?)),
        Value::String(s) => parse_rational(s),
        other => invalid(format!("expected a rational [num, den], found {other}")),
    }
}

/// Compact human form: `3`, `-1/3`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn sign_of(x: &Rational) -> Sign {
    if x.is_zero() {
        Sign::NoSign
    } else if x.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}
