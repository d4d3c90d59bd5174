//! Bernoulli numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{invalid, Result};

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_0, …, B_k` via `Σ_{j=0}^{n} C(n+1, j) B_j = 0` (so `B_1 = −1/2`).
pub fn bernoulli_table(k: u64) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::one());
    for n in 1..=k {
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(n + 1, j as u64)) * bj;
        }
        b.push(-s / Rational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// The Bernoulli number `B_k` for even `k ≥ 2`.
pub fn bernoulli(k: i64) -> Result<Rational> {
    if k < 2 || k % 2 != 0 {
        return invalid(format!("bernoulli needs an even k ≥ 2, got {k}"));
    }
    Ok(bernoulli_table(k as u64).pop().unwrap())
}

/// `ζ(1 − k) = −B_k / k` for even `k ≥ 2`.
pub fn zeta_one_minus(k: i64) -> Result<Rational> {
    Ok(-bernoulli(k)? / Rational::from_integer(BigInt::from(k)))
}
