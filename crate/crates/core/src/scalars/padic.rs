//! Truncated `p`-adic integers and 2×2 matrices over them, with the matrix
//! logarithm and exponential on `1 + p²M₂(Z_p)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::rational::{bigint_from_json, bigint_to_json, int_valuation, mod_inverse, pow_i, Rational};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_PREC: u32 = 10;

/// An element of `Z_p` known modulo `p^prec`.
#[derive(Clone, Debug)]
pub struct PadicTrunc {
    p: u64,
    prec: u32,
    residue: BigInt,
}

impl PadicTrunc {
    pub fn new(p: u64, prec: u32, residue: BigInt) -> Self {
        let m = pow_i(p, prec);
        PadicTrunc { p, prec, residue: residue.mod_floor(&m) }
    }

    pub fn from_int(p: u64, prec: u32, n: i64) -> Self {
        Self::new(p, prec, BigInt::from(n))
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        Self::from_int(p, prec, 0)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_int(p, prec, 1)
    }

    /// Embeds a `p`-integral rational.
    pub fn from_rational(r: &Rational, p: u64, prec: u32) -> Result<Self> {
        let m = pow_i(p, prec);
        let inv = mod_inverse(r.denom(), &m).ok_or_else(|| {
            Error::UnsupportedCoefficients(format!("{r} is not {p}-integral"))
        })?;
        Ok(Self::new(p, prec, r.numer() * inv))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    fn modulus(&self) -> BigInt {
        pow_i(self.p, self.prec)
    }

    /// Valuation of the known part; equals `prec` when the residue is zero.
    pub fn valuation(&self) -> u32 {
        if self.residue.is_zero() {
            self.prec
        } else {
            int_valuation(&self.residue, self.p) as u32
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !(&self.residue % BigInt::from(self.p)).is_zero()
    }

    /// Lowers the precision to `prec` (no-op if already lower).
    pub fn truncate(&self, prec: u32) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.p, prec, self.residue.clone())
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing {}-adic and {}-adic values", self.p, other.p);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_prime(other);
        Self::new(self.p, self.prec.min(other.prec), &self.residue + &other.residue)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_prime(other);
        Self::new(self.p, self.prec.min(other.prec), &self.residue - &other.residue)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.prec, -&self.residue)
    }

    /// Product with precision `min(prec_x + v(y), prec_y + v(x))`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_prime(other);
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation());
        Self::new(self.p, prec, &self.residue * &other.residue)
    }

    /// Multiplies by a `p`-integral rational known exactly.
    pub fn mul_exact(&self, r: &Rational) -> Result<Self> {
        let v = if r.is_zero() { 0 } else { int_valuation(r.numer(), self.p) };
        let e = Self::from_rational(r, self.p, self.prec + v as u32)?;
        let prec = self.prec + v as u32;
        Ok(Self::new(self.p, prec, &self.residue * e.residue))
    }

    /// Inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Domain(format!("{self} is not a {}-adic unit", self.p)));
        }
        let inv = mod_inverse(&self.residue, &self.modulus()).expect("unit");
        Ok(Self::new(self.p, self.prec, inv))
    }

    /// Exact division by `p^j`; the result has precision `prec − j`.
    pub fn div_p_pow(&self, j: u32) -> Result<Self> {
        if self.valuation() < j || self.prec < j {
            return Err(Error::Domain(format!("{self} is not divisible by {}^{j}", self.p)));
        }
        let d = pow_i(self.p, j);
        Ok(Self::new(self.p, self.prec - j, &self.residue / d))
    }

    /// Equality modulo `p^min(prec)`.
    pub fn eq_mod(&self, other: &Self) -> bool {
        self.p == other.p && {
            let m = pow_i(self.p, self.prec.min(other.prec));
            (&self.residue - &other.residue).mod_floor(&m).is_zero()
        }
    }

    /// Equality modulo `p^k` (both sides must be known to at least `k` digits
    /// for the answer to be meaningful).
    pub fn eq_mod_pow(&self, other: &Self, k: u32) -> bool {
        let m = pow_i(self.p, k);
        (&self.residue - &other.residue).mod_floor(&m).is_zero()
    }

    /// Symmetric lift to a rational integer in `(−p^prec/2, p^prec/2]`.
    pub fn symmetric_lift(&self) -> BigInt {
        let m = self.modulus();
        let half = &m / 2;
        if self.residue > half {
            &self.residue - m
        } else {
            self.residue.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "prec": self.prec, "residue": bigint_to_json(&self.residue)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| -> Result<BigInt> {
            match v.get(k) {
                Some(x) => bigint_from_json(x),
                None => invalid(format!("p-adic value is missing field `{k}`")),
            }
        };
        let p = field("p")?.to_u64().filter(|&p| super::rational::is_prime(p));
        let p = p.map_or_else(|| invalid("field `p` must be a prime"), Ok)?;
        let prec = field("prec")?.to_u32().filter(|&k| (1..=256).contains(&k));
        let prec = prec.map_or_else(|| invalid("field `prec` must be in 1..=256"), Ok)?;
        Ok(Self::new(p, prec, field("residue")?))
    }
}

impl PartialEq for PadicTrunc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_mod(other)
    }
}

impl fmt::Display for PadicTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.prec)
    }
}

/// A 2×2 matrix over truncated `p`-adic integers.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicMat2 {
    pub e: [[PadicTrunc; 2]; 2],
}

impl PadicMat2 {
    pub fn new(e: [[PadicTrunc; 2]; 2]) -> Self {
        PadicMat2 { e }
    }

    pub fn identity(p: u64, prec: u32) -> Self {
        let o = PadicTrunc::one(p, prec);
        let z = PadicTrunc::zero(p, prec);
        PadicMat2 { e: [[o.clone(), z.clone()], [z, o]] }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        let z = PadicTrunc::zero(p, prec);
        PadicMat2 { e: [[z.clone(), z.clone()], [z.clone(), z]] }
    }

    pub fn from_rationals(m: &[[Rational; 2]; 2], p: u64, prec: u32) -> Result<Self> {
        let f = |r: &Rational| PadicTrunc::from_rational(r, p, prec);
        Ok(PadicMat2 { e: [[f(&m[0][0])?, f(&m[0][1])?], [f(&m[1][0])?, f(&m[1][1])?]] })
    }

    pub fn p(&self) -> u64 {
        self.e[0][0].p
    }

    pub fn prec(&self) -> u32 {
        self.entries().map(|x| x.prec).min().unwrap()
    }

    pub fn entries(&self) -> impl Iterator<Item = &PadicTrunc> {
        self.e.iter().flat_map(|r| r.iter())
    }

    /// Minimal valuation of the entries.
    pub fn valuation(&self) -> u32 {
        self.entries().map(|x| x.valuation()).min().unwrap()
    }

    pub fn map(&self, f: impl Fn(&PadicTrunc) -> PadicTrunc) -> Self {
        PadicMat2 {
            e: [[f(&self.e[0][0]), f(&self.e[0][1])], [f(&self.e[1][0]), f(&self.e[1][1])]],
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&PadicTrunc, &PadicTrunc) -> PadicTrunc) -> Self {
        PadicMat2 {
            e: [
                [f(&self.e[0][0], &o.e[0][0]), f(&self.e[0][1], &o.e[0][1])],
                [f(&self.e[1][0], &o.e[1][0]), f(&self.e[1][1], &o.e[1][1])],
            ],
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        PadicMat2 { e: [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]] }
    }

    pub fn scale(&self, s: &PadicTrunc) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn truncate(&self, prec: u32) -> Self {
        self.map(|x| x.truncate(prec))
    }

    pub fn det(&self) -> PadicTrunc {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    /// Inverse of a matrix with unit determinant.
    pub fn inv(&self) -> Result<Self> {
        let d = self.det().inv()?;
        let e = &self.e;
        Ok(PadicMat2 { e: [[e[1][1].clone(), e[0][1].neg()], [e[1][0].neg(), e[0][0].clone()]] }
            .scale(&d))
    }

    pub fn eq_mod_pow(&self, o: &Self, k: u32) -> bool {
        self.e.iter().flatten().zip(o.e.iter().flatten()).all(|(a, b)| a.eq_mod_pow(b, k))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.e
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().filter(|r| r.len() == 2);
        let rows = rows.map_or_else(|| invalid("p-adic matrix must be a 2×2 nested array"), Ok)?;
        let mut out = Vec::new();
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == 2);
            let r = r.map_or_else(|| invalid("p-adic matrix must be a 2×2 nested array"), Ok)?;
            out.push(PadicTrunc::from_json(&r[0])?);
            out.push(PadicTrunc::from_json(&r[1])?);
        }
        let p = out[0].p;
        if out.iter().any(|x| x.p != p) {
            return invalid("p-adic matrix entries use different primes");
        }
        let mut it = out.into_iter();
        let mut next = || it.next().unwrap();
        Ok(PadicMat2 { e: [[next(), next()], [next(), next()]] })
    }
}

/// Shared series driver: returns `Σ_{k≥1} coeff(k)·p^{2k}·C^k` where `C = B/p²`.
/// `coeff(k)` must make every term `p`-integral of valuation `≥ 2`.
fn series_in_p2(b: &PadicMat2, coeff: impl Fn(u32) -> Rational) -> Result<PadicMat2> {
    let p = b.p();
    let prec = b.prec();
    if prec < 2 || b.valuation() < 2 {
        return Err(Error::Domain(format!(
            "series needs entries of valuation ≥ 2 (found {}, precision {prec})",
            b.valuation()
        )));
    }
    // C = B/p² is known modulo p^{prec−2}; every term p^{2k}/… · C^k is then
    // known modulo p^prec, so the sum is computed to full precision.
    let c = b.map(|x| PadicTrunc::new(p, prec, x.div_p_pow(2).expect("valuation ≥ 2").residue));
    let mut out = PadicMat2::zero(p, prec);
    let mut ck = PadicMat2::identity(p, prec);
    let mut k = 1u32;
    loop {
        ck = ck.mul(&c).truncate(prec);
        let w = coeff(k) * Rational::from_integer(pow_i(p, 2 * k));
        let v = super::rational::valuation_or_inf(&w, p);
        if v >= prec as i64 {
            // all later terms vanish too: valuations grow at least linearly
            if k > 2 * prec + 4 {
                break;
            }
            k += 1;
            continue;
        }
        let term = ck.map(|x| {
            let m = pow_i(p, prec);
            let wr = super::rational::reduce_mod(&w, &m).expect("term is p-integral");
            PadicTrunc::new(p, prec, &x.residue * wr)
        });
        out = out.add(&term);
        k += 1;
    }
    Ok(out)
}

/// `log(x) = Σ (−1)^{k+1}(x − 1)^k / k` for `x ∈ 1 + p²M₂(Z_p)`.
pub fn padic_log_matrix(x: &PadicMat2) -> Result<PadicMat2> {
    let p = x.p();
    let b = x.sub(&PadicMat2::identity(p, x.prec()));
    if b.valuation() < 2 {
        return Err(Error::Domain("log needs x − I with entries of valuation ≥ 2".into()));
    }
    series_in_p2(&b, |k| {
        let s = if k % 2 == 1 { 1 } else { -1 };
        Rational::new(BigInt::from(s), BigInt::from(k))
    })
}

/// `exp(n) = Σ n^k / k!` for `n ∈ p²M₂(Z_p)`.
pub fn padic_exp_matrix(n: &PadicMat2) -> Result<PadicMat2> {
    let p = n.p();
    if n.valuation() < 2 {
        return Err(Error::Domain("exp needs entries of valuation ≥ 2".into()));
    }
    let s = series_in_p2(n, |k| {
        let f: BigInt = (1..=k).map(BigInt::from).product();
        Rational::new(BigInt::one(), f)
    })?;
    Ok(PadicMat2::identity(p, n.prec()).add(&s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(p: u64, prec: u32, v: [[i64; 2]; 2]) -> PadicMat2 {
        let f = |x| PadicTrunc::from_int(p, prec, x);
        PadicMat2::new([[f(v[0][0]), f(v[0][1])], [f(v[1][0]), f(v[1][1])]])
    }

    #[test]
    fn precision_tracking() {
        let a = PadicTrunc::from_int(3, 10, 9);
        let b = PadicTrunc::from_int(3, 5, 2);
        assert_eq!(a.mul(&b).prec(), 7);
        assert_eq!(a.add(&b).prec(), 5);
        assert_eq!(a.div_p_pow(2).unwrap().prec(), 8);
        assert!(b.div_p_pow(1).is_err());
        let u = PadicTrunc::from_rational(&Rational::new(1.into(), 2.into()), 3, 4).unwrap();
        assert_eq!(u.mul(&PadicTrunc::from_int(3, 4, 2)), PadicTrunc::one(3, 4));
    }

    #[test]
    fn log_exp_trivial_cases() {
        let i = PadicMat2::identity(3, 10);
        assert_eq!(padic_log_matrix(&i).unwrap(), PadicMat2::zero(3, 10));
        let x = mat(3, 10, [[1, 9], [0, 1]]);
        assert_eq!(padic_log_matrix(&x).unwrap(), mat(3, 10, [[0, 9], [0, 0]]));
        let n = mat(3, 10, [[0, 9], [0, 0]]);
        let e = padic_exp_matrix(&n).unwrap();
        assert_eq!(e, x);
        assert_eq!(e.prec(), 10);
        assert_eq!(padic_exp_matrix(&PadicMat2::zero(5, 6)).unwrap(), PadicMat2::identity(5, 6));
    }

    #[test]
    fn domain_errors() {
        assert!(padic_log_matrix(&mat(3, 10, [[1, 3], [0, 1]])).is_err());
        assert!(padic_exp_matrix(&mat(3, 10, [[0, 3], [0, 0]])).is_err());
    }

    #[test]
    fn exp_log_roundtrip_p2() {
        let x = mat(2, 12, [[5, 4], [8, 13]]);
        let l = padic_log_matrix(&x).unwrap();
        assert!(padic_exp_matrix(&l).unwrap().eq_mod_pow(&x, 10));
    }
}
