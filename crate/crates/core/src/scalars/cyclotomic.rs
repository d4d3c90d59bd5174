//! Exact arithmetic in `Q(ζ_M)(√l)`.
//!
//! Elements are stored as `a + b·√l` with `a, b` in the power basis
//! `1, ζ_M, …, ζ_M^{φ(M)−1}` of `Q(ζ_M)` reduced modulo the cyclotomic
//! polynomial `Φ_M`. Binary operations first lift both operands to the lcm of
//! their conductors. Whenever `√l` already lies in `Q(ζ_M)` the `b` part is
//! folded into `a`, so the representation for a given conductor is canonical
//! and `Q(ζ_M)(√l)` is always a field.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde_json::{json, Map, Value};

use super::rational::{
    bigint_from_json, euler_phi, fmt_rational, gcd_u64, lcm_u64, rational_from_json,
    rational_to_json, Rational,
};
use crate::error::{invalid, Result};

/// Reduction data for one conductor.
struct Tables {
    phi: usize,
    /// `rows[j]` = coordinates of `ζ_M^j`, for `j < max(M, 2φ)`.
    rows: Vec<Vec<i64>>,
}

static TABLES: Lazy<Mutex<HashMap<u64, Arc<Tables>>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static CYC_POLYS: Lazy<Mutex<HashMap<u64, Arc<Vec<i64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static SQRTS: Lazy<Mutex<HashMap<(u64, u64), Arc<Vec<Rational>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Integer coefficients (constant term first) of the cyclotomic polynomial `Φ_m`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    if let Some(p) = CYC_POLYS.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d of m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_poly_div(&num, &div);
        }
    }
    let out = Arc::new(num);
    CYC_POLYS.lock().unwrap().insert(m, out.clone());
    out
}

fn exact_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1);
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn tables(m: u64) -> Arc<Tables> {
    if let Some(t) = TABLES.lock().unwrap().get(&m) {
        return t.clone();
    }
    let phi = euler_phi(m) as usize;
    let poly = cyclotomic_polynomial(m);
    let count = (m as usize).max(2 * phi);
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(count);
    for j in 0..count {
        if j < phi {
            let mut r = vec![0i64; phi];
            r[j] = 1;
            rows.push(r);
        } else {
            let prev = &rows[j - 1];
            let top = prev[phi - 1];
            let mut r = vec![0i64; phi];
            for i in 1..phi {
                r[i] = prev[i - 1];
            }
            if top != 0 {
                for i in 0..phi {
                    r[i] -= top * poly[i];
                }
            }
            rows.push(r);
        }
    }
    let t = Arc::new(Tables { phi, rows });
    TABLES.lock().unwrap().insert(m, t.clone());
    t
}

/// Smallest conductor `M` with `√l ∈ Q(ζ_M)`.
pub fn sqrt_conductor(l: u64) -> u64 {
    if l == 2 {
        8
    } else if l % 4 == 1 {
        l
    } else {
        4 * l
    }
}

/// `√l` (positive root under `ζ_M = e^{2πi/M}`) as an element of `Q(ζ_M)`,
/// where `sqrt_conductor(l)` divides `M`. Returned as power-basis coordinates.
fn sqrt_in_cyclotomic(l: u64, m: u64) -> Arc<Vec<Rational>> {
    if let Some(s) = SQRTS.lock().unwrap().get(&(l, m)) {
        return s.clone();
    }
    let base = sqrt_conductor(l);
    debug_assert!(m % base == 0);
    let s = if l == 2 {
        // ζ_8 + ζ_8^{-1}
        CycScalar::root_of_unity(1, 8) + CycScalar::root_of_unity(-1, 8)
    } else {
        // Quadratic Gauss sum g = Σ (a/l) ζ_l^a, with g² = (−1)^{(l−1)/2} l.
        let mut g = CycScalar::zero();
        for a in 1..l {
            let leg = legendre(a, l);
            g += CycScalar::root_of_unity(a as i64, l).scale(&Rational::from_integer(leg.into()));
        }
        if l % 4 == 1 {
            g
        } else {
            // g = i√l, so √l = −i·g.
            -(CycScalar::root_of_unity(1, 4) * g)
        }
    };
    let out = Arc::new(s.lift(m).a);
    SQRTS.lock().unwrap().insert((l, m), out.clone());
    out
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

/// An element `a + b√l` of `Q(ζ_M)(√l)`.
#[derive(Clone, Debug)]
pub struct CycScalar {
    conductor: u64,
    /// The prime under the square root; `0` when `b` is empty.
    l: u64,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl CycScalar {
    pub fn from_rational(r: Rational) -> Self {
        CycScalar { conductor: 1, l: 0, a: vec![r], b: Vec::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `e^{2πi·num/den}` as the exact root of unity `ζ_den^num`.
    pub fn root_of_unity(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity of order 0");
        let g = gcd_u64(num.unsigned_abs(), den).max(1);
        let den = den / g;
        let num = (num / g as i64).rem_euclid(den as i64) as usize;
        let t = tables(den);
        let a = t.rows[num].iter().map(|&c| Rational::from_integer(c.into())).collect();
        CycScalar { conductor: den, l: 0, a, b: Vec::new() }
    }

    /// `e^{2πi x}` for a rational `x`.
    pub fn exp_2pi_i(x: &Rational) -> Self {
        let den = x.denom().to_u64().expect("root of unity order fits u64");
        let num = (x.numer() % x.denom()).to_i64().expect("numerator fits i64");
        Self::root_of_unity(num, den)
    }

    /// The positive square root of the prime `l`.
    pub fn sqrt_l(l: u64) -> Self {
        assert!(super::rational::is_prime(l), "√l requires a prime l, got {l}");
        CycScalar {
            conductor: 1,
            l,
            a: vec![Rational::zero()],
            b: vec![Rational::one()],
        }
    }

    /// `√l^e` for any integer `e`.
    pub fn sqrt_l_pow(l: u64, e: i64) -> Self {
        let half = Rational::from_integer(BigInt::from(l)).pow((e.div_euclid(2)) as i32);
        let r = Self::from_rational(half);
        if e.rem_euclid(2) == 1 {
            r * Self::sqrt_l(l)
        } else {
            r
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// The prime `l` of the formal `√l` part, if one is present.
    pub fn sqrt_prime(&self) -> Option<u64> {
        (self.l != 0).then_some(self.l)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.a
    }

    pub fn sqrt_coeffs(&self) -> &[Rational] {
        &self.b
    }

    pub fn is_zero_elem(&self) -> bool {
        self.a.iter().all(|c| c.is_zero()) && self.b.iter().all(|c| c.is_zero())
    }

    /// `Some(r)` when the element is the rational `r`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.b.iter().any(|c| !c.is_zero()) {
            return None;
        }
        if self.a[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(self.a[0].clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.a.iter_mut().chain(out.b.iter_mut()) {
            *c *= r;
        }
        out.normalize()
    }

    /// The same element written over `Q(ζ_m)`, `m` a multiple of the conductor.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.conductor == 0, "cannot lift conductor {} to {m}", self.conductor);
        if m == self.conductor {
            return self.clone();
        }
        let t = tables(m);
        let step = (m / self.conductor) as usize;
        let lift_vec = |v: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); t.phi];
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, &r) in out.iter_mut().zip(&t.rows[i * step]) {
                    if r != 0 {
                        *o += c * Rational::from_integer(r.into());
                    }
                }
            }
            out
        };
        let a = lift_vec(&self.a);
        let b = if self.b.is_empty() { Vec::new() } else { lift_vec(&self.b) };
        CycScalar { conductor: m, l: self.l, a, b }.normalize()
    }

    /// Drops a vanishing `√l` part and folds it into `Q(ζ_M)` when possible.
    fn normalize(mut self) -> Self {
        if self.l == 0 {
            return self;
        }
        if self.b.iter().all(|c| c.is_zero()) {
            self.b.clear();
            self.l = 0;
            return self;
        }
        if self.conductor % sqrt_conductor(self.l) == 0 {
            let s = sqrt_in_cyclotomic(self.l, self.conductor);
            let b = std::mem::take(&mut self.b);
            let prod = mul_vec(self.conductor, &b, &s);
            for (x, y) in self.a.iter_mut().zip(prod) {
                *x += y;
            }
            self.l = 0;
        }
        self
    }

    fn common(x: &Self, y: &Self) -> (Self, Self) {
        let l = match (x.l, y.l) {
            (0, l) | (l, 0) => l,
            (l1, l2) if l1 == l2 => l1,
            (l1, l2) => panic!("mixing √{l1} and √{l2} in one computation"),
        };
        let m = lcm_u64(x.conductor, y.conductor);
        let mut xs = x.lift(m);
        let mut ys = y.lift(m);
        // A fold may have happened during lifting for one side only.
        for s in [&mut xs, &mut ys] {
            if s.l == 0 && l != 0 && m % sqrt_conductor(l) != 0 {
                s.l = l;
                s.b = vec![Rational::zero(); s.a.len()];
            }
        }
        (xs, ys)
    }

    /// The element of `Q(ζ_m)` with power-basis coordinates `a` (length `φ(m)`).
    pub fn from_power_basis(m: u64, a: Vec<Rational>) -> Self {
        assert_eq!(a.len(), euler_phi(m) as usize, "coordinate count must be φ({m})");
        CycScalar { conductor: m, l: 0, a, b: Vec::new() }
    }

    /// True when a formal `√l` part is present (not folded into `Q(ζ_M)`).
    pub fn has_sqrt_part(&self) -> bool {
        self.l != 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero_elem() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        if self.b.is_empty() {
            let a = inv_vec(self.conductor, &self.a);
            return Some(CycScalar { conductor: self.conductor, l: 0, a, b: Vec::new() });
        }
        // (a + b√l)^{-1} = (a − b√l) / (a² − l b²)
        let m = self.conductor;
        let lq = Rational::from_integer(self.l.into());
        let a2 = mul_vec(m, &self.a, &self.a);
        let b2 = mul_vec(m, &self.b, &self.b);
        let norm: Vec<Rational> = a2.iter().zip(&b2).map(|(x, y)| x - y * &lq).collect();
        let ninv = inv_vec(m, &norm);
        let a = mul_vec(m, &self.a, &ninv);
        let b = mul_vec(m, &self.b, &ninv).into_iter().map(|c| -c).collect();
        Some(CycScalar { conductor: m, l: self.l, a, b }.normalize())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// The automorphism `ζ_M ↦ ζ_M^t` (`gcd(t, M) = 1`), fixing a formal `√l`.
    pub fn conj(&self, t: i64) -> Self {
        let m = self.conductor;
        assert!(gcd_u64(t.unsigned_abs(), m) == 1, "conjugation exponent {t} not prime to {m}");
        let tb = tables(m);
        let map = |v: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); tb.phi];
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let j = (i as i64 * t).rem_euclid(m as i64) as usize;
                for (o, &r) in out.iter_mut().zip(&tb.rows[j]) {
                    if r != 0 {
                        *o += c * Rational::from_integer(r.into());
                    }
                }
            }
            out
        };
        let a = map(&self.a);
        let b = if self.b.is_empty() { Vec::new() } else { map(&self.b) };
        CycScalar { conductor: m, l: self.l, a, b }
    }

    /// JSON form `{"conductor", "coeffs", "sqrt_l_coeffs", "l"}`.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("conductor".into(), json!(self.conductor));
        obj.insert("coeffs".into(), Value::Array(self.a.iter().map(rational_to_json).collect()));
        obj.insert(
            "sqrt_l_coeffs".into(),
            Value::Array(self.b.iter().map(rational_to_json).collect()),
        );
        if self.l != 0 {
            obj.insert("l".into(), json!(self.l));
        }
        Value::Object(obj)
    }

    /// Accepts the object form of [`CycScalar::to_json`], a rational pair
    /// `[num, den]`, an integer, or a rational string literal.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = match v {
            Value::Object(o) => o,
            _ => return rational_from_json(v).map(Self::from_rational),
        };
        let m = match obj.get("conductor") {
            Some(c) => bigint_from_json(c)?
                .to_u64()
                .filter(|&m| m >= 1)
                .map_or_else(|| invalid("field `conductor` must be a positive integer"), Ok)?,
            None => return invalid("scalar is missing field `conductor`"),
        };
        if m > 10_000 {
            return invalid(format!("field `conductor` too large: {m}"));
        }
        let phi = euler_phi(m) as usize;
        let read = |key: &str, required: bool| -> Result<Vec<Rational>> {
            match obj.get(key) {
                Some(Value::Array(items)) => {
                    let v = items.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
                    if !v.is_empty() && v.len() != phi {
                        return invalid(format!(
                            "field `{key}` must have φ({m}) = {phi} entries, found {}",
                            v.len()
                        ));
                    }
                    Ok(v)
                }
                Some(_) => invalid(format!("field `{key}` must be an array")),
                None if required => invalid(format!("scalar is missing field `{key}`")),
                None => Ok(Vec::new()),
            }
        };
        let mut a = read("coeffs", true)?;
        if a.is_empty() {
            a = vec![Rational::zero(); phi];
        }
        let b = read("sqrt_l_coeffs", false)?;
        let l = match obj.get("l") {
            Some(x) => bigint_from_json(x)?.to_u64().unwrap_or(0),
            None => 0,
        };
        if b.iter().any(|c| !c.is_zero()) {
            if !super::rational::is_prime(l) {
                return invalid("field `l` must be a prime when `sqrt_l_coeffs` is nonzero");
            }
            return Ok(CycScalar { conductor: m, l, a, b }.normalize());
        }
        Ok(CycScalar { conductor: m, l: 0, a, b: Vec::new() })
    }
}

/// Reduces an integer polynomial in `ζ_m` (constant term first) to
/// power-basis coordinates of length `φ(m)`.
pub fn reduce_integer_poly(m: u64, conv: &[BigInt]) -> Vec<BigInt> {
    let t = tables(m);
    let mut out: Vec<BigInt> = vec![BigInt::zero(); t.phi];
    for (k, c) in conv.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k < t.phi {
            out[k] += c;
            continue;
        }
        let row = if k < t.rows.len() { &t.rows[k] } else { &t.rows[k % m as usize] };
        for (o, &r) in out.iter_mut().zip(row) {
            if r != 0 {
                *o += c * r;
            }
        }
    }
    out
}

fn mul_vec(m: u64, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let t = tables(m);
    let phi = t.phi;
    let mut conv = vec![Rational::zero(); 2 * phi - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                conv[i + j] += a * b;
            }
        }
    }
    let mut out: Vec<Rational> = conv[..phi].to_vec();
    for (k, c) in conv.iter().enumerate().skip(phi) {
        if c.is_zero() {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(&t.rows[k]) {
            if r != 0 {
                *o += c * Rational::from_integer(r.into());
            }
        }
    }
    out
}

/// Inverse in `Q(ζ_m)` by solving the multiplication-matrix system.
fn inv_vec(m: u64, x: &[Rational]) -> Vec<Rational> {
    let phi = x.len();
    // column j = x·ζ^j
    let mut cols = Vec::with_capacity(phi);
    for j in 0..phi {
        let mut e = vec![Rational::zero(); phi];
        e[j] = Rational::one();
        cols.push(mul_vec(m, x, &e));
    }
    let mut aug: Vec<Vec<Rational>> = (0..phi)
        .map(|i| {
            let mut row: Vec<Rational> = (0..phi).map(|j| cols[j][i].clone()).collect();
            row.push(if i == 0 { Rational::one() } else { Rational::zero() });
            row
        })
        .collect();
    for c in 0..phi {
        let p = (c..phi).find(|&r| !aug[r][c].is_zero()).expect("nonzero field element is invertible");
        aug.swap(c, p);
        let piv = aug[c][c].clone();
        for v in aug[c].iter_mut() {
            *v /= &piv;
        }
        let prow = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
    }
    aug.into_iter().map(|row| row[phi].clone()).collect()
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor && self.l == other.l {
            return self.a == other.a && self.b == other.b;
        }
        let (x, y) = CycScalar::common(self, other);
        x.a == y.a && x.b == y.b
    }
}

impl Eq for CycScalar {}

impl Zero for CycScalar {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_elem()
    }
}

impl One for CycScalar {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
}

impl From<Rational> for CycScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        let (mut x, y) = CycScalar::common(self, rhs);
        for (p, q) in x.a.iter_mut().zip(&y.a) {
            *p += q;
        }
        for (p, q) in x.b.iter_mut().zip(&y.b) {
            *p += q;
        }
        x.normalize()
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        let (mut x, y) = CycScalar::common(self, rhs);
        for (p, q) in x.a.iter_mut().zip(&y.a) {
            *p -= q;
        }
        for (p, q) in x.b.iter_mut().zip(&y.b) {
            *p -= q;
        }
        x.normalize()
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        if self.conductor == 1 && self.l == 0 {
            return rhs.scale(&self.a[0]);
        }
        if rhs.conductor == 1 && rhs.l == 0 {
            return self.scale(&rhs.a[0]);
        }
        let (x, y) = CycScalar::common(self, rhs);
        let m = x.conductor;
        if x.l == 0 {
            let a = mul_vec(m, &x.a, &y.a);
            return CycScalar { conductor: m, l: 0, a, b: Vec::new() };
        }
        // (a + b√l)(c + d√l) = (ac + l·bd) + (ad + bc)√l
        let lq = Rational::from_integer(x.l.into());
        let ac = mul_vec(m, &x.a, &y.a);
        let bd = mul_vec(m, &x.b, &y.b);
        let ad = mul_vec(m, &x.a, &y.b);
        let bc = mul_vec(m, &x.b, &y.a);
        let a = ac.into_iter().zip(bd).map(|(p, q)| p + q * &lq).collect();
        let b = ad.into_iter().zip(bc).map(|(p, q)| p + q).collect();
        CycScalar { conductor: m, l: x.l, a, b }.normalize()
    }
}

impl<'a> Div<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn div(self, rhs: &CycScalar) -> CycScalar {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        let mut out = self.clone();
        for c in out.a.iter_mut().chain(out.b.iter_mut()) {
            *c = -c.clone();
        }
        out
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = &*self + rhs;
    }
}
impl AddAssign for CycScalar {
    fn add_assign(&mut self, rhs: CycScalar) {
        *self = &*self + &rhs;
    }
}
impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let mut terms = Vec::new();
        let mut push = |c: &Rational, basis: String| {
            if c.is_zero() {
                return;
            }
            let coef = if c.is_one() && !basis.is_empty() {
                String::new()
            } else if (-c).is_one() && !basis.is_empty() {
                "-".to_string()
            } else if basis.is_empty() {
                fmt_rational(c)
            } else if c.is_negative() || !c.is_integer() {
                format!("({})*", fmt_rational(c))
            } else {
                format!("{}*", fmt_rational(c))
            };
            terms.push(format!("{coef}{basis}"));
        };
        let zeta = |i: usize| match i {
            0 => String::new(),
            1 => format!("z{}", self.conductor),
            _ => format!("z{}^{}", self.conductor, i),
        };
        for (i, c) in self.a.iter().enumerate() {
            push(c, zeta(i));
        }
        for (i, c) in self.b.iter().enumerate() {
            let z = zeta(i);
            let basis = if z.is_empty() { format!("sqrt{}", self.l) } else { format!("{z}*sqrt{}", self.l) };
            push(c, basis);
        }
        write!(f, "{}", terms.join(" + "))
    }
}
