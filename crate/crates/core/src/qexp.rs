//! Truncated `q`-expansions with cyclotomic coefficients, the action of
//! `GL_2(Q_l)` on them, `p`-deprived Eisenstein series and the integer-weight
//! twist factors `e_g = g(E_k)/E_k`.
//!
//! Exponents live in `(1/N)Z_{≥0}`. A substitution `τ ↦ sτ + t` sends `q^x`
//! to `e^{2πi·x·t}·q^{x·s}`, so roots of unity attached to fractional
//! exponents are always well defined.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::gl2::decompose::StandardUpper;
use crate::gl2::{reduce_to_standard_upper, MatQ};
use crate::scalars::bernoulli::zeta_one_minus;
use crate::scalars::cyclotomic::reduce_integer_poly;
use crate::scalars::rational::{bigint_from_json, gcd_u64, is_prime, l_pow, lcm_u64, rational_from_json};
use crate::scalars::{CycScalar, Rational};

/// Default truncation, in units of `q`.
pub const DEFAULT_PREC: i64 = 20;

/// `Σ_x c_x q^x` with `x ∈ (1/N)Z`, `0 ≤ x < prec`.
///
/// Equality compares precision and coefficients; `N` is only a lattice bound.
#[derive(Clone, Debug)]
pub struct QExpansion {
    den: u64,
    prec: Rational,
    coeffs: BTreeMap<Rational, CycScalar>,
}

impl PartialEq for QExpansion {
    fn eq(&self, o: &Self) -> bool {
        self.prec == o.prec && self.coeffs == o.coeffs
    }
}

fn denom_u64(x: &Rational) -> u64 {
    x.denom().to_u64().expect("exponent denominator fits u64")
}

impl QExpansion {
    /// Builds an expansion, dropping zero coefficients and terms at or beyond
    /// `prec`. `N` is enlarged to cover every exponent denominator.
    pub fn new(den: u64, prec: Rational, coeffs: BTreeMap<Rational, CycScalar>) -> Result<Self> {
        if den == 0 {
            return invalid("exponent denominator N must be positive");
        }
        if prec.is_negative() {
            return invalid("truncation order must be non-negative");
        }
        let mut n = den;
        let mut kept = BTreeMap::new();
        for (x, c) in coeffs {
            if x.is_negative() {
                return invalid(format!("negative exponent {x} (not holomorphic at the cusp)"));
            }
            if x >= prec || c.is_zero_elem() {
                continue;
            }
            n = lcm_u64(n, denom_u64(&x));
            kept.insert(x, c);
        }
        Ok(QExpansion { den: n, prec, coeffs: kept })
    }

    /// An expansion in integral powers of `q`; `cs[i]` is the coefficient of `q^i`.
    pub fn from_integral(cs: Vec<CycScalar>, prec: i64) -> Self {
        let coeffs = cs
            .into_iter()
            .enumerate()
            .filter(|(i, c)| (*i as i64) < prec && !c.is_zero_elem())
            .map(|(i, c)| (Rational::from_integer((i as i64).into()), c))
            .collect();
        QExpansion { den: 1, prec: Rational::from_integer(prec.into()), coeffs }
    }

    pub fn from_rationals(cs: &[Rational], prec: i64) -> Self {
        Self::from_integral(cs.iter().cloned().map(CycScalar::from_rational).collect(), prec)
    }

    pub fn constant(c: CycScalar, prec: i64) -> Self {
        Self::from_integral(vec![c], prec)
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn prec(&self) -> &Rational {
        &self.prec
    }

    pub fn coeffs(&self) -> &BTreeMap<Rational, CycScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &Rational) -> CycScalar {
        self.coeffs.get(x).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn coeff_int(&self, i: i64) -> CycScalar {
        self.coeff(&Rational::from_integer(i.into()))
    }

    pub fn constant_term(&self) -> CycScalar {
        self.coeff(&Rational::zero())
    }

    /// Drops terms with exponent `≥ prec` (only ever lowers the precision).
    pub fn truncate(&self, prec: &Rational) -> Self {
        let prec = prec.min(&self.prec).clone();
        let coeffs = self.coeffs.range(..prec.clone()).map(|(x, c)| (x.clone(), c.clone())).collect();
        QExpansion { den: self.den, prec, coeffs }
    }

    /// Equality of all coefficients below `prec` (which both sides must know).
    pub fn agrees_to(&self, o: &Self, prec: &Rational) -> bool {
        if &self.prec < prec || &o.prec < prec {
            return false;
        }
        self.truncate(prec).coeffs == o.truncate(prec).coeffs
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(x, c)| (x.clone(), c * s))
            .filter(|(_, c)| !c.is_zero_elem())
            .collect();
        QExpansion { den: self.den, prec: self.prec.clone(), coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.clone().min(o.prec.clone());
        let mut coeffs = self.truncate(&prec).coeffs;
        for (x, c) in o.coeffs.range(..prec.clone()) {
            let s = match coeffs.remove(x) {
                Some(old) => old + c.clone(),
                None => c.clone(),
            };
            if !s.is_zero_elem() {
                coeffs.insert(x.clone(), s);
            }
        }
        QExpansion { den: lcm_u64(self.den, o.den), prec, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&CycScalar::from_int(-1)))
    }

    /// The product; its precision is `min(prec_f + v(g), prec_g + v(f))`
    /// where `v` is the order of vanishing.
    pub fn mul(&self, o: &Self) -> Self {
        let vf = self.valuation().unwrap_or_else(|| self.prec.clone());
        let vg = o.valuation().unwrap_or_else(|| o.prec.clone());
        let prec = (&self.prec + &vg).min(&o.prec + &vf);
        if let (Some(a), Some(b)) = (IntSeries::from_qexp(self), IntSeries::from_qexp(o)) {
            let n = lcm_u64(self.den, o.den);
            let len = ceil_index(&prec, n);
            return a.mul(&b, n, len).to_qexp(prec);
        }
        let mut coeffs: BTreeMap<Rational, CycScalar> = BTreeMap::new();
        for (x, a) in &self.coeffs {
            for (y, b) in o.coeffs.range(..&prec - x) {
                let e = coeffs.entry(x + y).or_insert_with(CycScalar::zero);
                *e += &(a * b);
            }
        }
        coeffs.retain(|_, c| !c.is_zero_elem());
        QExpansion { den: lcm_u64(self.den, o.den), prec, coeffs }
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.coeffs.keys().next().cloned()
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or_else(|| {
            Error::Domain("series division needs a unit constant term".into())
        })?;
        let n = self.den;
        let len = ceil_index(&self.prec, n);
        if let (Some(c0), Some(g)) = (c0.as_rational(), IntSeries::from_qexp(self)) {
            return Ok(g.inv(&c0, len).to_qexp(self.prec.clone()));
        }
        // Dense coefficients on the lattice (1/N)Z.
        let mut g = vec![CycScalar::zero(); len];
        for (x, c) in &self.coeffs {
            g[lattice_index(x, n)] = c.clone();
        }
        let support: Vec<usize> = (1..len).filter(|&i| !g[i].is_zero_elem()).collect();
        let mut r: Vec<CycScalar> = Vec::with_capacity(len);
        r.push(c0_inv.clone());
        for i in 1..len {
            let mut s = CycScalar::zero();
            for &j in support.iter().take_while(|&&j| j <= i) {
                if !r[i - j].is_zero_elem() {
                    s += &(&g[j] * &r[i - j]);
                }
            }
            r.push(-(&s * &c0_inv));
        }
        let coeffs = r
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_elem())
            .map(|(i, c)| (Rational::new((i as i64).into(), n.into()), c))
            .collect();
        Ok(QExpansion { den: n, prec: self.prec.clone(), coeffs })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `f(τ) ↦ f(sτ + t)`: `q^x ↦ e^{2πi·x·t}·q^{x·s}`, for `s > 0`.
    pub fn substitute(&self, s: &Rational, t: &Rational) -> Result<Self> {
        if !s.is_positive() {
            return invalid(format!(
                "substitution τ ↦ ({s})τ + ({t}) leaves the upper half plane; exponents would turn negative"
            ));
        }
        let mut coeffs = BTreeMap::new();
        for (x, c) in &self.coeffs {
            let phase = (x * t).fract();
            let c = if phase.is_zero() { c.clone() } else { c * &CycScalar::exp_2pi_i(&phase) };
            coeffs.insert(x * s, c);
        }
        let den = self.den * denom_u64(s);
        QExpansion::new(den, &self.prec * s, coeffs)
    }

    /// `q^x ↦ q^{px}` together with `ζ ↦ ζ^p` on the coefficients: the
    /// effect of quotienting the Tate curve by `μ_p` on an expansion whose
    /// roots of unity come from the level structure.
    pub fn frobenius(&self, p: u64) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (x, c) in &self.coeffs {
            if gcd_u64(c.conductor(), p) != 1 {
                return Err(Error::Domain(format!(
                    "coefficient conductor {} is not prime to p = {p}",
                    c.conductor()
                )));
            }
            let px = x * Rational::from_integer(p.into());
            coeffs.insert(px, c.conj(p as i64));
        }
        QExpansion::new(self.den, &self.prec * Rational::from_integer(p.into()), coeffs)
    }

    /// `{"N", "prec", "coeffs": [[num, den, scalar], ...]}` sorted by exponent.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(x, c)| json!([x.numer().to_string(), x.denom().to_string(), c.to_json()]))
            .collect();
        json!({
            "N": self.den,
            "prec": [self.prec.numer().to_string(), self.prec.denom().to_string()],
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| match v.get(k) {
            Some(x) => Ok(x),
            None => invalid(format!("q-expansion is missing field `{k}`")),
        };
        let den = bigint_from_json(field("N")?)?.to_u64();
        let den = den.map_or_else(|| invalid("field `N` must be a positive integer"), Ok)?;
        let prec = rational_from_json(field("prec")?)?;
        let list = field("coeffs")?.as_array();
        let list = list.map_or_else(|| invalid("field `coeffs` must be an array"), Ok)?;
        let mut coeffs = BTreeMap::new();
        for t in list {
            let t = match t.as_array() {
                Some(t) if t.len() == 3 => t,
                _ => return invalid("each coefficient must be [exponent_num, exponent_den, scalar]"),
            };
            let num = bigint_from_json(&t[0])?;
            let d = bigint_from_json(&t[1])?;
            if !d.is_positive() {
                return invalid("exponent denominator must be positive");
            }
            let x = Rational::new(num, d);
            if x.is_negative() {
                return invalid(format!("negative exponent {x} in field `coeffs`"));
            }
            let c = CycScalar::from_json(&t[2])?;
            if coeffs.insert(x.clone(), c).is_some() {
                return invalid(format!("exponent {x} listed twice"));
            }
        }
        let out = QExpansion::new(den, prec, coeffs)?;
        if out.den != den {
            return invalid(format!("an exponent denominator does not divide N = {den}"));
        }
        Ok(out)
    }
}

/// A series `D^{-1}·Σ_i v_i q^{i/N}` whose coefficients `v_i` are integer
/// power-basis coordinates over `Q(ζ_M)`. Arithmetic on it avoids the gcd
/// work of rational coefficients, which dominates for Eisenstein quotients.
struct IntSeries {
    n: u64,
    m: u64,
    den: BigInt,
    terms: Vec<(usize, Vec<BigInt>)>,
}

impl IntSeries {
    /// `None` when some coefficient carries a formal `√l`.
    fn from_qexp(f: &QExpansion) -> Option<Self> {
        if f.coeffs.values().any(|c| c.has_sqrt_part()) {
            return None;
        }
        let m = f.coeffs.values().fold(1, |m, c| lcm_u64(m, c.conductor()));
        let lifted: Vec<(usize, CycScalar)> =
            f.coeffs.iter().map(|(x, c)| (lattice_index(x, f.den), c.lift(m))).collect();
        let mut den = BigInt::one();
        for (_, c) in &lifted {
            for r in c.coeffs() {
                den = den.lcm(r.denom());
            }
        }
        let terms = lifted
            .into_iter()
            .map(|(i, c)| {
                let v = c.coeffs().iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect();
                (i, v)
            })
            .collect();
        Some(IntSeries { n: f.den, m, den, terms })
    }

    /// Product on the lattice `(1/n)Z`, keeping indices below `len`.
    fn mul(&self, o: &Self, n: u64, len: usize) -> Self {
        let m = lcm_u64(self.m, o.m);
        let a = self.relattice(n, m);
        let b = o.relattice(n, m);
        let mut acc: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
        for (i, x) in &a {
            for (j, y) in b.iter().take_while(|(j, _)| i + j < len) {
                let slot = acc.entry(i + j).or_insert_with(|| vec![BigInt::zero(); 2 * x.len() - 1]);
                poly_mul_add(slot, x, y);
            }
        }
        let terms = acc.into_iter().map(|(k, v)| (k, reduce_integer_poly(m, &v))).collect();
        IntSeries { n, m, den: &self.den * &o.den, terms }
    }

    /// `1/g` for a series with rational constant term `c0`: with
    /// `g = G/D` and `d = D·c0`, the quotient `R_i/d^i` of
    /// `R_i = −Σ_{j≥1} G_j·R_{i−j}·d^{j−1}` is the `i`-th coefficient of `c0/g`.
    fn inv(&self, c0: &Rational, len: usize) -> QExpansionParts {
        let m = self.m;
        let phi = reduce_integer_poly(m, &[BigInt::one()]).len();
        let d = (c0 * Rational::from_integer(self.den.clone())).to_integer();
        let g: Vec<(usize, &Vec<BigInt>)> = self.terms.iter().filter(|(i, _)| *i > 0).map(|(i, v)| (*i, v)).collect();
        let mut d_pows = vec![BigInt::one()];
        let mut r: Vec<Vec<BigInt>> = Vec::with_capacity(len);
        let mut unit = vec![BigInt::zero(); phi];
        unit[0] = BigInt::one();
        r.push(unit);
        for i in 1..len {
            let mut slot = vec![BigInt::zero(); 2 * phi - 1];
            for &(j, gj) in g.iter().take_while(|(j, _)| *j <= i) {
                if r[i - j].iter().all(|x| x.is_zero()) {
                    continue;
                }
                while d_pows.len() < j {
                    let next = d_pows.last().unwrap() * &d;
                    d_pows.push(next);
                }
                let scaled: Vec<BigInt> = gj.iter().map(|x| x * &d_pows[j - 1]).collect();
                poly_mul_add(&mut slot, &scaled, &r[i - j]);
            }
            r.push(reduce_integer_poly(m, &slot).into_iter().map(|x| -x).collect());
        }
        // coefficient i is R_i / (d^i · c0)
        let c0_inv = c0.recip();
        let mut d_pow = BigInt::one();
        let mut coeffs = Vec::with_capacity(len);
        for (i, v) in r.into_iter().enumerate() {
            if i > 0 {
                d_pow *= &d;
            }
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let scale = &c0_inv / Rational::from_integer(d_pow.clone());
            let a = v.into_iter().map(|x| Rational::from_integer(x) * &scale).collect();
            coeffs.push((i, CycScalar::from_power_basis(m, a)));
        }
        QExpansionParts { n: self.n, coeffs }
    }

    /// Terms re-indexed on `(1/n)Z` and lifted to `Q(ζ_m)`.
    fn relattice(&self, n: u64, m: u64) -> Vec<(usize, Vec<BigInt>)> {
        let step = (n / self.n) as usize;
        let lift = |v: &Vec<BigInt>| -> Vec<BigInt> {
            if m == self.m {
                return v.clone();
            }
            let stride = (m / self.m) as usize;
            let mut big = vec![BigInt::zero(); stride * (v.len() - 1) + 1];
            for (k, x) in v.iter().enumerate() {
                big[k * stride] = x.clone();
            }
            reduce_integer_poly(m, &big)
        };
        self.terms.iter().map(|(i, v)| (i * step, lift(v))).collect()
    }

    fn to_qexp(&self, prec: Rational) -> QExpansion {
        let den = Rational::from_integer(self.den.clone()).recip();
        let coeffs = self
            .terms
            .iter()
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .map(|(i, v)| {
                let a = v.iter().map(|x| Rational::from_integer(x.clone()) * &den).collect();
                (i, CycScalar::from_power_basis(self.m, a))
            })
            .map(|(i, c)| (Rational::new((*i as i64).into(), self.n.into()), c))
            .collect();
        QExpansion { den: self.n, prec, coeffs }
    }
}

/// Coefficients on the lattice `(1/n)Z` produced by [`IntSeries::inv`].
struct QExpansionParts {
    n: u64,
    coeffs: Vec<(usize, CycScalar)>,
}

impl QExpansionParts {
    fn to_qexp(self, prec: Rational) -> QExpansion {
        let coeffs = self
            .coeffs
            .into_iter()
            .map(|(i, c)| (Rational::new((i as i64).into(), self.n.into()), c))
            .collect();
        QExpansion { den: self.n, prec, coeffs }
    }
}

/// `slot += x·y` as polynomials in `ζ`, without reduction.
fn poly_mul_add(slot: &mut [BigInt], x: &[BigInt], y: &[BigInt]) {
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                slot[i + j] += a * b;
            }
        }
    }
}

fn lattice_index(x: &Rational, n: u64) -> usize {
    (x * Rational::from_integer(n.into())).to_integer().to_usize().expect("index fits usize")
}

/// Number of lattice points `i/N` with `i/N < prec`.
fn ceil_index(prec: &Rational, n: u64) -> usize {
    (prec * Rational::from_integer(n.into())).ceil().to_integer().to_usize().expect("length fits usize")
}

/// The cusp `c_A` attached to `h^A = diag(A, 1)` at `l`, with `A ∈ (Z/l^d)^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspLabel {
    pub l: u64,
    pub a: u64,
    pub d: u32,
}

impl CuspLabel {
    pub fn new(l: u64, a: u64, d: u32) -> Result<Self> {
        if !is_prime(l) {
            return invalid(format!("l = {l} is not prime"));
        }
        let modulus = l.checked_pow(d).filter(|&m| m <= 1 << 32);
        let modulus = modulus.map_or_else(|| invalid("cusp modulus l^d is too large"), Ok)?;
        if a % l == 0 || (d > 0 && a >= modulus) {
            return invalid(format!("cusp label A = {a} must be a unit below {l}^{d}"));
        }
        Ok(CuspLabel { l, a, d })
    }

    /// The cusp `∞`, `A = 1`.
    pub fn infinity(l: u64) -> Self {
        CuspLabel { l, a: 1, d: 0 }
    }

    pub fn h(&self) -> MatQ {
        MatQ::from_ints(self.a as i64, 0, 0, 1)
    }
}

/// The substitution and scalar that `g` induces at a cusp: from
/// `h^A·g = [[l^m, a/l^r], [0, l^n]]·u`.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspAction {
    pub std: StandardUpper,
    /// `s = l^{n−m}` in `τ ↦ sτ + t`.
    pub scale: Rational,
    /// `t = −a/l^{m+r}`.
    pub shift: Rational,
}

impl CuspAction {
    pub fn new(g: &MatQ, cusp: &CuspLabel) -> Self {
        let l = cusp.l;
        let std = reduce_to_standard_upper(&cusp.h().mul(g), l);
        let scale = l_pow(l, std.n - std.m);
        let shift = -Rational::from_integer(std.a.clone()) / l_pow(l, std.m + std.r as i64);
        CuspAction { std, scale, shift }
    }

    /// `l^{−(m+n)+nk}`.
    pub fn weight_factor(&self, l: u64, k: i64) -> Rational {
        l_pow(l, -(self.std.m + self.std.n) + self.std.n * k)
    }

    pub fn apply(&self, f: &QExpansion) -> Result<QExpansion> {
        f.substitute(&self.scale, &self.shift)
    }
}

/// `f|_kγ` for upper triangular `γ = [[A, B], [0, D]]`:
/// `(det γ)^{k−1}·D^{−k}·f((Aτ + B)/D)`.
pub fn slash_upper(f: &QExpansion, gamma: &MatQ, k: i64) -> Result<QExpansion> {
    if !gamma.is_upper_triangular() {
        return invalid(format!("slash_upper needs an upper triangular matrix, got {gamma}"));
    }
    let (a, b, d) = (gamma.entry(0, 0), gamma.entry(0, 1), gamma.entry(1, 1));
    let factor = rat_pow(gamma.det(), k - 1) * rat_pow(d, -k);
    Ok(f.substitute(&(a / d), &(b / d))?.scale(&CycScalar::from_rational(factor)))
}

fn rat_pow(x: &Rational, e: i64) -> Rational {
    x.pow(e as i32)
}

/// The `h^A`-expansion of `g(φ)` given the `1`-expansion `f` of a weight-`k`
/// form `φ` that is invariant under `GL_2(Z_l)`:
/// `χ·l^{−(m+n)+nk}·f(e^{−2πi a/l^{m+r}}·q^{l^{n−m}})`. `chi` is the value
/// `χ(u·h^l)` of the nebentypus.
pub fn adelic_action(f: &QExpansion, g: &MatQ, cusp: &CuspLabel, k: i64, chi: &CycScalar) -> Result<QExpansion> {
    let act = CuspAction::new(g, cusp);
    let c = chi.scale(&act.weight_factor(cusp.l, k));
    Ok(act.apply(f)?.scale(&c))
}

/// The weight-0 action `h^*`: the pure substitution induced by `h` at the cusp.
pub fn weight0_action(f: &QExpansion, h: &MatQ, cusp: &CuspLabel) -> Result<QExpansion> {
    CuspAction::new(h, cusp).apply(f)
}

fn check_eisenstein_weight(k: i64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return invalid(format!("p = {p} is not prime"));
    }
    let ok = k == 0 || (k >= 4 && k % 2 == 0 && k % (p as i64 - 1) == 0);
    if !ok {
        return Err(Error::UnsupportedWeight(format!(
            "need k = 0 or k even, k ≥ 4, k ≡ 0 mod {} (got k = {k})",
            p - 1
        )));
    }
    Ok(())
}

/// `σ_{e}(n)` restricted to divisors prime to `p` (`p = 0` keeps all).
fn divisor_power_sum(n: u64, e: u32, p: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            for x in [d, n / d] {
                if p == 0 || x % p != 0 {
                    s += BigInt::from(x).pow(e);
                }
                if d * d == n {
                    break;
                }
            }
        }
        d += 1;
    }
    s
}

fn eisenstein_series(k: i64, constant: Rational, p: u64, prec: i64) -> QExpansion {
    let mut cs = vec![Rational::one()];
    for n in 1..prec.max(1) {
        let s = divisor_power_sum(n as u64, (k - 1) as u32, p);
        cs.push(&constant * Rational::from_integer(s));
    }
    QExpansion::from_rationals(&cs, prec)
}

/// The `p`-deprived Eisenstein series
/// `1 + 2/(ζ(1−k)(1−p^{k−1}))·Σ σ^{(p)}_{k−1}(n) qⁿ`; `k = 0` gives `1`.
pub fn eisenstein_pdeprived(k: i64, p: u64, prec: i64) -> Result<QExpansion> {
    check_eisenstein_weight(k, p)?;
    if prec < 0 {
        return invalid("precision must be non-negative");
    }
    if k == 0 {
        return Ok(QExpansion::constant(CycScalar::one(), prec));
    }
    let euler = Rational::one() - Rational::from_integer(BigInt::from(p).pow((k - 1) as u32));
    let c = Rational::from_integer(2.into()) / (zeta_one_minus(k)? * euler);
    Ok(eisenstein_series(k, c, p, prec))
}

/// The level-one Eisenstein series `1 − (2k/B_k)·Σ σ_{k−1}(n) qⁿ`.
pub fn eisenstein_level_one(k: i64, prec: i64) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(format!("level one needs k even, k ≥ 4 (got {k})")));
    }
    let c = Rational::from_integer(2.into()) / zeta_one_minus(k)?;
    Ok(eisenstein_series(k, c, 0, prec))
}

/// `Δ = q·∏(1 − qⁿ)^{24}`.
pub fn delta(prec: i64) -> QExpansion {
    let len = prec.max(0) as usize;
    let mut cs = vec![BigInt::zero(); len];
    if len > 1 {
        cs[1] = BigInt::one();
    }
    for n in 1..len {
        for _ in 0..24 {
            // multiply by (1 − qⁿ) in place, high to low
            for i in (n..len).rev() {
                let t = cs[i - n].clone();
                cs[i] -= t;
            }
        }
    }
    let cs: Vec<Rational> = cs.into_iter().map(Rational::from_integer).collect();
    QExpansion::from_rationals(&cs, prec)
}

/// The precision an input must carry so that substituting with scale `s`
/// yields at least `prec`.
fn needed_prec(prec: i64, s: &Rational) -> i64 {
    if s >= &Rational::one() {
        prec
    } else {
        (Rational::from_integer(prec.into()) / s).ceil().to_integer().to_i64().expect("precision fits i64")
    }
}

/// `e_g = l^{−(m+n)+nk}·E_k(α q^{l^{n−m}})/E_k(q)` at the cusp `c_A`, the
/// `q`-expansion of `g(E_k)/E_k`, to `O(q^prec)`.
pub fn twist_ratio(g: &MatQ, cusp: &CuspLabel, k: i64, p: u64, prec: i64) -> Result<QExpansion> {
    if cusp.l == p {
        return invalid("the twist factor needs l ≠ p");
    }
    check_eisenstein_weight(k, p)?;
    let act = CuspAction::new(g, cusp);
    let e = eisenstein_pdeprived(k, p, needed_prec(prec, &act.scale))?;
    let target = Rational::from_integer(prec.into());
    let top = act.apply(&e)?.truncate(&target);
    let c = CycScalar::from_rational(act.weight_factor(cusp.l, k));
    Ok(top.div(&e.truncate(&target))?.scale(&c))
}

/// `e(q) = E_k(q)/E_k(q^p)`, the twist defining `U_p`.
pub fn up_factor(k: i64, p: u64, prec: i64) -> Result<QExpansion> {
    check_eisenstein_weight(k, p)?;
    let e = eisenstein_pdeprived(k, p, prec)?;
    e.div(&e.frobenius(p)?.truncate(&Rational::from_integer(prec.into())))
}

/// Outcome of an identity between two expansions.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: QExpansion,
    pub rhs: QExpansion,
    pub prec: Rational,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: String, lhs: QExpansion, rhs: QExpansion, prec: i64) -> Self {
        let prec = Rational::from_integer(prec.into());
        let holds = lhs.agrees_to(&rhs, &prec);
        IdentityCheck { name, lhs, rhs, prec, holds }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "prec": self.prec.to_string(),
            "pass": self.holds,
            "lhs": self.lhs.truncate(&self.prec).to_json(),
            "rhs": self.rhs.truncate(&self.prec).to_json(),
        })
    }
}

/// `e_h·h^*(e_g) = e_{hg}` at the cusp `c_A`, to `O(q^prec)`. At `c_A` the
/// weight-0 action substitutes into the `c_A`-expansion of `e_g`.
pub fn check_cocycle(g: &MatQ, h: &MatQ, cusp: &CuspLabel, k: i64, p: u64, prec: i64) -> Result<IdentityCheck> {
    let act_h = CuspAction::new(h, cusp);
    let e_h = twist_ratio(h, cusp, k, p, prec)?;
    let e_g = twist_ratio(g, cusp, k, p, needed_prec(prec, &act_h.scale))?;
    let lhs = e_h.mul(&act_h.apply(&e_g)?);
    let rhs = twist_ratio(&h.mul(g), cusp, k, p, prec)?;
    let name = format!("cocycle g={g} h={h} A={} k={k} p={p}", cusp.a);
    Ok(IdentityCheck::new(name, lhs, rhs, prec))
}

/// `e(q)·e_g(q) = e_g(q^p)·g^*(e)(q)` at the cusp `c_A`, to `O(q^prec)`.
pub fn check_up_commutation(g: &MatQ, cusp: &CuspLabel, k: i64, p: u64, prec: i64) -> Result<IdentityCheck> {
    let act = CuspAction::new(g, cusp);
    let e = up_factor(k, p, needed_prec(prec, &act.scale))?;
    let e_g = twist_ratio(g, cusp, k, p, prec)?;
    let lhs = e.truncate(&Rational::from_integer(prec.into())).mul(&e_g);
    let rhs = e_g.frobenius(p)?.mul(&act.apply(&e)?);
    let name = format!("U_p commutation g={g} A={} k={k} p={p}", cusp.a);
    Ok(IdentityCheck::new(name, lhs, rhs, prec))
}

/// The constant term of `e_g` against `l^{−(m+n)+nk}`.
pub fn check_constant_term(g: &MatQ, cusp: &CuspLabel, k: i64, p: u64) -> Result<(CycScalar, CycScalar)> {
    let e_g = twist_ratio(g, cusp, k, p, 1)?;
    let expect = CuspAction::new(g, cusp).weight_factor(cusp.l, k);
    Ok((e_g.constant_term(), CycScalar::from_rational(expect)))
}
