//! Smooth characters of `Z_l^*` and quasicharacters of `Q_l^*`.
//!
//! A finite-order character of `Z_l^*` is stored by its values on fixed
//! topological generators: for odd `l` the smallest primitive root `g` modulo
//! `l²` (a generator modulo every `l^m`); for `l = 2` the pair `(−1, 5)`.
//! The value on a generator is `e^{2πi t}` with `t ∈ Q/Z`.

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::scalars::rational::{
    is_prime, rational_from_json, rational_to_json, reduce_mod_u64, valuation,
};
use crate::scalars::{CycScalar, Rational};

/// Smallest primitive root modulo `l²` (odd `l`).
pub fn primitive_root(l: u64) -> u64 {
    let m = l * l;
    let order = l * (l - 1);
    let factors = crate::scalars::rational::prime_factors(order);
    (2..m)
        .find(|&g| g % l != 0 && factors.iter().all(|q| pow_mod(g, order / q, m) != 1))
        .expect("primitive root exists")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn frac(t: &Rational) -> Rational {
    t - t.floor()
}

/// A finite-order character of `Z_l^*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitCharacter {
    l: u64,
    /// Exponents `t_i ∈ [0, 1)` on the generators.
    t: Vec<Rational>,
}

impl UnitCharacter {
    pub fn trivial(l: u64) -> Self {
        let k = if l == 2 { 2 } else { 1 };
        UnitCharacter { l, t: vec![Rational::zero(); k] }
    }

    pub fn new(l: u64, t: Vec<Rational>) -> Result<Self> {
        if !is_prime(l) {
            return invalid(format!("l = {l} is not prime"));
        }
        let want = if l == 2 { 2 } else { 1 };
        if t.len() != want {
            return invalid(format!("a character of Z_{l}^* needs {want} generator exponent(s)"));
        }
        let t: Vec<Rational> = t.iter().map(frac).collect();
        if l == 2 && !(&t[0] * Rational::from_integer(2.into())).is_integer() {
            return invalid("the value at −1 must be ±1");
        }
        if l == 2 && !t[1].denom().to_u64().is_some_and(|d| d.is_power_of_two()) {
            return invalid("the value at 5 must be a 2-power root of unity");
        }
        let out = UnitCharacter { l, t };
        if l != 2 {
            // must have finite order dividing φ(l^m) for some m
            let d = out.t[0].denom().to_u64().unwrap_or(0);
            let mut q = d;
            while q > 1 && q % l == 0 {
                q /= l;
            }
            if d == 0 || (l - 1) % q != 0 {
                return invalid(format!("order {d} is not the order of a character of Z_{l}^*"));
            }
        }
        Ok(out)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.t
    }

    pub fn is_trivial(&self) -> bool {
        self.t.iter().all(|x| x.is_zero())
    }

    /// The conductor exponent: smallest `c` such that the character is trivial
    /// on `1 + l^c Z_l`.
    pub fn conductor(&self) -> u32 {
        if self.is_trivial() {
            return 0;
        }
        if self.l == 2 {
            if self.t[1].is_zero() {
                return 2;
            }
            let d = self.t[1].denom().to_u64().unwrap();
            return 2 + d.trailing_zeros();
        }
        let d = self.t[0].denom().to_u64().unwrap();
        let mut c = 1;
        let mut phi = self.l - 1;
        while phi % d != 0 {
            phi *= self.l;
            c += 1;
        }
        c
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.l, o.l);
        UnitCharacter { l: self.l, t: self.t.iter().zip(&o.t).map(|(a, b)| frac(&(a + b))).collect() }
    }

    pub fn inv(&self) -> Self {
        UnitCharacter { l: self.l, t: self.t.iter().map(|a| frac(&-a)).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let r = Rational::from_integer(e.into());
        UnitCharacter { l: self.l, t: self.t.iter().map(|a| frac(&(a * &r))).collect() }
    }

    /// Value at a unit given as a residue modulo `l^n` with `n ≥ conductor`.
    pub fn eval_residue(&self, u: u64, n: u32) -> Result<CycScalar> {
        let c = self.conductor();
        if c == 0 {
            return Ok(CycScalar::one());
        }
        if n < c {
            return Err(Error::LevelTooSmall(format!(
                "a character of conductor l^{c} cannot be evaluated modulo l^{n}"
            )));
        }
        let l = self.l;
        let m = l.pow(c);
        let u = u % m;
        if u % l == 0 {
            return Err(Error::Domain(format!("{u} is not a unit modulo {l}")));
        }
        let mut angle = Rational::zero();
        if l == 2 {
            let (s, v) = if u % 4 == 3 { (1u64, (m - u) % m) } else { (0, u) };
            let mut j = 0u64;
            let mut x = 1 % m;
            while x != v % m {
                x = x * 5 % m;
                j += 1;
                assert!(j <= m, "discrete log modulo {m} failed");
            }
            angle += &self.t[0] * Rational::from_integer(s.into());
            angle += &self.t[1] * Rational::from_integer(j.into());
        } else {
            let g = primitive_root(l);
            let mut j = 0u64;
            let mut x = 1 % m;
            while x != u {
                x = x * g % m;
                j += 1;
                assert!(j <= m, "discrete log modulo {m} failed");
            }
            angle += &self.t[0] * Rational::from_integer(j.into());
        }
        Ok(CycScalar::exp_2pi_i(&frac(&angle)))
    }

    /// Value at an `l`-adic unit given as a rational.
    pub fn eval(&self, u: &Rational) -> Result<CycScalar> {
        let c = self.conductor();
        if c == 0 {
            return Ok(CycScalar::one());
        }
        let r = reduce_mod_u64(u, self.l.pow(c))
            .ok_or_else(|| Error::Domain(format!("{u} is not an {}-adic unit", self.l)))?;
        self.eval_residue(r, c)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.t.iter().map(rational_to_json).collect())
    }

    pub fn from_json(l: u64, v: &Value) -> Result<Self> {
        match v {
            Value::Null => Ok(Self::trivial(l)),
            Value::String(s) if s == "trivial" => Ok(Self::trivial(l)),
            Value::Array(xs) => {
                Self::new(l, xs.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?)
            }
            _ => invalid(format!("unit character must be \"trivial\" or an array, found {v}")),
        }
    }
}

/// A quasicharacter `χ` of `Q_l^*`: a unit part and the value `χ(l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasicharacter {
    pub unit: UnitCharacter,
    pub frob: CycScalar,
}

impl Quasicharacter {
    pub fn new(unit: UnitCharacter, frob: CycScalar) -> Result<Self> {
        if frob.is_zero_elem() {
            return invalid("quasicharacter value at l must be nonzero");
        }
        Ok(Quasicharacter { unit, frob })
    }

    pub fn unramified(l: u64, frob: CycScalar) -> Result<Self> {
        Self::new(UnitCharacter::trivial(l), frob)
    }

    pub fn trivial(l: u64) -> Self {
        Quasicharacter { unit: UnitCharacter::trivial(l), frob: CycScalar::one() }
    }

    /// `|.|^{e/2}`: trivial on units, `l ↦ l^{−e/2}`.
    pub fn abs_half_power(l: u64, e: i64) -> Self {
        Quasicharacter { unit: UnitCharacter::trivial(l), frob: CycScalar::sqrt_l_pow(l, -e) }
    }

    /// The norm character `|.|`.
    pub fn abs(l: u64) -> Self {
        Self::abs_half_power(l, 2)
    }

    pub fn l(&self) -> u64 {
        self.unit.l
    }

    pub fn conductor(&self) -> u32 {
        self.unit.conductor()
    }

    pub fn is_unramified(&self) -> bool {
        self.unit.is_trivial()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Quasicharacter { unit: self.unit.mul(&o.unit), frob: &self.frob * &o.frob }
    }

    pub fn inv(&self) -> Self {
        Quasicharacter { unit: self.unit.inv(), frob: self.frob.inv().expect("nonzero") }
    }

    pub fn pow(&self, e: i64) -> Self {
        Quasicharacter { unit: self.unit.pow(e), frob: self.frob.pow(e) }
    }

    /// `χ·|.|^{e/2}`.
    pub fn shift_half(&self, e: i64) -> Self {
        self.mul(&Self::abs_half_power(self.l(), e))
    }

    /// `χ(x)` for nonzero rational `x`.
    pub fn eval(&self, x: &Rational) -> Result<CycScalar> {
        let v = valuation(x, self.l());
        let u = x / crate::scalars::rational::l_pow(self.l(), v);
        Ok(self.frob.pow(v) * self.unit.eval(&u)?)
    }

    pub fn to_json(&self) -> Value {
        json!({"unit": self.unit.to_json(), "frob": self.frob.to_json()})
    }

    pub fn from_json(l: u64, v: &Value) -> Result<Self> {
        let obj = v.as_object().map_or_else(|| invalid("quasicharacter must be an object"), Ok)?;
        let unit = UnitCharacter::from_json(l, obj.get("unit").unwrap_or(&Value::Null))?;
        let frob = match obj.get("frob") {
            Some(f) => CycScalar::from_json(f)?,
            None => return invalid("quasicharacter is missing field `frob`"),
        };
        Self::new(unit, frob)
    }
}

/// `l`-adic unit part of a nonzero rational and its reduction mod `l^n`.
pub fn unit_residue(x: &Rational, l: u64, n: u32) -> u64 {
    let v = valuation(x, l);
    let u = x / crate::scalars::rational::l_pow(l, v);
    reduce_mod_u64(&u, l.pow(n)).expect("unit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn conductors_and_values() {
        let chi = UnitCharacter::new(5, vec![rat(1, 4)]).unwrap();
        assert_eq!(chi.conductor(), 1);
        assert_eq!(chi.eval_residue(2, 1).unwrap(), CycScalar::root_of_unity(1, 4));
        assert_eq!(chi.eval_residue(4, 1).unwrap(), CycScalar::from_int(-1));
        assert!(matches!(chi.eval_residue(2, 0), Err(Error::LevelTooSmall(_))));
        let psi = UnitCharacter::new(3, vec![rat(1, 6)]).unwrap();
        assert_eq!(psi.conductor(), 2);
        let eps = UnitCharacter::new(2, vec![rat(1, 2), rat(0, 1)]).unwrap();
        assert_eq!(eps.conductor(), 2);
        assert_eq!(eps.eval_residue(3, 2).unwrap(), CycScalar::from_int(-1));
        let w = UnitCharacter::new(2, vec![rat(0, 1), rat(1, 2)]).unwrap();
        assert_eq!(w.conductor(), 3);
        assert_eq!(w.eval_residue(5, 3).unwrap(), CycScalar::from_int(-1));
        assert!(UnitCharacter::new(3, vec![rat(1, 4)]).is_err());
    }

    #[test]
    fn characters_are_multiplicative() {
        let chi = UnitCharacter::new(7, vec![rat(1, 6)]).unwrap();
        for a in 1..7u64 {
            for b in 1..7u64 {
                let lhs = chi.eval_residue(a * b % 7, 1).unwrap();
                let rhs = chi.eval_residue(a, 1).unwrap() * chi.eval_residue(b, 1).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn norm_character() {
        let a = Quasicharacter::abs(3);
        assert_eq!(a.eval(&rat(9, 2)).unwrap(), CycScalar::from_rational(rat(1, 9)));
        let h = Quasicharacter::abs_half_power(3, 1);
        assert_eq!(h.mul(&h), a);
    }
}
