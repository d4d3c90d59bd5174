//! The Hecke algebra `H_U` of `U`-bi-invariant compactly supported functions
//! on `GL_2(Q_l)`, with Haar measure normalized by `vol(U) = 1`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::gl2::cosets::left_keys_of;
use crate::gl2::{double_coset_key, DoubleCosetKey, LevelGroup, MatQ};
use crate::scalars::rational::bigint_from_json;
use crate::scalars::{CycScalar, Rational};

/// A finite combination `Σ c_D·1_D` of double cosets `D = UgU`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeElement {
    pub level: LevelGroup,
    terms: BTreeMap<DoubleCosetKey, CycScalar>,
}

impl HeckeElement {
    pub fn zero(level: LevelGroup) -> Self {
        HeckeElement { level, terms: BTreeMap::new() }
    }

    /// `1_{UgU}`.
    pub fn basis(level: LevelGroup, g: &MatQ) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(double_coset_key(g, &level), CycScalar::one());
        HeckeElement { level, terms }
    }

    /// `1_U`, the unit of the algebra.
    pub fn identity(level: LevelGroup) -> Self {
        Self::basis(level, &MatQ::identity())
    }

    /// `T_l = 1_{U·diag(l,1)·U}`.
    pub fn t_l(level: LevelGroup) -> Self {
        Self::basis(level, &MatQ::diag_l(level.l, 1, 0))
    }

    /// `Z_l = 1_{U·diag(l,l)·U}`.
    pub fn z_l(level: LevelGroup) -> Self {
        Self::basis(level, &MatQ::diag_l(level.l, 1, 1))
    }

    pub fn terms(&self) -> &BTreeMap<DoubleCosetKey, CycScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, k: DoubleCosetKey, c: CycScalar) {
        let sum = match self.terms.remove(&k) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero_elem() {
            self.terms.insert(k, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_level(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert_add(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero(self.level);
        if s.is_zero_elem() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c * s);
        }
        out
    }

    fn check_level(&self, o: &Self) -> Result<()> {
        if self.level != o.level {
            return invalid(format!(
                "Hecke elements live at different levels ({}^{} vs {}^{})",
                self.level.l, self.level.n, o.level.l, o.level.n
            ));
        }
        Ok(())
    }

    /// Left-coset representatives `g_t` of every term, with the term's
    /// coefficient: `h = Σ_t c_t·1_{g_t U}` as a function.
    pub fn left_cosets(&self) -> Vec<(MatQ, CycScalar)> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            for lk in left_keys_of(k, &self.level).iter() {
                out.push((lk.representative(self.level.l), c.clone()));
            }
        }
        out
    }

    /// Convolution `(h1 * h2)(x) = ∫ h1(y)·h2(y^{-1}x) dy`.
    pub fn convolve(&self, o: &Self) -> Result<Self> {
        self.check_level(o)?;
        let level = self.level;
        let mut out = Self::zero(level);
        for (k1, c1) in &self.terms {
            let left1 = left_keys_of(k1, &level);
            for (k2, c2) in &o.terms {
                let left2 = left_keys_of(k2, &level);
                let mut counts: BTreeMap<DoubleCosetKey, u64> = BTreeMap::new();
                for a in left1.iter() {
                    let ga = a.representative(level.l);
                    for b in left2.iter() {
                        let gb = b.representative(level.l);
                        *counts.entry(double_coset_key(&ga.mul(&gb), &level)).or_default() += 1;
                    }
                }
                let c = c1 * c2;
                for (k, n) in counts {
                    let size = left_keys_of(&k, &level).len() as u64;
                    debug_assert_eq!(n % size, 0);
                    let m = Rational::new(n.into(), size.into());
                    out.insert_add(k, c.scale(&m));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                json!({
                    "cartan": [k.a, k.b],
                    "g": k.representative(self.level.l).to_string(),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        json!({"l": self.level.l, "level": self.level.n, "terms": terms})
    }

    /// Parses `{"l", "level", "terms": [{"g" | "residue": "a,b;c,d", "coeff"}]}`.
    /// A term given only by `"cartan": [a, b]` stands for `U·diag(l^a, l^b)·U`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| match v.get(k) {
            Some(x) => Ok(x),
            None => invalid(format!("Hecke element is missing field `{k}`")),
        };
        let l = bigint_from_json(field("l")?)?.to_u64();
        let l = l.map_or_else(|| invalid("field `l` must be a prime"), Ok)?;
        let n = bigint_from_json(field("level")?)?.to_u32();
        let n = n.map_or_else(|| invalid("field `level` must be a small integer"), Ok)?;
        let level = LevelGroup::new(l, n)?;
        let terms = field("terms")?.as_array();
        let terms = terms.map_or_else(|| invalid("field `terms` must be an array"), Ok)?;
        let mut out = Self::zero(level);
        for t in terms {
            let g = if let Some(g) = t.get("g").or_else(|| t.get("residue")) {
                MatQ::from_json(g).map_err(|e| Error::InvalidInput(format!("term matrix: {e}")))?
            } else if let Some(ab) = t.get("cartan").and_then(|x| x.as_array()) {
                if ab.len() != 2 {
                    return invalid("field `cartan` must be a pair [a, b]");
                }
                let a = bigint_from_json(&ab[0])?.to_i64();
                let b = bigint_from_json(&ab[1])?.to_i64();
                match (a, b) {
                    (Some(a), Some(b)) if a >= b && a - b <= 8 && a.abs() <= 16 && b.abs() <= 16 => {
                        MatQ::diag_l(l, a, b)
                    }
                    _ => return invalid("field `cartan` must satisfy a ≥ b with small exponents"),
                }
            } else {
                return invalid("each term needs a matrix `g` or Cartan exponents `cartan`");
            };
            let c = match t.get("coeff") {
                Some(c) => CycScalar::from_json(c)?,
                None => CycScalar::one(),
            };
            if !c.is_zero_elem() {
                out.insert_add(double_coset_key(&g, &level), c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(l: u64, n: u32) -> LevelGroup {
        LevelGroup::new(l, n).unwrap()
    }

    #[test]
    fn unit_law() {
        for (l, n) in [(2, 0), (2, 1), (3, 1)] {
            let level = lv(l, n);
            let one = HeckeElement::identity(level);
            let t = HeckeElement::t_l(level);
            assert_eq!(one.convolve(&t).unwrap(), t);
            assert_eq!(t.convolve(&one).unwrap(), t);
        }
    }

    #[test]
    fn spherical_t_squared() {
        // T_l² = T_{(2,0)} + (l+1)·Z_l at GL_2(Z_l)
        for l in [2u64, 3] {
            let level = lv(l, 0);
            let t = HeckeElement::t_l(level);
            let t2 = t.convolve(&t).unwrap();
            let expect = HeckeElement::basis(level, &MatQ::diag_l(l, 2, 0))
                .add(&HeckeElement::z_l(level).scale(&CycScalar::from_int(l as i64 + 1)))
                .unwrap();
            assert_eq!(t2, expect);
        }
    }

    #[test]
    fn central_commutes() {
        let level = lv(2, 1);
        let t = HeckeElement::t_l(level);
        let z = HeckeElement::z_l(level);
        assert_eq!(t.convolve(&z).unwrap(), z.convolve(&t).unwrap());
    }

    #[test]
    fn json_roundtrip_and_level_mismatch() {
        let h = HeckeElement::t_l(lv(3, 1)).scale(&CycScalar::from_int(2));
        assert_eq!(HeckeElement::from_json(&h.to_json()).unwrap(), h);
        assert!(h.convolve(&HeckeElement::t_l(lv(3, 0))).is_err());
    }
}
