//! Matrices in `GL_2(Q_l)`: Iwasawa/Hermite and Cartan decompositions and
//! coset enumeration for principal congruence subgroups `U(l^n)`.

pub mod cosets;
pub mod decompose;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use crate::error::{invalid, Result};
use crate::scalars::rational::{
    is_integral_at, is_prime, parse_rational, rational_from_json, rational_to_json, fmt_rational,
    reduce_mod_u64, valuation,
};
use crate::scalars::Rational;

pub use cosets::{
    double_coset_key, flag_class, flag_coset_reps, left_coset_key, left_cosets_of_double_coset,
    DoubleCosetKey, LeftCosetKey,
};
pub use decompose::{cartan_decompose, hermite_form, iwasawa_decompose, reduce_to_standard_upper};

/// A 2×2 rational matrix with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatQ {
    e: [[Rational; 2]; 2],
    det: Rational,
}

impl MatQ {
    pub fn new(e: [[Rational; 2]; 2]) -> Result<Self> {
        let det = &e[0][0] * &e[1][1] - &e[0][1] * &e[1][0];
        if det.is_zero() {
            return invalid("matrix is singular");
        }
        Ok(MatQ { e, det })
    }

    /// Panicking constructor for matrices known to be invertible.
    pub fn from_rats(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self::new([[a, b], [c, d]]).expect("invertible matrix")
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let q = |x: i64| Rational::from_integer(BigInt::from(x));
        Self::from_rats(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn diag(a: Rational, d: Rational) -> Self {
        Self::from_rats(a, Rational::zero(), Rational::zero(), d)
    }

    /// `diag(l^a, l^b)`.
    pub fn diag_l(l: u64, a: i64, b: i64) -> Self {
        use crate::scalars::rational::l_pow;
        Self::diag(l_pow(l, a), l_pow(l, b))
    }

    pub fn upper(a: Rational, b: Rational, d: Rational) -> Self {
        Self::from_rats(a, b, Rational::zero(), d)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.e[i][j]
    }

    pub fn entries(&self) -> &[[Rational; 2]; 2] {
        &self.e
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn mul(&self, o: &MatQ) -> MatQ {
        let c = |i: usize, j: usize| &self.e[i][0] * &o.e[0][j] + &self.e[i][1] * &o.e[1][j];
        MatQ { e: [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]], det: &self.det * &o.det }
    }

    pub fn inv(&self) -> MatQ {
        let d = &self.det;
        let e = &self.e;
        MatQ {
            e: [[&e[1][1] / d, -&e[0][1] / d], [-&e[1][0] / d, &e[0][0] / d]],
            det: d.recip(),
        }
    }

    pub fn scale(&self, s: &Rational) -> MatQ {
        let e = &self.e;
        MatQ {
            e: [[&e[0][0] * s, &e[0][1] * s], [&e[1][0] * s, &e[1][1] * s]],
            det: &self.det * s * s,
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.e[1][0].is_zero()
    }

    /// All entries in `Z_l`.
    pub fn is_integral_at(&self, l: u64) -> bool {
        self.e.iter().flatten().all(|x| is_integral_at(x, l))
    }

    /// Membership in `GL_2(Z_l)`.
    pub fn in_gl2_zl(&self, l: u64) -> bool {
        self.is_integral_at(l) && valuation(&self.det, l) == 0
    }

    /// Membership in `U(l^n)` (for `n = 0`, in `GL_2(Z_l)`).
    pub fn in_level(&self, level: &LevelGroup) -> bool {
        if !self.in_gl2_zl(level.l) {
            return false;
        }
        let m = level.modulus();
        let id = [[1u64, 0], [0, 1]];
        (0..2).all(|i| {
            (0..2).all(|j| reduce_mod_u64(&self.e[i][j], m) == Some(id[i][j] % m))
        })
    }

    /// Minimum `l`-adic valuation of the nonzero entries.
    pub fn min_valuation(&self, l: u64) -> i64 {
        self.e.iter().flatten().filter(|x| !x.is_zero()).map(|x| valuation(x, l)).min().unwrap()
    }

    /// Parses `"a,b;c,d"` with rational literals.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return invalid(format!("matrix literal must look like \"a,b;c,d\", got {s:?}"));
        }
        let mut e: Vec<Rational> = Vec::new();
        for r in rows {
            let cols: Vec<&str> = r.split(',').collect();
            if cols.len() != 2 {
                return invalid(format!("matrix literal must look like \"a,b;c,d\", got {s:?}"));
            }
            for c in cols {
                e.push(parse_rational(c)?);
            }
        }
        let mut it = e.into_iter();
        let mut next = || it.next().unwrap();
        Self::new([[next(), next()], [next(), next()]])
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.e.iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect(),
        )
    }

    /// Accepts a `"a,b;c,d"` string or a nested 2×2 array of rationals.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse(s),
            Value::Array(rows) if rows.len() == 2 => {
                let mut e = Vec::new();
                for r in rows {
                    match r {
                        Value::Array(xs) if xs.len() == 2 => {
                            for x in xs {
                                e.push(rational_from_json(x)?);
                            }
                        }
                        _ => return invalid("matrix rows must be pairs"),
                    }
                }
                let mut it = e.into_iter();
                let mut next = || it.next().unwrap();
                Self::new([[next(), next()], [next(), next()]])
            }
            _ => invalid(format!("expected a matrix, found {v}")),
        }
    }
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.e;
        write!(
            f,
            "{},{};{},{}",
            fmt_rational(&e[0][0]),
            fmt_rational(&e[0][1]),
            fmt_rational(&e[1][0]),
            fmt_rational(&e[1][1])
        )
    }
}

/// The principal congruence subgroup `U(l^n) ⊆ GL_2(Z_l)`; `n = 0` is
/// `GL_2(Z_l)` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelGroup {
    pub l: u64,
    pub n: u32,
}

impl LevelGroup {
    pub fn new(l: u64, n: u32) -> Result<Self> {
        if !is_prime(l) {
            return invalid(format!("l = {l} is not prime"));
        }
        if l.checked_pow(n + 4).is_none() || n > 12 {
            return invalid(format!("level {l}^{n} is too large"));
        }
        Ok(LevelGroup { l, n })
    }

    /// `l^n`.
    pub fn modulus(&self) -> u64 {
        self.l.pow(self.n)
    }
}

/// A 2×2 matrix of residues modulo `l^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMat {
    pub l: u64,
    pub k: u32,
    pub e: [[u64; 2]; 2],
}

impl ResidueMat {
    pub fn to_matq(&self) -> MatQ {
        let q = |x: u64| Rational::from_integer(BigInt::from(x));
        MatQ::from_rats(q(self.e[0][0]), q(self.e[0][1]), q(self.e[1][0]), q(self.e[1][1]))
    }

    /// Reduction of a matrix in `GL_2(Z_l)` modulo `l^k`.
    pub fn reduce(g: &MatQ, l: u64, k: u32) -> Option<Self> {
        let m = l.pow(k);
        let r = |i: usize, j: usize| reduce_mod_u64(g.entry(i, j), m);
        Some(ResidueMat { l, k, e: [[r(0, 0)?, r(0, 1)?], [r(1, 0)?, r(1, 1)?]] })
    }

    pub fn det_is_unit(&self) -> bool {
        let m = self.l.pow(self.k) as i128;
        let d = (self.e[0][0] as i128 * self.e[1][1] as i128
            - self.e[0][1] as i128 * self.e[1][0] as i128)
            .rem_euclid(m.max(1));
        self.k == 0 || d % self.l as i128 != 0
    }
}

impl fmt::Display for ResidueMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_roundtrip() {
        let g = MatQ::parse("1, 1/6; 0, 1").unwrap();
        assert_eq!(g.to_string(), "1,1/6;0,1");
        assert!(MatQ::parse("1,2;2,4").is_err());
        assert!(MatQ::parse("1,2,3;4").is_err());
        assert_eq!(MatQ::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn level_membership() {
        let lv = LevelGroup::new(3, 1).unwrap();
        assert!(MatQ::from_ints(4, 3, 6, 1).in_level(&lv));
        assert!(!MatQ::from_ints(2, 0, 0, 1).in_level(&lv));
        assert!(MatQ::from_ints(2, 0, 0, 1).in_level(&LevelGroup::new(3, 0).unwrap()));
        assert!(g_inv_ok());
    }

    fn g_inv_ok() -> bool {
        let g = MatQ::parse("2,1/3;5,7").unwrap();
        g.mul(&g.inv()) == MatQ::identity()
    }
}
