//! The one-parameter family ring: polynomials and rational functions in `T`
//! with coefficients in the cyclotomic tower, plus a small expression parser
//! for literals such as `"T+1"`, `"(T+1)/(T-2)"` or `"2T^2 - 9/2"`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::cyclotomic::CycScalar;
use super::rational::{fmt_rational, Rational};
use crate::error::{invalid, Error, Result};

/// A polynomial in `T`, constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<CycScalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<CycScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::new(vec![c])
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Self::new(cs.iter().cloned().map(CycScalar::from_rational).collect())
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Self::new(vec![CycScalar::zero(), CycScalar::one()])
    }

    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycScalar> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<CycScalar> {
        match self.coeffs.len() {
            0 => Some(CycScalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, t: &CycScalar) -> CycScalar {
        let mut acc = CycScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * t + c;
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = CycScalar::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![CycScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(CycScalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![CycScalar::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * dj);
            }
            q[i] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &CycScalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Coefficients as rationals, when all are rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    /// Distinct rational roots (increasing) and the cofactor left after
    /// removing them. Only for rational coefficients; returns `None` when the
    /// coefficients are not rational or too large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<(Vec<Rational>, Poly)> {
        let rc = self.rational_coeffs()?;
        if rc.is_empty() {
            return None;
        }
        let mut rest = self.clone();
        let mut roots = Vec::new();
        // strip the root 0
        if rc[0].is_zero() {
            roots.push(Rational::zero());
            while rest.coeffs.first().is_some_and(|c| c.is_zero()) {
                rest = Poly::new(rest.coeffs[1..].to_vec());
            }
        }
        let ints = integer_coeffs(&rest.rational_coeffs()?);
        let a0 = ints.first()?.abs();
        let an = ints.last()?.abs();
        let limit = BigInt::from(1_000_000_000_000u64);
        if a0 > limit || an > limit {
            return None;
        }
        let ps = divisors(a0.to_u64()?);
        let qs = divisors(an.to_u64()?);
        let mut cands: Vec<Rational> = Vec::new();
        for p in &ps {
            for q in &qs {
                let r = Rational::new(BigInt::from(*p), BigInt::from(*q));
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let x = CycScalar::from_rational(r.clone());
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            if rest.eval(&x).is_zero() {
                roots.push(r.clone());
                let lin = Poly::new(vec![-x.clone(), CycScalar::one()]);
                while rest.eval(&x).is_zero() {
                    rest = rest.div_rem(&lin).0;
                }
            }
        }
        roots.sort();
        Some((roots, rest))
    }

    pub fn to_json(&self) -> Value {
        if self.rational_coeffs().is_some() {
            Value::String(self.to_string())
        } else {
            Value::Array(self.coeffs.iter().map(|c| c.to_json()).collect())
        }
    }
}

fn integer_coeffs(rc: &[Rational]) -> Vec<BigInt> {
    let l = rc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    rc.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn fmt_coeff(c: &CycScalar) -> (bool, String) {
    // (negative, magnitude text)
    match c.as_rational() {
        Some(r) => (r.is_negative(), fmt_rational(&r.abs())),
        None => (false, format!("({c})")),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = fmt_coeff(c);
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let body = if mono.is_empty() {
                mag
            } else if mag == "1" {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        write!(f, "{out}")
    }
}

/// A reduced quotient `num/den` with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Scalars of the family ring.
pub type FamilyScalar = RatFunc;

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return invalid("rational function with zero denominator");
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree() == Some(0) || num.is_zero() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if n.is_zero() {
            d = Poly::constant(CycScalar::one());
        }
        let lead = d.leading().unwrap().inv().unwrap();
        n = n.scale(&lead);
        d = d.scale(&lead);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::constant(CycScalar::one()) }
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(CycScalar::from_int(n))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<CycScalar> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(n, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        Self::new(self.num.scale(s), self.den.clone()).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero function".into()));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::from_int(1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Value at `t`; a vanishing denominator is a pole.
    pub fn eval(&self, t: &CycScalar) -> Result<CycScalar> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(format!("{self} has a pole at T = {t}")));
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return invalid(format!("unexpected trailing input in {s:?}"));
        }
        Ok(v)
    }

    /// String literal when coefficients are rational, otherwise
    /// `{"num": [...], "den": [...]}` with scalar coefficient arrays.
    pub fn to_json(&self) -> Value {
        if self.num.rational_coeffs().is_some() && self.den.rational_coeffs().is_some() {
            return Value::String(self.to_string());
        }
        serde_json::json!({
            "num": self.num.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "den": self.den.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let poly = |x: &Value, what: &str| -> Result<Poly> {
            match x {
                Value::Array(items) => Ok(Poly::new(
                    items.iter().map(CycScalar::from_json).collect::<Result<Vec<_>>>()?,
                )),
                _ => invalid(format!("`{what}` must be an array of scalar coefficients")),
            }
        };
        match v {
            Value::String(s) => Self::parse(s),
            Value::Number(_) => Self::parse(&v.to_string()),
            Value::Object(o) => {
                let num = poly(o.get("num").unwrap_or(&Value::Null), "num")?;
                let den = match o.get("den") {
                    Some(d) => poly(d, "den")?,
                    None => Poly::constant(CycScalar::one()),
                };
                Self::new(num, den)
            }
            Value::Array(_) => Ok(Self::from_poly(poly(v, "coeffs")?)),
            _ => invalid(format!("expected a family scalar literal, found {v}")),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().unwrap()));
        } else if c == 'T' || c == 't' {
            out.push(Tok::Var);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return invalid(format!("unexpected character {c:?} in family literal {s:?}"));
        }
    }
    if out.is_empty() {
        return invalid("empty family literal");
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = if c == '*' {
                        acc.mul(&rhs)
                    } else {
                        acc.div(&rhs).or_else(|_| invalid("division by zero in family literal"))?
                    };
                }
                // implicit multiplication: "2T", "3(T+1)"
                Some(Tok::Var) | Some(Tok::Op('(')) | Some(Tok::Num(_)) => {
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    n.to_i64().filter(|&e| e <= 64)
                }
                _ => None,
            };
            let e = e.map_or_else(|| invalid("exponent must be an integer ≤ 64"), Ok)?;
            return base
                .pow(if neg { -e } else { e })
                .or_else(|_| invalid("negative power of zero in family literal"));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(CycScalar::from_rational(Rational::from_integer(n))))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RatFunc::t())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => invalid("unbalanced parentheses in family literal"),
                }
            }
            other => invalid(format!("unexpected token {other:?} in family literal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn c(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    #[test]
    fn parse_and_print() {
        let f = RatFunc::parse("T+1").unwrap();
        assert_eq!(f.to_string(), "T + 1");
        assert_eq!(f.eval(&c(3)).unwrap(), c(4));
        let g = RatFunc::parse("T^2 - 9/2").unwrap();
        assert_eq!(g.to_string(), "T^2 - 9/2");
        let h = RatFunc::parse("(T+1)/(T-2)").unwrap();
        assert!(matches!(h.eval(&c(2)), Err(Error::PoleAtPoint(_))));
        assert_eq!(h.eval(&c(0)).unwrap(), CycScalar::from_rational(rat(-1, 2)));
        assert_eq!(RatFunc::parse("2T(T-1)").unwrap().to_string(), "2*T^2 - 2*T");
        assert!(RatFunc::parse("T+").is_err());
        assert!(RatFunc::parse("1/(T-T)").is_err());
        assert!(RatFunc::parse("x").is_err());
    }

    #[test]
    fn reduction_to_lowest_terms() {
        let f = RatFunc::parse("(T^2-1)/(2T-2)").unwrap();
        assert_eq!(f, RatFunc::parse("T/2 + 1/2").unwrap());
        assert!(f.as_poly().is_some());
    }

    #[test]
    fn rational_roots() {
        let p = RatFunc::parse("2T^3 - 3T^2 - 11T + 6").unwrap();
        let (roots, rest) = p.as_poly().unwrap().rational_roots().unwrap();
        assert_eq!(roots, vec![rat(-2, 1), rat(1, 2), rat(3, 1)]);
        assert_eq!(rest.degree(), Some(0));
        let q = RatFunc::parse("T^3 - 9/2 T").unwrap();
        let (roots, rest) = q.as_poly().unwrap().rational_roots().unwrap();
        assert_eq!(roots, vec![rat(0, 1)]);
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn gcd_and_division() {
        let a = RatFunc::parse("(T-1)(T+2)").unwrap();
        let b = RatFunc::parse("(T-1)(T-3)").unwrap();
        let g = a.as_poly().unwrap().gcd(b.as_poly().unwrap());
        assert_eq!(RatFunc::from_poly(g), RatFunc::parse("T-1").unwrap());
    }
}
