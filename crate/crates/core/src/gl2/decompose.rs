//! Hermite (Iwasawa) and Smith (Cartan) forms under `GL_2(Z_l)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::MatQ;
use crate::scalars::rational::{l_pow, reduce_mod, valuation};
use crate::scalars::Rational;

/// Canonical representative `β ∈ Z[1/l] ∩ [0, l^α)` of `b` modulo `l^α Z_l`.
pub fn canonical_mod(b: &Rational, l: u64, alpha: i64) -> Rational {
    if b.is_zero() {
        return Rational::zero();
    }
    let s = (-valuation(b, l)).max(0).max(-alpha);
    let t = l_pow(l, s);
    let y = b * &t;
    let modulus = l_pow(l, alpha + s).to_integer();
    let j = reduce_mod(&y, &modulus).expect("scaled entry is l-integral");
    Rational::from_integer(j) / t
}

/// Column Hermite form: `x = H·k` with `k ∈ GL_2(Z_l)` and
/// `H = [[l^α, β], [0, l^δ]]`, `β` canonical modulo `l^α`.
/// Returns `(α, β, δ)`.
pub fn hermite_form(x: &MatQ, l: u64) -> (i64, Rational, i64) {
    let e = x.entries();
    let (a, b, c, d) = (&e[0][0], &e[0][1], &e[1][0], &e[1][1]);
    // Column operations over Z_l to clear the lower-left entry.
    let (top_a, top_b, bot_d) = if c.is_zero() {
        (a.clone(), b.clone(), d.clone())
    } else if !d.is_zero() && valuation(c, l) >= valuation(d, l) {
        let t = c / d;
        (a - &t * b, b.clone(), d.clone())
    } else {
        // col2 -= (d/c)·col1, then swap the columns.
        let t = d / c;
        (b - &t * a, a.clone(), c.clone())
    };
    let alpha = valuation(&top_a, l);
    let delta = valuation(&bot_d, l);
    let u_d = &bot_d / l_pow(l, delta);
    let beta = canonical_mod(&(top_b / u_d), l, alpha);
    (alpha, beta, delta)
}

fn hermite_matrix(l: u64, alpha: i64, beta: &Rational, delta: i64) -> MatQ {
    MatQ::upper(l_pow(l, alpha), beta.clone(), l_pow(l, delta))
}

/// `x = b·k` with `b` upper triangular over `Q` and `k ∈ GL_2(Z_l)`.
/// When `x ∈ GL_2(Z_l)` this returns `(I, x)`.
pub fn iwasawa_decompose(x: &MatQ, l: u64) -> (MatQ, MatQ) {
    let (alpha, beta, delta) = hermite_form(x, l);
    let h = hermite_matrix(l, alpha, &beta, delta);
    let k = h.inv().mul(x);
    (h, k)
}

/// The standard upper form `g = [[l^m, a/l^r], [0, l^n]]·u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardUpper {
    pub m: i64,
    pub n: i64,
    pub a: BigInt,
    pub r: u32,
    pub u: MatQ,
}

impl StandardUpper {
    pub fn upper(&self, l: u64) -> MatQ {
        let beta = Rational::new(self.a.clone(), l_pow(l, self.r as i64).to_integer());
        MatQ::upper(l_pow(l, self.m), beta, l_pow(l, self.n))
    }
}

pub fn reduce_to_standard_upper(g: &MatQ, l: u64) -> StandardUpper {
    let (m, beta, n) = hermite_form(g, l);
    let r = if beta.is_zero() { 0 } else { (-valuation(&beta, l)).max(0) as u32 };
    let a = (&beta * l_pow(l, r as i64)).to_integer();
    let u = hermite_matrix(l, m, &beta, n).inv().mul(g);
    StandardUpper { m, n, a, r, u }
}

/// `g = k1·diag(l^a, l^b)·k2` with `a ≥ b` and `k1, k2 ∈ GL_2(Z_l)`.
pub fn cartan_decompose(g: &MatQ, l: u64) -> (MatQ, i64, i64, MatQ) {
    let swap = MatQ::from_ints(0, 1, 1, 0);
    let mut lm = MatQ::identity();
    let mut m = g.clone();
    let mut rm = MatQ::identity();
    let mut best = (0, 0);
    let mut best_v = i64::MAX;
    for i in 0..2 {
        for j in 0..2 {
            let x = m.entry(i, j);
            if !x.is_zero() && valuation(x, l) < best_v {
                best_v = valuation(x, l);
                best = (i, j);
            }
        }
    }
    if best.0 == 1 {
        m = swap.mul(&m);
        lm = lm.mul(&swap);
    }
    if best.1 == 1 {
        m = m.mul(&swap);
        rm = swap.mul(&rm);
    }
    let p = m.entry(0, 0).clone();
    let t = m.entry(1, 0) / &p;
    if !t.is_zero() {
        let z = Rational::zero();
        m = MatQ::from_rats(Rational::one(), z.clone(), -&t, Rational::one()).mul(&m);
        lm = lm.mul(&MatQ::from_rats(Rational::one(), z, t, Rational::one()));
    }
    let s = m.entry(0, 1) / &p;
    if !s.is_zero() {
        let z = Rational::zero();
        m = m.mul(&MatQ::from_rats(Rational::one(), -&s, z.clone(), Rational::one()));
        rm = MatQ::from_rats(Rational::one(), s, z, Rational::one()).mul(&rm);
    }
    let q = m.entry(1, 1).clone();
    let b = valuation(&p, l);
    let a = valuation(&q, l);
    debug_assert!(a >= b);
    let u1 = &p / l_pow(l, b);
    let u2 = &q / l_pow(l, a);
    let units = MatQ::diag(u1, u2);
    if a == b {
        (lm.mul(&units), a, b, rm)
    } else {
        (lm.mul(&units).mul(&swap), a, b, swap.mul(&rm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    #[test]
    fn standard_upper_examples() {
        let s = reduce_to_standard_upper(&MatQ::identity(), 2);
        assert_eq!((s.m, s.n, s.r), (0, 0, 0));
        assert!(s.a.is_zero());
        assert_eq!(s.u, MatQ::identity());

        let s = reduce_to_standard_upper(&MatQ::from_ints(2, 0, 0, 1), 2);
        assert_eq!((s.m, s.n, s.r), (1, 0, 0));
        assert_eq!(s.u, MatQ::identity());

        let g = MatQ::parse("1,1/6;0,1").unwrap();
        let s = reduce_to_standard_upper(&g, 2);
        assert_eq!((s.m, s.n, s.r), (0, 0, 1));
        assert_eq!(s.a, BigInt::from(1));
        assert_eq!(s.u, MatQ::upper(rat(1, 1), rat(-1, 3), rat(1, 1)));
        assert_eq!(s.upper(2).mul(&s.u), g);
    }

    #[test]
    fn iwasawa_examples() {
        let x = MatQ::from_ints(2, 3, 5, 7);
        assert_eq!(iwasawa_decompose(&x, 3), (MatQ::identity(), x.clone()));
        let x = MatQ::from_ints(3, 0, 0, 1);
        assert_eq!(iwasawa_decompose(&x, 3), (x.clone(), MatQ::identity()));
        let x = MatQ::from_ints(0, 1, 3, 0);
        let (b, k) = iwasawa_decompose(&x, 3);
        assert_eq!(b.mul(&k), x);
        assert!(k.in_gl2_zl(3) && b.is_upper_triangular());
        assert_eq!(valuation(b.entry(0, 0), 3) + valuation(b.entry(1, 1), 3), 1);
    }

    #[test]
    fn cartan_examples() {
        let (k1, a, b, k2) = cartan_decompose(&MatQ::from_ints(2, 0, 0, 1), 2);
        assert_eq!((k1, a, b, k2), (MatQ::identity(), 1, 0, MatQ::identity()));
        let (k1, a, b, k2) = cartan_decompose(&MatQ::from_ints(1, 0, 0, 2), 2);
        assert_eq!((a, b), (1, 0));
        assert_eq!(k1, MatQ::from_ints(0, 1, 1, 0));
        assert_eq!(k2, MatQ::from_ints(0, 1, 1, 0));
        let g = MatQ::from_ints(2, 1, 0, 2);
        let (k1, a, b, k2) = cartan_decompose(&g, 2);
        assert_eq!((a, b), (2, 0));
        assert_eq!(k1.mul(&MatQ::diag_l(2, a, b)).mul(&k2), g);
        assert!(k1.in_gl2_zl(2) && k2.in_gl2_zl(2));
    }

    #[test]
    fn canonical_beta() {
        assert_eq!(canonical_mod(&rat(1, 6), 2, 0), rat(1, 2));
        assert_eq!(canonical_mod(&rat(5, 1), 2, 1), rat(1, 1));
        assert_eq!(canonical_mod(&rat(3, 4), 2, -1), rat(1, 4));
        assert_eq!(canonical_mod(&rat(7, 3), 3, 2), rat(7, 3));
    }
}
