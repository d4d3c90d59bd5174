//! Coset enumeration for `U = U(l^n)`: canonical keys for left cosets `gU`
//! and double cosets `UgU`, left-coset decompositions of double cosets, and
//! representatives of `P(Z_l)\GL_2(Z_l)/U`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::decompose::{cartan_decompose, hermite_form};
use super::{LevelGroup, MatQ, ResidueMat};
use crate::error::{invalid, Result};
use crate::scalars::rational::{l_pow, mod_inverse_u64, reduce_mod_u64, valuation_or_inf};
use crate::scalars::Rational;

/// Canonical label of a left coset `gU`: the Hermite form `(α, β, δ)` of `g`
/// together with `H^{-1}g` reduced modulo `l^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftCosetKey {
    pub alpha: i64,
    pub delta: i64,
    pub beta: Rational,
    pub residue: [[u64; 2]; 2],
}

impl LeftCosetKey {
    /// A representative `H·k̃` with `k̃` the residue lifted to `[0, l^n)`.
    pub fn representative(&self, l: u64) -> MatQ {
        let h = MatQ::upper(l_pow(l, self.alpha), self.beta.clone(), l_pow(l, self.delta));
        if self.residue == [[0, 0], [0, 0]] {
            return h;
        }
        let q = |x: u64| Rational::from_integer(BigInt::from(x));
        let r = &self.residue;
        h.mul(&MatQ::from_rats(q(r[0][0]), q(r[0][1]), q(r[1][0]), q(r[1][1])))
    }
}

/// Canonical label of a double coset `UgU`: Cartan exponents and the
/// smallest left-coset key it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleCosetKey {
    pub a: i64,
    pub b: i64,
    pub min_left: LeftCosetKey,
}

impl DoubleCosetKey {
    pub fn representative(&self, l: u64) -> MatQ {
        self.min_left.representative(l)
    }

    /// `(a, b)` and the number of left cosets.
    pub fn coset_count(&self, level: &LevelGroup) -> u64 {
        coset_count(level, self.a, self.b)
    }
}

/// Number of left cosets in `U·diag(l^a, l^b)·U`.
pub fn coset_count(level: &LevelGroup, a: i64, b: i64) -> u64 {
    let d = (a - b) as u32;
    if level.n >= 1 || d == 0 {
        level.l.pow(d)
    } else {
        level.l.pow(d - 1) * (level.l + 1)
    }
}

pub fn left_coset_key(g: &MatQ, level: &LevelGroup) -> LeftCosetKey {
    let l = level.l;
    let (alpha, beta, delta) = hermite_form(g, l);
    let residue = if level.n == 0 {
        [[0, 0], [0, 0]]
    } else {
        let h = MatQ::upper(l_pow(l, alpha), beta.clone(), l_pow(l, delta));
        let k = h.inv().mul(g);
        let m = level.modulus();
        let r = |i: usize, j: usize| reduce_mod_u64(k.entry(i, j), m).expect("k ∈ GL_2(Z_l)");
        [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]]
    };
    LeftCosetKey { alpha, delta, beta, residue }
}

/// Representatives of the left cosets `g_i U` with `UgU = ⊔ g_i U`, sorted
/// by their canonical keys. Each representative is the canonical one of
/// [`LeftCosetKey::representative`].
pub fn left_cosets_of_double_coset(g: &MatQ, level: &LevelGroup) -> Vec<MatQ> {
    left_coset_keys(g, level).iter().map(|k| k.representative(level.l)).collect()
}

/// Sorted canonical keys of the left cosets in `UgU`.
pub fn left_coset_keys(g: &MatQ, level: &LevelGroup) -> Vec<LeftCosetKey> {
    let l = level.l;
    let (k1, a, b, k2) = cartan_decompose(g, l);
    let mut keys: Vec<LeftCosetKey> = if level.n == 0 {
        hermite_forms_with_divisors(l, a, b)
            .into_iter()
            .map(|(alpha, beta, delta)| LeftCosetKey {
                alpha,
                delta,
                beta,
                residue: [[0, 0], [0, 0]],
            })
            .collect()
    } else {
        // U·D·U = ⊔_y [[1, l^n y], [0, 1]]·D·U, y mod l^{a−b}; conjugate by k1, k2.
        let d = MatQ::diag_l(l, a, b);
        let ln = Rational::from_integer(BigInt::from(level.modulus()));
        let count = l.pow((a - b) as u32);
        (0..count)
            .map(|y| {
                let u = MatQ::upper(
                    Rational::one(),
                    &ln * Rational::from_integer(BigInt::from(y)),
                    Rational::one(),
                );
                left_coset_key(&k1.mul(&u).mul(&d).mul(&k2), level)
            })
            .collect()
    };
    keys.sort();
    keys.dedup();
    debug_assert_eq!(keys.len() as u64, coset_count(level, a, b));
    keys
}

/// Hermite forms `(α, β, δ)` of all lattices with elementary divisors `(a, b)`.
fn hermite_forms_with_divisors(l: u64, a: i64, b: i64) -> Vec<(i64, Rational, i64)> {
    let mut out = Vec::new();
    for alpha in b..=a {
        let delta = a + b - alpha;
        let span = l.pow((alpha - b) as u32);
        for j in 0..span {
            // primitive after dividing by l^b: min(α−b, δ−b, v(j)) = 0
            let jr = Rational::from_integer(BigInt::from(j));
            let vj = valuation_or_inf(&jr, l);
            if (alpha - b).min(delta - b).min(vj) != 0 {
                continue;
            }
            out.push((alpha, jr * l_pow(l, b), delta));
        }
    }
    out
}

type CosetCache = HashMap<(LevelGroup, LeftCosetKey), DoubleCosetKey>;
static DOUBLE_COSET_CACHE: Lazy<Mutex<CosetCache>> = Lazy::new(|| Mutex::new(HashMap::new()));
static LEFT_KEYS_CACHE: Lazy<Mutex<HashMap<(LevelGroup, DoubleCosetKey), Arc<Vec<LeftCosetKey>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Canonical key of the double coset `UgU`.
pub fn double_coset_key(g: &MatQ, level: &LevelGroup) -> DoubleCosetKey {
    let lk = left_coset_key(g, level);
    if let Some(k) = DOUBLE_COSET_CACHE.lock().unwrap().get(&(*level, lk.clone())) {
        return k.clone();
    }
    let (_, a, b, _) = cartan_decompose(g, level.l);
    let keys = left_coset_keys(g, level);
    let dk = DoubleCosetKey { a, b, min_left: keys[0].clone() };
    let mut cache = DOUBLE_COSET_CACHE.lock().unwrap();
    for k in keys.iter() {
        cache.insert((*level, k.clone()), dk.clone());
    }
    drop(cache);
    LEFT_KEYS_CACHE.lock().unwrap().insert((*level, dk.clone()), Arc::new(keys));
    dk
}

/// Left-coset keys of a double coset given by its key (cached).
pub fn left_keys_of(dk: &DoubleCosetKey, level: &LevelGroup) -> Arc<Vec<LeftCosetKey>> {
    if let Some(v) = LEFT_KEYS_CACHE.lock().unwrap().get(&(*level, dk.clone())) {
        return v.clone();
    }
    let keys = Arc::new(left_coset_keys(&dk.representative(level.l), level));
    LEFT_KEYS_CACHE.lock().unwrap().insert((*level, dk.clone()), keys.clone());
    keys
}

/// Representatives `ω` of `P(Z_l)\GL_2(Z_l)/U(l^n)` in canonical order:
/// first `[[1,0],[c,1]]` for `c ∈ lZ/l^n`, then `[[0,−1],[1,c]]` for
/// `c ∈ Z/l^n`. For `n = 0` the single class of the identity.
pub fn flag_reps(l: u64, n: u32) -> Vec<MatQ> {
    if n == 0 {
        return vec![MatQ::identity()];
    }
    let m = l.pow(n) as i64;
    let mut out = Vec::new();
    for c in (0..m).step_by(l as usize) {
        out.push(MatQ::from_ints(1, 0, c, 1));
    }
    for c in 0..m {
        out.push(MatQ::from_ints(0, -1, 1, c));
    }
    out
}

/// [`flag_reps`] as residue matrices modulo `l^n`, for `n ≥ 1`.
pub fn flag_coset_reps(l: u64, n: u32) -> Result<Vec<ResidueMat>> {
    if n == 0 {
        return invalid("flag coset representatives need n ≥ 1");
    }
    LevelGroup::new(l, n)?;
    Ok(flag_reps(l, n)
        .iter()
        .map(|w| ResidueMat::reduce(w, l, n).expect("integral representative"))
        .collect())
}

/// For `k ∈ GL_2(Z_l)`, the index `j` with `k ∈ P(Z_l)·ω_j·U` and the
/// diagonal residues `(p₁₁, p₂₂) mod l^n` of the Borel part.
pub fn flag_class(k: &MatQ, level: &LevelGroup) -> (usize, u64, u64) {
    let l = level.l;
    let n = level.n;
    if n == 0 {
        return (0, 0, 0);
    }
    let m = level.modulus();
    let r = |i: usize, j: usize| reduce_mod_u64(k.entry(i, j), m).expect("k ∈ GL_2(Z_l)");
    let (c, d) = (r(1, 0), r(1, 1));
    let idx = if c % l != 0 {
        // (1 : d/c), type B
        let t = d * mod_inverse_u64(c, m).unwrap() % m;
        (m / l) as usize + t as usize
    } else {
        // (c/d : 1) with c/d ∈ lZ, type A
        let t = c * mod_inverse_u64(d, m).unwrap() % m;
        (t / l) as usize
    };
    let omega = &flag_reps(l, n)[idx];
    let p = k.mul(&omega.inv());
    let p11 = reduce_mod_u64(p.entry(0, 0), m).unwrap();
    let p22 = reduce_mod_u64(p.entry(1, 1), m).unwrap();
    debug_assert_eq!(reduce_mod_u64(p.entry(1, 0), m), Some(0));
    (idx, p11, p22)
}

/// Cartan exponents `(a, b)` with `a ≥ b`.
pub fn cartan_exponents(g: &MatQ, l: u64) -> (i64, i64) {
    let b = g.min_valuation(l);
    let a = crate::scalars::rational::valuation(g.det(), l) - b;
    (a, b)
}

pub fn is_zero_residue(r: &[[u64; 2]; 2]) -> bool {
    r.iter().flatten().all(|x| x.is_zero())
}
