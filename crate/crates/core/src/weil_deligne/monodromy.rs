//! Continuous `p`-adic representations of `W_{Q_l}` (`l ≠ p`) near the
//! identity on inertia, and the passage to and from monodromy operators.
//!
//! A representation is recorded by the image `phi` of a geometric Frobenius,
//! the image `alpha ∈ 1 + p²M₂(Z_p)` of a topological generator of the pro-`p`
//! tame quotient, and a unit `c` normalizing `t_p`. The monodromy operator is
//! `N = c·log(alpha)`.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::wd::{SplitWD, WDRep};
use crate::error::{invalid, Error, Result};
use crate::scalars::rational::{bigint_from_json, is_prime, valuation, Rational};
use crate::scalars::{padic_exp_matrix, padic_log_matrix, PadicMat2, PadicTrunc};

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousLocalRep {
    pub l: u64,
    pub phi: PadicMat2,
    pub alpha: PadicMat2,
    pub c: PadicTrunc,
    /// Exponent `s` of the basis change `diag(p^s, 1)` applied to move the
    /// monodromy operator into `p²M₂(Z_p)`.
    pub n_rescale: u32,
}

/// The Weil–Deligne data recovered from a continuous representation, in the
/// basis of that representation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractedWD {
    pub phi: PadicMat2,
    pub n: PadicMat2,
    /// `alpha·exp(−N/c)`, the (finite) inertia image of the Weil–Deligne
    /// representation on the tame generator.
    pub inertia: PadicMat2,
}

impl ContinuousLocalRep {
    pub fn new(l: u64, phi: PadicMat2, alpha: PadicMat2, c: PadicTrunc) -> Result<Self> {
        if !is_prime(l) {
            return invalid(format!("l = {l} is not prime"));
        }
        let p = phi.p();
        if p == l {
            return invalid("the representation must be l-adic with l ≠ p");
        }
        if alpha.p() != p || c.p() != p {
            return invalid("phi, alpha and c must use the same prime p");
        }
        if !c.is_unit() {
            return invalid("normalization c must be a p-adic unit");
        }
        if !phi.det().is_unit() {
            return invalid("phi must be invertible over Z_p");
        }
        Ok(ContinuousLocalRep { l, phi, alpha, c, n_rescale: 0 })
    }

    pub fn p(&self) -> u64 {
        self.phi.p()
    }

    pub fn prec(&self) -> u32 {
        self.phi.prec().min(self.alpha.prec()).min(self.c.prec())
    }

    /// `phi·alpha^l·phi^{−1} = alpha` modulo `p^k`.
    pub fn tame_relation_holds(&self, k: u32) -> Result<bool> {
        let mut al = PadicMat2::identity(self.p(), self.prec());
        for _ in 0..self.l {
            al = al.mul(&self.alpha);
        }
        let lhs = self.phi.mul(&al).mul(&self.phi.inv()?);
        Ok(lhs.eq_mod_pow(&self.alpha, k))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "p": self.p(),
            "prec": self.prec(),
            "phi": self.phi.to_json(),
            "alpha": self.alpha.to_json(),
            "c": self.c.to_json(),
            "n_rescale": self.n_rescale,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| match v.get(k) {
            Some(x) => Ok(x),
            None => invalid(format!("continuous representation is missing field `{k}`")),
        };
        let l = bigint_from_json(field("l")?)?.to_u64();
        let l = l.map_or_else(|| invalid("field `l` must be a prime"), Ok)?;
        let phi = PadicMat2::from_json(field("phi")?)
            .map_err(|e| Error::InvalidInput(format!("field `phi`: {e}")))?;
        let alpha = PadicMat2::from_json(field("alpha")?)
            .map_err(|e| Error::InvalidInput(format!("field `alpha`: {e}")))?;
        let c = match v.get("c") {
            Some(x) => PadicTrunc::from_json(x)
                .map_err(|e| Error::InvalidInput(format!("field `c`: {e}")))?,
            None => PadicTrunc::one(phi.p(), phi.prec()),
        };
        let mut out = Self::new(l, phi, alpha, c)?;
        if let Some(s) = v.get("n_rescale") {
            let s = bigint_from_json(s)?.to_u32();
            out.n_rescale = s.map_or_else(|| invalid("field `n_rescale` must be a small integer"), Ok)?;
        }
        Ok(out)
    }
}

impl ExtractedWD {
    pub fn to_json(&self) -> Value {
        json!({
            "phi": self.phi.to_json(),
            "n": self.n.to_json(),
            "inertia": self.inertia.to_json(),
        })
    }
}

/// Recovers `(ρ(Φ), N)` from a continuous representation via `N = c·log(α)`.
pub fn monodromy_extract(rep: &ContinuousLocalRep) -> Result<ExtractedWD> {
    let p = rep.p();
    let prec = rep.prec();
    let n = padic_log_matrix(&rep.alpha)?.scale(&rep.c);
    if !n.mul(&n).eq_mod_pow(&PadicMat2::zero(p, prec), prec) {
        return Err(Error::NotAMonodromyRep(format!(
            "c·log(alpha) is not nilpotent modulo {p}^{prec}"
        )));
    }
    let phi_inv = rep.phi.inv()?;
    let l = PadicTrunc::from_int(p, prec, rep.l as i64);
    let conj = rep.phi.mul(&n).mul(&phi_inv).scale(&l);
    if !conj.eq_mod_pow(&n, prec) {
        return Err(Error::InconsistentInput(
            "Frobenius relation ρ(Φ)Nρ(Φ)^{-1} = (1/l)·N fails".into(),
        ));
    }
    let back = padic_exp_matrix(&n.scale(&rep.c.inv()?).map(|x| x.neg()))?;
    let inertia = rep.alpha.mul(&back);
    Ok(ExtractedWD { phi: rep.phi.clone(), n, inertia })
}

/// The continuous representation attached to a split Weil–Deligne
/// representation with `p`-integral rational Frobenius values, `alpha =
/// exp(N/c)`. The basis is rescaled by `diag(p^s, 1)` so that `N ∈ p²M₂`.
pub fn wd_to_continuous(sigma: &WDRep, p: u64, prec: u32, c: &PadicTrunc) -> Result<ContinuousLocalRep> {
    let s = match sigma {
        WDRep::Split(s) => s,
        WDRep::Abstract(_) => {
            return Err(Error::Unsupported(
                "only split representations have an explicit continuous model".into(),
            ))
        }
    };
    if !is_prime(p) || p == s.l {
        return invalid(format!("p = {p} must be a prime different from l = {}", s.l));
    }
    if !s.unit1.is_trivial() || !s.unit2.is_trivial() {
        return Err(Error::UnsupportedCoefficients(
            "ramified characters have no p-adic model here".into(),
        ));
    }
    let (q1, q2) = frob_rationals(s)?;
    let n_rat = s.n_scale.as_rational().ok_or_else(|| {
        Error::UnsupportedCoefficients("monodromy scale must be rational".into())
    })?;
    let emb = |r: &Rational| PadicTrunc::from_rational(r, p, prec);
    let (e1, e2) = (emb(&q1)?, emb(&q2)?);
    if !e1.is_unit() || !e2.is_unit() {
        return Err(Error::UnsupportedCoefficients(
            "Frobenius values must be p-adic units".into(),
        ));
    }
    let z = PadicTrunc::zero(p, prec);
    let phi = PadicMat2::new([[e1, z.clone()], [z.clone(), e2]]);
    let c_inv = c.inv()?;
    let mut shift = 0u32;
    let alpha = if n_rat.is_zero() {
        PadicMat2::identity(p, prec)
    } else {
        let v = valuation(&n_rat, p);
        shift = (2 - v).max(0) as u32;
        let scaled = &n_rat * Rational::from_integer(num_bigint::BigInt::from(p).pow(shift));
        let n_entry = emb(&scaled)?.mul(&c_inv);
        let n = PadicMat2::new([[z.clone(), z.clone()], [n_entry, z]]);
        padic_exp_matrix(&n)?
    };
    let mut rep = ContinuousLocalRep::new(s.l, phi, alpha, c.clone())?;
    rep.n_rescale = shift;
    Ok(rep)
}

/// Outcome of `σ → (φ, α) → (φ, N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyRoundtrip {
    pub rep: ContinuousLocalRep,
    pub extracted: ExtractedWD,
    /// `N` of `σ` in the basis of `rep`, embedded `p`-adically.
    pub expected_n: PadicMat2,
    /// Precision `prec − 2` to which `N` is compared.
    pub compare_prec: u32,
    pub n_matches: bool,
    pub n_squared_zero: bool,
    pub tame_relation: bool,
}

impl MonodromyRoundtrip {
    pub fn pass(&self) -> bool {
        self.n_matches && self.n_squared_zero && self.tame_relation
    }

    pub fn to_json(&self) -> Value {
        json!({
            "continuous": self.rep.to_json(),
            "extracted": self.extracted.to_json(),
            "expected_n": self.expected_n.to_json(),
            "compare_prec": self.compare_prec,
            "n_matches": self.n_matches,
            "n_squared_zero": self.n_squared_zero,
            "tame_relation": self.tame_relation,
            "pass": self.pass(),
        })
    }
}

/// Builds the continuous representation of `σ`, extracts its monodromy
/// operator again and compares it with `N` modulo `p^{prec−2}` (the
/// logarithm loses up to two digits).
pub fn monodromy_roundtrip(sigma: &WDRep, p: u64, prec: u32, c: &PadicTrunc) -> Result<MonodromyRoundtrip> {
    if prec < 3 {
        return invalid("precision must be at least 3");
    }
    let rep = wd_to_continuous(sigma, p, prec, c)?;
    let extracted = monodromy_extract(&rep)?;
    let n_rat = match sigma {
        WDRep::Split(s) => s.n_scale.as_rational().expect("checked by wd_to_continuous"),
        WDRep::Abstract(_) => unreachable!("rejected by wd_to_continuous"),
    };
    let scaled = &n_rat * Rational::from_integer(num_bigint::BigInt::from(p).pow(rep.n_rescale));
    let z = PadicTrunc::zero(p, prec);
    let expected_n = PadicMat2::new([[z.clone(), z.clone()], [PadicTrunc::from_rational(&scaled, p, prec)?, z]]);
    let compare_prec = prec - 2;
    let n_matches = extracted.n.eq_mod_pow(&expected_n, compare_prec);
    let n_squared_zero = extracted.n.mul(&extracted.n).eq_mod_pow(&PadicMat2::zero(p, prec), prec);
    let tame_relation = rep.tame_relation_holds(compare_prec)?;
    Ok(MonodromyRoundtrip { rep, extracted, expected_n, compare_prec, n_matches, n_squared_zero, tame_relation })
}

fn frob_rationals(s: &SplitWD) -> Result<(Rational, Rational)> {
    let (q1, q2) = s.frob.roots().map_err(|_| {
        Error::UnsupportedCoefficients("Frobenius eigenvalues must be rational".into())
    })?;
    match (q1.as_rational(), q2.as_rational()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::UnsupportedCoefficients(
            "Frobenius eigenvalues must be rational to embed p-adically".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CycScalar;
    use crate::weil_deligne::Quasicharacter;

    fn pm(p: u64, prec: u32, v: [[i64; 2]; 2]) -> PadicMat2 {
        let f = |x| PadicTrunc::from_int(p, prec, x);
        PadicMat2::new([[f(v[0][0]), f(v[0][1])], [f(v[1][0]), f(v[1][1])]])
    }

    #[test]
    fn frobenius_shape_decides() {
        let (p, l) = (3u64, 2u64);
        let alpha = pm(p, 10, [[1, 9], [0, 1]]);
        let one = PadicTrunc::one(p, 10);
        let bad = ContinuousLocalRep::new(l, pm(p, 10, [[2, 0], [0, 1]]), alpha.clone(), one.clone()).unwrap();
        assert!(matches!(monodromy_extract(&bad), Err(Error::InconsistentInput(_))));
        let good = ContinuousLocalRep::new(l, pm(p, 10, [[1, 0], [0, 2]]), alpha, one).unwrap();
        let ex = monodromy_extract(&good).unwrap();
        assert_eq!(ex.n, pm(p, 10, [[0, 9], [0, 0]]));
        assert_eq!(ex.inertia, PadicMat2::identity(p, 10));
        assert!(good.tame_relation_holds(10).unwrap());
    }

    #[test]
    fn trivial_alpha() {
        let one = PadicTrunc::one(3, 10);
        let r = ContinuousLocalRep::new(2, pm(3, 10, [[1, 0], [0, 4]]), PadicMat2::identity(3, 10), one).unwrap();
        assert_eq!(monodromy_extract(&r).unwrap().n, PadicMat2::zero(3, 10));
    }

    #[test]
    fn non_nilpotent_rejected() {
        let one = PadicTrunc::one(3, 10);
        let r = ContinuousLocalRep::new(2, PadicMat2::identity(3, 10), pm(3, 10, [[10, 0], [0, 1]]), one).unwrap();
        assert!(matches!(monodromy_extract(&r), Err(Error::NotAMonodromyRep(_))));
    }

    #[test]
    fn roundtrip_special() {
        let chi = Quasicharacter::unramified(2, CycScalar::from_int(5)).unwrap();
        let sigma = WDRep::Split(SplitWD::special(&chi, CycScalar::from_int(7)).unwrap());
        let c = PadicTrunc::from_int(3, 10, 2);
        let rep = wd_to_continuous(&sigma, 3, 10, &c).unwrap();
        assert_eq!(rep.n_rescale, 2);
        assert!(rep.tame_relation_holds(10).unwrap());
        let ex = monodromy_extract(&rep).unwrap();
        assert_eq!(ex.n, pm(3, 10, [[0, 0], [63, 0]]));
        let rt = monodromy_roundtrip(&sigma, 3, 10, &c).unwrap();
        assert!(rt.pass());
        assert_eq!(rt.compare_prec, 8);
    }
}
