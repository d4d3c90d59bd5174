//! One-parameter families of Weil–Deligne representations over the ring of
//! rational functions in `T`, their Hecke traces, specialization, and the
//! points where the pointwise representation degenerates.
//!
//! Principal-series families carry the symmetric functions of the two
//! Frobenius eigenvalues, so family traces are computed without splitting
//! them and land in the base ring. Pointwise representations are mapped
//! through the modified correspondence, which stays a principal series at
//! degenerate points.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::gl2::{double_coset_key, MatQ};
use crate::langlands::{ll_map, Normalization};
use crate::scalars::rational::{bigint_from_json, is_prime};
use crate::scalars::{CycScalar, Poly, RatFunc, Rational};
use crate::smooth_reps::models::{power_sums, symmetric_reduce, SteinbergModel};
use crate::smooth_reps::{det_line_laurent, induced_action_laurent, HeckeElement, Laurent2};
use crate::weil_deligne::wd::quadratic_roots;
use crate::weil_deligne::{AbstractIrred, FrobPair, Quasicharacter, SplitWD, UnitCharacter, WDClass, WDRep};

/// A family of Weil–Deligne representations parameterized by `T`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyWD {
    /// `χ1 ⊕ χ2` with common unit part and `χ1(l) + χ2(l) = sum`,
    /// `χ1(l)·χ2(l) = product`; no monodromy.
    PS { l: u64, unit: UnitCharacter, sum: RatFunc, product: RatFunc },
    /// `χ|.|^{−1} ⊕ χ` with `χ(l) = chi_frob` and `N = n_poly(T)·E₂₁`.
    Special { l: u64, unit: UnitCharacter, chi_frob: RatFunc, n_poly: Poly },
    /// A fixed irreducible representation twisted by the unramified
    /// character with value `twist_frob` at `l`.
    SCTwist { base: AbstractIrred, twist_frob: RatFunc },
}

/// Why a point is excluded from the generic behaviour of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BadTag {
    /// Ratio of the Frobenius eigenvalues is `l^{±1}`.
    RatioLPower,
    /// The monodromy operator vanishes.
    MonodromyVanishes,
}

impl BadTag {
    pub fn name(&self) -> &'static str {
        match self {
            BadTag::RatioLPower => "ratio l^(±1)",
            BadTag::MonodromyVanishes => "monodromy vanishes",
        }
    }
}

/// The bad locus: explicit roots (in the coefficient tower when
/// expressible) plus any factor whose roots are not expressible.
#[derive(Clone, Debug, PartialEq)]
pub struct BadPoints {
    pub defining: Option<(BadTag, Poly)>,
    pub points: Vec<(CycScalar, BadTag)>,
    pub unresolved: Option<(BadTag, Poly)>,
}

impl BadPoints {
    fn empty() -> Self {
        BadPoints { defining: None, points: Vec::new(), unresolved: None }
    }

    pub fn contains(&self, t: &CycScalar) -> Option<BadTag> {
        if let Some((tag, p)) = &self.defining {
            if p.eval(t).is_zero_elem() {
                return Some(*tag);
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        json!({
            "defining_polynomial": self.defining.as_ref().map(|(_, p)| p.to_string()),
            "tag": self.defining.as_ref().map(|(t, _)| t.name()),
            "points": self.points.iter().map(|(x, t)| json!({"t": x.to_json(), "display": x.to_string(), "tag": t.name()})).collect::<Vec<_>>(),
            "unresolved_factor": self.unresolved.as_ref().map(|(_, p)| p.to_string()),
        })
    }
}

fn scalar(n: i64) -> CycScalar {
    CycScalar::from_int(n)
}

fn rf_const(c: CycScalar) -> RatFunc {
    RatFunc::constant(c)
}

impl FamilyWD {
    pub fn ps(l: u64, unit: UnitCharacter, sum: RatFunc, product: RatFunc) -> Result<Self> {
        check_prime(l, unit.l())?;
        if product.is_zero() {
            return invalid("the product of the Frobenius values must not vanish identically");
        }
        Ok(FamilyWD::PS { l, unit, sum, product })
    }

    pub fn special(l: u64, unit: UnitCharacter, chi_frob: RatFunc, n_poly: Poly) -> Result<Self> {
        check_prime(l, unit.l())?;
        if chi_frob.is_zero() {
            return invalid("χ(l) must not vanish identically");
        }
        Ok(FamilyWD::Special { l, unit, chi_frob, n_poly })
    }

    pub fn sc_twist(base: AbstractIrred, twist_frob: RatFunc) -> Result<Self> {
        if twist_frob.is_zero() {
            return invalid("the twist must not vanish identically");
        }
        Ok(FamilyWD::SCTwist { base, twist_frob })
    }

    pub fn l(&self) -> u64 {
        match self {
            FamilyWD::PS { l, .. } | FamilyWD::Special { l, .. } => *l,
            FamilyWD::SCTwist { base, .. } => base.l,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            FamilyWD::PS { .. } => "ps",
            FamilyWD::Special { .. } => "special",
            FamilyWD::SCTwist { .. } => "sc_twist",
        }
    }

    /// The representation at `T = t0`.
    pub fn specialize(&self, t0: &CycScalar) -> Result<WDRep> {
        match self {
            FamilyWD::PS { l, unit, sum, product } => {
                let (s, p) = (sum.eval(t0)?, product.eval(t0)?);
                if p.is_zero_elem() {
                    return Err(Error::PoleAtPoint(format!(
                        "a Frobenius value vanishes at T = {t0} (product {product})"
                    )));
                }
                let frob = FrobPair::Symmetric { sum: s, product: p };
                Ok(WDRep::Split(SplitWD::new(*l, unit.clone(), unit.clone(), frob, CycScalar::zero())?))
            }
            FamilyWD::Special { unit, chi_frob, n_poly, .. } => {
                let x = chi_frob.eval(t0)?;
                if x.is_zero_elem() {
                    return Err(Error::PoleAtPoint(format!("χ(l) = {chi_frob} vanishes at T = {t0}")));
                }
                let chi = Quasicharacter::new(unit.clone(), x)?;
                Ok(WDRep::Split(SplitWD::special(&chi, n_poly.eval(t0))?))
            }
            FamilyWD::SCTwist { base, twist_frob } => {
                let x = twist_frob.eval(t0)?;
                if x.is_zero_elem() {
                    return Err(Error::PoleAtPoint(format!("the twist {twist_frob} vanishes at T = {t0}")));
                }
                let mut b = base.clone();
                b.twist = &b.twist * &x;
                Ok(WDRep::Abstract(b))
            }
        }
    }

    /// The trace of `h` on the `U`-fixed vectors of the family, as an
    /// element of the base ring. For `Special` families this is the trace on
    /// the Steinberg constituent, also at points where monodromy vanishes.
    pub fn trace(&self, h: &HeckeElement) -> Result<RatFunc> {
        if h.level.l != self.l() {
            return invalid("Hecke element and family use different primes");
        }
        match self {
            FamilyWD::PS { l, unit, sum, product } => {
                let lp = induced_action_laurent(unit, unit, h)?;
                let t = diagonal_sum(&lp);
                // η_i = χ_i|.|^{1/2}: sum/√l and product/l
                let s = sum.scale(&CycScalar::sqrt_l_pow(*l, -1));
                let p = product.scale(&CycScalar::from_rational(Rational::new(1.into(), (*l).into())));
                eval_symmetric_family(&t, &s, &p)
            }
            FamilyWD::Special { l, unit, chi_frob, .. } => {
                // Steinberg(χ) = B(χ|.|^{−1/2}, χ|.|^{1/2}) minus the line χ∘det.
                let lp = induced_action_laurent(unit, unit, h)?;
                let t = diagonal_sum(&lp);
                let mut out = RatFunc::from_int(0);
                for ((a, d), c) in t.terms() {
                    // x1 = χ(l)·√l, x2 = χ(l)/√l
                    let coeff = c * &CycScalar::sqrt_l_pow(*l, a - d);
                    out = out.add(&chi_frob.pow(a + d)?.scale(&coeff));
                }
                for (e, c) in det_line_laurent(unit, h)? {
                    out = out.sub(&chi_frob.pow(e)?.scale(&c));
                }
                Ok(out)
            }
            FamilyWD::SCTwist { base, twist_frob } => {
                if h.level != base.level {
                    return Err(Error::NotApplicable(format!(
                        "supplied Hecke data is at level {}^{}, not {}^{}",
                        base.l, base.level.n, h.level.l, h.level.n
                    )));
                }
                let tw = rf_const(base.twist.clone()).mul(twist_frob);
                let id_key = double_coset_key(&MatQ::identity(), &base.level);
                let dim = base.dim().max(1) as i64;
                let mut out = RatFunc::from_int(0);
                for (k, c) in h.terms() {
                    let tr = match base.hecke_matrices.get(k) {
                        Some(m) => m.trace(),
                        None if *k == id_key => scalar(dim),
                        None => {
                            return Err(Error::NotApplicable(format!(
                                "no Hecke matrix supplied for the double coset of {}",
                                k.representative(base.l)
                            )))
                        }
                    };
                    out = out.add(&tw.pow(k.a + k.b)?.scale(&(c * &tr)));
                }
                Ok(out)
            }
        }
    }

    /// Points where the pointwise representation leaves the generic shape.
    pub fn bad_points(&self) -> Result<BadPoints> {
        match self {
            FamilyWD::PS { l, sum, product, .. } => {
                // ratio r = l^{±1}  ⇔  sum²/product = r + 2 + 1/r = (l+1)²/l
                let lq = scalar(*l as i64);
                let l1sq = scalar((*l as i64 + 1) * (*l as i64 + 1));
                let cond = sum.mul(sum).scale(&lq).sub(&product.scale(&l1sq));
                Ok(locus(cond.num(), BadTag::RatioLPower))
            }
            FamilyWD::Special { n_poly, .. } => Ok(locus(n_poly, BadTag::MonodromyVanishes)),
            FamilyWD::SCTwist { .. } => Ok(BadPoints::empty()),
        }
    }

    /// Roots of the denominators: points where the family is undefined.
    pub fn poles(&self) -> Vec<Poly> {
        let dens: Vec<&Poly> = match self {
            FamilyWD::PS { sum, product, .. } => vec![sum.den(), product.den(), product.num()],
            FamilyWD::Special { chi_frob, .. } => vec![chi_frob.den(), chi_frob.num()],
            FamilyWD::SCTwist { twist_frob, .. } => vec![twist_frob.den(), twist_frob.num()],
        };
        dens.into_iter().filter(|p| p.degree().unwrap_or(0) > 0).cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        match self {
            FamilyWD::PS { l, unit, sum, product } => json!({
                "variant": "ps", "l": l, "unit": unit.to_json(),
                "sum": sum.to_string(), "product": product.to_string(),
            }),
            FamilyWD::Special { l, unit, chi_frob, n_poly } => json!({
                "variant": "special", "l": l, "unit": unit.to_json(),
                "chi_frob": chi_frob.to_string(), "n_poly": n_poly.to_string(),
            }),
            FamilyWD::SCTwist { base, twist_frob } => json!({
                "variant": "sc_twist",
                "base": WDRep::Abstract(base.clone()).to_json(),
                "twist_frob": twist_frob.to_string(),
            }),
        }
    }

    /// Parses `{"variant": "ps" | "special" | "sc_twist", ...}` with
    /// polynomial literals in `T` such as `"T+1"` or `"(T^2-1)/(T+3)"`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| match v.get(k) {
            Some(x) => Ok(x),
            None => invalid(format!("family is missing field `{k}`")),
        };
        let func = |k: &str| -> Result<RatFunc> {
            match field(k)? {
                Value::String(s) => RatFunc::parse(s).map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}"))),
                other => RatFunc::from_json(other).map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}"))),
            }
        };
        let variant = field("variant")?.as_str();
        let variant = variant.map_or_else(|| invalid("field `variant` must be a string"), Ok)?;
        if variant == "sc_twist" {
            let base = match WDRep::from_json(field("base")?)? {
                WDRep::Abstract(a) => a,
                WDRep::Split(_) => return invalid("field `base` must describe an irreducible representation"),
            };
            return Self::sc_twist(base, func("twist_frob")?);
        }
        let l = bigint_from_json(field("l")?)?.to_u64();
        let l = l.filter(|&l| is_prime(l)).map_or_else(|| invalid("field `l` must be a prime"), Ok)?;
        let unit = match v.get("unit") {
            Some(u) => UnitCharacter::from_json(l, u)?,
            None => UnitCharacter::trivial(l),
        };
        match variant {
            "ps" => Self::ps(l, unit, func("sum")?, func("product")?),
            "special" => {
                let n = func("n_poly")?;
                let n = n.as_poly().cloned();
                let n = n.map_or_else(|| invalid("field `n_poly` must be a polynomial"), Ok)?;
                Self::special(l, unit, func("chi_frob")?, n)
            }
            other => invalid(format!("unknown family variant {other:?} (expected ps, special or sc_twist)")),
        }
    }
}

fn check_prime(l: u64, unit_l: u64) -> Result<()> {
    if !is_prime(l) {
        return invalid(format!("l = {l} is not prime"));
    }
    if unit_l != l {
        return invalid("unit character and family use different primes");
    }
    Ok(())
}

fn diagonal_sum(lp: &[Vec<Laurent2>]) -> Laurent2 {
    lp.iter().enumerate().fold(Laurent2::default(), |acc, (i, row)| acc.add(&row[i]))
}

/// `Σ c·p^e·P_k(s, p)` evaluated in the family ring.
fn eval_symmetric_family(t: &Laurent2, s: &RatFunc, p: &RatFunc) -> Result<RatFunc> {
    let terms = symmetric_reduce(t)?;
    let kmax = terms.iter().map(|t| t.k).max().unwrap_or(0);
    let ps = power_sums(
        s,
        p,
        kmax,
        RatFunc::from_int(2),
        RatFunc::from_int(1),
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    );
    let mut out = RatFunc::from_int(0);
    for term in terms {
        out = out.add(&p.pow(term.p_exp)?.mul(&ps[term.k as usize]).scale(&term.coeff));
    }
    Ok(out)
}

/// Roots of `poly` in the coefficient tower: rational roots, then the roots
/// of a remaining quadratic factor when its discriminant is rational.
fn locus(poly: &Poly, tag: BadTag) -> BadPoints {
    let mut out = BadPoints::empty();
    if poly.is_zero() {
        // every point is bad; report the zero polynomial
        out.defining = Some((tag, poly.clone()));
        return out;
    }
    if poly.degree() == Some(0) {
        return out;
    }
    out.defining = Some((tag, poly.monic()));
    let Some((roots, rest)) = poly.rational_roots() else {
        out.unresolved = Some((tag, poly.monic()));
        return out;
    };
    for r in roots {
        out.points.push((CycScalar::from_rational(r), tag));
    }
    match rest.degree() {
        Some(0) | None => {}
        Some(2) => {
            let m = rest.monic();
            let (b, c) = (&m.coeffs()[1], &m.coeffs()[0]);
            match quadratic_roots(&-b, c) {
                Ok((x, y)) => {
                    out.points.push((x, tag));
                    out.points.push((y, tag));
                }
                Err(_) => out.unresolved = Some((tag, m)),
            }
        }
        Some(_) => out.unresolved = Some((tag, rest.monic())),
    }
    out
}

/// The trace of `h` on the model of the pointwise representation at `t0`
/// under the modified correspondence.
pub fn pointwise_trace(fam: &FamilyWD, h: &HeckeElement, t0: &CycScalar) -> Result<CycScalar> {
    let sigma = fam.specialize(t0)?;
    ll_map(&sigma, Normalization::Modified)?.model(h.level)?.trace(h)
}

/// The outcome at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub enum PointReport {
    /// `family(t0) = pointwise(t0)` was checked.
    Good { t: CycScalar, family: CycScalar, pointwise: CycScalar },
    /// At a degenerate point: the family value against the constituent it
    /// should match, and the full-model identity.
    Bad {
        t: CycScalar,
        tag: BadTag,
        family: CycScalar,
        constituent: CycScalar,
        full_model: CycScalar,
        correction: CycScalar,
    },
    Pole { t: CycScalar, reason: String },
}

impl PointReport {
    pub fn pass(&self) -> bool {
        match self {
            PointReport::Good { family, pointwise, .. } => family == pointwise,
            PointReport::Bad { family, constituent, full_model, correction, .. } => {
                family == constituent && full_model == &(family + correction)
            }
            PointReport::Pole { .. } => true,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PointReport::Good { t, family, pointwise } => json!({
                "t": t.to_json(), "status": "good", "family": family.to_json(),
                "pointwise": pointwise.to_json(), "pass": self.pass(),
            }),
            PointReport::Bad { t, tag, family, constituent, full_model, correction } => json!({
                "t": t.to_json(), "status": "bad", "tag": tag.name(), "family": family.to_json(),
                "constituent": constituent.to_json(), "full_model": full_model.to_json(),
                "correction": correction.to_json(), "pass": self.pass(),
            }),
            PointReport::Pole { t, reason } => json!({"t": t.to_json(), "status": "pole", "reason": reason}),
        }
    }
}

/// Result of comparing a family trace with pointwise traces.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializationReport {
    pub family_trace: RatFunc,
    pub points: Vec<PointReport>,
    /// Matches against externally supplied `(t, trace)` pairs.
    pub external: Vec<(CycScalar, CycScalar, CycScalar)>,
    /// `deg(num) + deg(den) + 1`: this many agreeing good points force two
    /// such functions to coincide.
    pub needed_points: usize,
}

impl SpecializationReport {
    pub fn good_matches(&self) -> usize {
        self.points.iter().filter(|p| matches!(p, PointReport::Good { .. }) && p.pass()).count()
    }

    /// Whether the good matches alone pin the family trace down.
    pub fn determined(&self) -> bool {
        self.good_matches() >= self.needed_points
    }

    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.pass()) && self.external.iter().all(|(_, a, b)| a == b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family_trace": self.family_trace.to_string(),
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "external": self.external.iter().map(|(t, f, e)| json!({
                "t": t.to_json(), "family": f.to_json(), "supplied": e.to_json(), "pass": f == e,
            })).collect::<Vec<_>>(),
            "good_matches": self.good_matches(),
            "needed_points": self.needed_points,
            "determined": self.determined(),
            "pass": self.all_pass(),
        })
    }
}

/// Compares the family trace of `h` with pointwise traces at `samples`, and
/// with externally supplied `(t, trace)` pairs.
pub fn check_specialization(
    fam: &FamilyWD,
    h: &HeckeElement,
    samples: &[CycScalar],
    external: &[(CycScalar, CycScalar)],
) -> Result<SpecializationReport> {
    let family_trace = fam.trace(h)?;
    let bad = fam.bad_points()?;
    let mut points = Vec::with_capacity(samples.len());
    for t in samples {
        let family = match family_trace.eval(t) {
            Ok(v) => v,
            Err(e) => {
                points.push(PointReport::Pole { t: t.clone(), reason: e.to_string() });
                continue;
            }
        };
        let sigma = match fam.specialize(t) {
            Ok(s) => s,
            Err(e @ Error::PoleAtPoint(_)) => {
                points.push(PointReport::Pole { t: t.clone(), reason: e.to_string() });
                continue;
            }
            Err(e) => return Err(e),
        };
        points.push(match bad.contains(t) {
            None => PointReport::Good { t: t.clone(), family, pointwise: pointwise_trace(fam, h, t)? },
            Some(tag) => bad_point_report(fam, h, t, tag, family, &sigma)?,
        });
    }
    let mut ext = Vec::new();
    for (t, v) in external {
        ext.push((t.clone(), family_trace.eval(t)?, v.clone()));
    }
    let needed_points = family_trace.num().degree().unwrap_or(0) + family_trace.den().degree().unwrap_or(0) + 1;
    Ok(SpecializationReport { family_trace, points, external: ext, needed_points })
}

fn bad_point_report(
    fam: &FamilyWD,
    h: &HeckeElement,
    t: &CycScalar,
    tag: BadTag,
    family: CycScalar,
    sigma: &WDRep,
) -> Result<PointReport> {
    let full_model = ll_map(sigma, Normalization::Modified)?.model(h.level)?.trace(h)?;
    let (constituent, correction) = match (fam, sigma) {
        (FamilyWD::Special { .. }, WDRep::Split(s)) => {
            // The family value is the trace on the Steinberg submodule; the
            // reducible principal series adds the line χ∘det.
            let st = SteinbergModel::new(h.level, s.degenerate_base()?)?;
            (st.act(h)?.trace(), st.line_trace(h)?)
        }
        _ => {
            // A principal-series family at ratio l^{±1}: the pointwise
            // reducible principal series has the same trace as the family.
            debug_assert!(sigma.classify() == WDClass::NonGeneric);
            (full_model.clone(), CycScalar::zero())
        }
    };
    Ok(PointReport::Bad { t: t.clone(), tag, family, constituent, full_model, correction })
}

/// Integer sample points `start, start+1, …`.
pub fn integer_points(start: i64, count: usize) -> Vec<CycScalar> {
    (0..count as i64).map(|i| scalar(start + i)).collect()
}

/// Family traces of several operators at once, keyed by name.
pub fn traces(fam: &FamilyWD, ops: &[(String, HeckeElement)]) -> Result<BTreeMap<String, RatFunc>> {
    ops.iter().map(|(n, h)| Ok((n.clone(), fam.trace(h)?))).collect()
}

impl FamilyWD {
    /// The constant family at a split representation with rational data.
    pub fn constant_ps(l: u64, sum: CycScalar, product: CycScalar) -> Result<Self> {
        Self::ps(l, UnitCharacter::trivial(l), rf_const(sum), rf_const(product))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::LevelGroup;
    use crate::matrix::Matrix;
    use crate::smooth_reps::InducedModel;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn lv(l: u64, n: u32) -> LevelGroup {
        LevelGroup::new(l, n).unwrap()
    }

    fn ps(l: u64, sum: &str, product: &str) -> FamilyWD {
        FamilyWD::ps(l, UnitCharacter::trivial(l), rf(sum), rf(product)).unwrap()
    }

    fn mixed(level: LevelGroup) -> HeckeElement {
        let l = level.l;
        HeckeElement::t_l(level)
            .add(&HeckeElement::z_l(level).scale(&scalar(3)))
            .unwrap()
            .add(&HeckeElement::basis(level, &MatQ::diag_l(l, 2, 0)).scale(&scalar(-2)))
            .unwrap()
    }

    #[test]
    fn spherical_t_l_is_the_sum() {
        let fam = ps(2, "T+1", "T");
        let t = fam.trace(&HeckeElement::t_l(lv(2, 0))).unwrap();
        assert_eq!(t, rf("T+1"));
        let z = fam.trace(&HeckeElement::z_l(lv(2, 0))).unwrap();
        // central character η1·η2 = χ1·χ2·|.|
        assert_eq!(z, rf("T/2"));
    }

    #[test]
    fn ps_family_matches_explicit_induced_model() {
        // roots 1 and T are rational, so the pointwise model can be built
        // from explicit characters without going through symmetric data
        for (l, n) in [(2u64, 0u32), (2, 1), (3, 1)] {
            let level = lv(l, n);
            let h = mixed(level);
            let fam = ps(l, "T+1", "T");
            let ft = fam.trace(&h).unwrap();
            for t0 in integer_points(-9, 20) {
                if t0.is_zero_elem() {
                    continue;
                }
                let eta1 = Quasicharacter::unramified(l, scalar(1)).unwrap().shift_half(1);
                let eta2 = Quasicharacter::unramified(l, t0.clone()).unwrap().shift_half(1);
                let model = InducedModel::new(level, eta1, eta2).unwrap();
                assert_eq!(ft.eval(&t0).unwrap(), model.act(&h).unwrap().trace(), "l={l} n={n} t={t0}");
            }
        }
    }

    #[test]
    fn specialization_report_ps() {
        let level = lv(3, 1);
        let fam = ps(3, "T^2+1", "2*T");
        let h = mixed(level);
        let rep = check_specialization(&fam, &h, &integer_points(1, 20), &[]).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json());
        assert!(rep.determined());
    }

    #[test]
    fn ps_bad_points_quadratic() {
        let fam = ps(2, "T", "1");
        let bad = fam.bad_points().unwrap();
        let (_, p) = bad.defining.clone().unwrap();
        assert_eq!(p, RatFunc::parse("T^2-9/2").unwrap().as_poly().unwrap().clone());
        assert!(bad.unresolved.is_none());
        assert_eq!(bad.points.len(), 2);
        let r = CycScalar::sqrt_l(2).scale(&Rational::new(3.into(), 2.into()));
        assert!(bad.points.iter().any(|(x, _)| x == &r));
        for (x, _) in &bad.points {
            let sigma = fam.specialize(x).unwrap();
            assert_eq!(sigma.classify(), WDClass::NonGeneric);
        }
    }

    #[test]
    fn special_family_at_vanishing_monodromy() {
        let level = lv(3, 1);
        let fam = FamilyWD::special(3, UnitCharacter::trivial(3), rf("T"), RatFunc::parse("T-2").unwrap().as_poly().unwrap().clone()).unwrap();
        let bad = fam.bad_points().unwrap();
        assert_eq!(bad.points, vec![(scalar(2), BadTag::MonodromyVanishes)]);
        let h = mixed(level);
        let rep = check_specialization(&fam, &h, &integer_points(1, 6), &[]).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json());
        let at_bad = rep.points.iter().find(|p| matches!(p, PointReport::Bad { .. })).unwrap();
        if let PointReport::Bad { full_model, family, correction, .. } = at_bad {
            assert!(!correction.is_zero_elem());
            assert_ne!(full_model, family);
        }
        // the Steinberg model has rank one less than the principal series
        let st = SteinbergModel::new(level, Quasicharacter::unramified(3, scalar(5)).unwrap()).unwrap();
        assert_eq!(st.rank() + 1, st.induced.rank());
    }

    #[test]
    fn sc_twist_traces() {
        let level = lv(2, 2);
        let key = double_coset_key(&MatQ::diag_l(2, 1, 0), &level);
        let mut hm = BTreeMap::new();
        hm.insert(key, Matrix::from_rows(vec![vec![scalar(0), scalar(1)], vec![scalar(4), scalar(5)]]));
        let base = AbstractIrred {
            l: 2,
            label: "toy".into(),
            level,
            central_char: Quasicharacter::unramified(2, scalar(1)).unwrap(),
            hecke_matrices: hm,
            twist: scalar(1),
        };
        let fam = FamilyWD::sc_twist(base, rf("T")).unwrap();
        let h = HeckeElement::t_l(level).add(&HeckeElement::identity(level).scale(&scalar(7))).unwrap();
        assert_eq!(fam.trace(&h).unwrap(), rf("5*T+14"));
        let rep = check_specialization(&fam, &h, &integer_points(1, 5), &[]).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json());
        assert!(fam.bad_points().unwrap().points.is_empty());
    }

    #[test]
    fn poles_are_reported() {
        let fam = ps(2, "1/(T-1)", "T");
        let h = HeckeElement::t_l(lv(2, 0));
        let rep = check_specialization(&fam, &h, &integer_points(0, 3), &[]).unwrap();
        assert!(matches!(rep.points[0], PointReport::Pole { .. }));
        assert!(matches!(rep.points[1], PointReport::Pole { .. }));
        assert!(matches!(rep.points[2], PointReport::Good { .. }));
        assert!(fam.specialize(&scalar(1)).is_err());
    }

    #[test]
    fn external_values_are_compared() {
        let fam = ps(2, "T+1", "T");
        let h = HeckeElement::t_l(lv(2, 0));
        let ext = [(scalar(3), scalar(4)), (scalar(5), scalar(7))];
        let rep = check_specialization(&fam, &h, &[], &ext).unwrap();
        assert!(!rep.all_pass());
        assert_eq!(rep.external[0].1, rep.external[0].2);
    }

    #[test]
    fn json_roundtrip() {
        let fams = [
            ps(2, "T+1", "T"),
            FamilyWD::special(5, UnitCharacter::trivial(5), rf("T^2+1"), Poly::t()).unwrap(),
        ];
        for f in fams {
            assert_eq!(FamilyWD::from_json(&f.to_json()).unwrap(), f);
        }
        let v = json!({"variant": "ps", "l": 2, "sum": "T+1", "product": "T"});
        assert_eq!(FamilyWD::from_json(&v).unwrap(), ps(2, "T+1", "T"));
        assert!(FamilyWD::from_json(&json!({"variant": "ps", "l": 4, "sum": "T", "product": "1"})).is_err());
        assert!(FamilyWD::from_json(&json!({"variant": "ps", "l": 2, "sum": "T", "product": "0"})).is_err());
    }
}
