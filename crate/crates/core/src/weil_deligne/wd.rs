//! Two-dimensional Weil–Deligne representations of `W_{Q_l}`.
//!
//! Split representations are `ρ = diag(χ1, χ2)` with a nilpotent
//! `N = n_scale·E₂₁`, where `E₂₁` sends the first basis vector to the
//! second. With `χ1 = χ2·|.|^{−1}` this `N` satisfies
//! `ρ(Φ)Nρ(Φ)^{−1} = |Φ|·N = (1/l)·N` for a geometric Frobenius `Φ`, which
//! maps to the uniformizer `l`.
//!
//! The Frobenius eigenvalues may be stored as the pair of symmetric
//! functions `(χ1(l)+χ2(l), χ1(l)χ2(l))`; roots are extracted only on
//! demand.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use super::character::{Quasicharacter, UnitCharacter};
use crate::error::{invalid, Error, Result};
use crate::gl2::{double_coset_key, LevelGroup, MatQ};
use crate::gl2::DoubleCosetKey;
use crate::matrix::Matrix;
use crate::scalars::rational::{bigint_from_json, is_prime, prime_factors};
use crate::scalars::{CycScalar, Rational};
use num_traits::ToPrimitive;

/// Frobenius eigenvalue data of a split representation.
#[derive(Clone, Debug, PartialEq)]
pub enum FrobPair {
    Explicit(CycScalar, CycScalar),
    Symmetric { sum: CycScalar, product: CycScalar },
}

impl FrobPair {
    pub fn sum(&self) -> CycScalar {
        match self {
            FrobPair::Explicit(a, b) => a + b,
            FrobPair::Symmetric { sum, .. } => sum.clone(),
        }
    }

    pub fn product(&self) -> CycScalar {
        match self {
            FrobPair::Explicit(a, b) => a * b,
            FrobPair::Symmetric { product, .. } => product.clone(),
        }
    }

    /// `(q1, q2)`, extracting roots of `X² − sum·X + product` when needed.
    pub fn roots(&self) -> Result<(CycScalar, CycScalar)> {
        match self {
            FrobPair::Explicit(a, b) => Ok((a.clone(), b.clone())),
            FrobPair::Symmetric { sum, product } => quadratic_roots(sum, product),
        }
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        match self {
            FrobPair::Explicit(a, b) => FrobPair::Explicit(a * s, b * s),
            FrobPair::Symmetric { sum, product } => {
                FrobPair::Symmetric { sum: sum * s, product: product * &(s * s) }
            }
        }
    }
}

/// Largest conductor `M` of `Q(ζ_M)` that [`sqrt_rational`] will build; beyond
/// it dense arithmetic in the field is too slow to be useful.
pub const MAX_SQRT_CONDUCTOR: u64 = 2000;

/// Square root of a rational inside the cyclotomic tower. It always exists
/// there; `None` means factoring is out of reach or the field it lives in has
/// conductor above [`MAX_SQRT_CONDUCTOR`].
pub fn sqrt_rational(r: &Rational) -> Option<CycScalar> {
    if r.is_zero() {
        return Some(CycScalar::zero());
    }
    // r = num/den = num·den / den²
    let n = r.numer() * r.denom();
    let neg = n < num_bigint::BigInt::zero();
    let mut m = if neg { -n } else { n }.to_u64()?;
    if m > 1_000_000_000_000 {
        return None;
    }
    let mut square = 1u64;
    let mut free = 1u64;
    for p in prime_factors(m) {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    let mut conductor = if neg { 4 } else { 1 };
    for p in prime_factors(free) {
        conductor = crate::scalars::rational::lcm_u64(conductor, crate::scalars::cyclotomic::sqrt_conductor(p));
    }
    if conductor > MAX_SQRT_CONDUCTOR {
        return None;
    }
    let mut out = CycScalar::from_rational(Rational::new(square.into(), r.denom().clone()));
    for p in prime_factors(free) {
        out = out * CycScalar::sqrt_l(p).lift(crate::scalars::cyclotomic::sqrt_conductor(p));
    }
    if neg {
        out = out * CycScalar::root_of_unity(1, 4);
    }
    Some(out)
}

/// Roots of `X² − sX + p`, if the discriminant has a square root we can write.
pub fn quadratic_roots(s: &CycScalar, p: &CycScalar) -> Result<(CycScalar, CycScalar)> {
    let disc = s * s - p * &CycScalar::from_int(4);
    let root = disc.as_rational().and_then(|r| sqrt_rational(&r));
    let root = root.ok_or_else(|| {
        Error::Unsupported(format!("cannot split X² − ({s})X + ({p}) inside the tower"))
    })?;
    let half = CycScalar::from_rational(Rational::new(1.into(), 2.into()));
    Ok(((s + &root) * &half, (s - &root) * &half))
}

/// A two-dimensional Weil–Deligne representation.
#[derive(Clone, Debug, PartialEq)]
pub enum WDRep {
    Split(SplitWD),
    Abstract(AbstractIrred),
}

/// `ρ = diag(χ1, χ2)`, `N = n_scale·E₂₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitWD {
    pub l: u64,
    pub unit1: UnitCharacter,
    pub unit2: UnitCharacter,
    pub frob: FrobPair,
    pub n_scale: CycScalar,
}

/// An irreducible representation supplied through the Hecke action on the
/// `U`-fixed vectors of its local Langlands image, with an unramified twist.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractIrred {
    pub l: u64,
    pub label: String,
    pub level: LevelGroup,
    pub central_char: Quasicharacter,
    /// Matrices of `1_{UgU}` keyed by double coset.
    pub hecke_matrices: BTreeMap<DoubleCosetKey, Matrix<CycScalar>>,
    /// Value at `l` of the unramified twist.
    pub twist: CycScalar,
}

impl AbstractIrred {
    pub fn dim(&self) -> usize {
        self.hecke_matrices.values().next().map_or(0, |m| m.rows())
    }
}

/// The four shapes a 2-dimensional Weil–Deligne representation can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WDClass {
    PrincipalSeries,
    Special,
    Supercuspidal,
    NonGeneric,
}

impl WDClass {
    pub fn name(&self) -> &'static str {
        match self {
            WDClass::PrincipalSeries => "PrincipalSeries",
            WDClass::Special => "Special",
            WDClass::Supercuspidal => "Supercuspidal",
            WDClass::NonGeneric => "NonGeneric",
        }
    }
}

impl SplitWD {
    pub fn new(
        l: u64,
        unit1: UnitCharacter,
        unit2: UnitCharacter,
        frob: FrobPair,
        n_scale: CycScalar,
    ) -> Result<Self> {
        if !is_prime(l) {
            return invalid(format!("l = {l} is not prime"));
        }
        if frob.product().is_zero_elem() {
            return invalid("Frobenius eigenvalues must be nonzero");
        }
        if let FrobPair::Symmetric { .. } = frob {
            if unit1 != unit2 {
                return invalid("symmetric Frobenius data needs equal unit parts");
            }
        }
        let s = SplitWD { l, unit1, unit2, frob, n_scale };
        if !s.n_scale.is_zero_elem() && !s.ratio_is_abs_power(1)? {
            return invalid("nonzero monodromy needs χ1 = χ2·|.|^{-1}");
        }
        Ok(s)
    }

    /// Both characters unramified with the given Frobenius values.
    pub fn unramified(l: u64, frob: FrobPair) -> Result<Self> {
        Self::new(l, UnitCharacter::trivial(l), UnitCharacter::trivial(l), frob, CycScalar::zero())
    }

    /// `χ|.|^{−1} ⊕ χ` with monodromy `n_scale·E₂₁`.
    pub fn special(chi: &Quasicharacter, n_scale: CycScalar) -> Result<Self> {
        let l = chi.l();
        let q1 = &chi.frob * &CycScalar::from_int(l as i64);
        Self::new(l, chi.unit.clone(), chi.unit.clone(), FrobPair::Explicit(q1, chi.frob.clone()), n_scale)
    }

    /// `χ1 = χ2·|.|^{e}` (unit parts equal and `χ1(l) = χ2(l)·l^{−e}`),
    /// tested for `e = ±1` symmetrically when roots are not split.
    pub fn ratio_is_abs_power(&self, e: i64) -> Result<bool> {
        if self.unit1 != self.unit2 {
            return Ok(false);
        }
        let l = CycScalar::from_int(self.l as i64);
        match &self.frob {
            FrobPair::Explicit(a, b) => Ok(if e == 1 {
                a == &(b * &l)
            } else {
                b == &(a * &l)
            }),
            FrobPair::Symmetric { .. } => Ok(self.ratio_is_l_or_inverse()),
        }
    }

    /// `χ1/χ2 ∈ {|.|, |.|^{−1}}`: `l·sum² = (l+1)²·product` with equal unit parts.
    pub fn ratio_is_l_or_inverse(&self) -> bool {
        if self.unit1 != self.unit2 {
            return false;
        }
        let l = CycScalar::from_int(self.l as i64);
        let l1 = CycScalar::from_int(self.l as i64 + 1);
        let s = self.frob.sum();
        &l * &(&s * &s) == &(&l1 * &l1) * &self.frob.product()
    }

    /// `χ1`, `χ2` as quasicharacters (extracting roots if needed).
    pub fn characters(&self) -> Result<(Quasicharacter, Quasicharacter)> {
        let (q1, q2) = self.frob.roots()?;
        Ok((
            Quasicharacter::new(self.unit1.clone(), q1)?,
            Quasicharacter::new(self.unit2.clone(), q2)?,
        ))
    }

    /// For a degenerate pair (ratio `l^{±1}`), the character `χ` with
    /// `{χ1, χ2} = {χ|.|^{−1}, χ}`: `χ(l)` is the smaller-by-`l` root
    /// `sum/(l+1)`.
    pub fn degenerate_base(&self) -> Result<Quasicharacter> {
        let l1 = CycScalar::from_int(self.l as i64 + 1);
        let x = &self.frob.sum() / &l1;
        Quasicharacter::new(self.unit1.clone(), x)
    }

    /// `ρ(Φ)` in the standard basis.
    pub fn rho_frob(&self) -> Result<Matrix<CycScalar>> {
        let (q1, q2) = self.frob.roots()?;
        Ok(Matrix::from_rows(vec![vec![q1, CycScalar::zero()], vec![CycScalar::zero(), q2]]))
    }

    /// `N = n_scale·E₂₁`.
    pub fn monodromy(&self) -> Matrix<CycScalar> {
        let z = CycScalar::zero();
        Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![self.n_scale.clone(), z]])
    }
}

impl WDRep {
    pub fn l(&self) -> u64 {
        match self {
            WDRep::Split(s) => s.l,
            WDRep::Abstract(a) => a.l,
        }
    }

    pub fn classify(&self) -> WDClass {
        match self {
            WDRep::Abstract(_) => WDClass::Supercuspidal,
            WDRep::Split(s) => {
                if !s.n_scale.is_zero_elem() {
                    WDClass::Special
                } else if s.ratio_is_l_or_inverse() {
                    WDClass::NonGeneric
                } else {
                    WDClass::PrincipalSeries
                }
            }
        }
    }

    pub fn twist(&self, eta: &Quasicharacter) -> Result<WDRep> {
        match self {
            WDRep::Split(s) => {
                let frob = s.frob.scale(&eta.frob);
                Ok(WDRep::Split(SplitWD {
                    l: s.l,
                    unit1: s.unit1.mul(&eta.unit),
                    unit2: s.unit2.mul(&eta.unit),
                    frob,
                    n_scale: s.n_scale.clone(),
                }))
            }
            WDRep::Abstract(a) => {
                if !eta.is_unramified() {
                    return Err(Error::Unsupported(
                        "twisting an abstract irreducible representation by a ramified character"
                            .into(),
                    ));
                }
                let mut out = a.clone();
                out.twist = &a.twist * &eta.frob;
                Ok(WDRep::Abstract(out))
            }
        }
    }

    /// The determinant character.
    pub fn det(&self) -> Quasicharacter {
        match self {
            WDRep::Split(s) => Quasicharacter {
                unit: s.unit1.mul(&s.unit2),
                frob: s.frob.product(),
            },
            WDRep::Abstract(a) => Quasicharacter {
                unit: a.central_char.unit.clone(),
                frob: &a.central_char.frob * &(&a.twist * &a.twist),
            },
        }
    }

    /// Frobenius semisimplification; split representations already have
    /// semisimple `ρ`, and abstract ones are irreducible.
    pub fn frob_ss(&self) -> WDRep {
        self.clone()
    }

    pub fn to_json(&self) -> Value {
        match self {
            WDRep::Split(s) => {
                let mut o = Map::new();
                o.insert("variant".into(), json!("split"));
                o.insert("l".into(), json!(s.l));
                match &s.frob {
                    FrobPair::Explicit(a, b) => {
                        o.insert("chi1".into(), json!({"unit": s.unit1.to_json(), "frob": a.to_json()}));
                        o.insert("chi2".into(), json!({"unit": s.unit2.to_json(), "frob": b.to_json()}));
                    }
                    FrobPair::Symmetric { sum, product } => {
                        o.insert("unit".into(), s.unit1.to_json());
                        o.insert("frob_sum".into(), sum.to_json());
                        o.insert("frob_product".into(), product.to_json());
                    }
                }
                o.insert("n_scale".into(), s.n_scale.to_json());
                Value::Object(o)
            }
            WDRep::Abstract(a) => {
                let mats: Vec<Value> = a
                    .hecke_matrices
                    .iter()
                    .map(|(k, m)| {
                        json!({
                            "g": k.representative(a.l).to_string(),
                            "cartan": [k.a, k.b],
                            "matrix": m.to_json(),
                        })
                    })
                    .collect();
                json!({
                    "variant": "abstract",
                    "l": a.l,
                    "label": a.label,
                    "level": a.level.n,
                    "central_char": a.central_char.to_json(),
                    "hecke_matrices": mats,
                    "twist": a.twist.to_json(),
                })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<WDRep> {
        let o = v.as_object().map_or_else(|| invalid("WD representation must be a JSON object"), Ok)?;
        let l = match o.get("l") {
            Some(x) => bigint_from_json(x)?.to_u64().filter(|&l| is_prime(l)),
            None => return invalid("WD representation is missing field `l`"),
        };
        let l = l.map_or_else(|| invalid("field `l` must be a prime"), Ok)?;
        let variant = o.get("variant").and_then(|x| x.as_str());
        match variant {
            Some("split") => {
                let n_scale = match o.get("n_scale") {
                    Some(x) => CycScalar::from_json(x)?,
                    None => CycScalar::zero(),
                };
                if o.contains_key("chi1") || o.contains_key("chi2") {
                    let get = |k: &str| -> Result<Quasicharacter> {
                        match o.get(k) {
                            Some(x) => Quasicharacter::from_json(l, x)
                                .map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}"))),
                            None => invalid(format!("split WD representation is missing field `{k}`")),
                        }
                    };
                    let (c1, c2) = (get("chi1")?, get("chi2")?);
                    Ok(WDRep::Split(SplitWD::new(
                        l,
                        c1.unit,
                        c2.unit,
                        FrobPair::Explicit(c1.frob, c2.frob),
                        n_scale,
                    )?))
                } else {
                    let unit = UnitCharacter::from_json(l, o.get("unit").unwrap_or(&Value::Null))?;
                    let get = |k: &str| -> Result<CycScalar> {
                        match o.get(k) {
                            Some(x) => CycScalar::from_json(x)
                                .map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}"))),
                            None => invalid(format!("split WD representation is missing field `{k}`")),
                        }
                    };
                    let frob = FrobPair::Symmetric { sum: get("frob_sum")?, product: get("frob_product")? };
                    Ok(WDRep::Split(SplitWD::new(l, unit.clone(), unit, frob, n_scale)?))
                }
            }
            Some("abstract") => {
                let n = match o.get("level") {
                    Some(x) => bigint_from_json(x)?.to_u32(),
                    None => return invalid("abstract WD representation is missing field `level`"),
                };
                let n = n.map_or_else(|| invalid("field `level` must be a small integer"), Ok)?;
                let level = LevelGroup::new(l, n)?;
                let central_char = match o.get("central_char") {
                    Some(x) => Quasicharacter::from_json(l, x)?,
                    None => return invalid("abstract WD representation is missing field `central_char`"),
                };
                let twist = match o.get("twist") {
                    Some(x) => CycScalar::from_json(x)?,
                    None => CycScalar::one(),
                };
                if twist.is_zero_elem() {
                    return invalid("field `twist` must be nonzero");
                }
                let mut hecke_matrices = BTreeMap::new();
                let items = o.get("hecke_matrices").and_then(|x| x.as_array());
                let items = items.map_or_else(|| invalid("field `hecke_matrices` must be an array"), Ok)?;
                let mut dim = None;
                for it in items {
                    let g = match it.get("g") {
                        Some(x) => MatQ::from_json(x)?,
                        None => return invalid("each hecke_matrices entry needs field `g`"),
                    };
                    let m = match it.get("matrix") {
                        Some(x) => Matrix::<CycScalar>::from_json(x)?,
                        None => return invalid("each hecke_matrices entry needs field `matrix`"),
                    };
                    if m.rows() != m.cols() || m.rows() == 0 {
                        return invalid("hecke matrices must be square and nonempty");
                    }
                    if *dim.get_or_insert(m.rows()) != m.rows() {
                        return invalid("hecke matrices must all have the same size");
                    }
                    hecke_matrices.insert(double_coset_key(&g, &level), m);
                }
                let label = o.get("label").and_then(|x| x.as_str()).unwrap_or("").to_string();
                Ok(WDRep::Abstract(AbstractIrred { l, label, level, central_char, hecke_matrices, twist }))
            }
            Some(other) => invalid(format!("field `variant` must be \"split\" or \"abstract\", got {other:?}")),
            None => invalid("WD representation is missing field `variant`"),
        }
    }
}

/// Unramified split representation from eigenform data: Frobenius
/// characteristic polynomial `X² − a_l X + χ(l)·l^{k−1}` (or with `+a_l`
/// when `plus_sign` is set).
pub fn wd_from_eigenform(
    l: u64,
    a_l: &CycScalar,
    chi_l: &CycScalar,
    k: i64,
    plus_sign: bool,
) -> Result<WDRep> {
    if chi_l.is_zero_elem() {
        return invalid("chi_l must be nonzero");
    }
    if !is_prime(l) {
        return invalid(format!("l = {l} is not prime"));
    }
    let sum = if plus_sign { -a_l } else { a_l.clone() };
    let product = chi_l * &CycScalar::from_rational(crate::scalars::rational::l_pow(l, k - 1));
    Ok(WDRep::Split(SplitWD::unramified(l, FrobPair::Symmetric { sum, product })?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::{int, rat};

    fn c(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    #[test]
    fn square_roots_respect_the_conductor_bound() {
        for r in [rat(9, 2), rat(-3, 5), int(77)] {
            let s = sqrt_rational(&r).unwrap();
            assert_eq!(&s * &s, CycScalar::from_rational(r));
        }
        // √(3·5·7·11·13) lives in Q(ζ_M) with M = 60060
        assert!(sqrt_rational(&int(15015)).is_none());
        assert!(quadratic_roots(&c(0), &c(-15015)).is_err());
    }

    #[test]
    fn classification_table() {
        let one = WDRep::Split(SplitWD::unramified(2, FrobPair::Explicit(c(1), c(1))).unwrap());
        assert_eq!(one.classify(), WDClass::PrincipalSeries);
        let chi = Quasicharacter::unramified(3, c(5)).unwrap();
        let sp = WDRep::Split(SplitWD::special(&chi, c(1)).unwrap());
        assert_eq!(sp.classify(), WDClass::Special);
        // χ ⊕ χ|.|^{-1} with N = 0
        let ng = SplitWD::unramified(3, FrobPair::Explicit(c(5), c(15))).unwrap();
        assert_eq!(WDRep::Split(ng).classify(), WDClass::NonGeneric);
        // symmetric data with roots {1, l}
        let sym = SplitWD::unramified(3, FrobPair::Symmetric { sum: c(4), product: c(3) }).unwrap();
        assert_eq!(WDRep::Split(sym).classify(), WDClass::NonGeneric);
    }

    #[test]
    fn monodromy_relation_holds() {
        for l in [2u64, 3, 5] {
            let chi = Quasicharacter::unramified(l, c(7)).unwrap();
            let s = SplitWD::special(&chi, CycScalar::from_rational(rat(2, 3))).unwrap();
            let f = s.rho_frob().unwrap();
            let finv = Matrix::from_rows(vec![
                vec![f.get(0, 0).inv().unwrap(), c(0)],
                vec![c(0), f.get(1, 1).inv().unwrap()],
            ]);
            let lhs = f.mul(&s.monodromy()).mul(&finv);
            let rhs = s.monodromy().scale(&CycScalar::from_rational(rat(1, l as i64)));
            assert_eq!(lhs, rhs);
            assert!(s.monodromy().mul(&s.monodromy()).is_zero());
        }
    }

    #[test]
    fn monodromy_needs_ratio() {
        let r = SplitWD::new(
            2,
            UnitCharacter::trivial(2),
            UnitCharacter::trivial(2),
            FrobPair::Explicit(c(1), c(2)),
            c(1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn eigenform_data() {
        let s = wd_from_eigenform(2, &c(-24), &c(1), 12, false).unwrap();
        let WDRep::Split(sp) = &s else { panic!() };
        assert_eq!(sp.frob.sum(), c(-24));
        assert_eq!(sp.frob.product(), c(2048));
        assert_eq!(s.det().frob, c(2048));
        assert!(wd_from_eigenform(2, &c(0), &c(0), 2, false).is_err());
        let s = wd_from_eigenform(2, &c(0), &c(1), 2, false).unwrap();
        let WDRep::Split(sp) = &s else { panic!() };
        let (a, b) = sp.frob.roots().unwrap();
        assert_eq!(&a + &b, c(0));
        assert_eq!(&a * &b, c(2));
    }

    #[test]
    fn twisting() {
        let chi = Quasicharacter::unramified(3, c(2)).unwrap();
        let eta = Quasicharacter::unramified(3, c(5)).unwrap();
        let s = WDRep::Split(SplitWD::special(&chi, c(1)).unwrap());
        let t = s.twist(&eta).unwrap();
        assert_eq!(t, WDRep::Split(SplitWD::special(&chi.mul(&eta), c(1)).unwrap()));
        assert_eq!(s.twist(&Quasicharacter::trivial(3)).unwrap(), s);
    }

    #[test]
    fn square_roots_of_rationals() {
        for r in [rat(9, 2), rat(-3, 1), rat(12, 1), int(-1), rat(5, 7)] {
            let s = sqrt_rational(&r).unwrap();
            assert_eq!(&s * &s, CycScalar::from_rational(r));
        }
    }
}
