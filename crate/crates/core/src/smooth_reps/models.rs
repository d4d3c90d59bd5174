//! Finite models of the `U`-fixed vectors of smooth representations, with
//! the Hecke action `(h·f)(x) = Σ_t c_t·f(x·g_t)` for `h = Σ_t c_t·1_{g_t U}`.
//!
//! Matrices act on columns: entry `(i, j)` is the coefficient of `f_i` in
//! `h·f_j`, so `act(h1 * h2) = act(h1)·act(h2)`.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::hecke::HeckeElement;
use crate::error::{invalid, Error, Result};
use crate::gl2::cosets::{flag_class, flag_reps};
use crate::gl2::{iwasawa_decompose, LevelGroup, MatQ};
use crate::matrix::Matrix;
use crate::scalars::rational::{bigint_from_json, valuation};
use crate::scalars::CycScalar;
use crate::weil_deligne::character::unit_residue;
use crate::weil_deligne::{AbstractIrred, FrobPair, Quasicharacter, UnitCharacter, WDRep};

/// A Laurent polynomial in two variables with cyclotomic coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent2 {
    terms: BTreeMap<(i64, i64), CycScalar>,
}

impl Laurent2 {
    pub fn add_term(&mut self, e: (i64, i64), c: CycScalar) {
        let sum = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero_elem() {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), CycScalar> {
        &self.terms
    }

    pub fn eval(&self, x1: &CycScalar, x2: &CycScalar) -> CycScalar {
        let mut out = CycScalar::zero();
        for ((a, b), c) in &self.terms {
            out += &(c * &(x1.pow(*a) * x2.pow(*b)));
        }
        out
    }
}

fn check_level(h: &HeckeElement, level: &LevelGroup) -> Result<()> {
    if h.level != *level {
        return invalid(format!(
            "Hecke element at level {}^{} applied to a model at level {}^{}",
            h.level.l, h.level.n, level.l, level.n
        ));
    }
    Ok(())
}

fn check_conductor(c: u32, level: &LevelGroup, what: &str) -> Result<()> {
    if c > level.n {
        return Err(Error::LevelTooSmall(format!(
            "{what} has conductor {}^{c} but the level is {}^{}",
            level.l, level.l, level.n
        )));
    }
    Ok(())
}

/// The action of `h` on the induced model with inducing unit parts
/// `(unit1, unit2)`, as Laurent polynomials in `x1 = η1(l)`, `x2 = η2(l)`.
pub fn induced_action_laurent(
    unit1: &UnitCharacter,
    unit2: &UnitCharacter,
    h: &HeckeElement,
) -> Result<Vec<Vec<Laurent2>>> {
    let level = h.level;
    let l = level.l;
    check_conductor(unit1.conductor(), &level, "η1")?;
    check_conductor(unit2.conductor(), &level, "η2")?;
    let reps = flag_reps(l, level.n);
    let r = reps.len();
    let mut out = vec![vec![Laurent2::default(); r]; r];
    let cosets = h.left_cosets();
    for (i, w) in reps.iter().enumerate() {
        for (g, c) in &cosets {
            let x = w.mul(g);
            let (b, k) = iwasawa_decompose(&x, l);
            let alpha = valuation(b.entry(0, 0), l);
            let delta = valuation(b.entry(1, 1), l);
            let (j, p11, p22) = flag_class(&k, &level);
            // b = diag(l^α u1, l^δ u2)·(unipotent) with units u1, u2
            let (u1, u2) = if level.n == 0 {
                (1, 1)
            } else {
                let m = level.modulus();
                let a1 = unit_residue(b.entry(0, 0), l, level.n);
                let a2 = unit_residue(b.entry(1, 1), l, level.n);
                ((a1 as u128 * p11 as u128 % m as u128) as u64, (a2 as u128 * p22 as u128 % m as u128) as u64)
            };
            let v = unit1.eval_residue(u1, level.n)?
                * unit2.eval_residue(u2, level.n)?
                * CycScalar::sqrt_l_pow(l, -(alpha - delta))
                * c;
            out[i][j].add_term((alpha, delta), v);
        }
    }
    Ok(out)
}

/// `Σ_t c_t·χ(det g_t)` as a Laurent polynomial in `X = χ(l)`: the
/// eigenvalue of `h` on the line spanned by `χ∘det`.
pub fn det_line_laurent(unit: &UnitCharacter, h: &HeckeElement) -> Result<BTreeMap<i64, CycScalar>> {
    check_conductor(unit.conductor(), &h.level, "χ")?;
    let mut out: BTreeMap<i64, CycScalar> = BTreeMap::new();
    for (g, c) in h.left_cosets() {
        let d = g.det();
        let v = valuation(d, h.level.l);
        let u = d / crate::scalars::rational::l_pow(h.level.l, v);
        let val = unit.eval(&u)? * c;
        let e = out.entry(v).or_insert_with(CycScalar::zero);
        *e += &val;
    }
    out.retain(|_, c| !c.is_zero_elem());
    Ok(out)
}

/// `Σ c·p^e·P_k(s, p)` form of a symmetric Laurent polynomial in `(x1, x2)`,
/// where `s = x1 + x2`, `p = x1·x2`, `P_0 = 1` and `P_k = x1^k + x2^k` for
/// `k ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTerm {
    pub coeff: CycScalar,
    pub p_exp: i64,
    pub k: u64,
}

/// Rewrites a Laurent polynomial symmetric under `x1 ↔ x2` in terms of the
/// elementary symmetric functions.
pub fn symmetric_reduce(f: &Laurent2) -> Result<Vec<SymTerm>> {
    let mut out = Vec::new();
    for ((a, b), c) in f.terms() {
        if a < b {
            continue;
        }
        if a > b && f.terms().get(&(*b, *a)) != Some(c) {
            return Err(Error::InconsistentInput(
                "expression is not symmetric in the two Frobenius values".into(),
            ));
        }
        out.push(SymTerm { coeff: c.clone(), p_exp: *b, k: (a - b) as u64 });
    }
    if f.terms().keys().any(|(a, b)| a < b && !f.terms().contains_key(&(*b, *a))) {
        return Err(Error::InconsistentInput(
            "expression is not symmetric in the two Frobenius values".into(),
        ));
    }
    Ok(out)
}

/// Power sums `P_0 = 1, P_1, …, P_k` from `s` and `p` by Newton's identity
/// `P_k = s·P_{k−1} − p·P_{k−2}` (with `x1^0 + x2^0 = 2` inside the recursion).
pub fn power_sums<T: Clone>(
    s: &T,
    p: &T,
    k: u64,
    two: T,
    one: T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> Vec<T> {
    let mut raw = vec![two, s.clone()];
    while (raw.len() as u64) <= k {
        let n = raw.len();
        let next = add(&mul(s, &raw[n - 1]), &neg(&mul(p, &raw[n - 2])));
        raw.push(next);
    }
    raw[0] = one;
    raw.truncate(k as usize + 1);
    raw
}

pub fn eval_symmetric(terms: &[SymTerm], s: &CycScalar, p: &CycScalar) -> CycScalar {
    let kmax = terms.iter().map(|t| t.k).max().unwrap_or(0);
    let ps = power_sums(
        s,
        p,
        kmax,
        CycScalar::from_int(2),
        CycScalar::from_int(1),
        |a, b| a + b,
        |a, b| a * b,
        |a| -a,
    );
    terms.iter().fold(CycScalar::zero(), |acc, t| {
        acc + &t.coeff * &(p.pow(t.p_exp) * &ps[t.k as usize])
    })
}

/// Functions `f` with `f(b·x·u) = η1(a)η2(d)|a/d|^{1/2} f(x)`; basis `f_j`
/// supported on `B·ω_j·U` with `f_j(ω_j) = 1`.
///
/// The values `(η1(l), η2(l))` may be given only through their sum and
/// product; traces are then computed without splitting them.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedModel {
    pub level: LevelGroup,
    pub unit1: UnitCharacter,
    pub unit2: UnitCharacter,
    pub frob: FrobPair,
}

impl InducedModel {
    pub fn new(level: LevelGroup, eta1: Quasicharacter, eta2: Quasicharacter) -> Result<Self> {
        Self::from_parts(level, eta1.unit, eta2.unit, FrobPair::Explicit(eta1.frob, eta2.frob))
    }

    pub fn from_parts(
        level: LevelGroup,
        unit1: UnitCharacter,
        unit2: UnitCharacter,
        frob: FrobPair,
    ) -> Result<Self> {
        if unit1.l() != level.l || unit2.l() != level.l {
            return invalid("inducing characters and level use different primes");
        }
        if frob.product().is_zero_elem() {
            return invalid("inducing characters must be nonzero at l");
        }
        if matches!(frob, FrobPair::Symmetric { .. }) && unit1 != unit2 {
            return invalid("symmetric inducing data needs equal unit parts");
        }
        check_conductor(unit1.conductor(), &level, "η1")?;
        check_conductor(unit2.conductor(), &level, "η2")?;
        Ok(InducedModel { level, unit1, unit2, frob })
    }

    pub fn rank(&self) -> usize {
        flag_reps(self.level.l, self.level.n).len()
    }

    /// Representatives `ω_j` of `P(Z_l)\GL_2(Z_l)/U` indexing the basis.
    pub fn basis_points(&self) -> Vec<MatQ> {
        flag_reps(self.level.l, self.level.n)
    }

    pub fn act(&self, h: &HeckeElement) -> Result<Matrix<CycScalar>> {
        check_level(h, &self.level)?;
        let (x1, x2) = self.frob.roots()?;
        let lp = induced_action_laurent(&self.unit1, &self.unit2, h)?;
        let rows = lp.iter().map(|row| row.iter().map(|e| e.eval(&x1, &x2)).collect()).collect();
        Ok(Matrix::from_rows(rows))
    }

    /// The trace of `h` as a Laurent polynomial in `(η1(l), η2(l))`.
    pub fn trace_laurent(&self, h: &HeckeElement) -> Result<Laurent2> {
        check_level(h, &self.level)?;
        let lp = induced_action_laurent(&self.unit1, &self.unit2, h)?;
        Ok(lp.iter().enumerate().fold(Laurent2::default(), |acc, (i, row)| acc.add(&row[i])))
    }

    pub fn trace(&self, h: &HeckeElement) -> Result<CycScalar> {
        let t = self.trace_laurent(h)?;
        match &self.frob {
            FrobPair::Explicit(x1, x2) => Ok(t.eval(x1, x2)),
            FrobPair::Symmetric { sum, product } => {
                Ok(eval_symmetric(&symmetric_reduce(&t)?, sum, product))
            }
        }
    }
}

/// The quotient of `B(χ|.|^{−1/2}, χ|.|^{1/2})` by the line `Ω` spanned by
/// `χ∘det`; basis the images of `f_j`, `j ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinbergModel {
    pub chi: Quasicharacter,
    pub induced: InducedModel,
}

impl SteinbergModel {
    pub fn new(level: LevelGroup, chi: Quasicharacter) -> Result<Self> {
        check_conductor(chi.conductor(), &level, "χ")?;
        let induced = InducedModel::new(level, chi.shift_half(-1), chi.shift_half(1))?;
        Ok(SteinbergModel { chi, induced })
    }

    pub fn rank(&self) -> usize {
        self.induced.rank() - 1
    }

    /// Coordinates of `χ∘det` in the induced basis (all ones: `det ω_j = 1`).
    pub fn omega(&self) -> Vec<CycScalar> {
        self.induced
            .basis_points()
            .iter()
            .map(|w| self.chi.eval(w.det()).expect("det ω_j is a unit"))
            .collect()
    }

    pub fn act(&self, h: &HeckeElement) -> Result<Matrix<CycScalar>> {
        let a = self.induced.act(h)?;
        Ok(quotient_by_first(&a, &self.omega()))
    }

    /// The eigenvalue of `h` on `Ω`.
    pub fn line_trace(&self, h: &HeckeElement) -> Result<CycScalar> {
        check_level(h, &self.induced.level)?;
        let lp = det_line_laurent(&self.chi.unit, h)?;
        Ok(lp.iter().fold(CycScalar::zero(), |acc, (e, c)| acc + c * &self.chi.frob.pow(*e)))
    }
}

/// Action on `V/⟨w⟩` in the basis of images of `e_1, …, e_{r−1}`, where
/// `w_0 ≠ 0`: `e_0 ≡ −Σ_{i≥1} (w_i/w_0) e_i`.
pub fn quotient_by_first(a: &Matrix<CycScalar>, w: &[CycScalar]) -> Matrix<CycScalar> {
    let r = a.rows();
    let w0inv = w[0].inv().expect("w_0 ≠ 0");
    let rows = (1..r)
        .map(|i| {
            (1..r)
                .map(|j| a.get(i, j) - &(&(a.get(0, j) * &w[i]) * &w0inv))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

/// The one-dimensional representation `χ∘det`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDimModel {
    pub level: LevelGroup,
    pub chi: Quasicharacter,
}

impl OneDimModel {
    pub fn new(level: LevelGroup, chi: Quasicharacter) -> Result<Self> {
        check_conductor(chi.conductor(), &level, "χ")?;
        Ok(OneDimModel { level, chi })
    }

    pub fn act(&self, h: &HeckeElement) -> Result<Matrix<CycScalar>> {
        check_level(h, &self.level)?;
        let lp = det_line_laurent(&self.chi.unit, h)?;
        let v = lp.iter().fold(CycScalar::zero(), |acc, (e, c)| acc + c * &self.chi.frob.pow(*e));
        Ok(Matrix::from_rows(vec![vec![v]]))
    }
}

/// Hecke-module data supplied for an irreducible representation, twisted by
/// an unramified character: `1_{UgU}` acts by `M_g·χ(l)^{v(det g)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractModel {
    pub data: AbstractIrred,
}

impl AbstractModel {
    pub fn rank(&self) -> usize {
        self.data.dim().max(1)
    }

    pub fn act(&self, h: &HeckeElement) -> Result<Matrix<CycScalar>> {
        check_level(h, &self.data.level)?;
        let d = self.rank();
        let mut out = Matrix::zeros(d, d);
        let id_key = crate::gl2::double_coset_key(&MatQ::identity(), &self.data.level);
        for (k, c) in h.terms() {
            let m = match self.data.hecke_matrices.get(k) {
                Some(m) => m.clone(),
                None if *k == id_key => Matrix::identity(d),
                None => {
                    return Err(Error::NotApplicable(format!(
                        "no Hecke matrix supplied for the double coset of {}",
                        k.representative(self.data.level.l)
                    )))
                }
            };
            let tw = self.data.twist.pow(k.a + k.b);
            out = out.add(&m.scale(&(c * &tw)));
        }
        Ok(out)
    }
}

/// A model of the `U`-fixed vectors of one of the representations in scope.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothRepModel {
    Induced(InducedModel),
    Steinberg(SteinbergModel),
    OneDim(OneDimModel),
    Abstract(AbstractModel),
}

impl SmoothRepModel {
    pub fn level(&self) -> LevelGroup {
        match self {
            SmoothRepModel::Induced(m) => m.level,
            SmoothRepModel::Steinberg(m) => m.induced.level,
            SmoothRepModel::OneDim(m) => m.level,
            SmoothRepModel::Abstract(m) => m.data.level,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            SmoothRepModel::Induced(m) => m.rank(),
            SmoothRepModel::Steinberg(m) => m.rank(),
            SmoothRepModel::OneDim(_) => 1,
            SmoothRepModel::Abstract(m) => m.rank(),
        }
    }

    pub fn act(&self, h: &HeckeElement) -> Result<Matrix<CycScalar>> {
        match self {
            SmoothRepModel::Induced(m) => m.act(h),
            SmoothRepModel::Steinberg(m) => m.act(h),
            SmoothRepModel::OneDim(m) => m.act(h),
            SmoothRepModel::Abstract(m) => m.act(h),
        }
    }

    pub fn trace(&self, h: &HeckeElement) -> Result<CycScalar> {
        match self {
            SmoothRepModel::Induced(m) => m.trace(h),
            _ => Ok(self.act(h)?.trace()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SmoothRepModel::Induced(m) => match &m.frob {
                FrobPair::Explicit(a, b) => json!({
                    "kind": "induced",
                    "l": m.level.l,
                    "level": m.level.n,
                    "eta1": {"unit": m.unit1.to_json(), "frob": a.to_json()},
                    "eta2": {"unit": m.unit2.to_json(), "frob": b.to_json()},
                }),
                FrobPair::Symmetric { sum, product } => json!({
                    "kind": "induced",
                    "l": m.level.l,
                    "level": m.level.n,
                    "unit": m.unit1.to_json(),
                    "frob_sum": sum.to_json(),
                    "frob_product": product.to_json(),
                }),
            },
            SmoothRepModel::Steinberg(m) => json!({
                "kind": "steinberg",
                "l": m.induced.level.l,
                "level": m.induced.level.n,
                "chi": m.chi.to_json(),
            }),
            SmoothRepModel::OneDim(m) => json!({
                "kind": "onedim",
                "l": m.level.l,
                "level": m.level.n,
                "chi": m.chi.to_json(),
            }),
            SmoothRepModel::Abstract(m) => json!({
                "kind": "abstract",
                "wd": WDRep::Abstract(m.data.clone()).to_json(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v.get("kind").and_then(|x| x.as_str());
        if kind == Some("abstract") {
            return match v.get("wd").map(WDRep::from_json).transpose()? {
                Some(WDRep::Abstract(a)) => Ok(SmoothRepModel::Abstract(AbstractModel { data: a })),
                _ => invalid("abstract model needs field `wd` with an abstract representation"),
            };
        }
        let field = |k: &str| match v.get(k) {
            Some(x) => Ok(x),
            None => invalid(format!("model is missing field `{k}`")),
        };
        let l = bigint_from_json(field("l")?)?.to_u64();
        let l = l.map_or_else(|| invalid("field `l` must be a prime"), Ok)?;
        let n = bigint_from_json(field("level")?)?.to_u32();
        let n = n.map_or_else(|| invalid("field `level` must be a small integer"), Ok)?;
        let level = LevelGroup::new(l, n)?;
        let qc = |k: &str| -> Result<Quasicharacter> {
            Quasicharacter::from_json(l, field(k)?)
                .map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}")))
        };
        match kind {
            Some("induced") if v.get("frob_sum").is_some() => {
                let unit = UnitCharacter::from_json(l, v.get("unit").unwrap_or(&Value::Null))?;
                let sc = |k: &str| -> Result<CycScalar> {
                    CycScalar::from_json(field(k)?)
                        .map_err(|e| Error::InvalidInput(format!("field `{k}`: {e}")))
                };
                let frob = FrobPair::Symmetric { sum: sc("frob_sum")?, product: sc("frob_product")? };
                Ok(SmoothRepModel::Induced(InducedModel::from_parts(level, unit.clone(), unit, frob)?))
            }
            Some("induced") => Ok(SmoothRepModel::Induced(InducedModel::new(level, qc("eta1")?, qc("eta2")?)?)),
            Some("steinberg") => Ok(SmoothRepModel::Steinberg(SteinbergModel::new(level, qc("chi")?)?)),
            Some("onedim") => Ok(SmoothRepModel::OneDim(OneDimModel::new(level, qc("chi")?)?)),
            Some(other) => invalid(format!("unknown model kind {other:?}")),
            None => invalid("model is missing field `kind`"),
        }
    }
}
