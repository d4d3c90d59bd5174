//! The local Langlands correspondence for `GL_2(Q_l)` on the cases in scope,
//! under the unitary, Tate and modified normalizations, and a checker for
//! compatibility with eigenform data at an unramified prime.
//!
//! Geometric Frobenius corresponds to the uniformizer `l`, and `|l| = 1/l`.
//! The Tate normalization is the unitary one twisted by `|.|^{1/2}`.

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::gl2::LevelGroup;
use crate::smooth_reps::{
    AbstractModel, HeckeElement, InducedModel, OneDimModel, SmoothRepModel, SteinbergModel,
};
use crate::scalars::CycScalar;
use crate::weil_deligne::{
    wd_from_eigenform, AbstractIrred, FrobPair, Quasicharacter, UnitCharacter, WDClass, WDRep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Unitary,
    Tate,
    Modified,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unitary" => Ok(Normalization::Unitary),
            "tate" => Ok(Normalization::Tate),
            "modified" => Ok(Normalization::Modified),
            _ => invalid(format!("normalization must be unitary, tate or modified, got {s:?}")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Normalization::Unitary => "unitary",
            Normalization::Tate => "tate",
            Normalization::Modified => "modified",
        }
    }

    /// Exponent `e` of the twist `|.|^{e/2}` applied on top of the unitary
    /// correspondence.
    fn half_shift(&self) -> i64 {
        match self {
            Normalization::Unitary => 0,
            Normalization::Tate | Normalization::Modified => 1,
        }
    }
}

/// The smooth representation attached to a Weil–Deligne representation.
#[derive(Clone, Debug, PartialEq)]
pub enum LLKind {
    /// `π(η1, η2)` with `η_i` the inducing characters (values at `l` possibly
    /// stored through their symmetric functions).
    IrredPS { unit1: UnitCharacter, unit2: UnitCharacter, eta: FrobPair },
    /// `B(η1, η2)` with `η1/η2 = |.|` and one-dimensional quotient `quotient∘det`.
    ReduciblePS { eta1: Quasicharacter, eta2: Quasicharacter, quotient: Quasicharacter },
    /// The infinite-dimensional quotient of `π(χ|.|^{−1/2}, χ|.|^{1/2})`.
    Steinberg { chi: Quasicharacter },
    Supercuspidal { data: AbstractIrred },
    OneDim { chi: Quasicharacter },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LLDescriptor {
    pub l: u64,
    pub kind: LLKind,
    pub norm: Normalization,
}

impl LLDescriptor {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            LLKind::IrredPS { .. } => "IrredPS",
            LLKind::ReduciblePS { .. } => "ReduciblePS",
            LLKind::Steinberg { .. } => "Steinberg",
            LLKind::Supercuspidal { .. } => "Supercuspidal",
            LLKind::OneDim { .. } => "OneDim",
        }
    }

    /// The descriptor twisted by `η∘det`.
    pub fn twist(&self, eta: &Quasicharacter) -> Result<LLDescriptor> {
        let kind = match &self.kind {
            LLKind::IrredPS { unit1, unit2, eta: e } => LLKind::IrredPS {
                unit1: unit1.mul(&eta.unit),
                unit2: unit2.mul(&eta.unit),
                eta: e.scale(&eta.frob),
            },
            LLKind::ReduciblePS { eta1, eta2, quotient } => LLKind::ReduciblePS {
                eta1: eta1.mul(eta),
                eta2: eta2.mul(eta),
                quotient: quotient.mul(eta),
            },
            LLKind::Steinberg { chi } => LLKind::Steinberg { chi: chi.mul(eta) },
            LLKind::OneDim { chi } => LLKind::OneDim { chi: chi.mul(eta) },
            LLKind::Supercuspidal { data } => {
                if !eta.is_unramified() {
                    return Err(Error::Unsupported(
                        "ramified twist of a supplied irreducible representation".into(),
                    ));
                }
                let mut d = data.clone();
                d.twist = &d.twist * &eta.frob;
                LLKind::Supercuspidal { data: d }
            }
        };
        Ok(LLDescriptor { l: self.l, kind, norm: self.norm })
    }

    /// Model of the `U(l^n)`-fixed vectors.
    pub fn model(&self, level: LevelGroup) -> Result<SmoothRepModel> {
        if level.l != self.l {
            return invalid("model level uses a different prime");
        }
        Ok(match &self.kind {
            LLKind::IrredPS { unit1, unit2, eta } => SmoothRepModel::Induced(InducedModel::from_parts(
                level,
                unit1.clone(),
                unit2.clone(),
                eta.clone(),
            )?),
            LLKind::ReduciblePS { eta1, eta2, .. } => {
                SmoothRepModel::Induced(InducedModel::new(level, eta1.clone(), eta2.clone())?)
            }
            LLKind::Steinberg { chi } => SmoothRepModel::Steinberg(SteinbergModel::new(level, chi.clone())?),
            LLKind::OneDim { chi } => SmoothRepModel::OneDim(OneDimModel::new(level, chi.clone())?),
            LLKind::Supercuspidal { data } => {
                if data.level != level {
                    return Err(Error::NotApplicable(format!(
                        "supplied Hecke data is at level {}^{}, not {}^{}",
                        data.l, data.level.n, level.l, level.n
                    )));
                }
                SmoothRepModel::Abstract(AbstractModel { data: data.clone() })
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let qc = |q: &Quasicharacter| q.to_json();
        let body = match &self.kind {
            LLKind::IrredPS { unit1, unit2, eta } => match eta {
                FrobPair::Explicit(a, b) => json!({
                    "eta1": {"unit": unit1.to_json(), "frob": a.to_json()},
                    "eta2": {"unit": unit2.to_json(), "frob": b.to_json()},
                }),
                FrobPair::Symmetric { sum, product } => json!({
                    "unit": unit1.to_json(),
                    "eta_sum": sum.to_json(),
                    "eta_product": product.to_json(),
                }),
            },
            LLKind::ReduciblePS { eta1, eta2, quotient } => json!({
                "eta1": qc(eta1), "eta2": qc(eta2), "quotient": qc(quotient),
            }),
            LLKind::Steinberg { chi } | LLKind::OneDim { chi } => json!({"chi": qc(chi)}),
            LLKind::Supercuspidal { data } => json!({
                "label": data.label,
                "twist": data.twist.to_json(),
            }),
        };
        json!({"l": self.l, "kind": self.kind_name(), "norm": self.norm.name(), "data": body})
    }
}

/// `σ ↦ π(σ)` under the chosen normalization.
pub fn ll_map(sigma: &WDRep, norm: Normalization) -> Result<LLDescriptor> {
    let l = sigma.l();
    let e = norm.half_shift();
    // |.|^{e/2} evaluated at l
    let shift = CycScalar::sqrt_l_pow(l, -e);
    let kind = match (sigma, sigma.classify()) {
        (WDRep::Abstract(a), _) => {
            let mut d = a.clone();
            // supplied data describe the modified/Tate image
            d.twist = &d.twist * &CycScalar::sqrt_l_pow(l, 1 - e);
            LLKind::Supercuspidal { data: d }
        }
        (WDRep::Split(s), WDClass::PrincipalSeries) => LLKind::IrredPS {
            unit1: s.unit1.clone(),
            unit2: s.unit2.clone(),
            eta: s.frob.scale(&shift),
        },
        (WDRep::Split(s), WDClass::Special) => {
            // σ = χ|.|^{−1} ⊕ χ
            let chi = s.degenerate_base()?;
            LLKind::Steinberg { chi: chi.shift_half(e - 1) }
        }
        (WDRep::Split(s), WDClass::NonGeneric) => {
            let chi = s.degenerate_base()?;
            match norm {
                Normalization::Modified => LLKind::ReduciblePS {
                    eta1: chi.shift_half(1),
                    eta2: chi.shift_half(-1),
                    quotient: chi,
                },
                _ => LLKind::OneDim { chi: chi.shift_half(e - 1) },
            }
        }
        (WDRep::Split(_), WDClass::Supercuspidal) => unreachable!("split representations are reducible"),
    };
    Ok(LLDescriptor { l, kind, norm })
}

/// The Frobenius eigenvalues `{χ1(l), χ2(l)}` behind an unramified
/// principal-series descriptor, as `(sum, product)`, and whether their ratio
/// is `l^{±1}`.
pub fn satake(desc: &LLDescriptor) -> Result<(CycScalar, CycScalar, bool)> {
    let l = desc.l;
    let back = CycScalar::sqrt_l_pow(l, desc.norm.half_shift());
    let (s, p) = match &desc.kind {
        LLKind::IrredPS { unit1, unit2, eta } if unit1.is_trivial() && unit2.is_trivial() => {
            (eta.sum() * &back, eta.product() * &(&back * &back))
        }
        LLKind::ReduciblePS { eta1, eta2, .. } if eta1.is_unramified() && eta2.is_unramified() => {
            let (a, b) = (&eta1.frob * &back, &eta2.frob * &back);
            (&a + &b, &a * &b)
        }
        _ => {
            return Err(Error::NotApplicable(format!(
                "Satake parameters need an unramified principal series, got {}",
                desc.kind_name()
            )))
        }
    };
    let lc = CycScalar::from_int(l as i64);
    let l1 = CycScalar::from_int(l as i64 + 1);
    let degenerate = &lc * &(&s * &s) == &(&l1 * &l1) * &p;
    Ok((s, p, degenerate))
}

/// One named equality checked by [`compat_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub lhs: CycScalar,
    pub rhs: CycScalar,
}

impl Assertion {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub traces: Vec<(String, CycScalar)>,
    pub assertions: Vec<Assertion>,
}

impl CompatReport {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass())
    }

    pub fn to_json(&self) -> Value {
        let mut traces = serde_json::Map::new();
        for (k, v) in &self.traces {
            traces.insert(k.clone(), v.to_json());
        }
        let asserts: Vec<Value> = self
            .assertions
            .iter()
            .map(|a| {
                json!({"name": a.name, "lhs": a.lhs.to_json(), "rhs": a.rhs.to_json(), "pass": a.pass()})
            })
            .collect();
        json!({"traces": traces, "assertions": asserts})
    }
}

/// Named Hecke operators understood by [`compat_check`]: `1`, `T`, `Z`,
/// `T2` (the double coset of `diag(l², 1)`).
pub fn named_operator(name: &str, level: LevelGroup) -> Result<HeckeElement> {
    let l = level.l;
    match name {
        "1" | "I" => Ok(HeckeElement::identity(level)),
        "T" => Ok(HeckeElement::t_l(level)),
        "Z" => Ok(HeckeElement::z_l(level)),
        "T2" => Ok(HeckeElement::basis(level, &crate::gl2::MatQ::diag_l(l, 2, 0))),
        _ => invalid(format!("unknown Hecke operator {name:?} (expected 1, T, Z or T2)")),
    }
}

/// Builds `σ` from eigenform data `(a_l, χ(l), k)` at a prime `l` not
/// dividing the level, maps it through the Tate correspondence, and reports
/// traces of the requested operators on the `U(l^n)`-fixed vectors. At
/// `n = 0` it asserts `tr T_l = a_l` and `tr Z_l = χ(l)·l^{k−2}`.
pub fn compat_check(
    l: u64,
    a_l: &CycScalar,
    chi_l: &CycScalar,
    k: i64,
    ops: &[(String, HeckeElement)],
    level: LevelGroup,
    plus_sign: bool,
) -> Result<CompatReport> {
    let sigma = wd_from_eigenform(l, a_l, chi_l, k, plus_sign)?;
    let desc = ll_map(&sigma, Normalization::Tate)?;
    let model = desc.model(level)?;
    let mut traces = Vec::new();
    for (name, h) in ops {
        traces.push((name.clone(), model.trace(h)?));
    }
    let mut assertions = Vec::new();
    if level.n == 0 {
        let t = model.trace(&HeckeElement::t_l(level))?;
        assertions.push(Assertion { name: "trace(T_l) = a_l".into(), lhs: t, rhs: a_l.clone() });
        let z = model.trace(&HeckeElement::z_l(level))?;
        let rhs = chi_l * &CycScalar::from_rational(crate::scalars::rational::l_pow(l, k - 2));
        assertions.push(Assertion { name: "trace(Z_l) = chi_l·l^(k-2)".into(), lhs: z, rhs });
    }
    Ok(CompatReport { traces, assertions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_deligne::SplitWD;

    fn c(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    #[test]
    fn table_of_kinds() {
        let triv = WDRep::Split(SplitWD::unramified(2, FrobPair::Explicit(c(1), c(1))).unwrap());
        let d = ll_map(&triv, Normalization::Tate).unwrap();
        assert_eq!(d.kind_name(), "IrredPS");
        let LLKind::IrredPS { eta, .. } = &d.kind else { panic!() };
        let h = CycScalar::sqrt_l_pow(2, -1);
        assert_eq!(eta, &FrobPair::Explicit(h.clone(), h));

        let chi = Quasicharacter::unramified(3, c(2)).unwrap();
        let sp = WDRep::Split(SplitWD::special(&chi, c(1)).unwrap());
        let d = ll_map(&sp, Normalization::Modified).unwrap();
        assert_eq!(d.kind, LLKind::Steinberg { chi: chi.clone() });

        let ng = WDRep::Split(SplitWD::unramified(3, FrobPair::Explicit(c(2), c(6))).unwrap());
        let d = ll_map(&ng, Normalization::Modified).unwrap();
        let LLKind::ReduciblePS { quotient, .. } = &d.kind else { panic!() };
        assert_eq!(quotient, &chi);
        let d = ll_map(&ng, Normalization::Tate).unwrap();
        assert_eq!(d.kind, LLKind::OneDim { chi });
    }

    #[test]
    fn delta_at_two() {
        let level = LevelGroup::new(2, 0).unwrap();
        let r = compat_check(2, &c(-24), &c(1), 12, &[], level, false).unwrap();
        assert!(r.all_pass(), "{:?}", r);
        assert_eq!(r.assertions[1].lhs, c(1024));
        let bad = compat_check(2, &c(-24), &c(1), 12, &[], level, true).unwrap();
        assert!(!bad.all_pass());
    }

    #[test]
    fn satake_pairs() {
        let s = wd_from_eigenform(2, &c(-24), &c(1), 12, false).unwrap();
        let (sum, prod, deg) = satake(&ll_map(&s, Normalization::Tate).unwrap()).unwrap();
        assert_eq!((sum, prod, deg), (c(-24), c(2048), false));
        let ng = WDRep::Split(SplitWD::unramified(3, FrobPair::Symmetric { sum: c(4), product: c(3) }).unwrap());
        let d = ll_map(&ng, Normalization::Modified).unwrap();
        assert!(satake(&d).unwrap().2);
        let chi = Quasicharacter::unramified(3, c(2)).unwrap();
        let sp = WDRep::Split(SplitWD::special(&chi, c(1)).unwrap());
        assert!(satake(&ll_map(&sp, Normalization::Tate).unwrap()).is_err());
    }

    #[test]
    fn normalizations_differ_by_half_twist() {
        let s = WDRep::Split(SplitWD::unramified(3, FrobPair::Explicit(c(2), c(5))).unwrap());
        let u = ll_map(&s, Normalization::Unitary).unwrap();
        let t = ll_map(&s, Normalization::Tate).unwrap();
        let tw = u.twist(&Quasicharacter::abs_half_power(3, 1)).unwrap();
        assert_eq!(tw.kind, t.kind);
    }
}
