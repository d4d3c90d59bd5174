//! The Hecke algebra `H_U` for `U = U(l^n)` and finite models of the
//! `U`-fixed vectors of principal series, Steinberg, one-dimensional and
//! supplied irreducible representations of `GL_2(Q_l)`.

pub mod hecke;
pub mod models;

pub use hecke::HeckeElement;
pub use models::{
    det_line_laurent, induced_action_laurent, AbstractModel, InducedModel, Laurent2, OneDimModel,
    SmoothRepModel, SteinbergModel,
};
