//! Exact computations around the local Langlands correspondence for
//! `GL_2(Q_l)`: decompositions and coset enumeration in `GL_2(Q_l)`, the
//! adelic action on `q`-expansions, Weil–Deligne representations and the
//! monodromy dictionary, Hecke algebras acting on `U`-fixed vectors of
//! smooth representations, and one-parameter families of traces.
//!
//! Everything is exact: scalars live in `Q(ζ_M)(√l)`, in truncated `p`-adic
//! integers, or in rational functions over those.

pub mod error;
pub mod families;
pub mod gl2;
pub mod langlands;
pub mod matrix;
pub mod qexp;
pub mod scalars;
pub mod smooth_reps;
pub mod weil_deligne;

pub use error::{Error, Result};
