//! Exact scalars: rationals, the cyclotomic tower `Q(ζ_M)(√l)`, truncated
//! `p`-adic integers, Bernoulli numbers and the one-variable family ring.

pub mod bernoulli;
pub mod cyclotomic;
pub mod family;
pub mod padic;
pub mod rational;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use bernoulli::bernoulli;
pub use cyclotomic::CycScalar;
pub use family::{FamilyScalar, Poly, RatFunc};
pub use padic::{padic_exp_matrix, padic_log_matrix, PadicMat2, PadicTrunc};
pub use rational::Rational;

/// Commutative rings usable as matrix entries.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}
