//! Quasicharacters of `Q_l^*`, two-dimensional Weil–Deligne representations,
//! and the dictionary between monodromy operators and continuous `p`-adic
//! representations of the tame inertia.

pub mod character;
pub mod monodromy;
pub mod wd;

pub use character::{Quasicharacter, UnitCharacter};
pub use monodromy::{
    monodromy_extract, monodromy_roundtrip, wd_to_continuous, ContinuousLocalRep, ExtractedWD, MonodromyRoundtrip,
};
pub use wd::{wd_from_eigenform, AbstractIrred, FrobPair, SplitWD, WDClass, WDRep};
