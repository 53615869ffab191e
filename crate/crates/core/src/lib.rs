//! Kazhdan–Lusztig theory for parabolic (anti)spherical modules of Coxeter
//! groups, light-leaf combinatorics, and a localized model of the diagrammatic
//! Hecke category used to compute p-canonical multiplicities.

pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod leaves;
pub mod localization;
pub mod parabolic;
pub mod polyring;
pub mod scalars;

pub use coxeter::{CoxeterMatrix, Element, GroupBall, ParabolicSubset, Verdict};
pub use error::{Error, Result};
pub use hecke::{Combination, HeckeElt, KLTable};
pub use laurent::LaurentPoly;
pub use parabolic::{ModuleKind, ParabolicKLTable};
pub use scalars::CycInt;
