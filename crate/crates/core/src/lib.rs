//! Continued fractions with bounded partial quotients, and the group
//! `SL_2(F_p)` they generate.

pub mod arith;
pub mod cont_frac;
pub mod error;
pub mod repr;
pub mod search;
pub mod sl2;
pub mod zaremba;

pub use cont_frac::{
    cf_to_matrix, continuant, cyclic_trace, evaluate, expand, CFExpansion, Convention, Fraction,
    Mat2,
};
pub use error::{Error, Result};
pub use repr::{FourierImage, NormReport};
pub use search::{BoundEvaluation, SearchOutcome, SearchRecord};
pub use sl2::{BorelSpec, EnergyReport, GroupSet, ModMat2, ProjPoint};
pub use zaremba::{DimensionEstimate, ZarembaSet};
