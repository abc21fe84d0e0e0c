//! Exact Fourier analysis on `SL_2(F_q)` through its trivial and Steinberg
//! representations.

pub mod fourier;
pub mod linalg;

pub use fourier::{
    borel_certificates, dimension_inventory, fourier, fourier_indicator, parseval_two_block,
    perm_action, perm_matrix, permutation, projector, spectral_gap_check, BorelCertificate,
    FourierImage, GapReport, Inventory, NormReport, ParsevalReport,
};
pub use linalg::RatMatrix;
