//! Arithmetic and combinatorics in `SL_2(F_p)`.

pub mod borel;
pub mod combinatorics;
pub mod element;
pub mod helfgott;
pub mod projective;
pub mod set;

pub use borel::{
    borel_intersections, borel_sumproduct_ratio, double_coset_counts, find_in_power,
    power_borel_threshold, verify_double_coset, BorelIntersectionReport, DoubleCosetCounts,
    DoubleCosetReport, SumProductReport, ThresholdReport,
};
pub use combinatorics::{
    energy, representation_counts, ruzsa_triangle, trace_spectrum, tripling, EnergyReport,
    RuzsaReport, TraceSpectrum, Tripling,
};
pub use element::{group_order, ModMat2};
pub use helfgott::{conjugacy_class_size, helfgott_inequality, HelfgottReport};
pub use projective::{borel_line, diagonal, standard_borel, unipotent, BorelSpec, ProjPoint};
pub use set::{GroupSet, PowerLayers};
