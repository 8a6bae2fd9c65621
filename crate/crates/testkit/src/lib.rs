//! Numerical oracles shared by the test suites.
//!
//! Everything in here is deliberately independent of the `recipgamma` crate:
//! quadrature-based CDFs, Kolmogorov-Smirnov and chi-square statistics, and
//! a small incomplete-gamma routine of its own. Tests compare sampler output
//! against these routines, so they must not share code with the samplers.

pub mod quad;
pub mod stats;

pub use quad::{integrate, normalized_cdf_at, Grid};
pub use stats::{
    chi_square_pvalue, kolmogorov_sf, ks_statistic_sorted, ks_two_sample, mean, variance,
};
