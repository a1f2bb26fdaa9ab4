//! Large deviations of the Mallows point process: q-combinatorics, the
//! pressure, the four-square problem and its closed-form solution, exact
//! samplers, and piecewise-uniform measures for evaluating the rate function.

pub mod error;
mod fenwick;
pub mod foursquare;
pub mod measures;
pub mod pressure;
pub mod qcomb;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod special;

pub use error::{Error, Result};
pub use foursquare::{
    closed_form_R, density_rho, discrete_four_square_oracle, discrete_four_square_prob, mixed_partial_r, phi, phi_dt,
    phi_dtt, phi_tilde, solve_critical_t, two_square_bound_rhs, DiagonalParam, FourSplit, FourSquareOracle,
    LimitMeasure,
};
pub use measures::{GridMeasure, JointCdf, LineMeasure, MarginalCDF, RectilinearMeasure, Standardized};
pub use pressure::{finite_volume_pressure, pressure, q_stirling_remainder, t_pressure, PressureEvaluator};
pub use qcomb::{
    inv, log_gaussian_binomial, log_q_factorial, log_reduced_q_factorial, mallows_pmf, LogValue, Permutation,
};
pub use rng::RandomStream;
pub use sampler::{
    configuration_log_density, empirical_cdf_at, four_square_counts, sample_configuration, sample_mallows,
    PointConfiguration, SplitCounts,
};
