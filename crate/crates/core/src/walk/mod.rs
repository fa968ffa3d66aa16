//! Random walks read off a `dX` trajectory: the associated walk, its chunked
//! coarse-graining, the κ=3 comparison walks, exact covariances of the
//! increment functionals and survival numerics for i.i.d. walks.

mod chunks;
mod comparison;
mod covariance;
mod path;
mod survival;

pub use chunks::{chunk_partition, chunk_sums, IntervalPartition};
pub use comparison::{comparison_walk, flip_free_env, g_triple, ComparisonWalk};
pub use covariance::{covariance_exact, covariance_triple, g_general, gamma_squared, gamma_squared_triple, min_window};
pub use path::{associated_walk, WalkPath};
pub use survival::{
    generating_function, sa_constant, survival_exact, survival_mc, survival_probabilities, IncrementLaw, SaConstant,
    SurvivalEstimate,
};

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
