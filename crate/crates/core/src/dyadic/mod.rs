//! Exact circle arithmetic, the doubling map and the potential `f_c`.

mod fixed;
mod point;
mod potential;

pub use fixed::BinaryFixed;
pub use point::{doubling_iterate, torus_distance, TorusPoint, MIN_SIGNIFICANT_BITS};
pub use potential::{
    birkhoff_sum, potential_eval, sigma_direct, sigma_modulus, ExtendedReal, Potential,
    SIGMA_DIRECT_LIMIT,
};

pub(crate) use potential::{log_sin_pi_distance, RationalEvaluator};
