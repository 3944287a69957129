//! Markov subsystems avoiding the singularity, their pressure, and the
//! dimension spectrum obtained from it by a Legendre transform.

mod good_times;
mod legendre;
mod pressure;
mod spectrum;
mod subsystem;

pub use good_times::good_time_detector;
pub use legendre::{
    c_zero_reference, c_zero_spectrum, legendre_transform, Conjugate, FLAT_SLOPE, STEEP_SLOPE,
};
pub use pressure::{
    pressure, pressure_curve, pressure_curve_of, standard_t_grid, PressureCurve, PressureSample,
    POWER_ITERATION_CAP, POWER_TOLERANCE,
};
pub use spectrum::{
    dimension_spectrum, dimension_spectrum_in, SpectrumCurve, SpectrumPoint,
    SPECTRUM_SCAN_PERIOD, STALL_TOLERANCE,
};
pub use subsystem::{build_subsystem, check_irreducible_aperiodic, Bracket, MarkovSubsystem, MAX_LEVEL};
