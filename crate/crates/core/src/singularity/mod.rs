//! The orbit of the singular point `b = 1/2 - c` and the estimates built on it.

mod analytic;
mod binding;
mod montecarlo;
mod quadrature;
mod trace;

pub use analytic::{
    covariance_decay, log_sine_integral, modulus_of_continuity, DEFAULT_QUAD_POINTS,
    MAX_COVARIANCE_EXPONENT,
};
pub use binding::{binding_period, first_free_return, rho_f64, BindingReport, FreeReturn};
pub use montecarlo::{monte_carlo_a5, sample_point, summarize_points, MonteCarloSummary, BAND};
pub use quadrature::{checked, GaussLegendre, QUAD_TOLERANCE, SUBDIVISION_LEVELS};
pub use trace::{
    mcstar_trace, orbit_class_of_b, return_trace, OrbitClass, ReturnTrace, CYCLE_SEARCH_LIMIT,
    TRACE_GUARD_BITS,
};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;

/// Serializes a rational as `{num, den, value}`.
pub(crate) fn ser_ratio<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 3)?;
    st.serialize_field("num", &r.numer().to_string())?;
    st.serialize_field("den", &r.denom().to_string())?;
    st.serialize_field("value", &r.to_f64().unwrap_or(f64::NAN))?;
    st.end()
}
